"""Small exact linear algebra over the rationals (and mod-p rank oracle).

Matrices are lists of rows; everything is Fraction-exact.  Sizes here are
tiny (rows = faces, columns = half-edges), so plain Gaussian elimination
with deterministic pivoting is all we need.
"""

from __future__ import annotations

from fractions import Fraction


def rref(matrix):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = [[Fraction(x) for x in r] for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix) -> int:
    return len(rref(matrix)[0])


def kernel_basis(matrix):
    """Basis of the right kernel, one vector per free column, deterministic."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    rows, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def in_span(vectors, target) -> bool:
    return solve_in_span(vectors, target) is not None


def solve_in_span(vectors, target):
    """Coefficients expressing ``target`` as a combination of ``vectors``,
    or None.  Deterministic least-index solution (free coefficients 0)."""
    if not vectors:
        return [] if not any(target) else None
    ncols = len(vectors[0])
    aug = [[Fraction(vectors[j][i]) for j in range(len(vectors))] + [Fraction(target[i])]
           for i in range(ncols)]
    rows, pivots = rref(aug)
    coeffs = [Fraction(0)] * len(vectors)
    for r, pc in enumerate(pivots):
        if pc == len(vectors):
            return None  # inconsistent
        coeffs[pc] = rows[r][-1]
    return coeffs


def extend_basis(base, candidates):
    """Candidates (in order) that grow the span of ``base``; returned as-is."""
    current = [list(v) for v in base]
    out = []
    r = rank(current) if current else 0
    for v in candidates:
        trial = current + [list(v)]
        r2 = rank(trial)
        if r2 > r:
            out.append(list(v))
            current = trial
            r = r2
    return out


def rank_mod_p(matrix, p: int) -> int:
    """Row-reduction rank over F_p; independent cross-check of `rank`.

    Entries must be Fractions/ints whose denominators are units mod p.
    """
    rows = []
    for r in matrix:
        row = []
        for x in r:
            f = Fraction(x)
            den = f.denominator % p
            if den == 0:
                raise ValueError("denominator divisible by p")
            row.append((f.numerator % p) * pow(den, p - 2, p) % p)
        rows.append(row)
    rk = 0
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        rk += 1
        r += 1
        if r == len(rows):
            break
    return rk
