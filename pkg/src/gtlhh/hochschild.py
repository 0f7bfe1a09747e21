"""Hochschild cochains and the DGLA operations on them.

A cochain is never materialized as a vector: it is an evaluator on finite
argument tuples plus a declared reduced parity.  Arguments chain through
objects (arcs); consecutive arguments need not compose as angles.  All
operations are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import (
    Angle,
    AngleTable,
    Morphism,
    reduced_degree,
    source_arc,
    target_arc,
)
from .disks import mu_eval
from .surface import ArcSystem

EVEN, ODD = 0, 1


@dataclass(frozen=True)
class Sequence:
    """Linear argument tuple a_1, ..., a_k; a_1 is applied first."""

    args: tuple[Angle, ...]

    def __len__(self) -> int:
        return len(self.args)

    def objects(self, sys: ArcSystem) -> tuple[str, ...]:
        if not self.args:
            return ()
        chain = [source_arc(sys, self.args[0])]
        for a in self.args:
            chain.append(target_arc(sys, a))
        return tuple(chain)

    def is_chained(self, sys: ArcSystem) -> bool:
        return all(
            target_arc(sys, self.args[i]) == source_arc(sys, self.args[i + 1])
            for i in range(len(self.args) - 1)
        )


def _as_word(table: AngleTable, seq) -> tuple[int, ...]:
    if isinstance(seq, Sequence):
        seq = seq.args
    return table.intern_seq(tuple(seq))


@dataclass
class Cochain:
    """Evaluator with declared reduced parity.

    ``fn`` maps an angle-id word to ``{angle id: coefficient}``; the empty
    word returns the 0-adic value.  ``oracle`` (a catalog or matcher) is
    what the ambient product evaluates against; it travels with the cochain
    so the differential knows which mu to commute with.
    """

    table: AngleTable
    parity: int
    kind: str
    fn: Callable[[tuple[int, ...]], dict[int, Fraction]]
    oracle: object | None = None

    def eval_ids(self, word) -> dict[int, Fraction]:
        return self.fn(word)

    def evaluate(self, seq) -> Morphism:
        return self.table.morphism(dict(self.fn(_as_word(self.table, seq))))

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.parity != self.parity:
            raise ValueError("cannot add cochains of different parity")
        f, g = self.fn, other.fn
        oracle = self.oracle if self.oracle is not None else other.oracle

        def added(word):
            out = dict(f(word))
            for a, c in g(word).items():
                s = out.get(a, 0) + c
                if s:
                    out[a] = s
                else:
                    out.pop(a, None)
            return out

        return Cochain(self.table, self.parity, f"({self.kind}+{other.kind})", added, oracle)

    def scale(self, coeff) -> "Cochain":
        c = Fraction(coeff)
        f = self.fn

        def scaled(word):
            if not c:
                return {}
            return {a: c * x for a, x in f(word).items()}

        return Cochain(self.table, self.parity, f"{coeff}*{self.kind}", scaled, self.oracle)


def mu_cochain(cat_or_matcher, table: AngleTable | None = None) -> Cochain:
    """The product of the category as a cochain (odd reduced parity)."""
    oracle = cat_or_matcher
    if table is None:
        table = oracle.table

    def fn(word):
        return dict(mu_eval(table, oracle, word))

    return Cochain(table, ODD, "mu", fn, oracle)


def arity0_cochain(table: AngleTable, value: Morphism, parity: int, kind: str,
                   oracle=None) -> Cochain:
    coeffs = table.coeffs(value)

    def fn(word):
        if word:
            return {}
        return dict(coeffs)

    return Cochain(table, parity, kind, fn, oracle)


def table_cochain(table: AngleTable, parity: int, mapping, kind: str = "table",
                  oracle=None) -> Cochain:
    """Finite explicit cochain: {argument tuple: Morphism}."""
    ids_map = {
        _as_word(table, seq): table.coeffs(value) for seq, value in mapping.items()
    }

    def fn(word):
        return dict(ids_map.get(word, {}))

    return Cochain(table, parity, kind, fn, oracle)


def _rdeg_presums(table: AngleTable, word) -> list[int]:
    pre = [0]
    for aid in word:
        pre.append(pre[-1] + ((table.deg[aid] + 1) & 1))
    return pre


def gerstenhaber_product_ids(table, oracle, eta: Cochain, omega: Cochain, word):
    """(eta . omega) on an angle-id word: insert omega into every slot of eta."""
    k = len(word)
    pre = _rdeg_presums(table, word)
    out: dict[int, Fraction] = {}
    om_par = omega.parity
    for i in range(k + 1):
        sign = -1 if (pre[i] * om_par) & 1 else 1
        for j in range(i, k + 1):
            inner = omega.fn(word[i:j])
            if not inner:
                continue
            prefix = word[:i]
            suffix = word[j:]
            for t, c in inner.items():
                outer = eta.fn(prefix + (t,) + suffix)
                if not outer:
                    continue
                sc = sign * c
                for u, c2 in outer.items():
                    s = out.get(u, 0) + sc * c2
                    if s:
                        out[u] = s
                    else:
                        del out[u]
    return out


def gerstenhaber_product(eta: Cochain, omega: Cochain, seq) -> Morphism:
    word = _as_word(eta.table, seq)
    oracle = eta.oracle or omega.oracle
    return eta.table.morphism(
        gerstenhaber_product_ids(eta.table, oracle, eta, omega, word)
    )


def gerstenhaber_bracket_ids(table, oracle, eta: Cochain, omega: Cochain, word):
    out = gerstenhaber_product_ids(table, oracle, eta, omega, word)
    swap = gerstenhaber_product_ids(table, oracle, omega, eta, word)
    sign = -1 if (eta.parity * omega.parity) & 1 else 1
    for a, c in swap.items():
        s = out.get(a, 0) - sign * c
        if s:
            out[a] = s
        else:
            out.pop(a, None)
    return out


def gerstenhaber_bracket(eta: Cochain, omega: Cochain, seq) -> Morphism:
    word = _as_word(eta.table, seq)
    oracle = eta.oracle or omega.oracle
    return eta.table.morphism(
        gerstenhaber_bracket_ids(eta.table, oracle, eta, omega, word)
    )


def differential_ids(table, oracle, nu: Cochain, word):
    mu = mu_cochain(oracle, table)
    return gerstenhaber_bracket_ids(table, oracle, mu, nu, word)


def differential(nu: Cochain, seq) -> Morphism:
    """d(nu) = [mu, nu] evaluated on one argument tuple."""
    if nu.oracle is None:
        raise ValueError("cochain carries no disk oracle; build it from a catalog")
    word = _as_word(nu.table, seq)
    return nu.table.morphism(differential_ids(nu.table, nu.oracle, nu, word))


def differential_cochain(nu: Cochain) -> Cochain:
    """d(nu) packaged as a cochain again (for d(d(nu)) checks)."""
    if nu.oracle is None:
        raise ValueError("cochain carries no disk oracle")
    table, oracle = nu.table, nu.oracle

    def fn(word):
        return differential_ids(table, oracle, nu, word)

    return Cochain(table, (nu.parity + 1) & 1, f"d({nu.kind})", fn, oracle)


def cup_ids(table, oracle, kappa: Cochain, nu: Cochain, word):
    """Cup product on an angle-id word; kappa is inserted above nu."""
    k = len(word)
    pre = _rdeg_presums(table, word)
    out: dict[int, Fraction] = {}
    for i in range(k + 1):
        for j in range(i, k + 1):
            inner_nu = nu.fn(word[i:j])
            if not inner_nu:
                continue
            for u in range(j, k + 1):
                x_base = (pre[u] * kappa.parity + pre[i] * nu.parity + nu.parity + 1) & 1
                sign = -1 if x_base else 1
                for v in range(u, k + 1):
                    inner_k = kappa.fn(word[u:v])
                    if not inner_k:
                        continue
                    for tn, cn in inner_nu.items():
                        mid = word[j:u]
                        lower = word[:i]
                        upper = word[v:]
                        for tk, ck in inner_k.items():
                            outer = mu_eval(
                                table, oracle,
                                lower + (tn,) + mid + (tk,) + upper,
                            )
                            if not outer:
                                continue
                            sc = sign * cn * ck
                            for w, c2 in outer.items():
                                s = out.get(w, 0) + sc * c2
                                if s:
                                    out[w] = s
                                else:
                                    del out[w]
    return out


def cup(kappa: Cochain, nu: Cochain, seq) -> Morphism:
    if kappa.oracle is None and nu.oracle is None:
        raise ValueError("cup needs a disk oracle on one of the factors")
    oracle = kappa.oracle or nu.oracle
    word = _as_word(kappa.table, seq)
    return kappa.table.morphism(cup_ids(kappa.table, oracle, kappa, nu, word))


def parity_defect(nu: Cochain, seq) -> bool:
    """True iff nu(seq) has a nonzero term violating the output-parity law."""
    word = _as_word(nu.table, seq)
    table = nu.table
    want = (nu.parity + sum((table.deg[a] + 1) & 1 for a in word)) & 1
    for aid, coeff in nu.fn(word).items():
        if coeff and ((table.deg[aid] + 1) & 1) != want:
            return True
    return False
