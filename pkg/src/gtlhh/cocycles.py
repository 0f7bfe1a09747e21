"""Construction of the explicit Hochschild cocycles.

Four families: the identity-valued cocycle, the odd full-turn family, the
sporadic angle-scaling classes (solved exactly from the polygon-sum
constraint), and the even family built from input scalars via the
end-split / old-era / new-era / middle-split rules.  Gauge cochains and
the splitting-set machinery live here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Angle,
    AngleTable,
    Identity,
    Morphism,
    Turn,
    ell_power,
)
from .disks import WordMatcher
from .hochschild import (
    EVEN,
    ODD,
    Cochain,
    arity0_cochain,
    differential,
)
from .linalg import extend_basis, in_span, kernel_basis, rank
from .surface import ArcSystem


class RuleConflictError(RuntimeError):
    """Two mutually exclusive cocycle rules matched the same sequence."""


# ---------------------------------------------------------------------------
# scalars


@dataclass(frozen=True)
class InputScalars:
    """A rational weight for every indecomposable angle at one puncture.

    Missing half-edges weigh zero.  ``total`` is the sum over one full
    turn; class representatives normalize it to 1 but nothing here
    requires that.
    """

    puncture: str
    values: tuple[tuple[str, Fraction], ...]

    @classmethod
    def of(cls, sys: ArcSystem, m: str, mapping) -> "InputScalars":
        vals = []
        for h, c in mapping.items():
            if sys.puncture_of(h) != m:
                raise ValueError(f"half-edge {h!r} is not incident at {m!r}")
            vals.append((h, Fraction(c)))
        return cls(m, tuple(sorted(vals)))

    @classmethod
    def uniform(cls, sys: ArcSystem, m: str) -> "InputScalars":
        v = Fraction(1, sys.valence(m))
        return cls(m, tuple((h, v) for h in sys.rotation[m]))

    @property
    def total(self) -> Fraction:
        return sum((c for _, c in self.values), Fraction(0))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.values)


class _Sharp:
    """Additive extension of the input scalars to arbitrary turns; zero on
    turns at other punctures and on identities."""

    def __init__(self, table: AngleTable, m_id: int, scalars: InputScalars):
        self.table = table
        self.m_id = m_id
        self.by_he = [Fraction(0)] * len(table.he_names)
        for h, c in scalars.values:
            self.by_he[table.he_id[h]] = c
        self.total = sum((c for _, c in scalars.values), Fraction(0))
        self.val = table.valences[m_id]

    def of_turn(self, start_he: int, steps: int) -> Fraction:
        if self.table.he_punc[start_he] != self.m_id:
            return Fraction(0)
        q, rem = divmod(steps, self.val)
        acc = q * self.total
        h = start_he
        for _ in range(rem):
            acc += self.by_he[h]
            h = self.table.rotate_he(h, 1)
        return acc

    def of_id(self, aid: int) -> Fraction:
        t = self.table
        if t.is_id[aid]:
            return Fraction(0)
        return self.of_turn(t.start[aid], t.steps[aid])


# ---------------------------------------------------------------------------
# link classification shared by the rule evaluators

PARTNER, COMPOSE, BROKEN = 0, 1, 2

# temporary experiment knobs
_EVEN_GATES = {"both_trims": True, "endsplit_covering": True}
_SEAM_COVERING = False


def _links(table: AngleTable, word) -> list[int]:
    out = []
    for i in range(len(word) - 1):
        s = table.start[word[i + 1]]
        e = table.end[word[i]]
        if s == table.he_partner[e]:
            out.append(PARTNER)
        elif s == e:
            out.append(COMPOSE)
        else:
            out.append(BROKEN)
    return out


def _solve_rot(table: AngleTable, he_from: int, he_to: int, lo: int, hi: int):
    """All t in [lo, hi] with rotate(he_from, t) == he_to (same puncture)."""
    if table.he_punc[he_from] != table.he_punc[he_to]:
        return
    val = table.valences[table.he_punc[he_from]]
    base = (table._he_pos[he_to] - table._he_pos[he_from]) % val
    t = base if base >= lo else base + ((lo - base + val - 1) // val) * val
    while t <= hi:
        yield t
        t += val



# ---------------------------------------------------------------------------
# odd family


def nu_odd_eval_ids(table: AngleTable, oracle, m_id: int, r: int, word):
    """Rule evaluator for the odd cocycle at one puncture and turn order.

    For each way of peeling a leftover off one end of the word, the full
    turn is inserted at the minimal witnessed fold: splits inside an entry
    come first (ordered by entry, then split length), the insertion behind
    the last entry is the final option.  Only the minimal fold counts; the
    other folds present the same covering disk cut elsewhere.  Which fold
    family applies is pinned by the closing link of the trimmed word, so
    the two families never compete.
    """
    k = len(word)
    if k == 0:
        R = r * table.valences[m_id]
        return {table.turn_id(h, R): 1 for h in table._rot[m_id]}
    is_id = table.is_id
    for aid in word:
        if is_id[aid]:
            return {}
    if any(l != PARTNER for l in _links(table, word)):
        return {}
    # smallest insertion word has k+1 corners (k+2 for an inside split)
    if k + 2 < getattr(oracle, "min_corners", 3):
        return {}

    steps = table.steps
    start = table.start
    end = table.end
    partner = table.he_partner
    rotate = table.rotate_he
    punc = table.he_punc
    R = r * table.valences[m_id]
    h0, s0 = start[word[0]], steps[word[0]]
    hk, sk = start[word[-1]], steps[word[-1]]
    out: dict[int, int] = {}

    def emit(key, coeff):
        s = out.get(key, 0) + coeff
        if s:
            out[key] = s
        else:
            out.pop(key, None)

    def min_within_fold(ent):
        for e in range(len(ent)):
            se = steps[ent[e]]
            hs = start[ent[e]]
            for u in range(1, se):
                mid = rotate(hs, u)
                hl = partner[mid]
                if punc[hl] != m_id:
                    continue
                w = (
                    tuple(ent[:e])
                    + (
                        table.turn_id(hs, u),
                        table.turn_id(hl, R),
                        table.turn_id(mid, se - u),
                    )
                    + tuple(ent[e + 1 :])
                )
                cnt = oracle.count(w)
                if cnt:
                    return cnt
        return 0

    def seam_fold(ent):
        # appending the full turn presents the covering disk with every
        # original entry as a boundary corner; a corner that itself wraps
        # a full turn would cover a second puncture, so nothing fires
        covers = table.covers
        if any(covers[a] for a in ent):
            return 0
        hl = partner[end[ent[-1]]]
        if punc[hl] != m_id:
            return 0
        return oracle.count(tuple(ent) + (table.turn_id(hl, R),))

    def run(g, stk, seam):
        ent = list(word)
        if g:
            ent[0] = table.turn_id(rotate(h0, g), s0 - g)
        if stk != sk:
            ent[-1] = table.turn_id(hk, stk)
        cnt = seam_fold(ent) if seam else min_within_fold(ent)
        if not cnt:
            return
        if g:
            emit(table.turn_id(h0, g), (-1 if g & 1 else 1) * cnt)
        elif stk != sk:
            emit(table.turn_id(rotate(hk, stk), sk - stk), cnt)
        else:
            emit(table.id_of_arc(table.tgt[word[-1]]), cnt)

    # leftover off the top of the last entry, closure types pin the trim
    for stk in _solve_rot(table, hk, partner[h0], 1, sk):
        run(0, stk, seam=False)
    for stk in _solve_rot(table, hk, h0, 1, sk):
        run(0, stk, seam=True)
    # leftover off the bottom of the first entry
    for g in _solve_rot(table, h0, partner[end[word[-1]]], 1, s0 - 1):
        run(g, sk, seam=False)
    for g in _solve_rot(table, h0, end[word[-1]], 1, s0 - 1):
        run(g, sk, seam=True)
    return out

def nu_odd(sys: ArcSystem, m: str, r: int, cat) -> Cochain:
    """Odd cocycle: r full turns at arity 0, insertion rule at arity >= 3."""
    table = cat.table
    m_id = table.punc_names.index(m)
    R = r * sys.valence(m)
    parity = (R - 1) & 1

    def fn(word):
        return nu_odd_eval_ids(table, cat, m_id, r, word)

    return Cochain(table, parity, f"nu_odd({m},{r})", fn, cat)


def nu_id(sys: ArcSystem, cat=None) -> Cochain:
    table = cat.table if cat is not None else AngleTable(sys)
    value = Morphism({Identity(a): 1 for a in sys.arc_names})
    oracle = cat if cat is not None else WordMatcher(sys, table)
    return arity0_cochain(table, value, ODD, "nu_id", oracle)


# ---------------------------------------------------------------------------
# gauges


def gauge_epsilon(sys: ArcSystem, h: str, r: int, cat=None) -> Cochain:
    """Arity-0 cochain worth ``r`` full turns starting at half-edge ``h``."""
    table = cat.table if cat is not None else AngleTable(sys)
    m = sys.puncture_of(h)
    R = r * sys.valence(m)
    value = Morphism.of(Turn(m, h, R))
    oracle = cat if cat is not None else WordMatcher(sys, table)
    return arity0_cochain(table, value, (R - 1) & 1, f"eps({h},{r})", oracle)


def id_cochain(sys: ArcSystem, arc: str, cat=None) -> Cochain:
    table = cat.table if cat is not None else AngleTable(sys)
    oracle = cat if cat is not None else WordMatcher(sys, table)
    return arity0_cochain(table, Morphism.of(Identity(arc)), ODD, f"id[{arc}]", oracle)


# ---------------------------------------------------------------------------
# sporadic family


def scaling_cochain(sys: ArcSystem, lam: dict[str, Fraction], cat=None,
                    kind: str = "scaling") -> Cochain:
    """1-adic cochain scaling every turn by the sum of its constituents'
    weights; ``lam`` maps half-edge id -> weight of its one-step angle."""
    table = cat.table if cat is not None else AngleTable(sys)
    oracle = cat if cat is not None else WordMatcher(sys, table)
    by_he = [Fraction(0)] * len(table.he_names)
    for h, c in lam.items():
        by_he[table.he_id[h]] = Fraction(c)

    def fn(word):
        if len(word) != 1:
            return {}
        aid = word[0]
        if table.is_id[aid]:
            return {}
        acc = Fraction(0)
        h = table.start[aid]
        for _ in range(table.steps[aid]):
            acc += by_he[h]
            h = table.rotate_he(h, 1)
        if not acc:
            return {}
        return {aid: acc}

    return Cochain(table, EVEN, kind, fn, oracle)


@dataclass
class SporadicBasis:
    """Exact solve of the angle-scaling cocycle space modulo inner scalings."""

    sys: ArcSystem
    half_edges: tuple[str, ...]            # column order
    matrix: tuple[tuple[Fraction, ...], ...]  # rows = faces (polygon sums)
    kernel: list[list[Fraction]]
    coboundaries: list[list[Fraction]]     # (d id_a)^1 per arc, same columns
    coboundary_rank: int
    representatives: list[list[Fraction]]
    cochains: list[Cochain]

    @property
    def dim_kernel(self) -> int:
        return len(self.kernel)

    @property
    def dim_quotient(self) -> int:
        return len(self.representatives)

    def expected_quotient_dim(self) -> int:
        return 2 * self.sys.genus() - 1 + len(self.sys.punctures)

    def matrix_report(self) -> str:
        lines = ["polygon-sum constraints (rows: faces, columns: half-edges)"]
        lines.append("  " + " ".join(f"{h:>4}" for h in self.half_edges))
        for face, row in zip(self.sys.trace_faces(), self.matrix):
            cells = " ".join(f"{str(c):>4}" for c in row)
            lines.append(f"  {cells}   # face {'/'.join(face.corners)}")
        lines.append(
            f"dim kernel = {self.dim_kernel}, inner rank = {self.coboundary_rank}, "
            f"quotient = {self.dim_quotient} (expected {self.expected_quotient_dim()})"
        )
        return "\n".join(lines)


def sporadic_space(sys: ArcSystem, cat=None) -> SporadicBasis:
    """Kernel of the polygon-sum matrix, inner scalings read off the
    differential of arity-0 identity cochains, and quotient representatives."""
    table = cat.table if cat is not None else AngleTable(sys)
    hes = tuple(sys.half_edges)
    col = {h: i for i, h in enumerate(hes)}
    rows = []
    for face in sys.trace_faces():
        row = [Fraction(0)] * len(hes)
        for h in face.corners:
            row[col[h]] += 1
        rows.append(tuple(row))
    matrix = tuple(rows)
    kern = kernel_basis([list(r) for r in matrix])

    cobs = []
    for arc in sys.arc_names:
        om = id_cochain(sys, arc, cat)
        vec = [Fraction(0)] * len(hes)
        for i, h in enumerate(hes):
            img = differential(om, (Turn(sys.puncture_of(h), h, 1),))
            for angle, c in img.terms.items():
                if angle != Turn(sys.puncture_of(h), h, 1):
                    raise RuntimeError(
                        "inner scaling differential left the scaling space"
                    )
                vec[i] = c
        cobs.append(vec)
    cob_rank = rank([list(v) for v in cobs])
    for v in cobs:
        if not in_span(kern, v):
            raise RuntimeError("inner scaling is not a polygon-sum solution")

    reps = extend_basis(cobs, kern)
    cochains = []
    for j, vec in enumerate(reps):
        lam = {h: vec[i] for i, h in enumerate(hes) if vec[i]}
        cochains.append(scaling_cochain(sys, lam, cat, kind=f"nu_P[{j}]"))
    return SporadicBasis(
        sys=sys,
        half_edges=hes,
        matrix=matrix,
        kernel=kern,
        coboundaries=cobs,
        coboundary_rank=cob_rank,
        representatives=reps,
        cochains=cochains,
    )


# ---------------------------------------------------------------------------
# splitting sets and angles


@dataclass(frozen=True)
class SplitElement:
    """One way of absorbing the full-turn insertion into a sequence: entry
    ``index`` splits after ``offset`` steps (offset 0 inserts in front of
    the entry)."""

    index: int
    offset: int
    first: Angle | None
    second: Angle
    witnesses: int

    def key(self):
        return (self.index, self.offset)


def _splitting_set_ids(table: AngleTable, oracle, m_id: int, r: int, word):
    """All (entry, offset, witness count) with the full turn insertable there."""
    k = len(word)
    if k == 0:
        return []
    for aid in word:
        if table.is_id[aid]:
            return []
    links = _links(table, word)
    if any(l == BROKEN for l in links):
        return []
    compose_at = [i for i, l in enumerate(links) if l == COMPOSE]
    if len(compose_at) > 1:
        return []
    R = r * table.valences[m_id]
    steps = table.steps
    start = table.start
    end = table.end
    partner = table.he_partner
    rotate = table.rotate_he
    punc = table.he_punc
    found = []
    for e in range(k):
        for u in range(steps[word[e]]):
            if u == 0:
                # insertion in front of entry e; a compose link anywhere
                # else would survive into the candidate word and break it
                if e == 0:
                    if compose_at:
                        continue
                    left_end = end[word[-1]]
                    if start[word[0]] != left_end:
                        continue
                    if not _SEAM_COVERING and any(table.covers[a] for a in word):
                        continue
                else:
                    if compose_at != [e - 1]:
                        continue
                    left_end = end[word[e - 1]]
                hl = partner[left_end]
                if punc[hl] != m_id:
                    continue
                w = tuple(word[:e]) + (table.turn_id(hl, R),) + tuple(word[e:])
            else:
                if compose_at:
                    continue
                hs = start[word[e]]
                mid = rotate(hs, u)
                hl = partner[mid]
                if punc[hl] != m_id:
                    continue
                part1 = table.turn_id(hs, u)
                part2 = table.turn_id(mid, steps[word[e]] - u)
                w = (
                    tuple(word[:e])
                    + (part1, table.turn_id(hl, R), part2)
                    + tuple(word[e + 1 :])
                )
            cnt = oracle.count(w)
            if cnt:
                found.append((e, u, cnt))
    return found


def splitting_set(seq, m: str, r: int, cat) -> list[SplitElement]:
    """Ordered splitting set of a sequence (order: entry, then split length)."""
    table = cat.table
    word = table.intern_seq(tuple(seq.args if hasattr(seq, "args") else seq))
    m_id = table.punc_names.index(m)
    out = []
    for e, u, cnt in sorted(_splitting_set_ids(table, cat, m_id, r, word)):
        aid = word[e]
        if u == 0:
            first: Angle | None = None
            second = table.angle(aid)
        else:
            hs = table.start[aid]
            first = table.angle(table.turn_id(hs, u))
            second = table.angle(
                table.turn_id(table.rotate_he(hs, u), table.steps[aid] - u)
            )
        out.append(SplitElement(e, u, first, second, cnt))
    return out


def _splitting_magic(table, oracle, m_id, r, word, lo_elem, hi_elem, max_steps):
    """The splitting angle between two elements of a splitting set, as a
    ``(start half-edge, steps)`` pair; None when the elements coincide or
    no completion exists.

    Elements at the same entry differ by the step gap between the two
    splits (an angle at the entry's own puncture); otherwise the angle is
    the unique one closing the sub-sequence between the two split points
    into a disk.
    """
    (e1, u1), (e2, u2) = lo_elem, hi_elem
    if (e1, u1) == (e2, u2):
        return None
    steps = table.steps
    start = table.start
    rotate = table.rotate_he
    partner = table.he_partner
    if e1 == e2:
        return (rotate(start[word[e1]], u1), u2 - u1)
    aid1, aid2 = word[e1], word[e2]
    if u1 == 0:
        part2_lo = aid1
    else:
        part2_lo = table.turn_id(rotate(start[aid1], u1), steps[aid1] - u1)
    middle = tuple(word[e1 + 1 : e2])
    if u2 == 0:
        # split directly in front of entry e2: nothing of e2 belongs to
        # the closing disk
        head: tuple = ()
        anchor = table.end[word[e2 - 1]] if e2 - 1 > e1 else table.end[part2_lo]
    else:
        head = (table.turn_id(start[aid2], u2),)
        anchor = rotate(start[aid2], u2)
    base = (part2_lo,) + middle + head
    hX = partner[anchor]
    if table.he_punc[hX] != m_id:
        return None
    hits = []
    target = partner[start[part2_lo]]
    for t in _solve_rot(table, hX, target, 1, max_steps):
        w = base + (table.turn_id(hX, t),)
        if oracle.count(w):
            hits.append(t)
    if not hits:
        return None
    if len(hits) > 1:
        raise RuleConflictError(
            f"splitting angle not unique: completions {hits} for {word}"
        )
    return (hX, hits[0])


def splitting_angle(e1: SplitElement, e2: SplitElement, seq, cat,
                    m: str, r: int) -> Angle | None:
    """Angle between two splitting-set elements (``e1 <= e2``); ``None`` for
    coinciding elements."""
    if e2.key() < e1.key():
        raise ValueError("elements out of order")
    table = cat.table
    word = table.intern_seq(tuple(seq.args if hasattr(seq, "args") else seq))
    m_id = table.punc_names.index(m)
    if hasattr(cat, "bounds"):
        max_steps = cat.bounds.max_steps
    else:
        max_steps = sum(table.steps[a] for a in word) + (r + 1) * max(table.valences)
    magic = _splitting_magic(table, cat, m_id, r, word, e1.key(), e2.key(), max_steps)
    if magic is None:
        return None
    return table.angle(table.turn_id(*magic))


# ---------------------------------------------------------------------------
# even family


def nu_even_eval_ids(table: AngleTable, oracle, m_id: int, r: int,
                     sharp: _Sharp, word, strict: bool = True):
    """Rule evaluator for the even cochain built from input scalars."""
    k = len(word)
    if k == 0:
        return {}
    steps = table.steps
    start = table.start
    end = table.end
    partner = table.he_partner
    rotate = table.rotate_he
    punc = table.he_punc
    is_id = table.is_id
    val_m = table.valences[m_id]
    R = r * val_m

    if k == 1:
        aid = word[0]
        if is_id[aid] or punc[start[aid]] != m_id:
            return {}
        c = sharp.of_turn(start[aid], steps[aid])
        if not c:
            return {}
        return {table.turn_id(start[aid], steps[aid] + R): c}

    for aid in word:
        if is_id[aid]:
            return {}
    if k + 1 < getattr(oracle, "min_corners", 3):
        return {}
    links = _links(table, word)
    nonpartner = [i for i, l in enumerate(links) if l != PARTNER]
    if any(links[i] == BROKEN for i in nonpartner) or len(nonpartner) > 1:
        return {}

    out: dict[int, Fraction] = {}

    def emit(key, coeff):
        if not coeff:
            return
        s = out.get(key, 0) + coeff
        if s:
            out[key] = s
        else:
            out.pop(key, None)

    rdeg_sum = sum((steps[a] + 1) for a in word) & 1
    fired: set[str] = set()

    h0 = start[word[0]]
    s0 = steps[word[0]]
    hk = start[word[-1]]
    sk = steps[word[-1]]

    if not nonpartner:
        # end-split with a short turning angle: no trims allowed
        h_turn = partner[end[word[-1]]]
        if punc[h_turn] == m_id:
            target = partner[h0]
            for t in _solve_rot(table, h_turn, target, 1, R - 1):
                w = tuple(word) + (table.turn_id(h_turn, t),)
                cnt = oracle.count(w)
                if not cnt:
                    continue
                fired.add("end-split")
                if strict and ((t + 1) & 1) != rdeg_sum:
                    raise RuleConflictError(
                        "turning-angle sign disagrees with the sequence parity"
                    )
                c = sharp.of_turn(h_turn, t)
                sign = -1 if (t + 1) & 1 else 1
                emit(
                    table.turn_id(rotate(h_turn, t), R - t),
                    sign * c * cnt,
                )

        # full-turn end-split (old era g == 0, new era g >= 1)
        for g in range(0, sk):
            stk = sk - g
            left_end = rotate(hk, stk)
            hl = partner[left_end]
            if punc[hl] != m_id:
                continue
            for b in _solve_rot(table, h0, left_end, 0, s0 - 1):
                if b and g and not _EVEN_GATES["both_trims"]:
                    continue
                ent = list(word)
                if b:
                    ent[0] = table.turn_id(rotate(h0, b), s0 - b)
                if g:
                    ent[-1] = table.turn_id(hk, stk)
                if not _EVEN_GATES["endsplit_covering"] and any(
                    table.covers[a] for a in ent
                ):
                    continue
                w = tuple(ent) + (table.turn_id(hl, R),)
                cnt = oracle.count(w)
                if not cnt:
                    continue
                fired.add("old-era" if g == 0 else "new-era")
                if g == 0:
                    coeff = -r * sharp.total
                    key = (
                        table.id_of_arc(table.src[word[0]])
                        if b == 0
                        else table.turn_id(h0, b)
                    )
                else:
                    coeff = -sharp.by_he[hl]
                    key = table.turn_id(h0, b + g) if b else table.turn_id(left_end, g)
                emit(key, coeff * cnt)
    else:
        # middle-split: the full turn goes into the unique compose link
        i = nonpartner[0]
        hl = partner[end[word[i]]]
        if punc[hl] != m_id:
            return out
        if hasattr(oracle, "bounds"):
            max_comp = oracle.bounds.max_steps
        else:
            max_comp = sum(steps[a] for a in word) + R + val_m

        def fire_middle(g, b):
            ent = list(word)
            if b:
                ent[0] = table.turn_id(rotate(h0, b), s0 - b)
            if g:
                ent[-1] = table.turn_id(hk, sk - g)
            w = (
                tuple(ent[: i + 1])
                + (table.turn_id(hl, R),)
                + tuple(ent[i + 1 :])
            )
            cnt = oracle.count(w)
            if not cnt:
                return
            fired.add("middle-split")
            # magic angle: splitting angle of the taken split relative to
            # the minimum of the splitting set of the composed sequence
            comp = table.compose_ids(ent[i + 1], ent[i])
            s_word = tuple(ent[:i]) + (comp,) + tuple(ent[i + 2 :])
            elems = sorted(
                (e, u) for e, u, _ in _splitting_set_ids(table, oracle, m_id, r, s_word)
            )
            taken = (i, steps[ent[i]])
            if taken not in elems:
                raise RuleConflictError("taken middle split missing from splitting set")
            mini = elems[0]
            if mini == taken:
                return
            magic = _splitting_magic(
                table, oracle, m_id, r, s_word, mini, taken, max_comp
            )
            if magic is None:
                raise RuleConflictError("no splitting angle for the taken split")
            c = sharp.of_turn(*magic)
            if not c:
                return
            pre = sum((steps[x] + 1) for x in ent[: i + 1]) & 1
            sign = -1 if pre else 1
            if g == 0 and b == 0:
                key = table.id_of_arc(table.tgt[word[-1]])
            elif g:
                key = table.turn_id(rotate(hk, sk - g), g)
            else:
                key = table.turn_id(h0, b)
            emit(key, sign * c * cnt)

        if h0 == partner[end[word[-1]]]:
            fire_middle(0, 0)
        for x in _solve_rot(table, hk, partner[h0], 1, sk - 1):
            fire_middle(sk - x, 0)
        for b in _solve_rot(table, h0, partner[end[word[-1]]], 1, s0 - 1):
            fire_middle(0, b)

    if strict and len(fired) > 1:
        raise RuleConflictError(f"sequence matched several rule types: {sorted(fired)}")
    return out


def nu_even(sys: ArcSystem, m: str, r: int, scalars: InputScalars, cat) -> Cochain:
    """Even cochain from input scalars at ``m``: the turn-appending
    derivation at arity 1, the four insertion rules above."""
    if scalars.puncture != m:
        raise ValueError(f"scalars are for {scalars.puncture!r}, not {m!r}")
    table = cat.table
    m_id = table.punc_names.index(m)
    sharp = _Sharp(table, m_id, scalars)
    R = r * sys.valence(m)

    def fn(word):
        return nu_even_eval_ids(table, cat, m_id, r, sharp, word)

    return Cochain(table, R & 1, f"nu_even({m},{r})", fn, cat)


def nu_even_sharp(sys: ArcSystem, m: str, scalars: InputScalars, cat) -> _Sharp:
    table = cat.table
    return _Sharp(table, table.punc_names.index(m), scalars)
