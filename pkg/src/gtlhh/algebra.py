"""Basis angles, exact-rational morphisms, and the signed product mu2.

A basis morphism is either the identity of an arc or a clockwise turn
around one puncture.  Products concatenate turns; all coefficients are
exact rationals.  :class:`AngleTable` interns angles as dense integers for
the enumeration-heavy layers; everything user-facing stays on names.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .surface import ArcSystem, ArcSystemError


@dataclass(frozen=True)
class Identity:
    """Empty angle: the identity morphism of an arc (arc name, e.g. ``"a1~a2"``)."""

    arc: str


@dataclass(frozen=True)
class Turn:
    """``steps`` indecomposable clockwise steps at ``puncture`` starting from
    half-edge ``start``.  ``steps >= 1``; steps may exceed the valence (the
    turn keeps winding)."""

    puncture: str
    start: str
    steps: int


Angle = Identity | Turn


def degree(angle: Angle) -> int:
    """Parity degree: identities are even, a turn has the parity of its steps."""
    if isinstance(angle, Identity):
        return 0
    return angle.steps % 2


def reduced_degree(angle: Angle) -> int:
    return (degree(angle) + 1) % 2


def source_arc(sys: ArcSystem, angle: Angle) -> str:
    if isinstance(angle, Identity):
        return angle.arc
    return sys.arc_name_of(angle.start)


def target_arc(sys: ArcSystem, angle: Angle) -> str:
    if isinstance(angle, Identity):
        return angle.arc
    return sys.arc_name_of(sys.rotate(angle.start, angle.steps))


def end_half_edge(sys: ArcSystem, t: Turn) -> str:
    return sys.rotate(t.start, t.steps)


def compose(sys: ArcSystem, alpha: Angle, beta: Angle) -> Angle | None:
    """Concatenation ``alpha . beta`` (beta applied first); ``None`` is zero.

    Turns concatenate only when ``alpha`` starts exactly where ``beta``
    stops (same puncture, same half-edge); identities compose per their
    arc.
    """
    if isinstance(beta, Identity):
        if isinstance(alpha, Identity):
            return alpha if alpha.arc == beta.arc else None
        return alpha if source_arc(sys, alpha) == beta.arc else None
    if isinstance(alpha, Identity):
        return beta if target_arc(sys, beta) == alpha.arc else None
    if alpha.puncture != beta.puncture:
        return None
    if alpha.start != end_half_edge(sys, beta):
        return None
    return Turn(beta.puncture, beta.start, alpha.steps + beta.steps)


class Morphism:
    """Finite formal sum of angles with nonzero exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[Angle, Fraction] = {}
        if terms:
            for angle, coeff in dict(terms).items():
                c = Fraction(coeff)
                if c:
                    self.terms[angle] = c

    @classmethod
    def zero(cls) -> "Morphism":
        return cls()

    @classmethod
    def of(cls, angle: Angle, coeff=1) -> "Morphism":
        return cls({angle: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Morphism") -> "Morphism":
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = out.get(a, 0) + c
            if s:
                out[a] = s
            else:
                out.pop(a, None)
        m = Morphism()
        m.terms = out
        return m

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + other.scale(-1)

    def scale(self, coeff) -> "Morphism":
        c = Fraction(coeff)
        m = Morphism()
        if c:
            m.terms = {a: c * x for a, x in self.terms.items()}
        return m

    def __eq__(self, other) -> bool:
        return isinstance(other, Morphism) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("Morphism is not hashable")

    def __repr__(self) -> str:
        return f"Morphism({render_morphism(self)})"


def render_angle(angle: Angle) -> str:
    if isinstance(angle, Identity):
        return f"id({angle.arc})"
    return f"turn({angle.puncture}, {angle.start}, {angle.steps})"


def _angle_sort_key(angle: Angle):
    if isinstance(angle, Identity):
        return (0, angle.arc, "", 0)
    return (1, angle.puncture, angle.start, angle.steps)


def render_morphism(m: Morphism) -> str:
    """Stable text form: terms sorted by puncture, half-edge, steps."""
    if m.is_zero():
        return "0"
    parts = []
    for angle in sorted(m.terms, key=_angle_sort_key):
        parts.append(f"{m.terms[angle]} * {render_angle(angle)}")
    return " + ".join(parts)


def mu2(sys: ArcSystem, x: Morphism, y: Morphism) -> Morphism:
    """Signed product: bilinear extension of (a, b) -> (-1)^|b| a.b."""
    out = Morphism()
    acc: dict[Angle, Fraction] = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            prod = compose(sys, a, b)
            if prod is None:
                continue
            sign = -1 if degree(b) else 1
            s = acc.get(prod, 0) + sign * ca * cb
            if s:
                acc[prod] = s
            else:
                acc.pop(prod, None)
    out.terms = acc
    return out


def ell_power(sys: ArcSystem, m: str, r: int) -> Morphism:
    """Sum over half-edges at ``m`` of the ``r``-fold full turn starting there."""
    if r < 1:
        raise ArcSystemError("full-turn power needs r >= 1")
    val = sys.valence(m)
    return Morphism({Turn(m, h, r * val): 1 for h in sys.rotation[m]})


def complement_to_turns(sys: ArcSystem, alpha: Angle, r: int) -> Turn:
    """The unique angle ``c`` with ``compose(c, alpha)`` equal to ``r`` full
    turns at ``alpha``'s start half-edge."""
    if isinstance(alpha, Identity):
        raise ArcSystemError("identity has no turn complement")
    total = r * sys.valence(alpha.puncture)
    if not 1 <= alpha.steps < total:
        raise ArcSystemError(
            f"complement undefined: steps {alpha.steps} not in [1, {total})"
        )
    return Turn(
        alpha.puncture,
        sys.rotate(alpha.start, alpha.steps),
        total - alpha.steps,
    )


class AngleTable:
    """Dense integer interning of half-edges and angles for the hot paths.

    Half-edges get ids 0..H-1 in rotation order; angles are interned on
    demand.  Per-angle arrays expose steps, start/end half-edge, source and
    target arc, degree, and puncture without touching string ids.
    """

    def __init__(self, sys: ArcSystem):
        self.sys = sys
        self.he_names: list[str] = list(sys.half_edges)
        self.he_id: dict[str, int] = {h: i for i, h in enumerate(self.he_names)}
        self.punc_names: list[str] = list(sys.punctures)
        punc_id = {m: i for i, m in enumerate(self.punc_names)}
        self.he_punc: list[int] = [punc_id[sys.puncture_of(h)] for h in self.he_names]
        self.he_partner: list[int] = [self.he_id[sys.partner(h)] for h in self.he_names]
        self.he_arc: list[int] = [sys.arc_index_of(h) for h in self.he_names]
        self.valences: list[int] = [sys.valence(m) for m in self.punc_names]
        self._rot: list[list[int]] = [
            [self.he_id[h] for h in sys.rotation[m]] for m in self.punc_names
        ]
        self._he_pos: list[int] = [0] * len(self.he_names)
        for rot in self._rot:
            for pos, h in enumerate(rot):
                self._he_pos[h] = pos
        self.arc_names: list[str] = list(sys.arc_names)
        self.n_arcs = len(self.arc_names)

        # angle arrays, indexed by angle id
        self._intern: dict[tuple[int, int, int], int] = {}
        self.steps: list[int] = []
        self.start: list[int] = []   # -1 for identities
        self.end: list[int] = []     # -1 for identities
        self.punc: list[int] = []    # -1 for identities
        self.src: list[int] = []     # arc index
        self.tgt: list[int] = []     # arc index
        self.deg: list[int] = []
        self.is_id: list[bool] = []
        self.covers: list[bool] = []  # winds a full turn or more
        self.identity_ids: list[int] = [
            self._intern_key((-1, a, 0)) for a in range(self.n_arcs)
        ]

    def rotate_he(self, h: int, k: int) -> int:
        rot = self._rot[self.he_punc[h]]
        return rot[(self._he_pos[h] + k) % len(rot)]

    def _intern_key(self, key: tuple[int, int, int]) -> int:
        aid = self._intern.get(key)
        if aid is not None:
            return aid
        aid = len(self.steps)
        self._intern[key] = aid
        start, second, steps = key
        if start == -1:
            self.steps.append(0)
            self.start.append(-1)
            self.end.append(-1)
            self.punc.append(-1)
            self.src.append(second)
            self.tgt.append(second)
            self.deg.append(0)
            self.is_id.append(True)
            self.covers.append(False)
        else:
            end = self.rotate_he(start, steps)
            p = self.he_punc[start]
            self.steps.append(steps)
            self.start.append(start)
            self.end.append(end)
            self.punc.append(p)
            self.src.append(self.he_arc[start])
            self.tgt.append(self.he_arc[end])
            self.deg.append(steps % 2)
            self.is_id.append(False)
            self.covers.append(steps >= self.valences[p])
        return aid

    def turn_id(self, start_he: int, steps: int) -> int:
        return self._intern_key((start_he, 0, steps))

    def id_of_arc(self, arc: int) -> int:
        return self.identity_ids[arc]

    def intern(self, angle: Angle) -> int:
        if isinstance(angle, Identity):
            try:
                arc = self.arc_names.index(angle.arc)
            except ValueError:
                raise ArcSystemError(f"unknown arc {angle.arc!r}") from None
            return self.identity_ids[arc]
        if angle.steps < 1:
            raise ArcSystemError("turns need steps >= 1")
        h = self.he_id.get(angle.start)
        if h is None or self.punc_names[self.he_punc[h]] != angle.puncture:
            raise ArcSystemError(f"unknown angle {angle!r}")
        return self.turn_id(h, angle.steps)

    def angle(self, aid: int) -> Angle:
        if self.is_id[aid]:
            return Identity(self.arc_names[self.src[aid]])
        return Turn(
            self.punc_names[self.punc[aid]],
            self.he_names[self.start[aid]],
            self.steps[aid],
        )

    def intern_seq(self, seq) -> tuple[int, ...]:
        return tuple(self.intern(a) for a in seq)

    def angles(self, word) -> tuple[Angle, ...]:
        return tuple(self.angle(aid) for aid in word)

    def compose_ids(self, x: int, y: int) -> int:
        """Angle id of x.y (y first), or -1 for zero."""
        if self.is_id[y]:
            if self.is_id[x]:
                return x if self.src[x] == self.src[y] else -1
            return x if self.src[x] == self.src[y] else -1
        if self.is_id[x]:
            return y if self.tgt[y] == self.src[x] else -1
        if self.start[x] != self.end[y]:
            return -1
        return self.turn_id(self.start[y], self.steps[x] + self.steps[y])

    def morphism(self, coeffs: dict[int, Fraction]) -> Morphism:
        return Morphism({self.angle(aid): c for aid, c in coeffs.items()})

    def coeffs(self, m: Morphism) -> dict[int, Fraction]:
        return {self.intern(a): c for a, c in m.terms.items()}
