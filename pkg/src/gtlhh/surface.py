"""Combinatorial arc systems on punctured surfaces, modeled as ribbon graphs.

An arc system is stored as a rotation system: every puncture carries a
cyclic, clockwise-ordered list of half-edge ids, and arcs pair up all
half-edges.  Faces (the polygons cut out by the arcs) and the genus are
derived, never stored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class ArcSystemError(ValueError):
    """Malformed arc-system document or ill-posed query."""


@dataclass(frozen=True)
class Face:
    """One traced polygon.

    ``corners[i]`` is a half-edge id ``h``; it stands for the one-step
    clockwise angle at ``h``'s puncture.  ``edges[i]`` is the arc name of
    the side joining corner ``i`` to corner ``i+1`` (cyclically).
    """

    corners: tuple[str, ...]
    edges: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.corners)


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: tuple[tuple[str, str, tuple[str, ...]], ...]
    # each violation: (rule id, message, offending ids)


class ArcSystem:
    """Immutable ribbon graph: punctures, clockwise rotations, arc pairing."""

    def __init__(self, punctures, rotation, arc_pairs):
        self.punctures: tuple[str, ...] = tuple(punctures)
        self.rotation: dict[str, tuple[str, ...]] = {
            m: tuple(rotation[m]) for m in self.punctures
        }
        self.arc_pairs: tuple[tuple[str, str], ...] = tuple(
            (a, b) for a, b in arc_pairs
        )
        self.arc_names: tuple[str, ...] = tuple(f"{a}~{b}" for a, b in self.arc_pairs)

        self._punc_of: dict[str, str] = {}
        self._pos: dict[str, int] = {}
        for m in self.punctures:
            for i, h in enumerate(self.rotation[m]):
                self._punc_of[h] = m
                self._pos[h] = i
        self._partner: dict[str, str] = {}
        self._arc_idx: dict[str, int] = {}
        for i, (a, b) in enumerate(self.arc_pairs):
            self._partner[a] = b
            self._partner[b] = a
            self._arc_idx[a] = i
            self._arc_idx[b] = i
        self.half_edges: tuple[str, ...] = tuple(
            h for m in self.punctures for h in self.rotation[m]
        )
        self._faces: tuple[Face, ...] | None = None

    # -- basic queries ----------------------------------------------------

    def valence(self, m: str) -> int:
        try:
            return len(self.rotation[m])
        except KeyError:
            raise ArcSystemError(f"unknown puncture {m!r}") from None

    def puncture_of(self, h: str) -> str:
        try:
            return self._punc_of[h]
        except KeyError:
            raise ArcSystemError(f"unknown half-edge {h!r}") from None

    def partner(self, h: str) -> str:
        try:
            return self._partner[h]
        except KeyError:
            raise ArcSystemError(f"unknown half-edge {h!r}") from None

    def arc_index_of(self, h: str) -> int:
        return self._arc_idx[h]

    def arc_name_of(self, h: str) -> str:
        try:
            return self.arc_names[self._arc_idx[h]]
        except KeyError:
            raise ArcSystemError(f"unknown half-edge {h!r}") from None

    def rotate(self, h: str, k: int) -> str:
        """Half-edge ``k`` positions clockwise from ``h`` (wraps, k may be < 0)."""
        m = self.puncture_of(h)
        rot = self.rotation[m]
        return rot[(self._pos[h] + k) % len(rot)]

    # -- derived structure -------------------------------------------------

    def trace_faces(self) -> tuple[Face, ...]:
        """Faces of the ribbon graph.

        The successor of the corner at ``h`` is the corner at
        ``partner(rotate(h, 1))``; every half-edge occurs as a corner of
        exactly one face.
        """
        if self._faces is not None:
            return self._faces
        seen: set[str] = set()
        faces: list[Face] = []
        for h0 in self.half_edges:
            if h0 in seen:
                continue
            cycle = []
            h = h0
            while True:
                cycle.append(h)
                seen.add(h)
                h = self._partner[self.rotate(h, 1)]
                if h == h0:
                    break
            edges = tuple(self.arc_name_of(self.rotate(c, 1)) for c in cycle)
            faces.append(Face(corners=tuple(cycle), edges=edges))
        self._faces = tuple(faces)
        return self._faces

    def is_connected(self) -> bool:
        if not self.punctures:
            return False
        seen = {self.punctures[0]}
        stack = [self.punctures[0]]
        while stack:
            m = stack.pop()
            for h in self.rotation[m]:
                other = self.puncture_of(self.partner(h))
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        return len(seen) == len(self.punctures)

    def genus(self) -> int:
        """Genus from V - E + F = 2 - 2g; requires a connected system."""
        if not self.is_connected():
            raise ArcSystemError("genus undefined: arc system is disconnected")
        v = len(self.punctures)
        e = len(self.arc_pairs)
        f = len(self.trace_faces())
        chi = v - e + f
        if (2 - chi) % 2 != 0 or chi > 2:
            raise ArcSystemError(f"corrupted rotation system: Euler characteristic {chi}")
        return (2 - chi) // 2

    def to_dot(self) -> str:
        """DOT graph of punctures and arcs; rotation positions become port labels."""
        lines = ["graph arcs {"]
        for m in self.punctures:
            lines.append(f'  "{m}";')
        for (a, b), name in zip(self.arc_pairs, self.arc_names):
            pa, pb = self.puncture_of(a), self.puncture_of(b)
            lines.append(
                f'  "{pa}" -- "{pb}" [label="{name}", '
                f'taillabel="{self._pos[a]}", headlabel="{self._pos[b]}"];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def parse_arc_system(text) -> ArcSystem:
    """Parse the JSON input document into an :class:`ArcSystem`.

    Accepts a JSON string, bytes, or an already-decoded dict.  Rotation
    order is preserved exactly as given.
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ArcSystemError(f"malformed document: {exc}") from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise ArcSystemError("malformed document: top level must be an object")
    for key in ("punctures", "rotation", "arcs"):
        if key not in doc:
            raise ArcSystemError(f"malformed document: missing key {key!r}")
    punctures = doc["punctures"]
    rotation = doc["rotation"]
    arcs = doc["arcs"]
    if not isinstance(punctures, list) or not all(isinstance(p, str) for p in punctures):
        raise ArcSystemError("malformed document: punctures must be a list of ids")
    if len(set(punctures)) != len(punctures):
        raise ArcSystemError("duplicate puncture id")
    if not isinstance(rotation, dict):
        raise ArcSystemError("malformed document: rotation must be an object")
    for m in rotation:
        if m not in punctures:
            raise ArcSystemError(f"unknown puncture {m!r} in rotation")
    for m in punctures:
        if m not in rotation:
            raise ArcSystemError(f"puncture {m!r} has no rotation list")
        if not isinstance(rotation[m], list) or not all(
            isinstance(h, str) for h in rotation[m]
        ):
            raise ArcSystemError(f"rotation of {m!r} must be a list of half-edge ids")
    seen_he: set[str] = set()
    for m in punctures:
        for h in rotation[m]:
            if h in seen_he:
                raise ArcSystemError(f"duplicate half-edge {h!r}")
            seen_he.add(h)
    if not isinstance(arcs, list):
        raise ArcSystemError("malformed document: arcs must be a list of pairs")
    paired: set[str] = set()
    pairs = []
    for entry in arcs:
        if not isinstance(entry, list) or len(entry) != 2:
            raise ArcSystemError(f"malformed arc entry {entry!r}: expected a pair")
        a, b = entry
        if a == b:
            raise ArcSystemError(
                f"arc {entry!r}: a loop still needs two distinct half-edge ids"
            )
        for h in (a, b):
            if h not in seen_he:
                raise ArcSystemError(f"arc endpoint {h!r} appears in no rotation")
            if h in paired:
                raise ArcSystemError(f"half-edge {h!r} appears in two arcs")
            paired.add(h)
        pairs.append((a, b))
    unpaired = seen_he - paired
    if unpaired:
        raise ArcSystemError(f"unpaired half-edge {sorted(unpaired)[0]!r}")
    return ArcSystem(punctures, rotation, pairs)


def validate(sys: ArcSystem) -> ValidationReport:
    """Report every structural rule the system violates (never raises)."""
    violations: list[tuple[str, str, tuple[str, ...]]] = []
    if len(sys.punctures) < 1:
        violations.append(("puncture-count", "at least one puncture required", ()))
        return ValidationReport(False, tuple(violations))
    if not sys.is_connected():
        violations.append(("disconnected", "underlying graph is not connected", ()))
    for face in sys.trace_faces():
        if len(face) < 3:
            violations.append(
                (
                    "small-face",
                    f"face with < 3 corners (size {len(face)})",
                    face.corners,
                )
            )
    if not violations:
        g = sys.genus()
        if g == 0 and len(sys.punctures) < 3:
            violations.append(
                (
                    "puncture-count",
                    f"genus 0 needs at least 3 punctures, got {len(sys.punctures)}",
                    sys.punctures,
                )
            )
    return ValidationReport(not violations, tuple(violations))


def load_arc_system(path) -> ArcSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_arc_system(fh.read())
