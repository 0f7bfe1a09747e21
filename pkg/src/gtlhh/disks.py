"""Immersed disks as tree gluings of faces, bounded catalogs, and the
higher products they support.

A disk is built by repeatedly gluing a fresh face instance onto a boundary
edge; the dual graph of its faces is a tree, so no puncture is ever
covered.  Two disks are equal iff their labeled face trees are isomorphic.
The catalog indexes every rotation of every disk's cyclic boundary word;
queries beyond the catalog's bounds go through :class:`WordMatcher`, which
parses a boundary word directly into the gluing trees realizing it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Angle, AngleTable
from .surface import ArcSystem


class CatalogBoundsError(ValueError):
    """A query exceeded the catalog's completeness bounds; widen the bounds."""


class CatalogLimitError(RuntimeError):
    """Catalog construction exceeded the configured memory cap."""


@dataclass(frozen=True)
class Bounds:
    max_faces: int
    max_corners: int
    max_steps: int

    def __post_init__(self):
        if self.max_faces < 1 or self.max_steps < 1 or self.max_corners < 3:
            raise ValueError("bounds must be positive with max_corners >= 3")


@dataclass(frozen=True)
class ImmersedDisk:
    """One immersed disk: face instances, gluing tree, cyclic boundary."""

    face_nodes: tuple[int, ...]                    # face index per instance
    tree_edges: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    boundary_word: tuple[int, ...]                 # angle ids, cyclic order

    def boundary(self, table: AngleTable) -> tuple[Angle, ...]:
        return table.angles(self.boundary_word)

    def boundary_edges(self, table: AngleTable) -> tuple[str, ...]:
        return tuple(
            table.arc_names[table.he_arc[table.end[aid]]]
            for aid in self.boundary_word
        )

    def step_profile(self, table: AngleTable) -> tuple[int, ...]:
        return tuple(table.steps[aid] for aid in self.boundary_word)


class _FaceData:
    """Faces with integer corner/slot arrays; slot = half-edge we cross."""

    def __init__(self, sys: ArcSystem, table: AngleTable):
        self.corners: list[list[int]] = []
        self.slots: list[list[int]] = []
        self.sizes: list[int] = []
        # face_of_slot[h] = (face index, edge position) with slots[f][e] == h
        self.face_of_slot: list[tuple[int, int]] = [(-1, -1)] * len(table.he_names)
        for fi, face in enumerate(sys.trace_faces()):
            cs = [table.he_id[h] for h in face.corners]
            ss = [table.rotate_he(c, 1) for c in cs]
            self.corners.append(cs)
            self.slots.append(ss)
            self.sizes.append(len(cs))
            for e, s in enumerate(ss):
                self.face_of_slot[s] = (fi, e)
        self.min_size = min(self.sizes) if self.sizes else 0


def build_catalog(sys, bounds, table=None, max_memory_mb=None):
    """Enumerate every immersed disk within ``bounds``.

    Complete within bounds: boundary length and corner steps only grow
    under gluing, so pruning cannot hide a disk that fits.
    """
    if table is None:
        table = AngleTable(sys)
    faces = _FaceData(sys, table)
    rotate = table.rotate_he
    partner = table.he_partner

    disks: list[ImmersedDisk] = []
    words: list[tuple[int, ...]] = []
    seen_trees: set = set()
    # state: (nodes, adjacency, boundary); boundary entry = (start_he, steps, owner, owner_edge)
    queue = []
    for fi in range(len(faces.sizes)):
        size = faces.sizes[fi]
        if size > bounds.max_corners or bounds.max_steps < 1:
            continue
        entries = tuple(
            (faces.corners[fi][e], 1, 0, e) for e in range(size)
        )
        queue.append(((fi,), ({},), entries))

    def tree_key(nodes, adj):
        def encode(v, parent):
            sub = []
            for e, (u, e2) in adj[v].items():
                if u == parent:
                    continue
                sub.append((e, e2, encode(u, v)))
            sub.sort()
            return (nodes[v], tuple(sub))

        return min(encode(v, None) for v in range(len(nodes)))

    budget = None
    if max_memory_mb is not None:
        budget = max_memory_mb * 1024 * 1024

    spent = 0
    head = 0
    while head < len(queue):
        nodes, adj, entries = queue[head]
        head += 1
        key = tree_key(nodes, adj)
        if key in seen_trees:
            continue
        seen_trees.add(key)
        word = tuple(table.turn_id(st, sp) for st, sp, _, _ in entries)
        disks.append(
            ImmersedDisk(
                face_nodes=nodes,
                tree_edges=tuple(
                    ((v, e), (u, e2))
                    for v in range(len(nodes))
                    for e, (u, e2) in adj[v].items()
                    if v < u
                ),
                boundary_word=word,
            )
        )
        words.append(word)
        if budget is not None:
            spent += 120 * len(word) + 200
            if spent > budget:
                raise CatalogLimitError(
                    f"catalog exceeded GTL_HH_MAX_MEMORY_MB ({max_memory_mb} MB); "
                    "lower the bounds or raise the cap"
                )
        if len(nodes) >= bounds.max_faces:
            continue
        k = len(entries)
        for pos in range(k):
            st, sp, owner, owner_edge = entries[pos]
            slot = rotate(st, sp)
            nf, ne = faces.face_of_slot[partner[slot]]
            size = faces.sizes[nf]
            if k + size - 2 > bounds.max_corners:
                continue
            nxt = (pos + 1) % k
            st2, sp2, owner2, owner_edge2 = entries[nxt]
            merged_lo = (st, sp + 1)
            merged_hi = (faces.corners[nf][ne], 1 + sp2)
            if merged_lo[1] > bounds.max_steps or merged_hi[1] > bounds.max_steps:
                continue
            new_node = len(nodes)
            new_entries = list(entries)
            inserted = [
                (merged_lo[0], merged_lo[1], new_node, (ne + 1) % size)
            ]
            for t in range(2, size):
                ce = (ne + t) % size
                inserted.append((faces.corners[nf][ce], 1, new_node, ce))
            new_entries[pos] = inserted[0]
            new_entries[pos + 1 : pos + 1] = inserted[1:]
            # position of old `nxt` shifted by the insertion
            hi_pos = (pos + size - 1) % (k + size - 2)
            ohe = new_entries[hi_pos]
            new_entries[hi_pos] = (merged_hi[0], merged_hi[1], ohe[2], ohe[3])
            new_adj = tuple(dict(d) for d in adj) + ({},)
            new_adj[owner][owner_edge] = (new_node, ne)
            new_adj[new_node][ne] = (owner, owner_edge)
            queue.append((nodes + (nf,), new_adj, tuple(new_entries)))

    index: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for di, word in enumerate(words):
        n = len(word)
        for off in range(n):
            rot = word[off:] + word[:off]
            index.setdefault(rot, []).append((di, off))
    return DiskCatalog(sys, table, bounds, faces, disks, index)


class DiskCatalog:
    """Complete-within-bounds disk index; immutable once built."""

    def __init__(self, sys, table, bounds, faces, disks, index):
        self.sys: ArcSystem = sys
        self.table: AngleTable = table
        self.bounds: Bounds = bounds
        self.faces = faces
        self.disks: list[ImmersedDisk] = disks
        self.index = index
        self.min_corners = (
            faces.min_size if faces.min_size and faces.min_size <= bounds.max_corners
            else bounds.max_corners + 1
        )

    def check_word(self, word) -> None:
        if len(word) > self.bounds.max_corners:
            raise CatalogBoundsError(
                f"word of {len(word)} corners exceeds max_corners="
                f"{self.bounds.max_corners}; rebuild with wider bounds"
            )
        steps = self.table.steps
        for aid in word:
            if steps[aid] > self.bounds.max_steps:
                raise CatalogBoundsError(
                    f"corner with {steps[aid]} steps exceeds max_steps="
                    f"{self.bounds.max_steps}; rebuild with wider bounds"
                )

    def count(self, word) -> int:
        self.check_word(word)
        hits = self.index.get(word)
        return len(hits) if hits else 0

    def witnesses(self, word):
        self.check_word(word)
        return [(self.disks[di], off) for di, off in self.index.get(word, ())]

    def dump_lines(self) -> list[str]:
        lines = []
        for disk in self.disks:
            profile = ",".join(str(s) for s in disk.step_profile(self.table))
            word = " ".join(
                f"{self.table.he_names[self.table.start[aid]]}:{self.table.steps[aid]}"
                for aid in disk.boundary_word
            )
            lines.append(f"faces={len(disk.face_nodes)} profile=({profile}) boundary=[{word}]")
        return sorted(lines)


def find_disk(cat: DiskCatalog, seq) -> list[tuple[ImmersedDisk, int]]:
    """All catalog disks whose boundary, read from some offset, equals ``seq``."""
    word = cat.table.intern_seq(seq)
    for aid in word:
        if cat.table.is_id[aid]:
            raise CatalogBoundsError("disk sequences consist of turns, not identities")
    return cat.witnesses(word)


class WordMatcher:
    """Anchored boundary-word parser: counts the gluing trees realizing a word.

    Conclusive for any single word, with no corner/step bounds; used where a
    complete catalog would be astronomically large.  Counting convention
    matches the catalog index: labeled gluing trees admit no nontrivial
    automorphisms, so parses biject with (disk, offset) witnesses.
    """

    def __init__(self, sys: ArcSystem, table: AngleTable | None = None):
        self.table = table if table is not None else AngleTable(sys)
        self.faces = _FaceData(sys, self.table)
        self.min_corners = self.faces.min_size or 1
        self._cache: dict[tuple[int, ...], int] = {}

    def check_word(self, word) -> None:  # oracle protocol; never out of bounds
        return None

    def count(self, word) -> int:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        res = self._count(word)
        if len(self._cache) > 400_000:
            self._cache.clear()
        self._cache[word] = res
        return res

    def _count(self, word) -> int:
        table = self.table
        faces = self.faces
        n = len(word)
        if n < 3:
            return 0
        steps = []
        starts = []
        for aid in word:
            if table.is_id[aid]:
                return 0
            steps.append(table.steps[aid])
            starts.append(table.start[aid])
        partner = table.he_partner
        rotate = table.rotate_he
        ends = [table.end[aid] for aid in word]
        for i in range(n):
            if starts[(i + 1) % n] != partner[ends[i]]:
                return 0
        f0, e0 = faces.face_of_slot[ends[n - 1]]
        accept = (n - 1, steps[n - 1])
        memo: dict[tuple[int, int, int, int], dict[tuple[int, int], int]] = {}

        def walk(f, e_in, i0, t0):
            key = (f, e_in, i0, t0)
            hit = memo.get(key)
            if hit is not None:
                return hit
            size = faces.sizes[f]
            corners = faces.corners[f]
            states = {(i0, t0): 1}
            for idx in range(1, size + 1):
                c = corners[(e_in + idx) % size]
                nstates: dict[tuple[int, int], int] = {}
                for (i, t), cnt in states.items():
                    if i >= n or t >= steps[i]:
                        continue
                    if rotate(starts[i], t) != c:
                        continue
                    k2 = (i, t + 1)
                    nstates[k2] = nstates.get(k2, 0) + cnt
                states = nstates
                if not states:
                    break
                if idx == size:
                    break
                e2 = (e_in + idx) % size
                g = faces.slots[f][e2]
                nstates = {}
                for (i, t), cnt in states.items():
                    if t == steps[i]:
                        if i + 1 <= n - 1:
                            k2 = (i + 1, 0)
                            nstates[k2] = nstates.get(k2, 0) + cnt
                    else:
                        gf, ge = faces.face_of_slot[partner[g]]
                        for (j, u), c2 in walk(gf, ge, i, t).items():
                            k2 = (j, u)
                            nstates[k2] = nstates.get(k2, 0) + cnt * c2
                states = nstates
                if not states:
                    break
            memo[key] = states
            return states

        return walk(f0, e0, 0, 0).get(accept, 0)


def mu2_ids(table: AngleTable, x: int, y: int) -> dict[int, int]:
    """mu^2 on basis elements, word order (a_1, a_2) = (y-first): returns
    coefficients of mu^2(a_2, a_1) = (-1)^{|a_1|} a_2.a_1 for (x, y)=(a_1, a_2)."""
    c = table.compose_ids(y, x)
    if c < 0:
        return {}
    return {c: -1 if table.deg[x] else 1}


def mu_eval(table: AngleTable, oracle, word) -> dict[int, int]:
    """Higher product on a tuple of basis angle ids (first argument leftmost).

    Arity 1 is zero; arity 2 is the signed concatenation; arity >= 3 sums,
    per witnessed disk, the leftover of the last argument and the signed
    leftover of the first argument.  Witnessing disks never wrap a full
    turn around any puncture: every corner stays below the valence there.
    """
    k = len(word)
    if k <= 1:
        return {}
    if k == 2:
        return mu2_ids(table, word[0], word[1])
    if k < oracle.min_corners:
        return {}
    is_id = table.is_id
    for aid in word:
        if is_id[aid]:
            return {}
    starts = table.start
    ends = table.end
    partner = table.he_partner
    for i in range(k - 1):
        if starts[word[i + 1]] != partner[ends[word[i]]]:
            return {}
    steps = table.steps
    rotate = table.rotate_he
    out: dict[int, int] = {}

    # last argument splits as (leftover . kept); the kept part closes the disk
    a_k = word[-1]
    target_he = partner[starts[word[0]]]
    s0 = starts[a_k]
    if table.he_punc[s0] == table.he_punc[target_he]:
        val = table.valences[table.he_punc[s0]]
        pos = (table._he_pos[target_he] - table._he_pos[s0]) % val
        if pos == 0:
            pos = val
        while pos <= steps[a_k]:
            trimmed = table.turn_id(s0, pos)
            cnt = oracle.count(word[:-1] + (trimmed,))
            if cnt:
                if pos == steps[a_k]:
                    left = table.id_of_arc(table.tgt[a_k])
                else:
                    left = table.turn_id(rotate(s0, pos), steps[a_k] - pos)
                out[left] = out.get(left, 0) + cnt
            pos += val

    # first argument splits as (kept . gamma); gamma comes out with a sign
    a_1 = word[0]
    target_he = partner[ends[word[-1]]]
    s1 = starts[a_1]
    if table.he_punc[s1] == table.he_punc[target_he]:
        val = table.valences[table.he_punc[s1]]
        t = (table._he_pos[target_he] - table._he_pos[s1]) % val
        if t == 0:
            t = val
        while t < steps[a_1]:
            kept = table.turn_id(rotate(s1, t), steps[a_1] - t)
            cnt = oracle.count((kept,) + word[1:])
            if cnt:
                gamma = table.turn_id(s1, t)
                sign = -1 if t % 2 else 1
                out[gamma] = out.get(gamma, 0) + sign * cnt
            t += val

    if out:
        out = {a: c for a, c in out.items() if c}
    return out


def a_infinity_defect_ids(table: AngleTable, oracle, word) -> dict[int, int]:
    """Signed sum over all ways of nesting one product inside another."""
    k = len(word)
    out: dict[int, int] = {}
    rdeg = [(table.deg[a] + 1) % 2 for a in word]
    presum = [0]
    for r in rdeg:
        presum.append(presum[-1] + r)
    for i in range(k):
        for j in range(i + 1, k + 1):
            inner = mu_eval(table, oracle, word[i:j])
            if not inner:
                continue
            sign = -1 if presum[i] % 2 else 1
            prefix = word[:i]
            suffix = word[j:]
            for t, c in inner.items():
                outer = mu_eval(table, oracle, prefix + (t,) + suffix)
                for u, c2 in outer.items():
                    s = out.get(u, 0) + sign * c * c2
                    if s:
                        out[u] = s
                    else:
                        del out[u]
    return out


def a_infinity_defect(cat: DiskCatalog, seq):
    """Morphism-level wrapper over :func:`a_infinity_defect_ids`."""
    word = cat.table.intern_seq(seq)
    return cat.table.morphism(
        {a: c for a, c in a_infinity_defect_ids(cat.table, cat, word).items()}
    )


def mu_k(cat: DiskCatalog, seq):
    """Morphism-level higher product on basis angles."""
    word = cat.table.intern_seq(seq)
    return cat.table.morphism(dict(mu_eval(cat.table, cat, word)))


def bruteforce_disk_keys(sys: ArcSystem, bounds: Bounds, table=None):
    """Independent enumerator: depth-first over all gluing orders, states
    deduplicated by (face multiset, canonical boundary rotation)."""
    if table is None:
        table = AngleTable(sys)
    faces = _FaceData(sys, table)
    rotate = table.rotate_he
    partner = table.he_partner

    def canon(entries):
        word = tuple((st, sp) for st, sp in entries)
        n = len(word)
        return min(word[o:] + word[:o] for o in range(n))

    found: set = set()
    seen_states: set = set()

    def visit(face_multiset, entries):
        key = (tuple(sorted(face_multiset)), canon(entries))
        if key in seen_states:
            return
        seen_states.add(key)
        found.add(key)
        if len(face_multiset) >= bounds.max_faces:
            return
        k = len(entries)
        for pos in range(k):
            st, sp = entries[pos]
            slot = rotate(st, sp)
            nf, ne = faces.face_of_slot[partner[slot]]
            size = faces.sizes[nf]
            if k + size - 2 > bounds.max_corners:
                continue
            st2, sp2 = entries[(pos + 1) % k]
            if sp + 1 > bounds.max_steps or 1 + sp2 > bounds.max_steps:
                continue
            new_entries = list(entries)
            inserted = [(st, sp + 1)]
            for t in range(2, size):
                inserted.append((faces.corners[nf][(ne + t) % size], 1))
            new_entries[pos] = inserted[0]
            new_entries[pos + 1 : pos + 1] = inserted[1:]
            hi = (pos + size - 1) % (k + size - 2)
            new_entries[hi] = (faces.corners[nf][ne], 1 + new_entries[hi][1])
            visit(face_multiset + [nf], tuple(new_entries))

    for fi in range(len(faces.sizes)):
        if faces.sizes[fi] > bounds.max_corners:
            continue
        entries = tuple((c, 1) for c in faces.corners[fi])
        visit([fi], entries)
    return found


def catalog_keys(cat: DiskCatalog):
    """Project the catalog onto the oracle's key space for comparison."""
    keys = []
    for disk in cat.disks:
        word = tuple(
            (cat.table.start[aid], cat.table.steps[aid]) for aid in disk.boundary_word
        )
        n = len(word)
        keys.append(
            (
                tuple(sorted(disk.face_nodes)),
                min(word[o:] + word[:o] for o in range(n)),
            )
        )
    return keys
