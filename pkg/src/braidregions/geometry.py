"""Exact regions and faces of integer braid deformations, and their trees.

A face is identified by one *position* per pair ``a < b``.  With the pair's
sorted offsets ``o_0 < ... < o_{k-1}``, position ``2i`` is the open cell
between ``o_{i-1}`` and ``o_i`` and position ``2i + 1`` is the equality
``x_a - x_b = o_i``.  Regions use only even positions and are keyed by the
cell index ``i``.
"""

from __future__ import annotations

import bisect
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .diffsys import Constraint, DiffSystem, Zone, diff_feasible
from .spec_model import OffsetSpec, all_pairs, max_offset, preset
from .trees import MarkedTree, PlaneTree, TreeError, count_trees

Point = tuple[Fraction, ...]


class GeometryError(RuntimeError):
    pass


@dataclass(frozen=True)
class RegionKey:
    n: int
    cells: tuple[int, ...]

    def to_json(self) -> dict:
        return {f"{a},{b}": c for (a, b), c in zip(all_pairs(self.n), self.cells)}

    def describe(self, spec: OffsetSpec) -> str:
        parts = []
        for (a, b), c, offs in zip(all_pairs(self.n), self.cells, spec.offsets):
            if not offs:
                continue
            lo = str(offs[c - 1]) if c > 0 else "-inf"
            hi = str(offs[c]) if c < len(offs) else "inf"
            parts.append(f"x{a}-x{b} in ({lo},{hi})")
        return "; ".join(parts) or "R^n"


@dataclass(frozen=True)
class FaceKey:
    n: int
    positions: tuple[int, ...]

    def is_region(self) -> bool:
        return all(p % 2 == 0 for p in self.positions)

    def region_key(self) -> RegionKey:
        if not self.is_region():
            raise GeometryError("face is not full-dimensional")
        return RegionKey(self.n, tuple(p // 2 for p in self.positions))

    @classmethod
    def of_region(cls, key: RegionKey) -> "FaceKey":
        return cls(key.n, tuple(2 * c for c in key.cells))

    def equalities(self, spec: OffsetSpec) -> list[tuple[int, int, int]]:
        return [(a, b, offs[p // 2])
                for (a, b), p, offs in zip(all_pairs(self.n), self.positions, spec.offsets) if p % 2]

    def dim(self, spec: OffsetSpec) -> int:
        return _components(self.n, [(a, b) for a, b, _ in self.equalities(spec)])

    def to_json(self, spec: OffsetSpec) -> dict:
        out = {}
        for (a, b), p, offs in zip(all_pairs(self.n), self.positions, spec.offsets):
            out[f"{a},{b}"] = f"={offs[p // 2]}" if p % 2 else p // 2
        return out


def _components(n: int, edges: Sequence[tuple[int, int]]) -> int:
    parent = list(range(n + 1))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    count = n
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            count -= 1
    return count


def _impose(zone: Zone, a: int, b: int, offs: Sequence[int], pos: int) -> bool:
    if pos % 2:
        return zone.add_equal(a, b, offs[pos // 2])
    i = pos // 2
    if i > 0 and not zone.add_greater(a, b, offs[i - 1]):
        return False
    return i >= len(offs) or zone.add_less(a, b, offs[i])


def face_system(spec: OffsetSpec, key: FaceKey) -> DiffSystem:
    system = DiffSystem(spec.n)
    for (a, b), p, offs in zip(spec.pairs, key.positions, spec.offsets):
        if p % 2:
            system.equal(a, b, offs[p // 2])
            continue
        i = p // 2
        if i > 0:
            system.less(b, a, -offs[i - 1])
        if i < len(offs):
            system.less(a, b, offs[i])
    return system


def closure_system(spec: OffsetSpec, key: RegionKey) -> list[tuple[int, int, int, str]]:
    """Non-strict bounds ``(a, b, bound, '<=' | '>=')`` describing the closure of a region."""
    out = []
    for (a, b), c, offs in zip(spec.pairs, key.cells, spec.offsets):
        if c > 0:
            out.append((a, b, offs[c - 1], ">="))
        if c < len(offs):
            out.append((a, b, offs[c], "<="))
    return out


def closure_zone(spec: OffsetSpec, key: RegionKey) -> Zone:
    zone = Zone(spec.n)
    for a, b, bound, kind in closure_system(spec, key):
        ok = zone.add_le(a, b, bound) if kind == "<=" else zone.add_ge(a, b, bound)
        if not ok:
            raise GeometryError("region closure is empty")
    return zone


def diff(x: Point, a: int, b: int) -> Fraction:
    return x[a - 1] - x[b - 1]


def face_key_of_point(spec: OffsetSpec, x: Point) -> FaceKey:
    positions = []
    for (a, b), offs in zip(spec.pairs, spec.offsets):
        d = diff(x, a, b)
        i = bisect.bisect_left(offs, d)
        positions.append(2 * i + 1 if i < len(offs) and offs[i] == d else 2 * i)
    return FaceKey(spec.n, tuple(positions))


def region_key_of_point(spec: OffsetSpec, x: Point) -> RegionKey:
    key = face_key_of_point(spec, x)
    if not key.is_region():
        raise GeometryError(f"point {x} lies on a hyperplane")
    return key.region_key()


def _dfs_pairs(n: int) -> list[int]:
    """Pair indices ordered by (b - a, a)."""
    pairs = all_pairs(n)
    return sorted(range(len(pairs)), key=lambda i: (pairs[i][1] - pairs[i][0], pairs[i][0]))


def _candidates(zone: Zone, a: int, b: int, offs: Sequence[int], faces: bool) -> list[int]:
    lo, hi = zone.difference_range(a, b)
    out = []
    for p in range(2 * len(offs) + 1):
        if p % 2:
            if not faces or not lo <= offs[p // 2] <= hi:
                continue
        else:
            i = p // 2
            if i > 0 and offs[i - 1] > hi:
                continue
            if i < len(offs) and offs[i] < lo:
                continue
        out.append(p)
    return out


def _enumerate(spec: OffsetSpec, faces: bool) -> Iterator[tuple[tuple[int, ...], Zone]]:
    n = spec.n
    pairs = spec.pairs
    order = _dfs_pairs(n)
    positions = [0] * len(pairs)

    def rec(depth: int, zone: Zone):
        if depth == len(order):
            yield tuple(positions), zone
            return
        idx = order[depth]
        a, b = pairs[idx]
        offs = spec.offsets[idx]
        for p in _candidates(zone, a, b, offs, faces):
            child = zone.copy()
            if _impose(child, a, b, offs, p):
                positions[idx] = p
                yield from rec(depth + 1, child)

    yield from rec(0, Zone(n))


def enumerate_regions(spec: OffsetSpec) -> Iterator[tuple[RegionKey, Point]]:
    for positions, zone in _enumerate(spec, faces=False):
        yield RegionKey(spec.n, tuple(p // 2 for p in positions)), zone.witness()


def enumerate_faces(spec: OffsetSpec) -> Iterator[tuple[FaceKey, int, Point]]:
    for positions, zone in _enumerate(spec, faces=True):
        key = FaceKey(spec.n, positions)
        yield key, key.dim(spec), zone.witness()


def enumerate_closure_faces(spec: OffsetSpec, region: RegionKey) -> Iterator[tuple[FaceKey, int, Point]]:
    """Faces of the arrangement contained in the closure of ``region``."""
    base = closure_zone(spec, region)
    pairs = spec.pairs
    positions = [0] * len(pairs)
    order = _dfs_pairs(spec.n)

    def rec(depth: int, zone: Zone):
        if depth == len(order):
            yield FaceKey(spec.n, tuple(positions)), zone
            return
        idx = order[depth]
        a, b = pairs[idx]
        c = region.cells[idx]
        offs = spec.offsets[idx]
        choices = [2 * c]
        if c > 0:
            choices.append(2 * c - 1)
        if c < len(offs):
            choices.append(2 * c + 1)
        for p in choices:
            child = zone.copy()
            if _impose(child, a, b, offs, p):
                positions[idx] = p
                yield from rec(depth + 1, child)

    for key, zone in rec(0, base):
        yield key, key.dim(spec), zone.witness()


def check_witness(spec: OffsetSpec, key: FaceKey, x: Point) -> bool:
    return face_key_of_point(spec, x) == key


def catalan(n: int, m: int) -> OffsetSpec:
    return preset("catalan", n, m=m)


def _catalan_m(spec_catalan: OffsetSpec | int) -> int:
    if isinstance(spec_catalan, int):
        return spec_catalan
    m = max_offset(spec_catalan)
    if spec_catalan != catalan(spec_catalan.n, m):
        raise GeometryError("expected the full m-Catalan specification")
    return m


def is_generic(x: Point, m: int) -> bool:
    """All marker values ``x_j + s`` (``0 <= s <= m``) pairwise distinct."""
    markers = [xj + s for xj in x for s in range(m + 1)]
    return len(set(markers)) == len(markers)


def _perturbed(x: Point, k: int) -> Point:
    t = Fraction(1, 2 ** (k + 4) * (len(x) + 1))
    return tuple(xi + t * (i + 1) for i, xi in enumerate(x))


def _tree_of_generic_point(x: Point, m: int) -> PlaneTree:
    n = len(x)
    order = sorted(range(1, n + 1), key=lambda v: x[v - 1])
    children: list[list[int | None]] = [[None] * (m + 1) for _ in range(n)]
    placed: list[int] = []
    for k in order:
        if placed:
            xk = x[k - 1]
            best = max(((x[j - 1] + s, j, s) for j in placed for s in range(m + 1)
                        if x[j - 1] + s < xk))
            _, j, s = best
            children[j - 1][s] = k
        placed.append(k)
    return PlaneTree(n, m + 1, order[0], tuple(tuple(c) for c in children))


def region_to_tree(spec_catalan: OffsetSpec | int, witness: Sequence) -> PlaneTree:
    """The tree of the m-Catalan region containing a generic ``witness``.

    The root is the smallest coordinate; every other node sits in slot ``s`` of the
    node ``j`` whose marker ``x_j + s`` is the largest marker below it.
    """
    m = _catalan_m(spec_catalan)
    x = tuple(Fraction(v) for v in witness)
    for k in range(len(x) + 1):
        if is_generic(x, m):
            return _tree_of_generic_point(x, m)
        x = _perturbed(tuple(Fraction(v) for v in witness), k)
    raise GeometryError(f"witness {tuple(witness)} is not generic")


def tree_witness(tree: PlaneTree) -> Point:
    """A point of the m-Catalan region labeled by ``tree`` (for any m >= tree.m).

    Node ``k`` is placed at ``level(k) + rank(k) / n`` where ``level`` sums slot
    indices along the root path and ``rank`` comes from inserting each node right
    after its parent, level by level.
    """
    n = tree.n
    level = {tree.root: 0}
    depth = {tree.root: 0}
    stack = [tree.root]
    while stack:
        v = stack.pop()
        for s, c in enumerate(tree.children[v - 1]):
            if c is not None:
                level[c] = level[v] + s
                depth[c] = depth[v] + 1
                stack.append(c)
    seq = [tree.root]
    for v in sorted(level, key=lambda u: (level[u], depth[u])):
        if v == tree.root:
            continue
        seq.insert(seq.index(tree.parent(v)) + 1, v)
    rank = {v: r for r, v in enumerate(seq)}
    return tuple(Fraction(level[v]) + Fraction(rank[v], n) for v in range(1, n + 1))


def tree_region(tree: PlaneTree) -> RegionKey:
    """The m-Catalan region (``m = tree.m``) labeled by ``tree``."""
    return region_key_of_point(catalan(tree.n, tree.m), tree_witness(tree))


def face_to_marked_tree(spec_catalan: OffsetSpec | int, face: FaceKey | None, witness: Sequence) -> MarkedTree:
    """Marked tree of the m-Catalan face whose relative interior holds ``witness``.

    Nodes are placed in (coordinate, label) order; each attaches below the largest
    marker ``x_j + s <= x_k`` of an already placed node, preferring smaller ``s`` and
    then larger ``j`` on ties.  The edge is marked when the marker equals ``x_k``.
    """
    m = _catalan_m(spec_catalan)
    x = tuple(Fraction(v) for v in witness)
    n = len(x)
    if face is not None and face.n != n:
        raise GeometryError("face and witness disagree on n")
    order = sorted(range(1, n + 1), key=lambda v: (x[v - 1], v))
    children: list[list[int | None]] = [[None] * (m + 1) for _ in range(n)]
    placed: list[int] = []
    marked = set()
    for k in order:
        if placed:
            xk = x[k - 1]
            value, neg_s, j = max((x[j - 1] + s, -s, j) for j in placed for s in range(m + 1)
                                  if x[j - 1] + s <= xk)
            s = -neg_s
            if children[j - 1][s] is not None:
                raise GeometryError(f"slot ({j},{s}) taken twice for point {x}")
            children[j - 1][s] = k
            if value == xk:
                marked.add((j, k))
        placed.append(k)
    tree = PlaneTree(n, m + 1, order[0], tuple(tuple(c) for c in children))
    result = MarkedTree(tree, frozenset(marked))
    if not result.is_valid():
        raise GeometryError(f"marked tree {tree} {sorted(marked)} violates the cadet rules")
    return result


@dataclass(frozen=True)
class CatalanRegion:
    key: RegionKey
    witness: Point
    tree: PlaneTree


@dataclass(frozen=True)
class CatalanFace:
    key: FaceKey
    dim: int
    witness: Point
    marked: MarkedTree


@lru_cache(maxsize=None)
def catalan_regions(n: int, m: int) -> tuple[CatalanRegion, ...]:
    spec = catalan(n, m)
    out = tuple(CatalanRegion(key, x, region_to_tree(m, x)) for key, x in enumerate_regions(spec))
    if len(out) != count_trees(n, m):
        raise GeometryError(f"found {len(out)} regions of the {m}-Catalan arrangement, expected {count_trees(n, m)}")
    return out


@lru_cache(maxsize=None)
def catalan_faces(n: int, m: int) -> tuple[CatalanFace, ...]:
    return tuple(CatalanFace(key, dim, x, face_to_marked_tree(m, key, x))
                 for key, dim, x in enumerate_faces(catalan(n, m)))


def group_regions(spec: OffsetSpec) -> dict[RegionKey, list[PlaneTree]]:
    """Map each region R of the arrangement to its trees ``T_R``."""
    m = max_offset(spec)
    groups: dict[RegionKey, list[PlaneTree]] = defaultdict(list)
    for region in catalan_regions(spec.n, m):
        groups[region_key_of_point(spec, region.witness)].append(region.tree)
    return dict(groups)


def in_face_family(spec: OffsetSpec, x: Point) -> bool:
    """Whether the face through ``x`` avoids every hyperplane of the arrangement."""
    return all(diff(x, a, b) not in offs for (a, b), offs in zip(spec.pairs, spec.offsets) if offs)


def faces_in_region(spec: OffsetSpec, region: RegionKey) -> list[tuple[FaceKey, int]]:
    """Catalan faces inside ``region`` that lie on no hyperplane of the arrangement."""
    m = max_offset(spec)
    target = FaceKey.of_region(region)
    return [(f.key, f.dim) for f in catalan_faces(spec.n, m)
            if in_face_family(spec, f.witness) and face_key_of_point(spec, f.witness) == target]


def euler_sums(spec: OffsetSpec) -> dict[RegionKey, int]:
    """``sum (-1)^(n - dim F)`` over the faces of each region, in one pass over Catalan faces."""
    m = max_offset(spec)
    sums: dict[RegionKey, int] = defaultdict(int)
    for f in catalan_faces(spec.n, m):
        if in_face_family(spec, f.witness):
            sums[region_key_of_point(spec, f.witness)] += -1 if (spec.n - f.dim) % 2 else 1
    return dict(sums)


def euler_contribution(spec: OffsetSpec, region: RegionKey) -> int:
    return sum(-1 if (spec.n - dim) % 2 else 1 for _, dim in faces_in_region(spec, region))


def face_to_ordered_partition(spec: OffsetSpec, face: FaceKey, witness: Point | None = None) -> list[frozenset[int]]:
    """Blocks of equal coordinates, in increasing coordinate order."""
    eqs = face.equalities(spec)
    if any(s != 0 for _, _, s in eqs):
        raise GeometryError("ordered partitions need all equalities at offset 0")
    if witness is None:
        witness = diff_feasible(face_system(spec, face))
        if witness is None:
            raise GeometryError("face is empty")
    blocks: dict[Fraction, set[int]] = defaultdict(set)
    for v in range(1, spec.n + 1):
        blocks[witness[v - 1]].add(v)
    return [frozenset(blocks[val]) for val in sorted(blocks)]
