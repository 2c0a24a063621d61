"""Geometric computation of the contribution ``w(T)`` of a single tree.

The region of ``T`` is embedded in a Catalan arrangement large enough to make it
relatively bounded, mapped onto ``y_1 < ... < y_n < y_1 + 1``, and its
supporting hyperplanes become circular intervals of ``[n]``.  ``w(T)`` then
follows from the interval family alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import (
    GeometryError,
    Point,
    RegionKey,
    catalan,
    closure_zone,
    diff,
    enumerate_closure_faces,
    face_key_of_point,
    face_to_marked_tree,
    region_key_of_point,
    region_to_tree,
    tree_witness,
)
from .spec_model import Hyperplane, OffsetSpec, max_offset
from .trees import PlaneTree, TreeError, is_s_cadet_sequence, marking_to_boxing

Interval = frozenset[int]

# w(J) switches from subset enumeration to the transfer-matrix count above this size
DIRECT_LIMIT = 20


class ContribError(RuntimeError):
    pass


@dataclass(frozen=True)
class BoundedRegion:
    m: int
    tree: PlaneTree
    witness: Point
    key: RegionKey


@dataclass(frozen=True)
class SupportClassification:
    face_supporting: frozenset[Hyperplane]
    facet_supporting: frozenset[Hyperplane]
    nsep: frozenset[Hyperplane]
    in_arrangement: frozenset[Hyperplane]

    @property
    def h_s(self) -> frozenset[Hyperplane]:
        return self.nsep | self.in_arrangement


@dataclass(frozen=True)
class YTransform:
    sigma: tuple[int, ...]
    """``sigma[i - 1]`` is the original coordinate that becomes ``y_i``."""
    floors: tuple[int, ...]
    base_point: Point

    @property
    def n(self) -> int:
        return len(self.sigma)

    def inverse(self, v: int) -> int:
        return self.sigma.index(v) + 1

    def apply(self, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(x[v - 1] - self.floors[v - 1] for v in self.sigma)

    def transform(self, h: Hyperplane) -> tuple[int, int, int]:
        """``x_a - x_b = s`` rewritten as ``y_i - y_j = t`` with ``t >= 0`` (and ``i < j`` when ``t = 0``)."""
        i, j = self.inverse(h.a), self.inverse(h.b)
        t = h.s - self.floors[h.a - 1] + self.floors[h.b - 1]
        if t < 0 or (t == 0 and i > j):
            i, j, t = j, i, -t
        return i, j, t


@dataclass(frozen=True)
class TreeContribution:
    tree: PlaneTree
    bounded: BoundedRegion
    supports: SupportClassification
    transform: YTransform
    intervals: frozenset[Interval]
    minimal: frozenset[Interval]
    components: tuple[Interval, ...]
    uncovered: frozenset[int]
    by_product: int
    by_subsets: int


def alcove_point(n: int) -> Point:
    """A point of ``x_1 > x_2 > ... > x_n > x_1 - 1``."""
    return tuple(Fraction(-i, n + 1) for i in range(1, n + 1))


def bounded_embedding(spec: OffsetSpec, tree: PlaneTree) -> BoundedRegion:
    """Pad ``tree`` with right leaves until its Catalan region is relatively bounded."""
    m = max_offset(spec)
    if tree.m < m:
        raise TreeError(f"tree arity {tree.arity} too small for offsets up to {m}")
    m = tree.m
    x = tree_witness(tree)
    spread = max(x) - min(x)
    m_big = max(m, math.ceil(spread) + 1)
    padded = tree.padded(m_big + 1)
    if region_to_tree(m_big, x) != padded:
        raise ContribError(f"witness of {tree} does not label the padded tree")
    key = region_key_of_point(catalan(tree.n, m_big), x)
    if any(c == 0 or c == 2 * m_big + 1 for c in key.cells):
        raise ContribError(f"region of {padded} is not relatively bounded")
    return BoundedRegion(m_big, padded, x, key)


def _face_dim(zone, n: int) -> int:
    parent = list(range(n + 1))

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for a, b in itertools.combinations(range(1, n + 1), 2):
        if zone.is_fixed(a, b):
            parent[find(a)] = find(b)
    return sum(1 for v in range(1, n + 1) if find(v) == v)


def support_face_dim(region: BoundedRegion, h: Hyperplane) -> int | None:
    """Dimension of ``h`` meeting the region's closure, or ``None`` if they are disjoint."""
    n = region.tree.n
    zone = closure_zone(catalan(n, region.m), region.key)
    if not zone.add_equal(h.a, h.b, h.s):
        return None
    return _face_dim(zone, n)


def is_nsep(h: Hyperplane, x: Point) -> bool:
    """Whether the region through ``x`` lies on the fundamental-alcove side of ``h``."""
    d = diff(x, h.a, h.b)
    if h.s > 0:
        return d < h.s
    if h.s == 0:
        return d > 0
    return d > h.s


def classify_supports(spec: OffsetSpec, tree: PlaneTree, region: BoundedRegion | None = None) -> SupportClassification:
    if region is None:
        region = bounded_embedding(spec, tree)
    n = tree.n
    offsets = catalan(n, region.m).offsets
    face, facet, nsep, in_arr = set(), set(), set(), set()
    for idx, (a, b) in enumerate(catalan(n, region.m).pairs):
        c = region.key.cells[idx]
        offs = offsets[idx]
        # only the two walls of the pair's cell can meet the closure
        for s in (offs[c - 1] if c > 0 else None, offs[c] if c < len(offs) else None):
            if s is None:
                continue
            h = Hyperplane(a, b, s)
            dim = support_face_dim(region, h)
            if dim is None:
                continue
            face.add(h)
            if dim == n - 1:
                facet.add(h)
            if is_nsep(h, region.witness):
                nsep.add(h)
            if spec.contains(h):
                in_arr.add(h)
    return SupportClassification(frozenset(face), frozenset(facet), frozenset(nsep), frozenset(in_arr))


def y_transform(witness: Sequence, budget: int | None = None) -> YTransform:
    """Sort coordinates by fractional part; perturbs deterministically if parts collide."""
    base = tuple(Fraction(v) for v in witness)
    n = len(base)
    budget = n if budget is None else budget
    x = base
    for k in range(budget + 1):
        floors = tuple(math.floor(v) for v in x)
        fracs = [v - f for v, f in zip(x, floors)]
        if len(set(fracs)) == n:
            sigma = tuple(sorted(range(1, n + 1), key=lambda v: fracs[v - 1]))
            return YTransform(sigma, floors, x)
        t = Fraction(1, 2 ** (k + 1) * (n + 1) ** 2)
        x = tuple(v + t * i for i, v in enumerate(base, start=1))
    raise ContribError(f"fractional parts of {tuple(witness)} stay tied")


def interval_tuple(n: int, hyperplane_y: tuple[int, int, int]) -> Interval:
    """Circular interval of ``y_i - y_j = t`` (normalized, ``t`` in ``{0, 1}``)."""
    i, j, t = hyperplane_y
    if t == 0 and i < j:
        return frozenset(range(i, j))
    if t == 1 and i > j:
        return frozenset(range(1, n + 1)) - frozenset(range(j, i))
    raise ContribError(f"y_{i} - y_{j} = {t} cannot support a face of the alcove")


def tau(witness: Sequence[Fraction], transform: YTransform) -> frozenset[int]:
    """Indices of the alcove walls ``y_i = y_{i+1}`` / ``y_n = y_1 + 1`` through a face."""
    y = transform.apply(witness)
    n = len(y)
    out = {i for i in range(1, n) if y[i - 1] == y[i]}
    if y[n - 1] == y[0] + 1:
        out.add(n)
    return frozenset(out)


def minimal_intervals(intervals: Iterable[Interval]) -> frozenset[Interval]:
    items = set(intervals)
    return frozenset(I for I in items if not any(J < I for J in items))


def p_t_set(n: int, minimal: Iterable[Interval]) -> list[frozenset[int]]:
    """Proper subsets of ``[n]`` containing none of the given intervals."""
    minimal = list(minimal)
    full = range(1, n + 1)
    out = []
    for r in range(n):
        for combo in itertools.combinations(full, r):
            d = frozenset(combo)
            if not any(I <= d for I in minimal):
                out.append(d)
    return out


def circular_components(n: int, intervals: Iterable[Interval]) -> tuple[tuple[Interval, ...], frozenset[int]]:
    """Connected pieces of the union of intervals on the cycle ``1..n``, and the uncovered rest."""
    intervals = list(intervals)
    covered = set().union(*intervals) if intervals else set()
    adj = {v: set() for v in covered}
    for v in covered:
        w = v % n + 1
        if w != v and any(v in I and w in I for I in intervals):
            adj[v].add(w)
            adj[w].add(v)
    seen, comps = set(), []
    for v in sorted(covered):
        if v in seen:
            continue
        comp, stack = set(), [v]
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(adj[u] - comp)
        seen |= comp
        comps.append(frozenset(comp))
    return tuple(comps), frozenset(range(1, n + 1)) - covered


def _circular_order(J: Interval, n: int) -> list[int]:
    """Elements of a circular interval from its first to last element."""
    if len(J) == n:
        return list(range(1, n + 1))
    start = next(v for v in J if (v - 2) % n + 1 not in J)
    return [(start - 1 + k) % n + 1 for k in range(len(J))]


def w_interval_family(J: Iterable[int], members: Iterable[Interval], n: int | None = None) -> int:
    """``sum (-1)^|D|`` over ``D`` in ``J`` containing no member interval."""
    J = frozenset(J)
    members = [frozenset(I) for I in members]
    if not members or frozenset().union(*members) != J:
        raise ContribError("member intervals must cover J")
    if any(a < b for a in members for b in members):
        raise ContribError("member intervals must be minimal")
    if len(J) <= DIRECT_LIMIT:
        elems = sorted(J)
        total = 0
        for r in range(len(elems) + 1):
            sign = -1 if r % 2 else 1
            for combo in itertools.combinations(elems, r):
                d = frozenset(combo)
                if not any(I <= d for I in members):
                    total += sign
        return total
    return _w_interval_dp(J, members, n if n is not None else max(J))


def _w_interval_dp(J: Interval, members: list[Interval], n: int) -> int:
    """Left-to-right sweep tracking the length of the current run of chosen elements."""
    order = _circular_order(J, n)
    pos = {v: i for i, v in enumerate(order)}
    # a member is contained in D iff D covers its whole (contiguous) span
    ends: dict[int, int] = {}
    for I in members:
        idx = sorted(pos[v] for v in I)
        start, end = idx[0], idx[-1]
        ends[end] = min(ends.get(end, len(order)), end - start + 1)
    state = {0: 1}  # run length -> signed count
    for i in range(len(order)):
        nxt: dict[int, int] = {}
        for run, val in state.items():
            nxt[0] = nxt.get(0, 0) + val
            new_run = run + 1
            if i in ends and new_run >= ends[i]:
                continue
            nxt[new_run] = nxt.get(new_run, 0) - val
        state = nxt
    return sum(state.values())


def tree_contribution_details(spec: OffsetSpec, tree: PlaneTree) -> TreeContribution:
    region = bounded_embedding(spec, tree)
    supports = classify_supports(spec, tree, region)
    transform = y_transform(region.witness)
    n = tree.n
    intervals = frozenset(interval_tuple(n, transform.transform(h)) for h in supports.h_s)
    minimal = minimal_intervals(intervals)
    by_subsets = sum(-1 if len(d) % 2 else 1 for d in p_t_set(n, minimal))
    comps, uncovered = circular_components(n, minimal)
    if n == 1:
        # no pairs at all: the only face is the whole line
        by_product = 1
    else:
        if not any(len(I) == 1 for I in minimal):
            raise ContribError(f"no facet-supporting interval for {tree}")
        if uncovered:
            by_product = 0
        else:
            if len(comps) < 2:
                raise ContribError(f"expected at least two circular components for {tree}")
            by_product = 1
            for J in comps:
                by_product *= w_interval_family(J, [I for I in minimal if I <= J], n)
    if by_product != by_subsets:
        raise ContribError(f"product formula {by_product} disagrees with subset sum {by_subsets} for {tree}")
    return TreeContribution(tree, region, supports, transform, intervals, minimal,
                            comps, uncovered, by_product, by_subsets)


def tree_contribution_geometric(spec: OffsetSpec, tree: PlaneTree) -> int:
    return tree_contribution_details(spec, tree).by_product


def tree_faces(spec: OffsetSpec, region: BoundedRegion) -> list[tuple[Point, int, bool, bool]]:
    """Faces of the closure of the embedded region: ``(witness, dim, has_tree, in_F_T)``.

    ``has_tree`` marks faces whose marked tree is built on the region's own tree;
    ``in_F_T`` further requires the induced boxing to be an S-boxing.
    """
    out = []
    cat = catalan(region.tree.n, region.m)
    for key, dim, x in enumerate_closure_faces(cat, region.key):
        marked = face_to_marked_tree(region.m, key, x)
        own = marked.tree == region.tree
        in_ft = own and all(is_s_cadet_sequence(spec, marked.tree, box)
                            for box in marking_to_boxing(marked).boxes)
        out.append((x, dim, own, in_ft))
    return out


def format_interval(I: Interval) -> str:
    return "{" + ",".join(str(v) for v in sorted(I)) + "}"


def format_family(family: Iterable[Interval]) -> str:
    return "[" + " ".join(format_interval(I) for I in sorted(family, key=lambda s: (min(s), len(s)))) + "]"
