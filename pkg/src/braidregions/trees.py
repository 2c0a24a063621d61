"""Labeled (m+1)-ary plane trees, cadet sequences, boxings and markings."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from .spec_model import OffsetSpec, max_offset, minus_set

Edge = tuple[int, int]  # (parent, child)


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class PlaneTree:
    """A rooted plane tree on labels ``1..n``; every node has ``arity`` slots.

    ``children[v - 1][s]`` is the label in slot ``s`` of node ``v``, or ``None``
    for a leaf.
    """

    n: int
    arity: int
    root: int
    children: tuple[tuple[int | None, ...], ...]

    def __post_init__(self):
        if len(self.children) != self.n or any(len(c) != self.arity for c in self.children):
            raise TreeError("every node needs exactly `arity` slots")
        seen = [c for slots in self.children for c in slots if c is not None]
        if sorted(seen + [self.root]) != list(range(1, self.n + 1)):
            raise TreeError("labels must be 1..n, each with one parent except the root")
        # reachability from the root rules out cycles among non-root nodes
        stack, reached = [self.root], 0
        while stack:
            v = stack.pop()
            reached += 1
            stack.extend(c for c in self.children[v - 1] if c is not None)
            if reached > self.n:
                break
        if reached != self.n:
            raise TreeError("slots do not form a single rooted tree")

    @property
    def m(self) -> int:
        return self.arity - 1

    def child(self, v: int, s: int) -> int | None:
        return self.children[v - 1][s]

    @cached_property
    def _parent_slot(self) -> dict[int, tuple[int, int]]:
        return {c: (v, s)
                for v in range(1, self.n + 1)
                for s, c in enumerate(self.children[v - 1]) if c is not None}

    def parent(self, v: int) -> int | None:
        ps = self._parent_slot.get(v)
        return ps[0] if ps else None

    def lsib(self, v: int) -> int:
        """Slot index of ``v`` under its parent (0 for the root)."""
        ps = self._parent_slot.get(v)
        return ps[1] if ps else 0

    def parent_slot(self, v: int) -> tuple[int, int] | None:
        return self._parent_slot.get(v)

    def edges(self) -> list[Edge]:
        return sorted((p, c) for c, (p, _) in self._parent_slot.items())

    def cadet_edges(self) -> list[Edge]:
        return [(u, c) for u in range(1, self.n + 1) if (c := cadet(self, u)) is not None]

    def padded(self, arity: int) -> "PlaneTree":
        """The same tree with extra leaf slots appended on the right."""
        if arity < self.arity:
            raise TreeError("cannot shrink arity")
        extra = (None,) * (arity - self.arity)
        return PlaneTree(self.n, arity, self.root, tuple(c + extra for c in self.children))

    def encode(self) -> str:
        def enc(v: int) -> str:
            inner = ",".join("." if c is None else enc(c) for c in self.children[v - 1])
            return f"{v}({inner})"
        return enc(self.root)

    def __str__(self) -> str:
        return self.encode()


def parse_tree(text: str) -> PlaneTree:
    """Inverse of :meth:`PlaneTree.encode`, e.g. ``"2(1(.,.),.)"``."""
    pos = 0
    children: dict[int, list[int | None]] = {}

    def node() -> int:
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos or pos >= len(text) or text[pos] != "(":
            raise TreeError(f"bad tree encoding at offset {start}: {text!r}")
        label = int(text[start:pos])
        pos += 1
        slots: list[int | None] = []
        while True:
            if text[pos] == ".":
                slots.append(None)
                pos += 1
            else:
                slots.append(node())
            if text[pos] == ",":
                pos += 1
            elif text[pos] == ")":
                pos += 1
                break
            else:
                raise TreeError(f"unexpected {text[pos]!r} at offset {pos}")
        if label in children:
            raise TreeError(f"label {label} repeated")
        children[label] = slots
        return label

    try:
        root = node()
    except IndexError:
        raise TreeError(f"truncated tree encoding {text!r}") from None
    if pos != len(text):
        raise TreeError(f"trailing characters in {text!r}")
    n = len(children)
    arities = {len(s) for s in children.values()}
    if len(arities) != 1 or sorted(children) != list(range(1, n + 1)):
        raise TreeError(f"inconsistent tree encoding {text!r}")
    return PlaneTree(n, arities.pop(), root, tuple(tuple(children[v]) for v in range(1, n + 1)))


def count_trees(n: int, m: int) -> int:
    """``n! / (mn + 1) * C((m+1)n, n)``."""
    if n == 0:
        return 0
    return math.factorial(n) * math.comb((m + 1) * n, n) // (m * n + 1)


@lru_cache(maxsize=None)
def _shapes(n: int, arity: int) -> tuple:
    """Unlabeled plane trees with ``n`` nodes, as nested tuples (``None`` = leaf)."""
    if n == 0:
        return (None,)
    out = []
    for sizes in _compositions(n - 1, arity):
        for subs in itertools.product(*(_shapes(k, arity) for k in sizes)):
            out.append(tuple(subs))
    return tuple(out)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _label_shape(shape, labels: Sequence[int], arity: int) -> PlaneTree:
    n = len(labels)
    children: list[list[int | None]] = [[None] * arity for _ in range(n)]
    it = iter(labels)

    def walk(sh) -> int:
        v = next(it)
        for s, sub in enumerate(sh):
            if sub is not None:
                children[v - 1][s] = walk(sub)
        return v

    root = walk(shape)
    return PlaneTree(n, arity, root, tuple(tuple(c) for c in children))


def enumerate_trees(n: int, m: int) -> Iterator[PlaneTree]:
    """All trees of ``T^(m)(n)``: shapes in recursive order, then labels (preorder) lexicographically."""
    if n <= 0:
        return
    arity = m + 1
    for shape in _shapes(n, arity):
        for labels in itertools.permutations(range(1, n + 1)):
            yield _label_shape(shape, labels, arity)


def cadet(tree: PlaneTree, u: int) -> int | None:
    """Rightmost non-leaf child of ``u``."""
    for c in reversed(tree.children[u - 1]):
        if c is not None:
            return c
    return None


def is_cadet_sequence(tree: PlaneTree, seq: Sequence[int]) -> bool:
    return len(seq) > 0 and all(cadet(tree, v) == w for v, w in zip(seq, seq[1:]))


def is_s_cadet_sequence(spec: OffsetSpec, tree: PlaneTree, seq: Sequence[int]) -> bool:
    if not is_cadet_sequence(tree, seq):
        raise TreeError(f"{tuple(seq)} is not a cadet sequence of {tree}")
    for i in range(len(seq)):
        total = 0
        for j in range(i + 1, len(seq)):
            total += tree.lsib(seq[j])
            if total in minus_set(spec, seq[i], seq[j]):
                return False
    return True


@dataclass(frozen=True)
class BoxedTree:
    tree: PlaneTree
    boxes: frozenset[tuple[int, ...]]

    @property
    def size(self) -> int:
        return len(self.boxes)

    def sign(self) -> int:
        return -1 if (self.tree.n - len(self.boxes)) % 2 else 1

    def sorted_boxes(self) -> list[tuple[int, ...]]:
        return sorted(self.boxes)


@dataclass(frozen=True)
class MarkedTree:
    tree: PlaneTree
    marked: frozenset[Edge]

    def is_valid(self) -> bool:
        cadets = set(self.tree.cadet_edges())
        for j, c in self.marked:
            if (j, c) not in cadets:
                return False
            if self.tree.lsib(c) == 0 and not j < c:
                return False
        return True


def cadet_chains(tree: PlaneTree) -> list[tuple[int, ...]]:
    """Maximal cadet sequences; they partition the nodes."""
    has_cadet_parent = {c for _, c in tree.cadet_edges()}
    chains = []
    for v in range(1, tree.n + 1):
        if v in has_cadet_parent:
            continue
        chain = [v]
        while (c := cadet(tree, chain[-1])) is not None:
            chain.append(c)
        chains.append(tuple(chain))
    return chains


def _chain_cuts(chain: tuple[int, ...], valid) -> Iterator[list[tuple[int, ...]]]:
    """Splits of ``chain`` into consecutive segments accepted by ``valid``."""
    if not chain:
        yield []
        return
    for k in range(1, len(chain) + 1):
        head = chain[:k]
        if not valid(head):
            # segments only grow invalid once a prefix fails
            break
        for rest in _chain_cuts(chain[k:], valid):
            yield [head] + rest


def enumerate_boxings(spec: OffsetSpec, tree: PlaneTree, *, check_arity: bool = True) -> Iterator[BoxedTree]:
    """All partitions of the nodes of ``tree`` into S-cadet sequences."""
    if check_arity and tree.arity != max_offset(spec) + 1:
        raise TreeError(f"tree arity {tree.arity} does not match max offset {max_offset(spec)}")
    if tree.n != spec.n:
        raise TreeError("tree and spec disagree on n")
    valid = lambda seq: is_s_cadet_sequence(spec, tree, seq)
    per_chain = [list(_chain_cuts(ch, valid)) for ch in cadet_chains(tree)]
    for combo in itertools.product(*per_chain):
        yield BoxedTree(tree, frozenset(box for cuts in combo for box in cuts))


def _zero_edge_ok(tree: PlaneTree, seq: Sequence[int]) -> bool:
    return all(not (tree.lsib(w) == 0 and v > w) for v, w in zip(seq, seq[1:]))


def enumerate_general_boxings(tree: PlaneTree) -> Iterator[BoxedTree]:
    """Boxings without S: cadet-sequence partitions whose 0-slot edges increase."""
    per_chain = [list(_chain_cuts(ch, lambda seq: _zero_edge_ok(tree, seq))) for ch in cadet_chains(tree)]
    for combo in itertools.product(*per_chain):
        yield BoxedTree(tree, frozenset(box for cuts in combo for box in cuts))


def enumerate_markings(tree: PlaneTree) -> Iterator[MarkedTree]:
    """All valid marked trees over ``tree``."""
    allowed = [e for e in tree.cadet_edges() if not (tree.lsib(e[1]) == 0 and e[0] > e[1])]
    for r in range(len(allowed) + 1):
        for subset in itertools.combinations(allowed, r):
            yield MarkedTree(tree, frozenset(subset))


def boxing_to_marking(boxed: BoxedTree) -> MarkedTree:
    marked = frozenset((v, w) for box in boxed.boxes for v, w in zip(box, box[1:]))
    return MarkedTree(boxed.tree, marked)


def marking_to_boxing(marked: MarkedTree) -> BoxedTree:
    tree = marked.tree
    down = dict(marked.marked)
    up = {c: p for p, c in marked.marked}
    boxes = []
    for v in range(1, tree.n + 1):
        if v in up:
            continue
        box = [v]
        while box[-1] in down:
            box.append(down[box[-1]])
        boxes.append(tuple(box))
    return BoxedTree(tree, frozenset(boxes))


def signed_boxing_sum(spec: OffsetSpec, tree: PlaneTree, *, check_arity: bool = True) -> tuple[int, int]:
    """``(sum of (-1)^(n-|B|), number of boxings)`` over the S-boxings of ``tree``."""
    value = terms = 0
    for boxed in enumerate_boxings(spec, tree, check_arity=check_arity):
        value += boxed.sign()
        terms += 1
    return value, terms
