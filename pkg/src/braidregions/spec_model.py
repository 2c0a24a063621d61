"""Offset specifications for deformations of the braid arrangement.

An :class:`OffsetSpec` assigns to every pair ``a < b`` of ``[n]`` a finite
set of integers ``S_ab``; the arrangement consists of the hyperplanes
``x_a - x_b = s`` for ``s`` in ``S_ab``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

Pair = tuple[int, int]

PRESETS = ("braid", "catalan", "shi", "linial", "semiorder", "graphical", "custom")


class SpecError(ValueError):
    """Raised for malformed or inconsistent arrangement specifications."""


def all_pairs(n: int) -> list[Pair]:
    return list(itertools.combinations(range(1, n + 1), 2))


@dataclass(frozen=True)
class Hyperplane:
    """The hyperplane ``x_a - x_b = s`` with ``a < b``."""

    a: int
    b: int
    s: int

    def __post_init__(self):
        if not self.a < self.b:
            raise SpecError(f"hyperplane needs a < b, got ({self.a}, {self.b})")

    @classmethod
    def normalized(cls, i: int, j: int, s: int) -> "Hyperplane":
        """``x_i - x_j = s`` for arbitrary distinct ``i, j``."""
        if i < j:
            return cls(i, j, s)
        return cls(j, i, -s)

    def __str__(self) -> str:
        return f"H({self.a},{self.b},{self.s})"


@dataclass(frozen=True)
class MinusSets:
    """The sets ``S^-_{a,b}`` (``neg``) and ``S^-_{b,a}`` (``pos``) of a pair."""

    neg: frozenset[int]
    pos: frozenset[int]


@dataclass(frozen=True)
class OffsetSpec:
    n: int
    offsets: tuple[tuple[int, ...], ...]
    """Sorted offset tuples, one per pair in :func:`all_pairs` order."""

    def __post_init__(self):
        if self.n < 1:
            raise SpecError(f"n must be positive, got {self.n}")
        if len(self.offsets) != self.n * (self.n - 1) // 2:
            raise SpecError("offset table does not cover every pair")
        for pair, offs in zip(all_pairs(self.n), self.offsets):
            if list(offs) != sorted(set(offs)):
                raise SpecError(f"offsets of {pair} must be sorted and distinct")

    @classmethod
    def from_pairs(cls, n: int, pairs: Mapping[Pair, Iterable[int]]) -> "OffsetSpec":
        table = {p: () for p in all_pairs(n)}
        for (a, b), offs in pairs.items():
            if not 1 <= a < b <= n:
                raise SpecError(f"pair ({a}, {b}) out of range for n={n}")
            table[(a, b)] = tuple(sorted(set(int(s) for s in offs)))
        return cls(n, tuple(table[p] for p in all_pairs(n)))

    @classmethod
    def uniform(cls, n: int, offs: Iterable[int]) -> "OffsetSpec":
        offs = tuple(sorted(set(offs)))
        return cls(n, tuple(offs for _ in all_pairs(n)))

    @property
    def pairs(self) -> list[Pair]:
        return all_pairs(self.n)

    def __getitem__(self, pair: Pair) -> tuple[int, ...]:
        a, b = pair
        if not 1 <= a < b <= self.n:
            raise KeyError(pair)
        return self.offsets[pair_index(self.n, a, b)]

    def hyperplanes(self) -> list[Hyperplane]:
        return [Hyperplane(a, b, s) for (a, b), offs in zip(self.pairs, self.offsets) for s in offs]

    def contains(self, h: Hyperplane) -> bool:
        return h.s in self[(h.a, h.b)]

    def is_empty(self) -> bool:
        return not any(self.offsets)


def pair_index(n: int, a: int, b: int) -> int:
    """Position of the pair ``(a, b)``, ``a < b``, in :func:`all_pairs` order."""
    # rows a=1..a-1 contribute n-1, n-2, ... pairs
    return (a - 1) * n - (a - 1) * a // 2 + (b - a - 1)


def minus_sets(spec: OffsetSpec, a: int, b: int) -> MinusSets:
    if not a < b:
        raise SpecError(f"minus_sets needs a < b, got ({a}, {b})")
    offs = spec[(a, b)]
    neg = frozenset(-s for s in offs if s <= 0)
    pos = frozenset(s for s in offs if s > 0) | {0}
    return MinusSets(neg, pos)


def minus_set(spec: OffsetSpec, v: int, w: int) -> frozenset[int]:
    """``S^-_{v,w}`` for an ordered pair of distinct nodes."""
    if v < w:
        return minus_sets(spec, v, w).neg
    return minus_sets(spec, w, v).pos


def max_offset(spec: OffsetSpec) -> int:
    return max((abs(s) for offs in spec.offsets for s in offs), default=0)


def is_transitive(spec: OffsetSpec) -> bool:
    """Whether ``s not in S^-_{a,b}`` and ``t not in S^-_{b,c}`` imply ``s+t not in S^-_{a,c}``.

    Only values up to ``2 * max_offset + 1`` can matter, since larger sums lie
    outside every minus set.
    """
    bound = 2 * max_offset(spec) + 2
    nodes = range(1, spec.n + 1)
    for a, b, c in itertools.permutations(nodes, 3):
        ab, bc, ac = minus_set(spec, a, b), minus_set(spec, b, c), minus_set(spec, a, c)
        for s in range(bound):
            if s in ab:
                continue
            for t in range(bound):
                if t not in bc and s + t in ac:
                    return False
    return True


def preset(family: str, n: int, m: int | None = None, edges: Iterable[Pair] | None = None,
           pairs: Mapping[Pair, Iterable[int]] | None = None) -> OffsetSpec:
    if family == "braid":
        return OffsetSpec.uniform(n, [0])
    if family == "catalan":
        m = 1 if m is None else m
        if m < 0:
            raise SpecError("catalan needs m >= 0")
        return OffsetSpec.uniform(n, range(-m, m + 1))
    if family == "shi":
        return OffsetSpec.uniform(n, [0, 1])
    if family == "linial":
        return OffsetSpec.uniform(n, [1])
    if family == "semiorder":
        return OffsetSpec.uniform(n, [-1, 1])
    if family == "graphical":
        table = {}
        for e in edges or ():
            a, b = sorted(int(v) for v in e)
            if not 1 <= a < b <= n:
                raise SpecError(f"graphical edge {tuple(e)} outside [1..{n}]")
            table[(a, b)] = [0]
        return OffsetSpec.from_pairs(n, table)
    if family == "custom":
        return OffsetSpec.from_pairs(n, pairs or {})
    raise SpecError(f"unknown preset family {family!r}")


def _parse_pair_key(key: str) -> Pair:
    try:
        a, b = (int(t) for t in key.split(","))
    except ValueError:
        raise SpecError(f"bad pair key {key!r}, expected 'a,b'") from None
    if not a < b:
        raise SpecError(f"pair key {key!r} must have a < b")
    return a, b


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(f"non-integer value {value!r} in {where}")
    return value


def parse_spec(config: str | Mapping) -> OffsetSpec:
    """Build an :class:`OffsetSpec` from a JSON document or an already-decoded mapping."""
    if isinstance(config, str):
        try:
            config = json.loads(config)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed config: {exc}") from None
    if not isinstance(config, Mapping):
        raise SpecError("config must be a JSON object")
    if "n" not in config:
        raise SpecError("config is missing 'n'")
    n = _as_int(config["n"], "'n'")
    if n < 1:
        raise SpecError("'n' must be positive")
    if "preset" in config:
        m = config.get("m")
        if m is not None:
            m = _as_int(m, "'m'")
        edges = []
        for e in config.get("edges", []):
            if not isinstance(e, (list, tuple)) or len(e) != 2:
                raise SpecError(f"bad edge {e!r}")
            edges.append((_as_int(e[0], "'edges'"), _as_int(e[1], "'edges'")))
        return preset(config["preset"], n, m=m, edges=edges)
    if "pairs" in config:
        raw = config["pairs"]
        if not isinstance(raw, Mapping):
            raise SpecError("'pairs' must be an object")
        table = {}
        for key, offs in raw.items():
            pair = _parse_pair_key(key)
            if not isinstance(offs, list):
                raise SpecError(f"offsets of {key!r} must be a list")
            table[pair] = [_as_int(s, f"pair {key!r}") for s in offs]
        return OffsetSpec.from_pairs(n, table)
    raise SpecError("config needs either 'preset' or 'pairs'")


def serialize_spec(spec: OffsetSpec) -> dict:
    return {"n": spec.n,
            "pairs": {f"{a},{b}": list(offs) for (a, b), offs in zip(spec.pairs, spec.offsets)}}


def load_spec(path: str | Path) -> OffsetSpec:
    return parse_spec(Path(path).read_text())
