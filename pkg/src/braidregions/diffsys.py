"""Exact feasibility of strict/equality difference constraints.

Bounds are lexicographic pairs ``(c, e)`` meaning ``x_j - x_i <= c + e*delta`` for an
infinitesimal ``delta > 0``; a strict bound ``< c`` is ``(c, -1)``.  Pairs are packed
into one integer ``c*K + e`` with ``K`` larger than any strictness count that can
occur, which keeps comparisons and sums lexicographic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Sequence

INF = math.inf

Kind = Literal["<", "="]


@dataclass(frozen=True)
class Constraint:
    """``x_a - x_b < bound`` or ``x_a - x_b = bound`` (labels are 1-based)."""

    a: int
    b: int
    bound: int
    kind: Kind = "<"


@dataclass
class DiffSystem:
    n: int
    constraints: list[Constraint] = field(default_factory=list)

    def less(self, a: int, b: int, bound: int) -> "DiffSystem":
        self.constraints.append(Constraint(a, b, bound, "<"))
        return self

    def equal(self, a: int, b: int, bound: int) -> "DiffSystem":
        self.constraints.append(Constraint(a, b, bound, "="))
        return self

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        for c in set(self.constraints):
            d = x[c.a - 1] - x[c.b - 1]
            if (c.kind == "<" and not d < c.bound) or (c.kind == "=" and d != c.bound):
                return False
        return True


def _edges(system: DiffSystem, k: int) -> list[tuple[int, int, int]]:
    """Edges ``(i, j, w)`` with ``x_j - x_i <= w`` on 0-based indices."""
    out = []
    for c in set(system.constraints):
        a, b = c.a - 1, c.b - 1
        if not (0 <= a < system.n and 0 <= b < system.n):
            raise ValueError(f"constraint {c} mentions a variable outside 1..{system.n}")
        if c.kind == "<":
            out.append((b, a, c.bound * k - 1))
        else:
            out.append((b, a, c.bound * k))
            out.append((a, b, -c.bound * k))
    return out


def _decode(v: int, k: int) -> tuple[int, int]:
    c = -((-v) // k)
    return c, v - c * k


def _realize(potentials: Sequence[int], k: int, n: int) -> tuple[Fraction, ...]:
    delta = Fraction(1, 2 * (n + 1))
    out = []
    for p in potentials:
        c, e = _decode(p, k)
        out.append(c + e * delta)
    return tuple(out)


def diff_feasible(system: DiffSystem) -> tuple[Fraction, ...] | None:
    """An exact rational witness for ``system``, or ``None`` when it is infeasible.

    Bellman-Ford from a virtual source over lexicographic weights; a negative
    cycle means infeasible.
    """
    n = system.n
    k = 4 * (n + 1)
    edges = _edges(system, k)
    dist = [0] * n
    for _ in range(n):
        changed = False
        for i, j, w in edges:
            if dist[i] + w < dist[j]:
                dist[j] = dist[i] + w
                changed = True
        if not changed:
            break
    else:
        if any(dist[i] + w < dist[j] for i, j, w in edges):
            return None
    x = _realize(dist, k, n)
    assert system.satisfied_by(x), "witness failed substitution"
    return x


class Zone:
    """Closed difference-bound matrix supporting incremental constraint addition.

    ``w[i][j]`` is the tightest known packed bound on ``x_j - x_i``.
    """

    __slots__ = ("n", "k", "w")

    def __init__(self, n: int, w: list[list] | None = None):
        self.n = n
        self.k = 4 * (n + 1)
        if w is None:
            w = [[0 if i == j else INF for j in range(n)] for i in range(n)]
        self.w = w

    def copy(self) -> "Zone":
        z = Zone.__new__(Zone)
        z.n, z.k, z.w = self.n, self.k, [row[:] for row in self.w]
        return z

    def _tighten(self, i: int, j: int, v: int) -> bool:
        """Impose ``x_j - x_i <= v`` (packed); False when that empties the zone."""
        w = self.w
        if w[j][i] + v < 0:
            return False
        if v >= w[i][j]:
            return True
        n = self.n
        col_i = [w[p][i] for p in range(n)]
        row_j = w[j]
        for p in range(n):
            a = col_i[p] + v
            if a == INF:
                continue
            row = w[p]
            for q in range(n):
                cand = a + row_j[q]
                if cand < row[q]:
                    row[q] = cand
        return True

    def add_less(self, a: int, b: int, bound: int) -> bool:
        """``x_a - x_b < bound`` (1-based labels)."""
        return self._tighten(b - 1, a - 1, bound * self.k - 1)

    def add_greater(self, a: int, b: int, bound: int) -> bool:
        return self._tighten(a - 1, b - 1, -bound * self.k - 1)

    def add_equal(self, a: int, b: int, bound: int) -> bool:
        return (self._tighten(b - 1, a - 1, bound * self.k)
                and self._tighten(a - 1, b - 1, -bound * self.k))

    def add_le(self, a: int, b: int, bound: int) -> bool:
        return self._tighten(b - 1, a - 1, bound * self.k)

    def add_ge(self, a: int, b: int, bound: int) -> bool:
        return self._tighten(a - 1, b - 1, -bound * self.k)

    def difference_range(self, a: int, b: int) -> tuple[float | Fraction, float | Fraction]:
        """Loose (ignoring strictness) lower and upper bounds on ``x_a - x_b``."""
        up = self.w[b - 1][a - 1]
        lo = self.w[a - 1][b - 1]
        upper = INF if up == INF else _decode(up, self.k)[0]
        lower = -INF if lo == INF else -_decode(lo, self.k)[0]
        return lower, upper

    def is_fixed(self, a: int, b: int) -> bool:
        """True when ``x_a - x_b`` is constant on the zone (only meaningful without strict bounds)."""
        up, lo = self.w[b - 1][a - 1], self.w[a - 1][b - 1]
        return up != INF and up + lo == 0

    def witness(self) -> tuple[Fraction, ...]:
        n = self.n
        pot = [min(0, min(self.w[i][j] for i in range(n))) for j in range(n)]
        return _realize(pot, self.k, n)


def witness_of(n: int, constraints: Iterable[Constraint]) -> tuple[Fraction, ...] | None:
    return diff_feasible(DiffSystem(n, list(constraints)))
