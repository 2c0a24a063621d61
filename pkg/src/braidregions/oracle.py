"""Independent region counts: finite-field characteristic polynomial and acyclic orientations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .spec_model import OffsetSpec, Pair, max_offset


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class CharPoly:
    coefficients: tuple[int, ...]
    """Coefficients from the constant term upwards."""
    primes: tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, q: int) -> int:
        total = 0
        for c in reversed(self.coefficients):
            total = total * q + c
        return total

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            coef = str(c) if (mono == "" or abs(c) != 1) else ("-" if c < 0 else "")
            terms.append(f"{coef}{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, int(q ** 0.5) + 1))


def prime_bound(spec: OffsetSpec) -> int:
    return spec.n * (max_offset(spec) + 1)


def admissible_primes(spec: OffsetSpec, count: int) -> list[int]:
    out, q = [], prime_bound(spec) + 1
    while len(out) < count:
        if is_prime(q):
            out.append(q)
        q += 1
    return out


def count_points_mod_q(spec: OffsetSpec, q: int) -> int:
    """Points of ``(Z/q)^n`` off every hyperplane ``x_a - x_b = s (mod q)``.

    Fixes ``x_n = 0`` and multiplies by ``q`` (every hyperplane is invariant
    under adding a constant to all coordinates).
    """
    if not is_prime(q):
        raise OracleError(f"{q} is not prime")
    if q <= prime_bound(spec):
        raise OracleError(f"prime {q} too small; need q > {prime_bound(spec)}")
    n = spec.n
    if n == 1:
        return q
    grids = np.meshgrid(*([np.arange(q, dtype=np.int64)] * (n - 1)), indexing="ij", sparse=True)
    coords = list(grids) + [np.zeros((1,) * (n - 1), dtype=np.int64)]
    ok = np.ones((q,) * (n - 1), dtype=bool)
    for (a, b), offs in zip(spec.pairs, spec.offsets):
        if not offs:
            continue
        d = (coords[a - 1] - coords[b - 1]) % q
        for s in offs:
            ok &= d != s % q
    return int(ok.sum()) * q


def interpolate(points: Sequence[tuple[int, int]]) -> list[Fraction]:
    """Coefficients (constant first) of the polynomial through ``points``."""
    k = len(points)
    coeffs = [Fraction(0)] * k
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = 1
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        for t in range(k):
            coeffs[t] += Fraction(yi, denom) * basis[t]
    return coeffs


def char_poly(spec: OffsetSpec, primes: Sequence[int] | None = None) -> CharPoly:
    """Interpolate at ``n + 1`` primes and confirm against one more."""
    n = spec.n
    if primes is None:
        primes = admissible_primes(spec, n + 2)
    if len(primes) < n + 2:
        raise OracleError(f"need {n + 2} primes, got {len(primes)}")
    fit, held = list(primes[: n + 1]), list(primes[n + 1:])
    coeffs = interpolate([(q, count_points_mod_q(spec, q)) for q in fit])
    if any(c.denominator != 1 for c in coeffs):
        raise OracleError("interpolated characteristic polynomial is not integral")
    poly = CharPoly(tuple(int(c) for c in coeffs), tuple(primes))
    if poly.coefficients[-1] != 1 or poly.coefficients[0] != 0:
        raise OracleError(f"characteristic polynomial {poly} is not monic or not divisible by q")
    for q in held:
        if poly(q) != count_points_mod_q(spec, q):
            raise OracleError(f"characteristic polynomial disagrees with the count at q={q}")
    return poly


def regions_via_zaslavsky(spec: OffsetSpec, poly: CharPoly | None = None) -> int:
    poly = poly or char_poly(spec)
    return (-1) ** spec.n * poly(-1)


def acyclic_orientations(n: int, edges: Iterable[Pair]) -> int:
    """Brute-force count of acyclic orientations of a simple graph on ``1..n``."""
    edges = sorted({tuple(sorted(e)) for e in edges})
    total = 0
    for flips in itertools.product((False, True), repeat=len(edges)):
        arcs = [(b, a) if f else (a, b) for (a, b), f in zip(edges, flips)]
        if _is_acyclic(n, arcs):
            total += 1
    return total


def _is_acyclic(n: int, arcs: list[tuple[int, int]]) -> bool:
    indeg = [0] * (n + 1)
    out: list[list[int]] = [[] for _ in range(n + 1)]
    for a, b in arcs:
        out[a].append(b)
        indeg[b] += 1
    queue = [v for v in range(1, n + 1) if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == n
