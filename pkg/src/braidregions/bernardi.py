"""Signed sums over S-boxed trees: globally, per region, and per tree."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import GeometryError, RegionKey, group_regions
from .spec_model import OffsetSpec, max_offset
from .trees import PlaneTree, TreeError, enumerate_trees, signed_boxing_sum


@dataclass(frozen=True)
class SignedCount:
    value: int
    terms: int


@dataclass(frozen=True)
class RegionContribution:
    key: RegionKey
    trees: tuple[PlaneTree, ...]
    boxings: int
    value: int


def bernardi_count(spec: OffsetSpec, n: int | None = None) -> SignedCount:
    if n is not None and n != spec.n:
        raise TreeError(f"spec has n={spec.n}, asked for n={n}")
    value = terms = 0
    for tree in enumerate_trees(spec.n, max_offset(spec)):
        v, t = signed_boxing_sum(spec, tree)
        value += v
        terms += t
    return SignedCount(value, terms)


def tree_contribution_by_boxing(spec: OffsetSpec, tree: PlaneTree) -> int:
    return signed_boxing_sum(spec, tree)[0]


def region_contributions(spec: OffsetSpec) -> list[RegionContribution]:
    """One entry per region, in region-enumeration order of the grouping."""
    out = []
    for key, trees in group_regions(spec).items():
        value = boxings = 0
        for tree in trees:
            v, t = signed_boxing_sum(spec, tree)
            value += v
            boxings += t
        out.append(RegionContribution(key, tuple(trees), boxings, value))
    return out


def region_contribution(spec: OffsetSpec, region: RegionKey) -> int:
    groups = group_regions(spec)
    if region not in groups:
        raise GeometryError(f"{region} is not a region of the arrangement")
    return sum(signed_boxing_sum(spec, tree)[0] for tree in groups[region])
