"""Regions of deformations of the braid arrangement, counted through boxed trees."""

from __future__ import annotations

__version__ = "0.1.0"

from .bernardi import bernardi_count, region_contribution, region_contributions, tree_contribution_by_boxing
from .contrib import tree_contribution_details, tree_contribution_geometric, w_interval_family
from .geometry import enumerate_faces, enumerate_regions, euler_sums, region_to_tree, tree_witness
from .oracle import acyclic_orientations, char_poly, regions_via_zaslavsky
from .spec_model import OffsetSpec, SpecError, parse_spec, preset, serialize_spec
from .trees import PlaneTree, enumerate_boxings, enumerate_trees, parse_tree

__all__ = [
    "OffsetSpec", "PlaneTree", "SpecError",
    "acyclic_orientations", "bernardi_count", "char_poly", "enumerate_boxings", "enumerate_faces",
    "enumerate_regions", "enumerate_trees", "euler_sums", "parse_spec", "parse_tree", "preset",
    "region_contribution", "region_contributions", "region_to_tree", "regions_via_zaslavsky",
    "serialize_spec", "tree_contribution_by_boxing", "tree_contribution_details",
    "tree_contribution_geometric", "tree_witness", "w_interval_family",
]
