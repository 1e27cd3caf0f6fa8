"""Rose Window graphs, their consistent cycles and their 2_{0,1} maps."""

from .automorphisms import AutomorphismGroup, VertexCapExceeded, automorphism_group, verify_arc_transitivity
from .classifier import (
    ClassificationReport,
    classify_params,
    emit_report,
    exhaustive_oracle,
    verify_count_tables,
)
from .cycles import Chirality, CycleCensus, CycleOrbit, DirectedCycle, EnumerationTooLarge, cycle_census
from .families import family_i_maps, family_ii_maps, family_iii_maps, family_iv_maps, generic_maps
from .graphs import FamilyTag, GraphError, LabeledGraph, RoseWindowParams, build_rose_window, recognize_family
from .maps import (
    MapClass,
    MapOnGraph,
    build_map,
    classify,
    flag_system,
    map_automorphisms,
    maps_isomorphic,
    petrie_dual,
)
from .perm import GroupTooLarge, Permutation, PermGroup, closure

__all__ = [
    "AutomorphismGroup", "Chirality", "ClassificationReport", "CycleCensus", "CycleOrbit",
    "DirectedCycle", "EnumerationTooLarge", "FamilyTag", "GraphError", "GroupTooLarge",
    "LabeledGraph", "MapClass", "MapOnGraph", "PermGroup", "Permutation", "RoseWindowParams",
    "VertexCapExceeded", "automorphism_group", "build_map", "build_rose_window", "classify",
    "classify_params", "closure", "cycle_census", "emit_report", "exhaustive_oracle",
    "family_i_maps", "family_ii_maps", "family_iii_maps", "family_iv_maps", "flag_system",
    "generic_maps", "map_automorphisms", "maps_isomorphic", "petrie_dual", "recognize_family",
    "verify_arc_transitivity", "verify_count_tables",
]
