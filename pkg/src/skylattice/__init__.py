"""Skyline and skycube queries with a partially materialized, closure-indexed store."""

from .errors import ContractViolation, DataError, SchemaError, SkylatticeError
from .model import CriterionSet, Relation, Row, format_criteria, parse_criteria
from .partitions import (Partition, finer_than, partition_product, partition_sum,
                         representatives, union_containing)
from .dominance import (SkylineResult, dominates, strictly_dominates, dominates_distinct,
                        projections_distinct, skyline, skyline_with_cost, skyline_blocks)
from .closure import (AgreeSetFamily, agree_set, group_agree_set, agree_sets,
                      equivalence_class, equivalence_partition, agreed_criteria,
                      closure, closure_from_agree_sets, partition_closure, closed_sets)
from .lattice import (AgreeConcept, SkylineConcept, ConceptLattice,
                      build_agree_lattice, build_skyline_lattice,
                      concept_meet, concept_join, to_dot, lattice_json, lattice_from_json)
from .skycube import (Skycube, PartialSkycube, build_skycube, materialize_partial,
                      reconstruct_cuboid, verify_equivalence, compression_stats,
                      EquivalenceReport, CompressionStats, worker_count)

__version__ = "0.1.0"

__all__ = [
    "SkylatticeError", "SchemaError", "DataError", "ContractViolation",
    "CriterionSet", "Relation", "Row", "format_criteria", "parse_criteria",
    "Partition", "finer_than", "partition_product", "partition_sum",
    "representatives", "union_containing",
    "SkylineResult", "dominates", "strictly_dominates", "dominates_distinct",
    "projections_distinct", "skyline", "skyline_with_cost", "skyline_blocks",
    "AgreeSetFamily", "agree_set", "group_agree_set", "agree_sets",
    "equivalence_class", "equivalence_partition", "agreed_criteria",
    "closure", "closure_from_agree_sets", "partition_closure", "closed_sets",
    "AgreeConcept", "SkylineConcept", "ConceptLattice",
    "build_agree_lattice", "build_skyline_lattice",
    "concept_meet", "concept_join", "to_dot", "lattice_json", "lattice_from_json",
    "Skycube", "PartialSkycube", "build_skycube", "materialize_partial",
    "reconstruct_cuboid", "verify_equivalence", "compression_stats",
    "EquivalenceReport", "CompressionStats", "worker_count",
]
