"""Collatz level sets, orbit steadiness, slots and clusters, with exact verification."""

from .errors import (
    CheckpointError,
    CollatzError,
    EmptyDomainError,
    IntegrityError,
    InvalidInputError,
    OrbitCapExceeded,
    ParseError,
)
from .levels import LevelSet, generate_levels, iter_levels, level_set, level_stats, next_level
from .orbit import DEFAULT_CAP, OrbitRecord, collatz_step, level_and_kappa, orbit_set_of, trajectory
from .scan import ScanCheckpoint, ScanDomain, merge_all, merge_checkpoints, scan_min_sigma
from .slots import (
    ClusterPartition,
    Slot,
    SlotAssignment,
    assign_and_verify,
    check_slot_conditions,
    clusters_by_gap,
    clusters_by_kappa,
    compare_partitions,
    slot_bounds,
)
from .steadiness import (
    SteadinessValue,
    sigma_literal,
    sigma_log2,
    sigma_telescoping,
    verify_level_identity,
)

__version__ = "0.1.0"

__all__ = [
    "CheckpointError",
    "CollatzError",
    "EmptyDomainError",
    "IntegrityError",
    "InvalidInputError",
    "OrbitCapExceeded",
    "ParseError",
    "LevelSet",
    "generate_levels",
    "iter_levels",
    "level_set",
    "level_stats",
    "next_level",
    "DEFAULT_CAP",
    "OrbitRecord",
    "collatz_step",
    "level_and_kappa",
    "orbit_set_of",
    "trajectory",
    "ScanCheckpoint",
    "ScanDomain",
    "merge_all",
    "merge_checkpoints",
    "scan_min_sigma",
    "ClusterPartition",
    "Slot",
    "SlotAssignment",
    "assign_and_verify",
    "check_slot_conditions",
    "clusters_by_gap",
    "clusters_by_kappa",
    "compare_partitions",
    "slot_bounds",
    "SteadinessValue",
    "sigma_literal",
    "sigma_log2",
    "sigma_telescoping",
    "verify_level_identity",
]
