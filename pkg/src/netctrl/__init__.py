"""Controllability robustness toolkit for simple directed graphs.

Build graphs (six seeded models or edge-list files), count driver nodes
under structural or exact controllability, score robustness against node
removal, repair degree bands by random edge rectification, and enumerate
small graph classes exhaustively.
"""

from .attack import (
    ControllabilityCurve,
    RandomAttackResult,
    RobustnessScore,
    curve,
    exhaustive_rc,
    random_attack,
    rc,
)
from .controllability import (
    EXACT,
    STRUCTURAL,
    DriverCount,
    MatchingResult,
    exact_drivers,
    maximum_matching,
    structural_drivers,
)
from .edgelist import (
    EdgeListDocument,
    emit_edge_list,
    format_edge_list,
    load_edge_list,
    parse_edge_list,
)
from .enumeration import (
    InstanceCatalog,
    enumerate_instances,
    evaluate_catalog,
    verify_subset_relation,
)
from .experiment import ExperimentConfig, ExperimentResult, run_experiment
from .generators import (
    MODELS,
    GeneratorParams,
    adjust_edge_count,
    attachment_weights,
    generate,
    solve_snapback_q,
)
from .graph import IN, OUT, DegreeVector, DirectedGraph, canonical_form
from .metrics import (
    FeatureBundle,
    basic_features,
    degree_distribution,
    disconnection_threshold,
    heterogeneity,
    heterogeneity_curve,
)
from .rectify import EncBounds, EncReport, RerTrace, check_enc, enc_bounds, rectify

__version__ = "0.1.0"

__all__ = [
    "ControllabilityCurve",
    "DegreeVector",
    "DirectedGraph",
    "DriverCount",
    "EXACT",
    "EncBounds",
    "EncReport",
    "EdgeListDocument",
    "ExperimentConfig",
    "ExperimentResult",
    "FeatureBundle",
    "GeneratorParams",
    "IN",
    "InstanceCatalog",
    "MODELS",
    "MatchingResult",
    "OUT",
    "RandomAttackResult",
    "RerTrace",
    "RobustnessScore",
    "STRUCTURAL",
    "adjust_edge_count",
    "attachment_weights",
    "basic_features",
    "canonical_form",
    "check_enc",
    "curve",
    "degree_distribution",
    "disconnection_threshold",
    "emit_edge_list",
    "enc_bounds",
    "enumerate_instances",
    "evaluate_catalog",
    "exact_drivers",
    "exhaustive_rc",
    "format_edge_list",
    "generate",
    "heterogeneity",
    "heterogeneity_curve",
    "load_edge_list",
    "maximum_matching",
    "parse_edge_list",
    "random_attack",
    "rc",
    "rectify",
    "run_experiment",
    "solve_snapback_q",
    "structural_drivers",
    "verify_subset_relation",
    "__version__",
]
