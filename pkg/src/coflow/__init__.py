"""Exact-rational coflow scheduling: schedulers, verifier, certificates.

Demand matrices may have arbitrary nonnegative rational entries; every
feasibility check, certificate and LP solve in this package is exact.
"""

from .certificates import (
    BoundsReport,
    DualCertificate,
    build_certificate,
    check_certificate,
    compare,
    lower_bounds,
    path_count_feasible,
)
from .direct import (
    GreedyTrace,
    edge_coloring_schedule,
    greedy_schedule,
    maximal_fractional_matching,
    smeared_fractional_schedule,
)
from .indirect import (
    auto_schedule,
    elementary_basis_schedule,
    grid_schedule,
    hypercube_schedule,
    round_robin_schedule,
    vlb_lift,
)
from .model import (
    FractionalMatching,
    Instance,
    IntegralMatching,
    Metrics,
    Schedule,
    Step,
    Transfer,
    compute_metrics,
    make_instance,
    uniform_instance,
)
from .oracle import (
    opt_direct_fractional,
    opt_receiver_bound,
    opt_sender_bound,
    solve_completion_lp,
)
from .verifier import VerificationReport, classify, verify

__all__ = [
    "BoundsReport", "DualCertificate", "FractionalMatching", "GreedyTrace",
    "Instance", "IntegralMatching", "Metrics", "Schedule", "Step",
    "Transfer", "VerificationReport", "auto_schedule", "build_certificate",
    "check_certificate", "classify", "compare", "compute_metrics",
    "edge_coloring_schedule", "elementary_basis_schedule", "greedy_schedule",
    "grid_schedule", "hypercube_schedule", "lower_bounds", "make_instance",
    "maximal_fractional_matching", "opt_direct_fractional",
    "opt_receiver_bound", "opt_sender_bound", "path_count_feasible",
    "round_robin_schedule", "smeared_fractional_schedule",
    "solve_completion_lp", "uniform_instance", "verify", "vlb_lift",
]
