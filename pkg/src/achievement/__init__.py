"""Classification and verification of achievement sets of multigeometric series."""

from .approximator import (
    ComponentCover,
    DepthCover,
    IntervalCertificate,
    Membership,
    OracleSet,
    certificate_theorem2,
    certificate_theorem7,
    component_cover,
    component_stats,
    depth_cover,
    membership_test,
    oracle_subsums,
)
from .classifier import (
    Classification,
    Rule,
    RuleRecord,
    Thresholds,
    Verdict,
    classify,
    classify_scaled,
    classify_terms,
    shift_normalize,
    thresholds,
)
from .model import (
    MultigeometricSeq,
    Run,
    SigmaSet,
    all_runs,
    best_run,
    canonicalize,
    is_monotone,
    sigma_set,
    tail_sum,
    term,
)

__all__ = [name for name in dir() if not name.startswith("_")]
