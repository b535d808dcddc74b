from .experiments import (
    RecoveryEstimate,
    StructureStats,
    contraction_color_procedure,
    count_connected_sets_with_boundary,
    recovery_experiment,
    recovery_lower_bound,
    structure_experiment,
)
from .fptas import ApproxResult, fptas_z
from .karger import CutRecord, KargerResult, karger_bound, karger_count_cuts, small_graph_catalog
from .regime import dispatch_regime, regime_label, regime_threshold
from .sampling import PottsSampler, SelfReducibleSampler, sample_potts, self_reducible_sample
