from .extremal import ExtremalResult, clique_partition_bound_check, extremal_margin
from .partition import (
    ModelParams,
    PartitionResult,
    beta_o,
    exact_result,
    log_z_complete,
    log_z_complete_bipartite,
    potts_log_partition,
    potts_partition,
    potts_polynomial,
    rc_log_partition,
    rc_partition,
)
from .sampling import (
    PottsTable,
    classify_majority,
    exact_potts_sample,
    exact_rc_sample,
    majority_label,
    mono_count,
    nm,
    nm_lower_bound_check,
    potts_to_rc,
    rc_to_potts,
)
