"""Simulation and analysis of greedy decentralized query routing in expert networks."""

from .core import (
    DIVERSIFIED,
    UNIFIED,
    ExpertNetwork,
    ModelConfig,
    Query,
    candidate_set,
    expertise_distance,
    is_local_contact,
    l1_norm,
)
from .models import (
    AbilityHistogram,
    InversePowerSampler,
    ability_count,
    ability_histogram,
    build_diversified,
    build_network,
    build_unified,
    expected_ability,
    load_network,
    sample_long_range,
    save_network,
)
from .routing import ErrorModel, RouteResult, next_hop, route, sample_misread_tau
from .bounds import (
    fit_r,
    lower_diversified,
    lower_unified,
    path_cap,
    predict_ratio,
    upper_diversified,
    upper_unified,
)
from .harness import (
    SweepPoint,
    SweepReport,
    forwarding_histogram,
    gen_query,
    run_sweep,
)

__version__ = "0.1.0"
