"""Randomized asynchronous ADMM for consensus optimization over graphs."""

from .activation import ActivationProcess, draw_activation, node_wakeup_law
from .admm import (
    AdmmState,
    async_admm_step,
    consensus_disagreement,
    gossip_edge_step,
    sync_admm_step,
)
from .baselines import DgdState, dgd_gossip_step
from .config import ExperimentConfig, default_config, load_config, resolve
from .errors import ConfigError, NumericalError, RandProxError
from .harness import MetricsRecord, run_experiment, squared_error
from .objectives import AbsoluteValue, Quadratic, Zero, aggregate_value, centralized_minimizer, prox
from .operators import (
    BlockVector,
    DouglasRachfordOperator,
    decompose,
    dr_block_apply,
    gs_hat_apply,
    proximal_point_iterate,
    random_gs_iterate,
)
from .topology import ComponentCover, Graph, edge_cover, full_cover, sigma_map, validate_cover

__version__ = "0.1.0"

__all__ = [
    "AbsoluteValue",
    "ActivationProcess",
    "AdmmState",
    "BlockVector",
    "ComponentCover",
    "ConfigError",
    "DgdState",
    "DouglasRachfordOperator",
    "ExperimentConfig",
    "Graph",
    "MetricsRecord",
    "NumericalError",
    "Quadratic",
    "RandProxError",
    "Zero",
    "aggregate_value",
    "async_admm_step",
    "centralized_minimizer",
    "consensus_disagreement",
    "decompose",
    "default_config",
    "dgd_gossip_step",
    "dr_block_apply",
    "draw_activation",
    "edge_cover",
    "full_cover",
    "gossip_edge_step",
    "gs_hat_apply",
    "load_config",
    "node_wakeup_law",
    "prox",
    "proximal_point_iterate",
    "random_gs_iterate",
    "resolve",
    "run_experiment",
    "sigma_map",
    "squared_error",
    "sync_admm_step",
    "validate_cover",
]
