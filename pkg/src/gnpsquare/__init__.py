"""Three-stage greedy list coloring of squares of sparse G(n, c/n) graphs,
with exact small-instance oracles and Monte Carlo checkers.

Hot kernels come from a compiled extension when it is importable and from
pure-Python twins otherwise; ``BACKEND`` names the one in use.
"""
__version__ = "0.1.0"

from ._backend import BACKEND
from .asymptotics import AsymptoticParams, Partition, compute_params, compute_theta, partition
from .coloring import (
    Coloring, ListAssignment, ListPolicy, StageMetrics, degeneracy_color, greedy_list_color,
    three_stage_color, validate,
)
from .density import max_subgraph_density
from .graph import (
    GENERATOR_NAME, GnpParams, Graph, GraphFormatError, bfs_ball, bfs_layers, degeneracy_order,
    load_edge_list, sample_gnp, square, store_edge_list,
)
from .harness import TrialConfig, TrialReport, run_sweep, run_trial
from .oracles import OracleCapError, exact_chromatic_number, is_k_choosable, list_chromatic_number
from .verifier import CLAIMS, CheckVerdict, run_checks

__all__ = [
    "BACKEND", "CLAIMS", "GENERATOR_NAME", "AsymptoticParams", "CheckVerdict", "Coloring", "GnpParams",
    "Graph", "GraphFormatError", "ListAssignment", "ListPolicy", "OracleCapError", "Partition",
    "StageMetrics", "TrialConfig", "TrialReport", "bfs_ball", "bfs_layers", "compute_params",
    "compute_theta", "degeneracy_color", "degeneracy_order", "exact_chromatic_number",
    "greedy_list_color", "is_k_choosable", "list_chromatic_number", "load_edge_list",
    "max_subgraph_density", "partition", "run_checks", "run_sweep", "run_trial", "sample_gnp",
    "square", "store_edge_list", "three_stage_color", "validate",
]
