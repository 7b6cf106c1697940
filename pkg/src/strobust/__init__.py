"""Depth-robust and ST-robust DAG constructions with property checkers."""

from .graph import (
    GraphError,
    IoDag,
    PathRec,
    RemovalSet,
    chain,
    complete_dag,
    delete,
    depth,
    node_depth_profile,
    pairwise_longest,
    reach_matrix,
)
from .search import BudgetExceeded, SearchMode
from .verify import (
    Report,
    StWitness,
    check_connector,
    check_depth_robust,
    check_edge_depth_robust,
    check_grate,
    check_hardness,
    check_maximally_st_robust,
    check_ssdr,
    check_st_robust,
    check_superconcentrator,
    find_st_witness,
)

__version__ = "0.1.0"
