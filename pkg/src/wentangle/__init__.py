"""Maximal product-state overlap of W-type qubit states.

Closed forms live in ``closed_form``, the numerical oracles in ``oracle``,
the Bloch-vector stationarity conditions in ``stationarity`` and the
entanglement witness in ``witness``.
"""

from .closed_form import (
    OverlapResult,
    pmax_two_qubit,
    pmax_w,
    pmax_w3,
    pmax_w4_two_param,
    pmax_wn_one_param,
    nearest_wn_one_param,
)
from .oracle import OracleResult, alternating_maximize, grid_search, verify_fixed_point
from .qstate import (
    BlochVector,
    DensityMatrix,
    ProductState,
    PureState,
    StateError,
    WParams,
    overlap,
    parse_state,
    reduced_density,
    w_state,
)
from .witness import build_witness, evaluate, separable_scan

__version__ = "0.1.0"
