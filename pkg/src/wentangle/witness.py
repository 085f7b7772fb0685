"""Entanglement witness P_max(n, q) * 1 - |W_n(q)><W_n(q)|.

The operator is kept implicit (a scalar plus the sparse W state); every
expectation value is formed from inner products with the W state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .closed_form import pmax_wn_one_param
from .oracle import ascend, start_rng
from .qstate import (
    DensityMatrix,
    ProductState,
    PureState,
    StateError,
    WParams,
    overlap,
    overlaps,
    w_state,
)

MAX_DENSE_WITNESS = 10


@dataclass(frozen=True, eq=False)
class WitnessOperator:
    n: int
    q: float
    pmax: float
    w_state: PureState

    def dense(self) -> np.ndarray:
        """Explicit 2^n x 2^n matrix, for debugging small cases only."""
        if self.n > MAX_DENSE_WITNESS:
            raise StateError(f"dense witness capped at {MAX_DENSE_WITNESS} qubits")
        v = self.w_state.to_vector()
        return self.pmax * np.eye(v.size) - np.outer(v, v.conj())


def build_witness(n: int, q: float) -> WitnessOperator:
    result = pmax_wn_one_param(n, q)
    return WitnessOperator(n, q, result.pmax, w_state(WParams.one_param(n, q)))


def evaluate(w: WitnessOperator, rho: Union[DensityMatrix, PureState, ProductState]) -> float:
    """Tr(W rho) for a density matrix, a pure state or a product state."""
    if isinstance(rho, ProductState):
        if rho.qubit_count != w.n:
            raise StateError(f"dimension mismatch: witness on {w.n} qubits, state on {rho.qubit_count}")
        return w.pmax - abs(overlap(w.w_state, rho)) ** 2
    if isinstance(rho, PureState):
        if rho.qubit_count != w.n:
            raise StateError(f"dimension mismatch: witness on {w.n} qubits, state on {rho.qubit_count}")
        inner = sum(
            np.conj(a) * rho.amplitudes.get(label, 0.0) for label, a in w.w_state.amplitudes.items()
        )
        return w.pmax - abs(inner) ** 2
    if isinstance(rho, DensityMatrix):
        if rho.dimension != 2**w.n:
            raise StateError(f"dimension mismatch: witness needs {2 ** w.n}, got {rho.dimension}")
        idx = np.array([int(label, 2) for label in w.w_state.amplitudes])
        amps = w.w_state.amps
        block = rho.matrix[np.ix_(idx, idx)]
        expect = np.real(np.conj(amps) @ block @ amps)
        return float(w.pmax * np.trace(rho.matrix).real - expect)
    raise TypeError(f"cannot evaluate a witness on {type(rho).__name__}")


def random_product_factors(rng: np.random.Generator, samples: int, n: int) -> np.ndarray:
    """(samples, n, 2) factors with cos(theta) and phi uniform."""
    cos_t = rng.uniform(-1.0, 1.0, size=(samples, n))
    phi = rng.uniform(0.0, 2 * np.pi, size=(samples, n))
    c0 = np.sqrt((1 + cos_t) / 2)
    c1 = np.sqrt((1 - cos_t) / 2) * np.exp(1j * phi)
    return np.stack([c0, c1], axis=-1)


def separable_scan(w: WitnessOperator, samples: int, seed: int = 42, polish: bool = False) -> float:
    """Minimum of Tr(W rho) over random pure product states.

    With ``polish`` the best sample is then pushed uphill in overlap by
    alternating ascent, which drives the minimum to its separable infimum.
    A negative return value means the stored P_max is too small.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    factors = random_product_factors(start_rng(seed, 0), samples, w.n)
    values = w.pmax - np.abs(overlaps(w.w_state, factors)) ** 2
    best = int(np.argmin(values))
    low = float(values[best])
    if polish:
        f = factors[best:best + 1].copy()
        obj, _, _ = ascend(w.w_state, f)
        low = min(low, float(w.pmax - obj[0]))
    return low
