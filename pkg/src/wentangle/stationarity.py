"""Bloch-vector form of the overlap and its Lagrange stationarity conditions.

For three qubits the maximand is (1/4)[1 + s1.r1 + s2.r2 + s1.g.s2] and for
four qubits the analogous 1/8 expression with pair matrices g^(k) and the
triple tensor h.  In both cases the last qubit has already been optimized
away, so the value equals |<q_1..q_n|psi>|^2 with q_n the best response.
Multipliers are never formed; residuals use the multiplier-free x-z
plane equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .qstate import (
    BlochVector,
    CorrelationTensors,
    ProductState,
    StateError,
    WParams,
    correlation_tensors,
    pauli_expectations,
    reduced_density,
    w_state,
)

UNIT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BlochSolution:
    s_vectors: tuple[BlochVector, ...]
    objective: float
    residual: float


def _unit(*vectors: BlochVector):
    for v in vectors:
        if not v.is_unit(UNIT_TOL):
            raise StateError(f"Bloch vector {v} is not unit length")


def _real_plane(*vectors: BlochVector):
    for v in vectors:
        if abs(v.y) > UNIT_TOL:
            raise StateError(f"Bloch vector {v} leaves the x-z plane")


def three_qubit_correlations(params: WParams):
    """(r1, r2, g) for qubits 1, 2 of a three-qubit W-type state."""
    if params.n != 3:
        raise StateError(f"expected 3 coefficients, got {params.n}")
    psi = w_state(params)
    r1 = pauli_expectations(reduced_density(psi, [1]))
    r2 = pauli_expectations(reduced_density(psi, [2]))
    g = pauli_expectations(reduced_density(psi, [1, 2]))
    return r1, r2, g


def objective_bloch3(params: WParams, s1: BlochVector, s2: BlochVector) -> float:
    _unit(s1, s2)
    r1, r2, g = three_qubit_correlations(params)
    a, b = s1.as_array(), s2.as_array()
    return 0.25 * (1.0 + a @ r1 + b @ r2 + a @ g @ b)


def objective_bloch4(tensors: CorrelationTensors, s1: BlochVector, s2: BlochVector,
                     s3: BlochVector) -> float:
    _unit(s1, s2, s3)
    a, b, c = s1.as_array(), s2.as_array(), s3.as_array()
    r, g, h = tensors.r_vectors, tensors.g_matrices, tensors.h_tensor
    total = (
        1.0
        + a @ r[0] + b @ r[1] + c @ r[2]
        + a @ g[2] @ b + a @ g[1] @ c + b @ g[0] @ c
        + np.einsum("ijk,i,j,k->", h, a, b, c)
    )
    return 0.125 * float(total)


def residual_lagrange3(params: WParams, s1: BlochVector, s2: BlochVector) -> np.ndarray:
    """Cross-multiplied x-z conditions for the two free Bloch vectors of W_3.

    Each entry is s_x * (z-part of the gradient) - s_z * (x-part), which
    vanishes when the gradient is parallel to the vector.
    """
    _unit(s1, s2)
    _real_plane(s1, s2)
    a1, a2, a3 = params.coefficients
    r1 = a2**2 + a3**2 - a1**2
    r2 = a1**2 + a3**2 - a2**2
    r3 = a1**2 + a2**2 - a3**2
    omega = 2 * a1 * a2
    return np.array([
        s1.x * (r1 - r3 * s2.z) - s1.z * omega * s2.x,
        s2.x * (r2 - r3 * s1.z) - s2.z * omega * s1.x,
    ])


def residual_lagrange4(tensors: CorrelationTensors, s1: BlochVector, s2: BlochVector,
                       s3: BlochVector) -> np.ndarray:
    """Left minus right of the three multiplier-free equations for four qubits."""
    _unit(s1, s2, s3)
    _real_plane(s1, s2, s3)
    r1, r2, r3, r4 = tensors.r_scalars
    rt1, rt2, rt3 = tensors.r_tilde
    w1, w2, w3 = tensors.omega
    x1, z1, x2, z2, x3, z3 = s1.x, s1.z, s2.x, s2.z, s3.x, s3.z
    return np.array([
        x1 * (r1 - rt3 * z2 - rt2 * z3 + w1 * x2 * x3 - r4 * z2 * z3)
        - z1 * (w2 * x3 * (1 + z2) + w3 * x2 * (1 + z3)),
        x2 * (r2 - rt3 * z1 - rt1 * z3 + w2 * x1 * x3 - r4 * z1 * z3)
        - z2 * (w1 * x3 * (1 + z1) + w3 * x1 * (1 + z3)),
        x3 * (r3 - rt1 * z2 - rt2 * z1 + w3 * x1 * x2 - r4 * z1 * z2)
        - z3 * (w2 * x1 * (1 + z2) + w1 * x2 * (1 + z1)),
    ])


def gradient_alignment4(tensors: CorrelationTensors, s1: BlochVector, s2: BlochVector,
                        s3: BlochVector) -> np.ndarray:
    """Component of each full gradient orthogonal to its Bloch vector.

    General-purpose stationarity test built straight from the r, g, h
    tensors; no W-type structure is assumed.
    """
    a, b, c = s1.as_array(), s2.as_array(), s3.as_array()
    r, g, h = tensors.r_vectors, tensors.g_matrices, tensors.h_tensor
    grads = [
        r[0] + g[2] @ b + g[1] @ c + np.einsum("ijk,j,k->i", h, b, c),
        r[1] + g[2].T @ a + g[0] @ c + np.einsum("kij,k,j->i", h, a, c),
        r[2] + g[1].T @ a + g[0].T @ b + np.einsum("jki,j,k->i", h, a, b),
    ]
    return np.array([np.linalg.norm(np.cross(G, s)) for G, s in zip(grads, (a, b, c))])


def single_variable_pq(coeffs: Sequence[float], s1z: Callable[[tuple], float]) -> tuple[float, float]:
    """P and Q of the one-variable reduction for four qubits.

    ``s1z`` maps a coefficient tuple to the z-component of the first Bloch
    vector; the symmetry relations supply the other vectors from permuted
    calls.  At a stationary point s1x / s1z = P / Q.
    """
    a1, a2, a3, a4 = coeffs
    sq = np.square(coeffs)
    r1 = sq.sum() - 2 * sq[0]
    r4 = sq.sum() - 2 * sq[3]
    rt2 = sq[0] + sq[2] - sq[1] - sq[3]
    rt3 = sq[0] + sq[1] - sq[2] - sq[3]
    w1, w2, w3 = 2 * a2 * a3, 2 * a1 * a3, 2 * a1 * a2
    z_b = s1z((a2, a1, a3, a4))
    z_c = s1z((a3, a2, a1, a4))
    x_b, x_c = math.sqrt(1 - z_b**2), math.sqrt(1 - z_c**2)
    p = w2 * x_c * (1 + z_b) + w3 * x_b * (1 + z_c)
    q = r1 - rt3 * z_b - rt2 * z_c + w1 * x_b * x_c - r4 * z_b * z_c
    return p, q


def symmetric_sz(n: int, q: float) -> float:
    """z-component of the symmetric Bloch solution for n = 3 or 4."""
    a2 = (1.0 - q * q) / (n - 1)
    if n == 3:
        return q * q / (4 * a2 - q * q)
    if n == 4:
        return 1.0 / (9 * a2 - q * q)
    raise StateError(f"symmetric solutions exist only for n = 3, 4, got {n}")


def solve_symmetric(n: int, q: float) -> BlochSolution:
    """Equal Bloch vectors for a_1 = ... = a_{n-1} = a, a_n = q (n = 3 or 4)."""
    if n not in (3, 4):
        raise StateError(f"symmetric solutions exist only for n = 3, 4, got {n}")
    if not 0.0 <= q <= 1.0:
        raise StateError(f"q must lie in [0, 1], got {q}")
    a2 = (1.0 - q * q) / (n - 1)
    a = math.sqrt(a2)
    gap = (n - 1) * a2 - q * q
    if gap < -1e-12:
        raise StateError(f"q={q} is outside the highly entangled domain")
    gap = max(gap, 0.0)
    sz = symmetric_sz(n, q)
    if n == 3:
        sx = 2 * math.sqrt(2) * a * math.sqrt(gap) / (4 * a2 - q * q)
    else:
        sx = 2 * math.sqrt(6) * a * math.sqrt(gap) / (9 * a2 - q * q)
    vec = BlochVector.xz(sx, sz)
    params = WParams.one_param(n, q)
    if n == 3:
        objective = objective_bloch3(params, vec, vec)
        residual = float(np.max(np.abs(residual_lagrange3(params, vec, vec))))
    else:
        tensors = correlation_tensors(w_state(params))
        objective = objective_bloch4(tensors, vec, vec, vec)
        residual = float(np.max(np.abs(residual_lagrange4(tensors, vec, vec, vec))))
    return BlochSolution((vec,) * (n - 1), objective, residual)


def real_gauge(prod: ProductState) -> ProductState:
    """Remove the phase freedom of a product state paired with a W-type state.

    Makes every |0> amplitude real non-negative, then applies one common
    phase to all |1> amplitudes (a global phase on a single-excitation
    state) so that the last factor's |1> amplitude is real non-negative.
    At a maximizer of a positive W-type state every factor becomes real.
    """
    arr = prod.array.copy()
    for j in range(arr.shape[0]):
        if abs(arr[j, 0]) > 0:
            arr[j] *= np.conj(arr[j, 0]) / abs(arr[j, 0])
    ref = next((arr[j, 1] for j in range(arr.shape[0] - 1, -1, -1) if abs(arr[j, 1]) > 1e-12), None)
    if ref is not None:
        arr[:, 1] *= np.conj(ref) / abs(ref)
    return ProductState.from_array(arr)
