"""Numerical maximal overlap: multi-start alternating ascent and brute-force grid search.

Neither routine uses any closed-form result, so both serve as independent
checks of the analytic formulas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .closed_form import OverlapResult
from .qstate import (
    ProductState,
    PureState,
    StateError,
    _factor_table,
    _match,
    _partial,
)

DEFAULT_STARTS = 32
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITERS = 10_000


@dataclass(frozen=True, eq=False)
class OracleResult:
    pmax: float
    nearest: ProductState
    iterations: int
    starts_used: int
    converged: bool
    fixed_point_residual: float


class FixedPointResidual(NamedTuple):
    residual: float
    degenerate: bool


def start_rng(seed: int, start: int) -> np.random.Generator:
    """Counter-based stream keyed by (seed, start index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, start])))


def random_factors(rng: np.random.Generator, n: int) -> np.ndarray:
    """n Haar-random single-qubit states as an (n, 2) complex array."""
    z = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _aligned(current: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Rotate ``target`` by a global phase so its overlap with ``current`` is real positive."""
    z = np.sum(np.conj(current) * target, axis=-1, keepdims=True)
    mag = np.abs(z)
    phase = np.where(mag > 0, np.conj(z) / np.where(mag > 0, mag, 1.0), 1.0)
    return target * phase


def _sweep(psi: PureState, factors: np.ndarray, trace: Optional[list] = None):
    """One ascending pass over the factors of every start, in place.

    Returns (objective after the pass, largest phase-aligned factor move).
    """
    n = psi.qubit_count
    move = np.zeros(factors.shape[0])
    for j in range(n):
        v = _partial(psi, factors, j)
        norm = np.linalg.norm(v, axis=-1)
        safe = norm > 0
        new = np.where(safe[:, None], v / np.where(safe, norm, 1.0)[:, None], factors[:, j])
        new = _aligned(factors[:, j], new)
        move = np.maximum(move, np.linalg.norm(new - factors[:, j], axis=-1))
        factors[:, j] = new
        if trace is not None:
            trace.append(precise_objective(psi, factors))
    return _objective(psi, factors), move


def _objective(psi: PureState, factors: np.ndarray) -> np.ndarray:
    table = _factor_table(psi, factors)
    return np.abs(np.sum(psi.amps * np.prod(table, axis=-1), axis=-1)) ** 2


def precise_objective(psi: PureState, factors: np.ndarray) -> np.ndarray:
    """Squared overlap of the normalized factors, evaluated in extended precision.

    Double-precision evaluation of an n-fold product summed over 2^n terms
    carries ~1e-15 noise, which hides whether successive iterates really
    increase the overlap.  Falls back to double where longdouble is double.
    """
    f = np.asarray(factors).astype(np.clongdouble)
    f = f / np.sqrt(np.sum(np.abs(f) ** 2, axis=-1, keepdims=True))
    table = _factor_table(psi, f)
    amps = psi.amps.astype(np.clongdouble)
    return np.abs(np.sum(amps * np.prod(table, axis=-1), axis=-1)) ** 2


def ascend(psi: PureState, factors: np.ndarray, tol: float = DEFAULT_TOL,
           max_iters: int = DEFAULT_MAX_ITERS, trace: Optional[list] = None):
    """Run alternating ascent on a stack of starting points.

    ``factors`` has shape (S, n, 2) and is updated in place.  A start stops
    once a full pass improves its objective by less than ``tol`` and moves
    no factor by more than ``tol``.  If ``trace`` is a list, the objective
    of every start is appended after each single-factor update (stopped
    starts are held fixed), using ``precise_objective``.

    Returns per-start (objective, sweeps used, converged flag).
    """
    factors_all = factors
    S = factors.shape[0]
    value = _objective(psi, factors)
    sweeps = np.zeros(S, dtype=int)
    done = np.zeros(S, dtype=bool)
    for _ in range(max_iters):
        active = np.flatnonzero(~done)
        if active.size == 0:
            break
        sub = factors_all[active]
        sub_trace = [] if trace is not None else None
        new_value, move = _sweep(psi, sub, sub_trace)
        factors_all[active] = sub
        if trace is not None:
            last = trace[-1] if trace else precise_objective(psi, factors_all)
            for row in sub_trace:
                full = np.array(last, copy=True)
                full[active] = row
                trace.append(full)
                last = full
        sweeps[active] += 1
        stop = (new_value - value[active] < tol) & (move <= tol)
        value[active] = new_value
        done[active[stop]] = True
    return value, sweeps, done


def alternating_maximize(
    psi: PureState,
    starts: int = DEFAULT_STARTS,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    seed: int = 42,
) -> OracleResult:
    """Best product-state overlap found by alternating single-factor updates.

    Each start draws Haar-random factors from its own (seed, start) stream,
    then repeatedly replaces factor k by the normalized partial inner
    product for k = 1..n.  The best start wins; ties go to the lowest
    start index.
    """
    if starts < 1:
        raise ValueError("starts must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    norm2 = float(np.sum(np.abs(psi.amps) ** 2))
    if abs(norm2 - 1.0) > 1e-9:
        raise StateError(f"state norm^2 is {norm2}")
    n = psi.qubit_count
    factors = np.stack([random_factors(start_rng(seed, s), n) for s in range(starts)])
    _, sweeps, done = ascend(psi, factors, tol, max_iters)
    # re-evaluate so pmax is the squared overlap of the returned state itself
    final = _objective(psi, factors)
    best = int(np.argmax(final))
    nearest = ProductState.from_array(factors[best])
    return OracleResult(
        pmax=float(final[best]),
        nearest=nearest,
        iterations=int(sweeps[best]),
        starts_used=starts,
        converged=bool(done[best]),
        fixed_point_residual=verify_fixed_point(psi, nearest).residual,
    )


def verify_fixed_point(psi: PureState, prod: ProductState) -> FixedPointResidual:
    """Largest distance between a factor and its phase-aligned best response.

    Zero exactly at stationary points of the overlap.  If some partial inner
    product vanishes the residual is reported as 1 with ``degenerate`` set.
    """
    _match(psi, prod)
    factors = prod.array
    worst = 0.0
    for j in range(psi.qubit_count):
        v = _partial(psi, factors, j)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            return FixedPointResidual(1.0, True)
        u = _aligned(factors[j], v / norm)
        worst = max(worst, float(np.linalg.norm(factors[j] - u)))
    return FixedPointResidual(worst, False)


def _angle_factors(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    return np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)


def _grid_objective(tensor: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """max over the last factor, for (P, 2(n-1)) angle rows; returns (P,)."""
    v = tensor
    n_free = angles.shape[1] // 2
    v = np.broadcast_to(v, (angles.shape[0],) + v.shape)
    for j in range(n_free):
        f = np.conj(_angle_factors(angles[:, 2 * j], angles[:, 2 * j + 1]))
        v = np.einsum("pa,pa...->p...", f, v)
    return np.sum(np.abs(v) ** 2, axis=-1)


def grid_search(psi: PureState, resolution: int = 64, refinements: int = 20) -> OverlapResult:
    """Exhaustive (theta, phi) scan of every factor but the last, then local refinement.

    The last factor is maximized exactly (norm of the partial inner
    product).  Supports at most three qubits.
    """
    n = psi.qubit_count
    if n > 3:
        raise StateError(f"grid search supports at most 3 qubits, got {n}")
    if resolution < 32:
        raise ValueError("resolution must be >= 32")
    tensor = psi.to_vector().reshape((2,) * n)
    if n == 1:
        return OverlapResult(1.0, None, "grid", nearest=ProductState.from_array(tensor[None, :]))

    thetas = np.linspace(0.0, np.pi, resolution)
    phis = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    cell = np.array(list(itertools.product(thetas, phis)))  # (res^2, 2)

    if n == 2:
        values = _grid_objective(tensor, cell)
        best = cell[int(np.argmax(values))]
    else:
        best_val, best = -1.0, None
        first = np.einsum("pa,a...->p...", np.conj(_angle_factors(cell[:, 0], cell[:, 1])), tensor)
        second = np.conj(_angle_factors(cell[:, 0], cell[:, 1]))
        chunk = 256
        for lo in range(0, len(cell), chunk):
            v = np.einsum("pbc,rb->prc", first[lo:lo + chunk], second)
            vals = np.sum(np.abs(v) ** 2, axis=-1)
            i, r = np.unravel_index(int(np.argmax(vals)), vals.shape)
            if vals[i, r] > best_val:
                best_val = vals[i, r]
                best = np.concatenate([cell[lo + i], cell[r]])

    best = np.asarray(best, dtype=float)
    steps = np.tile([thetas[1] - thetas[0], phis[1] - phis[0]], n - 1)
    offsets = np.array(list(itertools.product((-1.0, 0.0, 1.0), repeat=best.size)))
    value = float(_grid_objective(tensor, best[None, :])[0])
    for _ in range(refinements):
        for _ in range(50):
            trial = best + offsets * steps
            vals = _grid_objective(tensor, trial)
            k = int(np.argmax(vals))
            if vals[k] <= value:
                break
            best, value = trial[k], float(vals[k])
        steps = steps / 2

    factors = [_angle_factors(best[2 * j], best[2 * j + 1]) for j in range(n - 1)]
    rest = tensor
    for f in factors:
        rest = np.einsum("a,a...->...", np.conj(f), rest)
    factors.append(rest / np.linalg.norm(rest))
    return OverlapResult(value, None, "grid", nearest=ProductState.from_array(np.array(factors)))
