"""Pure states, product states and their reduced quantities.

Basis labels are bit strings read left to right as qubit 1, 2, ..., n,
with ``'1'`` meaning the excited level.  Public functions take 1-based
qubit indices so that they line up with the usual W-state notation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

NORM_TOL = 1e-9
DENSITY_TOL = 1e-12
MAX_DENSE_QUBITS = 12

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


class StateError(ValueError):
    """Raised for malformed states or inconsistent arguments."""


@dataclass(frozen=True, eq=False)
class PureState:
    """Sparse n-qubit pure state, label -> amplitude.

    Normalization is checked, never repaired.
    """

    qubit_count: int
    amplitudes: Mapping[str, complex]

    def __post_init__(self):
        n = self.qubit_count
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise StateError(f"qubit_count must be a positive integer, got {n!r}")
        amps = {}
        for label, value in dict(self.amplitudes).items():
            if len(label) != n or set(label) - {"0", "1"}:
                raise StateError(f"label {label!r} is not a {n}-bit string")
            amps[label] = complex(value)
        norm2 = math.fsum(abs(v) ** 2 for v in amps.values())
        if abs(norm2 - 1.0) > NORM_TOL:
            raise StateError(f"state norm^2 is {norm2!r}, expected 1")
        object.__setattr__(self, "qubit_count", int(n))
        object.__setattr__(self, "amplitudes", MappingProxyType(amps))

    @classmethod
    def from_vector(cls, vector, *, drop_below: float = 0.0) -> PureState:
        vec = np.asarray(vector, dtype=complex).ravel()
        n = int(round(math.log2(vec.size)))
        if 2**n != vec.size:
            raise StateError(f"vector length {vec.size} is not a power of two")
        amps = {
            format(i, f"0{n}b"): v
            for i, v in enumerate(vec)
            if abs(v) > drop_below
        }
        return cls(n, amps)

    def to_vector(self) -> np.ndarray:
        n = self.qubit_count
        if n > 20:
            raise StateError(f"refusing to densify a {n}-qubit state")
        vec = np.zeros(2**n, dtype=complex)
        for label, amp in self.amplitudes.items():
            vec[int(label, 2)] = amp
        return vec

    def permuted(self, order: Sequence[int]) -> PureState:
        """Reorder qubits: new qubit i is old qubit ``order[i-1]`` (1-based)."""
        idx = _check_permutation(order, self.qubit_count)
        amps = {"".join(label[j] for j in idx): a for label, a in self.amplitudes.items()}
        return PureState(self.qubit_count, amps)

    @cached_property
    def bits(self) -> np.ndarray:
        """(m, n) array of the stored labels' bits."""
        labels = list(self.amplitudes)
        if not labels:
            return np.zeros((0, self.qubit_count), dtype=np.intp)
        return np.array([[c == "1" for c in lab] for lab in labels], dtype=np.intp)

    @cached_property
    def amps(self) -> np.ndarray:
        return np.fromiter(self.amplitudes.values(), dtype=complex, count=len(self.amplitudes))

    def __repr__(self):
        terms = ", ".join(f"{k}: {v:.6g}" for k, v in self.amplitudes.items())
        return f"PureState({self.qubit_count}, {{{terms}}})"


@dataclass(frozen=True)
class WParams:
    """Non-negative coefficients a_1..a_n of a W-type state."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) < 2:
            raise StateError("a W-type state needs at least two coefficients")
        if any(c < 0 or not math.isfinite(c) for c in coeffs):
            raise StateError(f"coefficients must be finite and non-negative: {coeffs}")
        norm2 = math.fsum(c * c for c in coeffs)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise StateError(f"sum of squared coefficients is {norm2!r}, expected 1")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def normalized(cls, values: Iterable[float]) -> WParams:
        vals = np.abs(np.asarray(list(values), dtype=float))
        return cls(tuple(vals / np.linalg.norm(vals)))

    @classmethod
    def one_param(cls, n: int, q: float) -> WParams:
        """a_1 = ... = a_{n-1} = a, a_n = q, with a fixed by normalization."""
        if not 0.0 <= q <= 1.0:
            raise StateError(f"q must lie in [0, 1], got {q}")
        a = math.sqrt((1.0 - q * q) / (n - 1))
        return cls((a,) * (n - 1) + (q,))

    @property
    def n(self) -> int:
        return len(self.coefficients)

    @property
    def squares(self) -> np.ndarray:
        return np.square(self.coefficients)

    def __len__(self):
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)


@dataclass(frozen=True, eq=False)
class ProductState:
    """n single-qubit factors, each a normalized pair (c0, c1)."""

    factors: tuple[tuple[complex, complex], ...]

    def __post_init__(self):
        arr = np.asarray(self.factors, dtype=complex)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
            raise StateError(f"factors must have shape (n, 2), got {arr.shape}")
        norms = np.sum(np.abs(arr) ** 2, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0) > NORM_TOL)
        if bad.size:
            raise StateError(f"factor {bad[0] + 1} has norm^2 {norms[bad[0]]!r}")
        object.__setattr__(self, "factors", tuple((complex(c0), complex(c1)) for c0, c1 in arr))

    @classmethod
    def from_array(cls, arr) -> ProductState:
        return cls(tuple(map(tuple, np.asarray(arr, dtype=complex))))

    @classmethod
    def basis(cls, label: str) -> ProductState:
        """Computational basis product state, e.g. ``basis('0001')``."""
        return cls(tuple((0j, 1 + 0j) if c == "1" else (1 + 0j, 0j) for c in label))

    @classmethod
    def from_bloch(cls, vectors: Iterable[BlochVector]) -> ProductState:
        return cls(tuple(v.to_factor() for v in vectors))

    @property
    def qubit_count(self) -> int:
        return len(self.factors)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.factors, dtype=complex)
        arr.flags.writeable = False
        return arr

    def permuted(self, order: Sequence[int]) -> ProductState:
        idx = _check_permutation(order, self.qubit_count)
        return ProductState(tuple(self.factors[j] for j in idx))

    def to_state(self) -> PureState:
        """Expand into a sparse PureState (skipping exactly-zero amplitudes)."""
        amps = {"": 1 + 0j}
        for c0, c1 in self.factors:
            nxt = {}
            for label, a in amps.items():
                if c0 != 0:
                    nxt[label + "0"] = a * c0
                if c1 != 0:
                    nxt[label + "1"] = a * c1
            amps = nxt
        return PureState(self.qubit_count, amps)

    def bloch_vectors(self) -> list[BlochVector]:
        return [BlochVector.from_factor(f) for f in self.factors]


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    @classmethod
    def from_factor(cls, factor) -> BlochVector:
        c0, c1 = complex(factor[0]), complex(factor[1])
        cross = c0.conjugate() * c1
        return cls(2 * cross.real, 2 * cross.imag, abs(c0) ** 2 - abs(c1) ** 2)

    @classmethod
    def xz(cls, x: float, z: float) -> BlochVector:
        return cls(float(x), 0.0, float(z))

    @property
    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    def is_unit(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def to_factor(self) -> tuple[complex, complex]:
        """Single-qubit amplitudes (cos t/2, e^{i phi} sin t/2) of a unit vector."""
        if not self.is_unit():
            raise StateError(f"Bloch vector {self} is not unit length")
        # half-angle forms avoid acos loss near the poles
        c0 = math.sqrt(max(0.0, (1.0 + self.z) / 2.0))
        rho = math.hypot(self.x, self.y)
        if rho == 0.0:
            return (complex(c0), complex(math.sqrt(max(0.0, (1.0 - self.z) / 2.0))))
        s1 = rho / (2.0 * c0) if c0 > 0.5 else math.sqrt(max(0.0, (1.0 - self.z) / 2.0))
        phase = complex(self.x, self.y) / rho
        return (complex(c0), s1 * phase)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix on 2^k levels."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StateError(f"density matrix must be square, got shape {m.shape}")
        k = int(round(math.log2(m.shape[0]))) if m.shape[0] else -1
        if k < 0 or 2**k != m.shape[0]:
            raise StateError(f"dimension {m.shape[0]} is not a power of two")
        if np.max(np.abs(m - m.conj().T)) > DENSITY_TOL:
            raise StateError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > DENSITY_TOL:
            raise StateError(f"density matrix trace is {np.trace(m).real!r}")
        if np.linalg.eigvalsh(m).min() < -DENSITY_TOL:
            raise StateError("density matrix has a negative eigenvalue")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_state(cls, psi: PureState) -> DensityMatrix:
        if psi.qubit_count > MAX_DENSE_QUBITS:
            raise StateError(f"dense density matrix capped at {MAX_DENSE_QUBITS} qubits")
        v = psi.to_vector()
        return cls(np.outer(v, v.conj()))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def qubit_count(self) -> int:
        return self.dimension.bit_length() - 1

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix).real)


@dataclass(frozen=True, eq=False)
class CorrelationTensors:
    """Pauli correlation data of a four-qubit state.

    ``r_vectors[k]``, ``g_matrices[k]`` use 0-based k for qubit/pair k+1;
    ``g_matrices[0]`` pairs qubits (2, 3), ``[1]`` pairs (1, 3) and ``[2]``
    pairs (1, 2).  The scalar fields read the W-type values off the
    tensors (r_k = z-component, omega_k = g_xx, r_tilde_k = -g_zz,
    r_4 = -h_zzz); they carry no meaning for other states.
    """

    r_vectors: np.ndarray
    g_matrices: np.ndarray
    h_tensor: np.ndarray

    @property
    def r_scalars(self) -> np.ndarray:
        return np.append(self.r_vectors[:, 2], -self.h_tensor[2, 2, 2])

    @property
    def omega(self) -> np.ndarray:
        return self.g_matrices[:, 0, 0].copy()

    @property
    def r_tilde(self) -> np.ndarray:
        return -self.g_matrices[:, 2, 2]


def _check_permutation(order: Sequence[int], n: int) -> list[int]:
    idx = [int(k) - 1 for k in order]
    if sorted(idx) != list(range(n)):
        raise StateError(f"{list(order)} is not a permutation of 1..{n}")
    return idx


def _check_qubit(k: int, n: int) -> int:
    if not 1 <= k <= n:
        raise StateError(f"qubit index {k} outside 1..{n}")
    return k - 1


def parse_state(text: str) -> PureState:
    """Parse ``bitstring real [imag]`` lines into a PureState.

    Blank lines and ``#`` comments are skipped.  Duplicate labels, mixed
    label lengths and norm deviations above 1e-9 are errors.
    """
    amps: dict[str, complex] = {}
    width = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise StateError(f"line {lineno}: expected 'bits real [imag]', got {raw!r}")
        label = parts[0]
        if set(label) - {"0", "1"}:
            raise StateError(f"line {lineno}: bad basis label {label!r}")
        if width is None:
            width = len(label)
        elif len(label) != width:
            raise StateError(f"line {lineno}: label {label!r} has {len(label)} bits, expected {width}")
        if label in amps:
            raise StateError(f"line {lineno}: duplicate label {label!r}")
        try:
            re_part = float(parts[1])
            im_part = float(parts[2]) if len(parts) == 3 else 0.0
        except ValueError as exc:
            raise StateError(f"line {lineno}: {exc}") from None
        amps[label] = complex(re_part, im_part)
    if width is None:
        raise StateError("no amplitudes found")
    return PureState(width, amps)


def format_state(psi: PureState) -> str:
    lines = [f"{label} {a.real:.17g} {a.imag:.17g}" for label, a in psi.amplitudes.items()]
    return "\n".join(lines) + "\n"


def w_state(params: WParams | Sequence[float]) -> PureState:
    """a_1|10..0> + a_2|010..0> + ... + a_n|0..01>."""
    if not isinstance(params, WParams):
        params = WParams(tuple(params))
    n = params.n
    amps = {}
    for k, a in enumerate(params.coefficients):
        if a != 0.0:
            amps["0" * k + "1" + "0" * (n - k - 1)] = a
    return PureState(n, amps)


def _factor_table(psi: PureState, factors: np.ndarray) -> np.ndarray:
    """conj(factor_j[bit_j]) for every stored label, shape (..., m, n)."""
    n = psi.qubit_count
    return np.conj(factors)[..., np.arange(n)[None, :], psi.bits]


def _match(psi: PureState, prod: ProductState):
    if psi.qubit_count != prod.qubit_count:
        raise StateError(
            f"qubit count mismatch: state has {psi.qubit_count}, product has {prod.qubit_count}"
        )


def overlap(psi: PureState, prod: ProductState) -> complex:
    """<q_1 ... q_n | psi>."""
    _match(psi, prod)
    table = _factor_table(psi, prod.array)
    return complex(np.sum(psi.amps * np.prod(table, axis=-1)))


def overlaps(psi: PureState, factors: np.ndarray) -> np.ndarray:
    """Vectorized ``overlap`` for a stack of factor arrays of shape (..., n, 2)."""
    factors = np.asarray(factors, dtype=complex)
    if factors.shape[-2:] != (psi.qubit_count, 2):
        raise StateError(f"factor stack shape {factors.shape} does not match {psi.qubit_count} qubits")
    table = _factor_table(psi, factors)
    return np.sum(psi.amps * np.prod(table, axis=-1), axis=-1)


def partial_inner(psi: PureState, prod: ProductState, k: int) -> np.ndarray:
    """Contract every factor except qubit k (1-based) against psi.

    Returns the unnormalized 2-vector whose normalization maximizes the
    overlap over factor k with the others held fixed.
    """
    _match(psi, prod)
    j = _check_qubit(k, psi.qubit_count)
    return _partial(psi, prod.array, j)


def _partial(psi: PureState, factors: np.ndarray, j: int) -> np.ndarray:
    table = _factor_table(psi, factors)
    table[..., j] = 1.0
    weights = psi.amps * np.prod(table, axis=-1)
    mask = psi.bits[:, j] == 1
    out = np.empty(weights.shape[:-1] + (2,), dtype=complex)
    out[..., 0] = np.sum(np.where(mask, 0.0, weights), axis=-1)
    out[..., 1] = np.sum(np.where(mask, weights, 0.0), axis=-1)
    return out


def reduced_density(psi: PureState, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every qubit not in ``keep`` (1-based, order preserved)."""
    n = psi.qubit_count
    keep = list(keep)
    if not keep:
        raise StateError("keep must name at least one qubit")
    idx = [_check_qubit(k, n) for k in keep]
    if len(set(idx)) != len(idx):
        raise StateError(f"repeated qubit in keep={keep}")
    if len(idx) > MAX_DENSE_QUBITS:
        raise StateError(f"reduced density capped at {MAX_DENSE_QUBITS} qubits")
    rest = [j for j in range(n) if j not in idx]
    # group amplitudes by the traced-out bits; only same-environment pairs interfere
    groups: dict[str, list[tuple[int, complex]]] = {}
    for label, amp in psi.amplitudes.items():
        env = "".join(label[j] for j in rest)
        row = int("".join(label[j] for j in idx), 2)
        groups.setdefault(env, []).append((row, amp))
    dim = 2 ** len(idx)
    rho = np.zeros((dim, dim), dtype=complex)
    for members in groups.values():
        rows = np.array([r for r, _ in members])
        vals = np.array([a for _, a in members])
        rho[np.ix_(rows, rows)] += np.outer(vals, vals.conj())
    return DensityMatrix(rho)


def pauli_expectations(rho: DensityMatrix) -> np.ndarray:
    """T[i, j, ...] = Tr[rho sigma_i x sigma_j x ...] over x, y, z."""
    k = rho.qubit_count
    t = rho.matrix.reshape((2,) * (2 * k))
    t = t.transpose([ax for j in range(k) for ax in (j, k + j)])
    for _ in range(k):
        # contract the leading (row, column) pair of the remaining qubit axes,
        # appending the Pauli index at the end
        t = np.einsum("ab...,pba->...p", t, PAULI)
    return t.real


def correlation_tensors(psi: PureState) -> CorrelationTensors:
    """Single, pair and triple Pauli correlations of qubits 1-3 of a 4-qubit state."""
    if psi.qubit_count != 4:
        raise StateError(f"correlation tensors need a 4-qubit state, got {psi.qubit_count}")
    r = np.array([pauli_expectations(reduced_density(psi, [k])) for k in (1, 2, 3)])
    g = np.array(
        [
            pauli_expectations(reduced_density(psi, pair))
            for pair in ((2, 3), (1, 3), (1, 2))
        ]
    )
    h = pauli_expectations(reduced_density(psi, [1, 2, 3]))
    return CorrelationTensors(r_vectors=r, g_matrices=g, h_tensor=h)
