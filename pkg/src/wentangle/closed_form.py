"""Analytic maximal overlaps for W-type states and their nearest product states."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .qstate import (
    ProductState,
    PureState,
    StateError,
    WParams,
    reduced_density,
)

HIGHLY = "highly-entangled"
SLIGHTLY = "slightly-entangled"
BOUNDARY = "boundary"

BOUNDARY_TOL = 1e-12
DEGENERATE_TOL = 1e-9
# bounds on (a, b) along the 2q = a + b line inside the highly entangled region
LINE_MIN = math.sqrt(2) / 6
LINE_MAX = math.sqrt(2) / 2


@dataclass(frozen=True, eq=False)
class OverlapResult:
    """Maximal overlap with provenance.

    ``regime`` is None for purely numerical results.
    """

    pmax: float
    regime: Optional[str]
    method: str
    circumradius: Optional[float] = None
    nearest: Optional[ProductState] = None


def _regime(excess: float) -> str:
    """Classify by (largest square) - (sum of the others)."""
    if abs(excess) <= BOUNDARY_TOL:
        return BOUNDARY
    return SLIGHTLY if excess > 0 else HIGHLY


def one_hot(n: int, k: int) -> ProductState:
    """|0..010..0> with the excitation on qubit k (1-based)."""
    return ProductState.basis("0" * (k - 1) + "1" + "0" * (n - k))


def pmax_two_qubit(psi: PureState) -> OverlapResult:
    if psi.qubit_count != 2:
        raise StateError(f"expected a 2-qubit state, got {psi.qubit_count}")
    det = reduced_density(psi, [1]).det
    if abs(det) <= 1e-12:
        det = 0.0
    elif abs(det - 0.25) <= 1e-12:
        det = 0.25
    pmax = 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * det))
    regime = BOUNDARY if det == 0.25 else HIGHLY
    if det == 0.0:
        regime = SLIGHTLY
    return OverlapResult(pmax, regime, "two-qubit-det")


def circumradius(a: float, b: float, c: float) -> float:
    """Circumradius abc / (4 * area) with Heron's formula in Kahan's stable ordering."""
    a, b, c = sorted((a, b, c), reverse=True)
    if a > b + c:
        raise ValueError(f"sides {a}, {b}, {c} violate the triangle inequality")
    area16sq = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    if area16sq <= 0.0:
        raise ValueError("degenerate triangle has no finite circumradius")
    return a * b * c / math.sqrt(area16sq)


def pmax_w3(params: WParams) -> OverlapResult:
    """Three-qubit W-type state: 4 R^2 inside the acute-triangle region, else alpha^2."""
    if params.n != 3:
        raise StateError(f"expected 3 coefficients, got {params.n}")
    alpha, beta, gamma = sorted(params.coefficients, reverse=True)
    excess = alpha**2 - beta**2 - gamma**2
    regime = _regime(excess)
    if regime == HIGHLY:
        if alpha > beta + gamma:
            raise AssertionError("acute region must satisfy the triangle inequality")
        radius = circumradius(alpha, beta, gamma)
        return OverlapResult(4.0 * radius**2, regime, "w3-circumradius", circumradius=radius)
    # right triangle on the boundary: 4R^2 is exactly the hypotenuse squared
    k = params.coefficients.index(alpha) + 1
    return OverlapResult(
        alpha**2,
        regime,
        "w3-circumradius" if regime == BOUNDARY else "max-square",
        circumradius=alpha / 2 if regime == BOUNDARY else None,
        nearest=one_hot(3, k) if regime == SLIGHTLY else None,
    )


def pmax_wn_formula(n: int, q: float) -> float:
    """(1 - q^2)^(n-1) * ((n-2) / ((n-1) - n q^2))^(n-2), no branch logic."""
    q2 = q * q
    return (1.0 - q2) ** (n - 1) * ((n - 2) / ((n - 1) - n * q2)) ** (n - 2)


def _check_one_param(n: int, q: float):
    if int(n) != n or n < 3:
        raise StateError(f"n must be an integer >= 3, got {n}")
    if not 0.0 <= q <= 1.0:
        raise StateError(f"q must lie in [0, 1], got {q}")


def pmax_wn_one_param(n: int, q: float) -> OverlapResult:
    """a_1 = ... = a_{n-1} = a, a_n = q; the closed form holds up to q = 1/sqrt(2)."""
    _check_one_param(n, q)
    q2 = q * q
    regime = _regime(q2 - (1.0 - q2))
    if regime == SLIGHTLY:
        return OverlapResult(q2, regime, "max-square", nearest=one_hot(n, n))
    return OverlapResult(
        pmax_wn_formula(n, q),
        regime,
        "wn-one-param",
        nearest=nearest_wn_one_param(n, q),
    )


def nearest_wn_one_param(n: int, q: float, phase: float = 0.0) -> ProductState:
    """Closest product state to the one-parameter W_n state (highly entangled side)."""
    _check_one_param(n, q)
    a2 = (1.0 - q * q) / (n - 1)
    gap = (n - 1) * a2 - q * q
    if gap < -BOUNDARY_TOL:
        raise StateError(f"q={q} is outside the closed-form domain; use |0...01> there")
    gap = max(gap, 0.0)
    norm = math.sqrt((n - 1) ** 2 * a2 - q * q)
    e = complex(math.cos(phase), math.sin(phase))
    first = (math.sqrt((n - 1) * (n - 2) * a2) / norm, e * math.sqrt(gap) / norm)
    last = (math.sqrt((n - 1) * gap) / norm, e * math.sqrt(n - 2) * q / norm)
    return ProductState((first,) * (n - 1) + (last,))


def w4_two_param_params(a: float, b: float) -> WParams:
    q = math.sqrt(max(0.0, (1.0 - a * a - b * b) / 2.0))
    return WParams((a, b, q, q))


def abqq_literal(a: float, b: float) -> float:
    """The two-parameter formula exactly as a single rational expression.

    Loses all precision next to the 2q = a + b line, where numerator and
    denominator both vanish; kept for cross-checks away from it.
    """
    q2 = (1.0 - a * a - b * b) / 2.0
    x = 4 * q2 - a * a - b * b
    ab2 = a * a * b * b
    num = 2 * q2**2 * (x * (x * x - 36 * ab2) + (x * x + 12 * ab2) ** 1.5)
    return num / (x * x - 4 * ab2) ** 2


def abqq_stable(a: float, b: float) -> float:
    """Rationalized two-parameter formula, finite on the 2q = a + b line.

    With X = 4q^2 - a^2 - b^2, Y = 2ab and S = sqrt(X^2 + 3Y^2) the overlap
    equals 18 q^4 / (S + 3X + X^2 / (S + X)); for X < 0 the sum S + X is
    formed as 3Y^2 / (S - X).
    """
    q2 = (1.0 - a * a - b * b) / 2.0
    x = 4 * q2 - a * a - b * b
    y2 = 4 * a * a * b * b
    s = math.sqrt(x * x + 3 * y2)
    s_plus_x = s + x if x >= 0 else 3 * y2 / (s - x)
    if s_plus_x == 0.0:
        raise ZeroDivisionError("a = b = q = 0 has no W-type state")
    return 18 * q2 * q2 / (s + 3 * x + x * x / s_plus_x)


def special_line_pmax(a: float, b: float) -> float:
    """Value on the 2q = a + b line: (27/256) (a+b)^4 / (ab)."""
    return 27.0 / 256.0 * (a + b) ** 4 / (a * b)


def on_degenerate_line(a: float, b: float) -> bool:
    q2 = (1.0 - a * a - b * b) / 2.0
    x = 4 * q2 - a * a - b * b
    return abs(x * x - 4 * a * a * b * b) < DEGENERATE_TOL


def pmax_w4_two_param(a: float, b: float) -> OverlapResult:
    """Four-qubit state a|1000> + b|0100> + q|0010> + q|0001>."""
    if a < 0 or b < 0:
        raise StateError(f"a, b must be non-negative, got {a}, {b}")
    if a * a + b * b > 1.0 + 1e-12:
        raise StateError(f"a^2 + b^2 = {a * a + b * b} exceeds 1")
    params = w4_two_param_params(a, b)
    sq = sorted(params.squares, reverse=True)
    regime = _regime(sq[0] - sq[1] - sq[2] - sq[3])
    if regime == SLIGHTLY:
        k = int(np.argmax(params.coefficients)) + 1
        return OverlapResult(sq[0], regime, "max-square", nearest=one_hot(4, k))
    if on_degenerate_line(a, b) and a > 0 and b > 0:
        if regime == HIGHLY and not (LINE_MIN - 1e-9 <= min(a, b) and max(a, b) <= LINE_MAX + 1e-9):
            raise AssertionError(f"(a, b) = ({a}, {b}) on the 2q = a + b line outside its domain")
        return OverlapResult(special_line_pmax(a, b), regime, "w4-degenerate-line")
    return OverlapResult(abqq_stable(a, b), regime, "w4-two-param")


def pmax_slightly_entangled(params: WParams) -> Optional[OverlapResult]:
    """max_k a_k^2 when it is at least 1/2, otherwise None."""
    sq = params.squares
    k = int(np.argmax(sq))
    if sq[k] < 0.5 - BOUNDARY_TOL:
        return None
    regime = BOUNDARY if abs(sq[k] - 0.5) <= BOUNDARY_TOL else SLIGHTLY
    return OverlapResult(float(sq[k]), regime, "max-square", nearest=one_hot(params.n, k + 1))


def pmax_w(params: WParams) -> Optional[OverlapResult]:
    """Dispatch to whichever closed form covers these coefficients, if any."""
    c = params.coefficients
    slight = pmax_slightly_entangled(params)
    if slight is not None and slight.regime == SLIGHTLY:
        return slight
    if params.n == 2:
        return OverlapResult(max(params.squares), BOUNDARY, "max-square")
    if params.n == 3:
        return pmax_w3(params)
    if all(abs(x - c[0]) <= 1e-12 for x in c[:-1]):
        return pmax_wn_one_param(params.n, c[-1])
    if params.n == 4 and abs(c[2] - c[3]) <= 1e-12:
        return pmax_w4_two_param(c[0], c[1])
    return slight
