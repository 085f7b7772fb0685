"""End-to-end numerical checks of every closed form against the oracles.

``run_checks`` executes them in order; ``level='quick'`` shrinks the
sample sizes so the whole suite finishes in well under a minute.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import closed_form as cf
from . import oracle, stationarity, witness
from .qstate import PureState, WParams, correlation_tensors, overlap, w_state

ONE_PARAM_QS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7)


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"[{status}] {self.name}: worst={self.worst:.3e} tol={self.tol:.0e} ({self.seconds:.1f}s){extra}"


def _result(name, worst, tol, detail="", ok=True):
    return CheckResult(name, bool(ok and worst < tol), float(worst), tol, detail)


def check_equal_coefficient_law(level="full", seed=42):
    worst = max(
        abs(cf.pmax_wn_one_param(n, 1 / math.sqrt(n)).pmax - (1 - 1 / n) ** (n - 1))
        for n in range(3, 11)
    )
    return _result("equal-coefficient law", worst, 1e-12)


def check_reduction_law(level="full", seed=42):
    worst = max(
        abs(cf.pmax_wn_one_param(n, 0.0).pmax - (1 - 1 / (n - 1)) ** (n - 2))
        for n in range(4, 11)
    )
    return _result("q = 0 reduction law", worst, 1e-12)


def check_one_param_sweep(level="full", seed=42):
    ns = (4, 5, 6) if level == "full" else (4,)
    qs = np.linspace(0.0, 0.99, 50 if level == "full" else 12)
    worst = 0.0
    for n in ns:
        for q in qs:
            psi = w_state(WParams.one_param(n, q))
            num = oracle.alternating_maximize(psi, seed=seed).pmax
            worst = max(worst, abs(num - cf.pmax_wn_one_param(n, q).pmax))
    edge = 1 / math.sqrt(2)
    branch_gap = max(
        abs(cf.pmax_wn_one_param(n, q).pmax - 0.5)
        for n in ns
        for q in (edge - 1e-12, edge, edge + 1e-12)
    )
    regimes_ok = all(
        cf.pmax_wn_one_param(n, edge - 1e-6).regime == cf.HIGHLY
        and cf.pmax_wn_one_param(n, edge + 1e-6).regime == cf.SLIGHTLY
        for n in ns
    )
    return _result(
        f"one-parameter sweep vs oracle (n={','.join(map(str, ns))}, {len(qs)} q values)",
        worst,
        1e-6,
        f"branch gap at 1/sqrt2={branch_gap:.1e}",
        ok=branch_gap < 1e-9 and regimes_ok,
    )


def w4_grid(steps: int = 40, stop: float = 0.975):
    """(a, b) grid points with a^2 + b^2 <= 1, plus the skipped ones."""
    axis = np.linspace(0.0, stop, steps)
    inside, skipped = [], []
    for a in axis:
        for b in axis:
            (inside if a * a + b * b <= 1.0 else skipped).append((float(a), float(b)))
    return inside, skipped


def check_two_param_grid(level="full", seed=42):
    if level == "full":
        points, _ = w4_grid(40, 0.975)
    else:
        points, _ = w4_grid(10, 0.9)
    worst, surface = 0.0, []
    for a, b in points:
        closed = cf.pmax_w4_two_param(a, b).pmax
        surface.append((closed, a, b))
        num = oracle.alternating_maximize(w_state(cf.w4_two_param_params(a, b)), seed=seed).pmax
        worst = max(worst, abs(num - closed))
    low, la, lb = min(surface)
    at_w = abs(la - 0.5) < 1e-12 and abs(lb - 0.5) < 1e-12
    return _result(
        f"two-parameter grid vs oracle ({len(points)} points)",
        worst,
        1e-6,
        f"min={low:.12g} at a={la:g}, b={lb:g}",
        ok=at_w and abs(low - 27 / 64) < 1e-9,
    )


def line_point(a: float) -> float:
    """b on the 2q = a + b line for given a."""
    return (-a + math.sqrt(6 - 8 * a * a)) / 3


def check_special_cases(level="full", seed=42):
    devs = []
    for b in np.linspace(0.05, 1 / math.sqrt(2), 12):  # b^2 <= 2q^2
        q2 = (1 - b * b) / 2
        devs.append(abs(cf.pmax_w4_two_param(0.0, b).pmax - 4 * q2 * q2 / (4 * q2 - b * b)))
        devs.append(abs(cf.abqq_stable(0.0, b) - 4 * q2 * q2 / (4 * q2 - b * b)))
    for b in np.linspace(0.0, 0.7, 12):
        a = math.sqrt((1 - b * b) / 3)
        if b * b <= 3 * a * a:
            special2 = 4 * (1 - b * b) ** 3 / (3 - 4 * b * b) ** 2
            devs.append(abs(cf.pmax_w4_two_param(a, b).pmax - special2))
    h = 1e-4
    for a in np.linspace(cf.LINE_MIN + 0.01, cf.LINE_MAX - 0.01, 9):
        b = line_point(a)
        f = lambda d: 0.5 * (cf.abqq_stable(a, b + d) + cf.abqq_stable(a, b - d))
        extrapolated = (4 * f(h) - f(2 * h)) / 3
        devs.append(abs(extrapolated - cf.special_line_pmax(a, b)))
        devs.append(abs(cf.pmax_w4_two_param(a, b).pmax - cf.special_line_pmax(a, b)))
    a, b = math.sqrt(2) / 2, math.sqrt(2) / 6
    devs.append(abs(cf.pmax_w4_two_param(a, b).pmax - 0.5))
    devs.append(abs(cf.pmax_w4_two_param(b, a).pmax - 0.5))
    return _result("special-case identities", max(devs), 1e-9)


def check_stationarity(level="full", seed=42):
    edge = 1 / math.sqrt(2)
    # both symmetric families are valid for q <= 1/sqrt(2)
    worst_l = max(
        stationarity.solve_symmetric(n, q).residual
        for n in (3, 4)
        for q in np.linspace(0.0, edge, 20)
    )
    worst_f = 0.0
    for n in range(3, 9):
        for q in ONE_PARAM_QS:
            psi = w_state(WParams.one_param(n, q))
            worst_f = max(worst_f, oracle.verify_fixed_point(psi, cf.nearest_wn_one_param(n, q)).residual)
    return _result(
        "stationarity residuals (fixed point; Lagrange tol 1e-10)",
        worst_f,
        1e-12,
        f"worst Lagrange residual={worst_l:.1e}",
        ok=worst_l < 1e-10,
    )


def check_nearest_consistency(level="full", seed=42):
    worst = 0.0
    for n in range(3, 9):
        for q in ONE_PARAM_QS:
            psi = w_state(WParams.one_param(n, q))
            value = abs(overlap(psi, cf.nearest_wn_one_param(n, q))) ** 2
            worst = max(worst, abs(value - cf.pmax_wn_one_param(n, q).pmax))
    return _result("nearest-state overlap", worst, 1e-12)


def check_witness(level="full", seed=42):
    samples = 10_000 if level == "full" else 1_000
    worst_self = -math.inf
    worst_scan = math.inf
    worst_nearest = 0.0
    for n in range(3, 7):
        for q in (0.2, 0.5, 0.8):
            w = witness.build_witness(n, q)
            on_w = witness.evaluate(w, w.w_state)
            if abs(on_w - (w.pmax - 1)) > 1e-12:
                worst_self = math.inf
            worst_self = max(worst_self, on_w)
            worst_scan = min(worst_scan, witness.separable_scan(w, samples, seed))
            nearest = cf.pmax_wn_one_param(n, q).nearest
            worst_nearest = max(worst_nearest, abs(witness.evaluate(w, nearest)))
    ok = worst_self < 0 and worst_scan >= -1e-10
    return _result(
        "witness inequalities",
        worst_nearest,
        1e-10,
        f"max Tr(W psi)={worst_self:.3g}, min separable={worst_scan:.3e}",
        ok=ok,
    )


def random_triples(rng: np.random.Generator, count: int) -> list[WParams]:
    return [WParams.normalized(np.abs(rng.standard_normal(3))) for _ in range(count)]


def check_w3_random(level="full", seed=42):
    rng = np.random.default_rng(seed)
    triples = random_triples(rng, 200 if level == "full" else 30)
    worst, regimes = 0.0, set()
    for p in triples:
        closed = cf.pmax_w3(p)
        regimes.add(closed.regime)
        num = oracle.alternating_maximize(w_state(p), seed=seed).pmax
        worst = max(worst, abs(num - closed.pmax))
    both = {cf.HIGHLY, cf.SLIGHTLY} <= regimes
    return _result(f"three-qubit closed form vs oracle ({len(triples)} triples)", worst, 1e-6,
                   f"regimes={sorted(regimes)}", ok=both)


def random_state(rng: np.random.Generator, n: int) -> PureState:
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return PureState.from_vector(v / np.linalg.norm(v))


def check_two_qubit_random(level="full", seed=42):
    rng = np.random.default_rng(seed)
    count = 100 if level == "full" else 20
    worst = 0.0
    for _ in range(count):
        psi = random_state(rng, 2)
        worst = max(worst, abs(cf.pmax_two_qubit(psi).pmax - oracle.grid_search(psi).pmax))
    return _result(f"two-qubit formula vs grid search ({count} states)", worst, 1e-5)


def check_oracle_properties(level="full", seed=42):
    rng = np.random.default_rng(seed)
    count = 50 if level == "full" else 10
    worst_drop = 0.0
    identical = True
    for i in range(count):
        n = 2 + i % 7
        psi = random_state(rng, n)
        factors = np.stack([oracle.random_factors(oracle.start_rng(seed, s), n) for s in range(4)])
        trace = [oracle.precise_objective(psi, factors)]
        oracle.ascend(psi, factors, max_iters=2000, trace=trace)
        steps = np.diff(np.array(trace), axis=0)
        worst_drop = max(worst_drop, float(-steps.min()))
        if i < 10:
            r1 = oracle.alternating_maximize(psi, starts=8, seed=seed)
            r2 = oracle.alternating_maximize(psi, starts=8, seed=seed)
            identical &= (
                r1.pmax == r2.pmax
                and np.array_equal(r1.nearest.array, r2.nearest.array)
                and r1.iterations == r2.iterations
            )
    return CheckResult(
        f"oracle monotonicity and determinism ({count} states)",
        identical and worst_drop <= 1e-15,
        worst_drop,
        1e-15,
        f"bit-identical reruns={identical}",
    )


CHECKS: list[tuple[str, Callable[..., CheckResult]]] = [
    ("equal-coefficient", check_equal_coefficient_law),
    ("reduction", check_reduction_law),
    ("one-param-sweep", check_one_param_sweep),
    ("two-param-grid", check_two_param_grid),
    ("special-cases", check_special_cases),
    ("stationarity", check_stationarity),
    ("nearest", check_nearest_consistency),
    ("witness", check_witness),
    ("w3-random", check_w3_random),
    ("two-qubit", check_two_qubit_random),
    ("oracle-properties", check_oracle_properties),
]


def run_check(fn, level="full", seed=42) -> CheckResult:
    t0 = time.perf_counter()
    try:
        res = fn(level=level, seed=seed)
    except Exception as exc:  # a crash is a failed check, not an aborted suite
        res = CheckResult(fn.__name__, False, math.inf, 0.0, f"error: {exc!r}")
    res.seconds = time.perf_counter() - t0
    return res


def run_checks(level="full", seed=42, report=print) -> list[CheckResult]:
    results = []
    for _, fn in CHECKS:
        res = run_check(fn, level, seed)
        if report is not None:
            report(res.line())
        results.append(res)
    return results
