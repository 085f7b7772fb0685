import math

import numpy as np
import pytest

from wentangle import closed_form as cf
from wentangle import oracle
from wentangle import stationarity as st
from wentangle.qstate import (
    BlochVector,
    ProductState,
    StateError,
    WParams,
    correlation_tensors,
    overlap,
    partial_inner,
    w_state,
)

UP = BlochVector(0.0, 0.0, 1.0)
DOWN = BlochVector(0.0, 0.0, -1.0)
EDGE = 1 / math.sqrt(2)


def best_overlap(psi, vectors):
    """|<q_1..q_n|psi>|^2 with q_n the normalized partial inner product."""
    n = psi.qubit_count
    factors = [v.to_factor() for v in vectors] + [(1.0, 0.0)]
    v = partial_inner(psi, ProductState(tuple(factors)), n)
    return float(np.linalg.norm(v) ** 2)


def random_xz(rng):
    t = rng.uniform(0, 2 * math.pi)
    return BlochVector.xz(math.sin(t), math.cos(t))


def stationary_bloch(coeffs):
    """Bloch vectors of qubits 1..3 at the oracle's maximizer."""
    psi = w_state(WParams(coeffs))
    prod = st.real_gauge(oracle.alternating_maximize(psi).nearest)
    return [BlochVector.from_factor(f) for f in prod.factors[:3]]


class TestObjective3:
    def test_equal_w3(self):
        p = WParams((1 / math.sqrt(3),) * 3)
        sol = st.solve_symmetric(3, 1 / math.sqrt(3))
        assert st.objective_bloch3(p, *sol.s_vectors) == pytest.approx(4 / 9, abs=1e-12)

    def test_poles(self):
        p = WParams((0.6, 0.48, 0.64))
        assert st.objective_bloch3(p, UP, UP) == pytest.approx(0.64**2, abs=1e-15)
        assert st.objective_bloch3(p, DOWN, DOWN) == pytest.approx(0.0, abs=1e-15)

    def test_non_unit(self):
        with pytest.raises(StateError):
            st.objective_bloch3(WParams((0.6, 0.48, 0.64)), BlochVector(0, 0, 0.5), UP)

    def test_matches_overlap(self, rng):
        for _ in range(20):
            p = WParams.normalized(rng.uniform(0, 1, 3))
            s = [random_xz(rng), random_xz(rng)]
            assert st.objective_bloch3(p, *s) == pytest.approx(best_overlap(w_state(p), s), abs=1e-12)


class TestObjective4:
    def test_equal_w4(self):
        t = correlation_tensors(w_state((0.5,) * 4))
        sol = st.solve_symmetric(4, 0.5)
        assert st.objective_bloch4(t, *sol.s_vectors) == pytest.approx(27 / 64, abs=1e-12)

    def test_poles(self):
        p = WParams.normalized((0.3, 0.5, 0.6, 0.4))
        t = correlation_tensors(w_state(p))
        assert st.objective_bloch4(t, UP, UP, UP) == pytest.approx(p.squares[3], abs=1e-15)

    def test_matches_overlap(self, rng):
        for _ in range(20):
            p = WParams.normalized(rng.uniform(0, 1, 4))
            t = correlation_tensors(w_state(p))
            s = [random_xz(rng) for _ in range(3)]
            assert st.objective_bloch4(t, *s) == pytest.approx(best_overlap(w_state(p), s), abs=1e-12)

    @pytest.mark.parametrize("q", np.linspace(0, EDGE, 9))
    def test_solved_family_matches_closed_form(self, q):
        assert st.solve_symmetric(4, q).objective == pytest.approx(cf.pmax_wn_one_param(4, q).pmax, abs=1e-12)

    def test_maximality(self, rng):
        q = 0.3
        t = correlation_tensors(w_state(WParams.one_param(4, q)))
        best = st.solve_symmetric(4, q).objective
        for _ in range(1000):
            v = rng.standard_normal((3, 3))
            v /= np.linalg.norm(v, axis=1, keepdims=True)
            assert st.objective_bloch4(t, *(BlochVector(*row) for row in v)) <= best + 1e-12


class TestResiduals:
    def test_solved_point(self):
        t = correlation_tensors(w_state(WParams.one_param(4, 0.3)))
        v = st.solve_symmetric(4, 0.3).s_vectors
        assert np.max(np.abs(st.residual_lagrange4(t, *v))) < 1e-12
        assert np.max(st.gradient_alignment4(t, *v)) < 1e-12

    def test_one_hot_direction(self):
        t = correlation_tensors(w_state(WParams.normalized((0.3, 0.5, 0.6, 0.4))))
        assert np.max(np.abs(st.residual_lagrange4(t, UP, UP, UP))) < 1e-12

    def test_random_is_not_stationary(self, rng):
        t = correlation_tensors(w_state((0.5,) * 4))
        values = [np.max(np.abs(st.residual_lagrange4(t, *(random_xz(rng) for _ in range(3))))) for _ in range(20)]
        assert np.median(values) > 1e-3

    def test_rejects_y_component(self):
        t = correlation_tensors(w_state((0.5,) * 4))
        with pytest.raises(StateError):
            st.residual_lagrange4(t, BlochVector(0, 1, 0), UP, UP)

    @pytest.mark.parametrize("q", np.linspace(0, EDGE, 7))
    def test_three_qubit_symmetric(self, q):
        sol = st.solve_symmetric(3, q)
        assert sol.residual < 1e-10
        assert sol.objective == pytest.approx(cf.pmax_wn_one_param(3, q).pmax, abs=1e-12)

    def test_oracle_stationary_point(self):
        coeffs = WParams.normalized((0.35, 0.45, 0.55, 0.5)).coefficients
        s = stationary_bloch(coeffs)
        t = correlation_tensors(w_state(coeffs))
        assert np.max(np.abs(st.residual_lagrange4(t, *s))) < 1e-9
        assert np.max(st.gradient_alignment4(t, *s)) < 1e-9

    @pytest.mark.parametrize("perm, swap", [((1, 0, 2, 3), (1, 0, 2)), ((2, 1, 0, 3), (2, 1, 0))])
    def test_symmetry_relations(self, perm, swap):
        coeffs = WParams.normalized((0.35, 0.45, 0.55, 0.5)).coefficients
        s = stationary_bloch(coeffs)
        swapped = tuple(coeffs[i] for i in perm)
        t = correlation_tensors(w_state(swapped))
        assert np.max(np.abs(st.residual_lagrange4(t, *(s[i] for i in swap)))) < 1e-9
        # and the solver finds the swapped vectors directly
        s2 = stationary_bloch(swapped)
        for i, j in enumerate(swap):
            assert s2[i].as_array() == pytest.approx(s[j].as_array(), abs=1e-6)


class TestSolveSymmetric:
    def test_three_qubit_equal(self):
        sol = st.solve_symmetric(3, 1 / math.sqrt(3))
        assert sol.s_vectors[0].z == pytest.approx(1 / 3, abs=1e-15)
        assert sol.objective == pytest.approx(4 / 9, abs=1e-12)

    def test_four_qubit_equal(self):
        sol = st.solve_symmetric(4, 0.5)
        assert sol.s_vectors[0].z == pytest.approx(0.5, abs=1e-15)
        assert sol.objective == pytest.approx(27 / 64, abs=1e-12)

    def test_boundary_is_pole(self):
        sol = st.solve_symmetric(3, EDGE)
        assert sol.s_vectors[0].x == pytest.approx(0, abs=1e-7)
        assert sol.s_vectors[0].z == pytest.approx(1, abs=1e-12)

    def test_invariants(self):
        for n in (3, 4):
            for q in np.linspace(0, EDGE, 5):
                for v in st.solve_symmetric(n, q).s_vectors:
                    assert v.is_unit(1e-9) and v.y == 0

    @pytest.mark.parametrize("n, q", [(3, 0.9), (5, 0.3), (4, 1.5)])
    def test_errors(self, n, q):
        with pytest.raises(StateError):
            st.solve_symmetric(n, q)

    def test_pq_ratio(self):
        # at a stationary point s1x / s1z = P / Q
        coeffs = WParams.normalized((0.35, 0.45, 0.55, 0.5)).coefficients
        cache = {}

        def s1z(c):
            key = tuple(round(x, 14) for x in c)
            if key not in cache:
                cache[key] = stationary_bloch(c)[0].z
            return cache[key]

        s1 = stationary_bloch(coeffs)[0]
        p, q = st.single_variable_pq(coeffs, s1z)
        assert s1.x * q == pytest.approx(s1.z * p, abs=1e-7)

    def test_pq_symmetric_closed_form(self):
        q4 = 0.4
        coeffs = WParams.one_param(4, q4).coefficients
        p, q = st.single_variable_pq(coeffs, lambda c: st.symmetric_sz(4, q4))
        sol = st.solve_symmetric(4, q4).s_vectors[0]
        assert sol.x / sol.z == pytest.approx(p / q, rel=1e-12)


def test_real_gauge_makes_maximizer_real():
    psi = w_state(WParams.normalized((0.35, 0.45, 0.55, 0.5)))
    prod = st.real_gauge(oracle.alternating_maximize(psi).nearest)
    assert np.max(np.abs(prod.array.imag)) < 1e-9
    assert abs(overlap(psi, prod)) ** 2 == pytest.approx(oracle.alternating_maximize(psi).pmax, abs=1e-14)
