import numpy as np
import pytest

from tomocausal.correlations import BipartiteState, quantum_causal_report, von_neumann_entropy
from tomocausal.linalg import InvalidStateError
from tomocausal.states import generate_mixed_state, make_rng

from conftest import ket, random_unitary


class TestVonNeumann:
    def test_pure(self):
        psi = ket(1, 2j, -1, 0.5)
        assert von_neumann_entropy(np.outer(psi, psi.conj())) == pytest.approx(0, abs=1e-12)

    def test_mixed_qubit(self):
        assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-15)

    def test_mixed_pair(self):
        assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-15)

    def test_invalid(self):
        with pytest.raises(InvalidStateError):
            von_neumann_entropy(np.diag([0.7, 0.7]))


class TestReport:
    def test_pure_entangled(self):
        s = BipartiteState.from_ket(ket(0.8, 0.1j, -0.3, 0.5))
        r = quantum_causal_report(s)
        assert r.ind_a_given_b == pytest.approx(-1, abs=1e-9)
        assert r.ind_b_given_a == pytest.approx(-1, abs=1e-9)
        assert r.d_q == pytest.approx(0, abs=1e-9)

    def test_product(self, product):
        r = quantum_causal_report(product)
        assert r.i_ab_q == pytest.approx(0, abs=1e-12)
        assert r.ind_a_given_b == pytest.approx(1, abs=1e-12)
        assert r.ind_b_given_a == pytest.approx(1, abs=1e-12)
        assert r.d_q == pytest.approx(0, abs=1e-12)

    def test_classical(self, classical):
        r = quantum_causal_report(classical)
        assert (r.s_a, r.s_b, r.s_ab, r.i_ab_q) == pytest.approx((1, 1, 1, 1), abs=1e-12)
        assert (r.ind_a_given_b, r.ind_b_given_a, r.d_q) == pytest.approx((0, 0, 0), abs=1e-12)

    def test_degenerate(self):
        s = BipartiteState.from_matrix(np.kron(np.diag([1, 0]), np.eye(2) / 2))
        r = quantum_causal_report(s)
        assert r.degenerate and r.d_q is None and r.ind_a_given_b is None
        assert r.s_b == pytest.approx(1)

    def test_random_states(self):
        for k in range(1000):
            s = generate_mixed_state(make_rng(k))
            r = quantum_causal_report(s)
            assert r.i_ab_q >= -1e-9
            assert r.i_ab_q == pytest.approx(r.s_a + r.s_b - r.s_ab, abs=1e-12)
            assert not r.degenerate
            assert abs(r.d_q) < 2
            assert r.ind_a_given_b == pytest.approx(1 - r.i_ab_q / r.s_a, abs=1e-12)
            assert r.d_q == pytest.approx(r.ind_a_given_b - r.ind_b_given_a, abs=1e-12)
            closed = r.i_ab_q * (r.s_a - r.s_b) / (r.s_a * r.s_b)
            assert r.d_q == pytest.approx(closed, abs=1e-9)

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(9)
        for k in range(200):
            s = generate_mixed_state(make_rng(k))
            v = np.kron(random_unitary(rng), random_unitary(rng))
            t = BipartiteState.from_matrix(v @ s.rho_ab @ v.conj().T)
            a, b = quantum_causal_report(s), quantum_causal_report(t)
            for f in ("s_a", "s_b", "s_ab", "i_ab_q", "d_q"):
                assert getattr(a, f) == pytest.approx(getattr(b, f), abs=1e-9)

    def test_pure_states_symmetric(self):
        rng = np.random.default_rng(10)
        for _ in range(200):
            psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            r = quantum_causal_report(BipartiteState.from_ket(psi))
            assert r.s_ab <= 1e-9
            assert r.s_a == pytest.approx(r.s_b, abs=1e-9)
