import math

import numpy as np
import pytest

from helpers import SIN2_QUARTER_TURN, random_words

from qfa.analysis import RandomSpec, gpfa_equivalent, random_kwqfa, random_nqfa, random_qfc
from qfa.convert import (
    first_accept_control,
    kwqfa_to_nqfa,
    kwqfa_to_qfc,
    nqfa_to_gpfa,
    outcome_operator_matrix,
    pfa_to_gpfa,
    qfc_to_gpfa,
    step_operator_blocks,
)
from qfa.errors import ValidationError
from qfa.fixtures import (
    always_accept_kwqfa,
    binary_expansion_pfa,
    dephasing_nqfa,
    rotation_kwqfa,
    trivial_qfc,
)
from qfa.linalg import hermitian_basis, hs_inner
from qfa.models import KWQFA, NQFA, qfc_violations
from qfa.sim import run_gpfa, run_kwqfa_pure, run_nqfa, run_qfc


class TestKwqfaToNqfa:
    def test_rotation_machine_agrees_bit_for_bit(self):
        k = rotation_kwqfa(math.pi / 4)
        n = kwqfa_to_nqfa(k)
        assert type(n) is NQFA and not isinstance(n, KWQFA)
        for length in range(17):
            word = ("a",) * length
            assert run_nqfa(k, word).final_accept == run_nqfa(n, word).final_accept

    def test_always_accept_machine(self):
        n = kwqfa_to_nqfa(always_accept_kwqfa())
        assert run_nqfa(n, ("a",) * 3).final_accept == 1.0

    def test_random_machine_matches_pure_state_oracle(self):
        m = random_kwqfa(RandomSpec(seed=17, states=4, alphabet_size=2))
        n = kwqfa_to_nqfa(m)
        for word in random_words(m.alphabet.symbols, 20, 10, 18):
            assert abs(run_nqfa(n, word).final_accept - run_kwqfa_pure(m, word).final_accept) <= 1e-12

    def test_fields_are_shared(self):
        m = rotation_kwqfa(1.0)
        n = kwqfa_to_nqfa(m)
        assert n.states is m.states
        assert n.unitaries is m.unitaries
        assert n.measurements is m.measurements


class TestNqfaToGpfa:
    def test_state_count_law(self):
        for n in (2, 3, 4, 5):
            m = random_nqfa(RandomSpec(seed=n, states=n, alphabet_size=2))
            assert nqfa_to_gpfa(m).size == n * n + 1
        assert nqfa_to_gpfa(kwqfa_to_nqfa(always_accept_kwqfa())).size == 5
        assert nqfa_to_gpfa(random_nqfa(RandomSpec(seed=0, states=3, alphabet_size=1))).size == 10

    def test_always_accept_machine_values_one(self):
        g = nqfa_to_gpfa(kwqfa_to_nqfa(always_accept_kwqfa(("a", "b"))))
        for word in random_words(("a", "b"), 10, 8, 3):
            assert abs(run_gpfa(g, word) - 1.0) <= 1e-12

    def test_rotation_machine_closed_form(self):
        g = nqfa_to_gpfa(kwqfa_to_nqfa(rotation_kwqfa(math.pi / 4)))
        for k in range(33):
            assert abs(run_gpfa(g, ("a",) * k) - SIN2_QUARTER_TURN[k % 8]) <= 1e-9

    def test_dephasing_machine(self):
        g = nqfa_to_gpfa(dephasing_nqfa(math.pi / 4))
        assert abs(run_gpfa(g, ())) <= 1e-9
        for k in range(1, 33):
            assert abs(run_gpfa(g, ("a",) * k) - 0.5) <= 1e-9

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_simulator_on_random_machines(self, seed):
        n = 2 + seed % 4
        sigma = 1 + seed % 3
        m = random_nqfa(RandomSpec(seed=seed + 40, states=n, alphabet_size=sigma))
        g = nqfa_to_gpfa(m)
        assert g.size == n * n + 1
        for word in random_words(m.alphabet.symbols, 10, 12, seed + 41):
            direct = run_nqfa(m, word).final_accept
            compiled = run_gpfa(g, word)
            assert abs(direct - compiled) <= 1e-9
            assert -1e-9 <= compiled <= 1 + 1e-9

    def test_step_operators_are_real(self):
        # recompute a few coefficients of the linearized step independently
        # and check the imaginary parts are floating noise only
        m = random_nqfa(RandomSpec(seed=77, states=3, alphabet_size=1))
        basis = hermitian_basis(3)
        halt = [q in m.accepting or q in m.rejecting for q in m.states]
        for sym in m.alphabet.tape_symbols:
            survive, collect = step_operator_blocks(m, sym, basis)
            u = m.unitaries[sym]
            for j, e in enumerate(basis.elements):
                evolved = u @ e @ u.conj().T
                measured = sum(
                    p @ evolved @ p.conj().T for p in m.measurements[sym].projectors
                )
                survived = measured.copy()
                survived[halt, :] = 0
                survived[:, halt] = 0
                for i, f in enumerate(basis.elements):
                    coeff = hs_inner(f, survived)
                    assert abs(coeff.imag) <= 1e-12
                    assert abs(survive[i, j] - coeff.real) <= 1e-12
                halting_mass = complex(
                    sum(measured[i, i] for i, q in enumerate(m.states) if q in m.accepting)
                )
                assert abs(halting_mass.imag) <= 1e-12
                assert abs(collect[j] - halting_mass.real) <= 1e-12


class TestKwqfaToQfc:
    def test_control_language_is_the_documented_four_state_dfa(self):
        dfa = first_accept_control()
        assert len(dfa.states) == 4
        assert dfa.accepting == frozenset({"accepted"})
        state = dfa.start
        for outcome in ("g", "g", "a", "r", "g"):
            state = dfa.step(state, outcome)
        assert state == "accepted"
        state = dfa.start
        for outcome in ("g", "r", "a"):
            state = dfa.step(state, outcome)
        assert state == "dead"

    def test_output_is_valid(self):
        q = kwqfa_to_qfc(rotation_kwqfa(math.pi / 4))
        assert qfc_violations(q) == []
        assert len(q.control.states) == 4

    def test_rotation_machine_closed_form(self):
        q = kwqfa_to_qfc(rotation_kwqfa(math.pi / 4))
        for k in range(17):
            assert abs(run_qfc(q, ("a",) * k).final_accept - SIN2_QUARTER_TURN[k % 8]) <= 1e-12

    def test_always_accept_machine(self):
        q = kwqfa_to_qfc(always_accept_kwqfa())
        for k in range(5):
            assert abs(run_qfc(q, ("a",) * k).final_accept - 1.0) <= 1e-12

    def test_random_machines_match_simulator(self):
        for seed in range(5):
            m = random_kwqfa(RandomSpec(seed=seed + 90, states=3, alphabet_size=2))
            q = kwqfa_to_qfc(m)
            source = kwqfa_to_nqfa(m)
            for word in random_words(m.alphabet.symbols, 20, 10, seed + 91):
                assert (
                    abs(run_qfc(q, word).final_accept - run_nqfa(source, word).final_accept)
                    <= 1e-9
                )

    def test_refuses_non_identity_measurements(self):
        with pytest.raises(ValidationError):
            kwqfa_to_qfc(dephasing_nqfa(1.0))


class TestQfcToGpfa:
    def test_trivial_qfc_gives_one_state_machine(self):
        g = qfc_to_gpfa(trivial_qfc())
        assert g.size == 1
        for k in range(5):
            assert abs(run_gpfa(g, ("a",) * k) - 1.0) <= 1e-12

    def test_state_count_law(self):
        q = kwqfa_to_qfc(rotation_kwqfa(math.pi / 4))
        g = qfc_to_gpfa(q)
        assert g.size == len(q.control.states) * q.n**2 == 64

    def test_rotation_chain_closed_form(self):
        g = qfc_to_gpfa(kwqfa_to_qfc(rotation_kwqfa(math.pi / 4)))
        for k in range(33):
            assert abs(run_gpfa(g, ("a",) * k) - SIN2_QUARTER_TURN[k % 8]) <= 1e-9

    def test_random_qfc_matches_simulator(self):
        m = random_qfc(RandomSpec(seed=5, states=3, alphabet_size=2, control_states=2))
        g = qfc_to_gpfa(m)
        assert g.size == 2 * 9
        for word in random_words(m.alphabet.symbols, 30, 10, 6):
            assert abs(run_gpfa(g, word) - run_qfc(m, word).final_accept) <= 1e-9

    def test_outcome_operator_matrix_matches_direct_computation(self):
        rng = np.random.default_rng(8)
        from qfa.analysis import haar_unitary
        from qfa.linalg import vectorize

        u = haar_unitary(2, rng)
        p = np.diag([1.0, 0.0]).astype(complex)
        basis = hermitian_basis(2)
        mat = outcome_operator_matrix(u, p, basis)
        rho = np.array([[0.7, 0.1 + 0.2j], [0.1 - 0.2j, 0.3]])
        direct = p @ (u @ rho @ u.conj().T) @ p.conj().T
        assert np.max(np.abs(mat @ vectorize(rho, basis) - vectorize(direct, basis))) <= 1e-12


class TestPfaToGpfa:
    def test_identity_embedding_is_bit_exact(self):
        p = binary_expansion_pfa()
        g = pfa_to_gpfa(p)
        assert type(g).__name__ == "GPFA"
        assert run_gpfa(g, ("1",)) == 0.5
        for word in random_words(("0", "1"), 50, 12, 7):
            assert run_gpfa(g, word) == run_gpfa(p, word)

    def test_arrays_are_shared(self):
        p = binary_expansion_pfa()
        g = pfa_to_gpfa(p)
        assert g.initial is p.initial
        assert g.final is p.final


class TestDiagramCommutation:
    @pytest.mark.parametrize("seed", range(5))
    def test_both_pipelines_agree(self, seed):
        m = random_kwqfa(RandomSpec(seed=seed + 200, states=2 + seed % 3, alphabet_size=2))
        via_density = nqfa_to_gpfa(kwqfa_to_nqfa(m))
        via_control = qfc_to_gpfa(kwqfa_to_qfc(m))
        for word in random_words(m.alphabet.symbols, 40, 12, seed + 201):
            assert abs(run_gpfa(via_density, word) - run_gpfa(via_control, word)) <= 2e-9
        verdict = gpfa_equivalent(via_density, via_control, mode="numeric")
        assert verdict.equivalent
