import math

import numpy as np
import pytest

from helpers import SIN2_QUARTER_TURN, random_words, reversed_binary_value

from qfa.analysis import RandomSpec, random_gpfa, random_kwqfa, random_nqfa
from qfa.errors import InputError, ValidationError
from qfa.fixtures import (
    always_accept_kwqfa,
    binary_expansion_pfa,
    dephasing_nqfa,
    rotation_kwqfa,
    trivial_qfc,
)
from qfa.linalg import is_density_like
from qfa.models import build_gpfa
from qfa.sim import (
    TOL_SIM,
    iter_nqfa_steps,
    run_gpfa,
    run_kwqfa_pure,
    run_nqfa,
    run_qfc,
    sweep,
)


def markov_accept_probability(k: int) -> float:
    """Independent oracle for the dephasing machine: the live plane mixes
    like a two-state chain with uniform transitions; the right marker sends
    the q1 component to the accepting state."""
    p = np.array([1.0, 0.0])
    chain = np.array([[0.5, 0.5], [0.5, 0.5]])
    for _ in range(k):
        p = p @ chain
    return float(p[1])


class TestRunNqfa:
    def test_always_accept_machine(self):
        m = always_accept_kwqfa(("a", "b"))
        for word in [(), ("a",), ("b", "a"), ("a",) * 7]:
            result = run_nqfa(m, word)
            assert result.final_accept == 1.0
            assert result.final_reject == 0.0
            assert result.residual == 0.0

    @pytest.mark.parametrize("k", range(17))
    def test_rotation_machine_closed_form(self, k):
        m = rotation_kwqfa(math.pi / 4)
        got = run_nqfa(m, ("a",) * k).final_accept
        assert abs(got - SIN2_QUARTER_TURN[k % 8]) <= 1e-12

    def test_dephasing_machine_against_markov_chain(self):
        m = dephasing_nqfa(math.pi / 4)
        for k in range(11):
            got = run_nqfa(m, ("a",) * k).final_accept
            assert abs(got - markov_accept_probability(k)) <= 1e-12

    def test_dephasing_differs_from_coherent_machine(self):
        dephased = run_nqfa(dephasing_nqfa(math.pi / 4), ("a", "a")).final_accept
        coherent = run_nqfa(rotation_kwqfa(math.pi / 4), ("a", "a")).final_accept
        assert abs(dephased - 0.5) <= 1e-12
        assert abs(coherent - 1.0) <= 1e-12

    def test_unknown_symbol_rejected(self):
        with pytest.raises(InputError):
            run_nqfa(rotation_kwqfa(1.0), ("z",))

    def test_trace_is_one_record_per_tape_symbol(self):
        m = rotation_kwqfa(1.0)
        result = run_nqfa(m, ("a", "a"))
        assert [r.symbol for r in result.trace] == ["¢", "a", "a", "$"]


class TestConservationProperties:
    @pytest.mark.parametrize("seed", range(12))
    def test_random_machines_conserve_probability(self, seed):
        n = 2 + seed % 3
        m = random_nqfa(RandomSpec(seed=seed, states=n, alphabet_size=2))
        for word in random_words(m.alphabet.symbols, 4, 9, seed + 500):
            for _, rho, cum_acc, cum_rej in iter_nqfa_steps(m, word):
                survivor = float(np.trace(rho).real)
                assert abs(cum_acc + cum_rej + survivor - 1.0) <= TOL_SIM
                assert is_density_like(rho)

    @pytest.mark.parametrize("seed", range(6))
    def test_cumulative_probabilities_are_monotone(self, seed):
        m = random_nqfa(RandomSpec(seed=seed, states=3, alphabet_size=2))
        for word in random_words(m.alphabet.symbols, 4, 9, seed + 700):
            result = run_nqfa(m, word)
            last_acc = last_rej = 0.0
            for rec in result.trace:
                assert rec.cumulative_accept >= last_acc - 1e-15
                assert rec.cumulative_reject >= last_rej - 1e-15
                last_acc, last_rej = rec.cumulative_accept, rec.cumulative_reject

    def test_final_values_sum_to_one(self):
        m = random_nqfa(RandomSpec(seed=11, states=4, alphabet_size=2))
        for word in random_words(m.alphabet.symbols, 6, 10, 901):
            result = run_nqfa(m, word)
            assert abs(result.final_accept + result.final_reject - 1.0) <= TOL_SIM
            assert result.residual == 0.0


class TestPureStateCrossCheck:
    @pytest.mark.parametrize("seed", range(8))
    def test_pure_and_density_paths_agree(self, seed):
        m = random_kwqfa(RandomSpec(seed=seed, states=2 + seed % 4, alphabet_size=2))
        for word in random_words(m.alphabet.symbols, 5, 10, seed + 300):
            dens = run_nqfa(m, word)
            pure = run_kwqfa_pure(m, word)
            assert abs(dens.final_accept - pure.final_accept) <= 1e-12
            assert abs(dens.final_reject - pure.final_reject) <= 1e-12
            for a, b in zip(dens.trace, pure.trace):
                assert a.symbol == b.symbol
                assert abs(a.cumulative_accept - b.cumulative_accept) <= 1e-12
                assert abs(a.cumulative_reject - b.cumulative_reject) <= 1e-12
                assert abs(a.survivor_trace - b.survivor_trace) <= 1e-12

    def test_refuses_non_identity_measurements(self):
        with pytest.raises(ValidationError):
            run_kwqfa_pure(dephasing_nqfa(1.0), ("a",))


class TestRunQfc:
    def test_accept_all_control(self):
        m = trivial_qfc(accept_all=True)
        for word in [(), ("a",), ("a",) * 5]:
            assert run_qfc(m, word).final_accept == 1.0

    def test_accept_nothing_control(self):
        m = trivial_qfc(accept_all=False)
        for word in [(), ("a",), ("a",) * 5]:
            assert run_qfc(m, word).final_accept == 0.0

    def test_total_probability_preserved_each_step(self):
        from qfa.analysis import random_qfc

        m = random_qfc(RandomSpec(seed=3, states=3, alphabet_size=2, control_states=3))
        for word in random_words(m.alphabet.symbols, 5, 8, 42):
            result = run_qfc(m, word)
            for rec in result.trace:
                assert abs(rec.survivor_trace - 1.0) <= TOL_SIM
            assert abs(result.final_accept + result.final_reject - 1.0) <= TOL_SIM


class TestRunGpfa:
    def test_empty_word_is_initial_dot_final(self):
        g = build_gpfa(("a",), (1.0,), {"a": [[1.0]]}, (1.0,))
        assert run_gpfa(g, ()) == 1.0

    def test_scalar_halving(self):
        g = build_gpfa(("a",), (1.0,), {"a": [[0.5]]}, (1.0,))
        assert run_gpfa(g, ("a",) * 3) == 0.125
        for k in range(10):
            assert run_gpfa(g, ("a",) * k) == 0.5**k

    def test_binary_expansion_values(self):
        b = binary_expansion_pfa()
        assert run_gpfa(b, ("1",)) == 0.5
        assert run_gpfa(b, ("1", "1")) == 0.75
        assert run_gpfa(b, tuple("1101")) == 0.6875

    @pytest.mark.parametrize("seed", range(6))
    def test_binary_expansion_oracle(self, seed):
        b = binary_expansion_pfa()
        for word in random_words(("0", "1"), 8, 12, seed):
            assert abs(run_gpfa(b, word) - float(reversed_binary_value(word))) <= 1e-12

    @pytest.mark.parametrize("seed", range(6))
    def test_split_evaluation_matches_single_pass(self, seed):
        g = random_gpfa(RandomSpec(seed=seed, states=4, alphabet_size=3))
        rng = np.random.default_rng(seed + 50)
        for word in random_words(g.alphabet, 6, 10, seed + 60):
            cut = int(rng.integers(0, len(word) + 1))
            head, tail = word[:cut], word[cut:]
            x = g.initial
            for sym in head:
                x = x @ g.transitions[sym]
            y = g.final
            for sym in reversed(tail):
                y = g.transitions[sym] @ y
            assert abs(run_gpfa(g, word) - float(x @ y)) <= 1e-12


class TestSweep:
    def test_rotation_table(self):
        rows = sweep(rotation_kwqfa(math.pi / 4), "a", 4)
        assert [k for k, _ in rows] == [0, 1, 2, 3, 4]
        for (_, got), want in zip(rows, [0.0, 0.5, 1.0, 0.5, 0.0]):
            assert abs(got - want) <= 1e-12

    def test_always_accept_table(self):
        rows = sweep(always_accept_kwqfa(), "a", 3)
        assert all(value == 1.0 for _, value in rows)

    def test_dephasing_table(self):
        rows = sweep(dephasing_nqfa(math.pi / 4), "a", 3)
        for (_, got), want in zip(rows, [0.0, 0.5, 0.5, 0.5]):
            assert abs(got - want) <= 1e-12

    def test_gpfa_and_qfc_dispatch(self):
        assert sweep(binary_expansion_pfa(), "1", 2)[2][1] == 0.75
        assert sweep(trivial_qfc(), "a", 2)[0][1] == 1.0

    def test_bad_symbol_rejected(self):
        with pytest.raises(InputError):
            sweep(always_accept_kwqfa(), "z", 3)

    def test_negative_length_rejected(self):
        with pytest.raises(InputError):
            sweep(always_accept_kwqfa(), "a", -1)
