"""Compilers between automaton models, preserving acceptance values.

The quantum-to-classical conversions all rest on one observation: a run of
a measured quantum machine is, per tape symbol, a real-linear map on
Hermitian matrices. Expressing that map in an orthonormal Hermitian basis
turns an n-state quantum machine into a real matrix automaton over n²
coordinates (plus, for the halting models, one accumulator coordinate for
the probability already collected). End markers are folded into the
initial and final vectors, so the outputs are marker-free GPFAs.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .linalg import HermitianBasis, hermitian_basis, max_abs, projector_family, vectorize
from .models import (
    DFA,
    GPFA,
    KWQFA,
    NQFA,
    PFA,
    QFC,
    build_gpfa,
    build_qfc,
)

# Imaginary parts above this in a supposedly-real linearization indicate a
# genuine bug rather than floating noise.
_REAL_TOL = 1e-12

HALT_CONTINUE = "g"
HALT_ACCEPT = "a"
HALT_REJECT = "r"


def _real_scalar(z: complex, what: str) -> float:
    if abs(z.imag) > _REAL_TOL:
        raise ValidationError(f"{what} has imaginary part {z.imag:.3e}")
    return float(z.real)


def kwqfa_to_nqfa(m: KWQFA) -> NQFA:
    """Forget the KWQFA tag; the fields (and hence the semantics) are shared."""
    return NQFA(
        states=m.states,
        initial=m.initial,
        accepting=m.accepting,
        rejecting=m.rejecting,
        alphabet=m.alphabet,
        unitaries=m.unitaries,
        measurements=m.measurements,
    )


def step_operator_blocks(
    m: NQFA, sym: str, basis: HermitianBasis
) -> tuple[np.ndarray, np.ndarray]:
    """Linearize one tape symbol of an NQFA in a Hermitian basis.

    Returns ``(survive, collect)`` where ``survive`` is the real n² x n²
    matrix of the map "unitary, intermediate measurement, keep the
    non-halting block", applied columnwise to the basis elements, and
    ``collect`` is the real covector reading off the probability mass that
    lands in the accepting block during that step.
    """
    n = m.n
    u = m.unitaries[sym]
    ud = u.conj().T
    projectors = m.measurements[sym].projectors
    acc_mask = np.array([q in m.accepting for q in m.states], dtype=bool)
    halt_mask = np.array(
        [q in m.accepting or q in m.rejecting for q in m.states], dtype=bool
    )
    n2 = n * n
    survive = np.empty((n2, n2), dtype=np.float64)
    collect = np.empty(n2, dtype=np.float64)
    for i, e in enumerate(basis.elements):
        evolved = u @ e @ ud
        measured = sum(p @ evolved @ p.conj().T for p in projectors)
        diag = measured.diagonal()
        collect[i] = _real_scalar(complex(diag[acc_mask].sum()), f"step functional of {sym!r}")
        survived = measured.copy()
        survived[halt_mask, :] = 0.0
        survived[:, halt_mask] = 0.0
        survive[:, i] = vectorize(survived, basis)
    return survive, collect


def _nqfa_step_matrix(m: NQFA, sym: str, basis: HermitianBasis) -> np.ndarray:
    """Block matrix acting on (state coordinates, collected acceptance)."""
    n2 = basis.dimension ** 2
    survive, collect = step_operator_blocks(m, sym, basis)
    block = np.zeros((n2 + 1, n2 + 1), dtype=np.float64)
    block[:n2, :n2] = survive
    block[n2, :n2] = collect
    block[n2, n2] = 1.0
    return block


def nqfa_to_gpfa(m: NQFA) -> GPFA:
    """Compile an n-state NQFA into an (n² + 1)-state GPFA with the same
    acceptance function.

    The GPFA state is the pair (coordinates of the surviving density
    matrix, acceptance collected so far). Each input symbol applies the
    symbol's linearized step; the left-marker step is folded into the
    initial vector and the right-marker step (plus the read-out of the
    accumulator) into the final vector, so the result is marker-free.
    Unhalted mass simply never reaches the accumulator, which matches the
    simulator's fold of that mass into rejection.
    """
    n = m.n
    basis = hermitian_basis(n)
    n2 = n * n
    rho0 = np.zeros((n, n), dtype=np.complex128)
    i0 = m.state_index(m.initial)
    rho0[i0, i0] = 1.0
    start = np.zeros(n2 + 1, dtype=np.float64)
    start[:n2] = vectorize(rho0, basis)
    v = _nqfa_step_matrix(m, m.alphabet.left_marker, basis) @ start
    read_accumulator = np.zeros(n2 + 1, dtype=np.float64)
    read_accumulator[n2] = 1.0
    f = _nqfa_step_matrix(m, m.alphabet.right_marker, basis).T @ read_accumulator
    transitions = {
        sym: _nqfa_step_matrix(m, sym, basis).T for sym in m.alphabet.symbols
    }
    return build_gpfa(m.alphabet.symbols, v, transitions, f)


def first_accept_control() -> DFA:
    """Control DFA accepting outcome words whose first halting outcome is accept.

    Over the halting-outcome alphabet (g = still going, a = accept,
    r = reject), the language is g*a(a|r|g)*. State map: ``fresh`` nothing
    read yet, ``live`` only g's so far, ``accepted`` an a arrived before
    any r (absorbing, the only accepting state), ``dead`` an r arrived
    first (absorbing).
    """
    outcomes = (HALT_CONTINUE, HALT_ACCEPT, HALT_REJECT)
    transitions: dict[tuple[str, str], str] = {}
    for src in ("fresh", "live"):
        transitions[(src, HALT_CONTINUE)] = "live"
        transitions[(src, HALT_ACCEPT)] = "accepted"
        transitions[(src, HALT_REJECT)] = "dead"
    for src in ("accepted", "dead"):
        for c in outcomes:
            transitions[(src, c)] = src
    return DFA(
        states=("fresh", "live", "accepted", "dead"),
        alphabet=outcomes,
        start="fresh",
        accepting=frozenset({"accepted"}),
        transitions=transitions,
    )


def kwqfa_to_qfc(m: KWQFA) -> QFC:
    """Rebuild a KWQFA as a QFC with the halting observable as its measurement.

    The QFC keeps the quantum states and unitaries; its observable is the
    halting measurement with outcomes g/a/r, and its control language is
    g*a(a|r|g)*. A run of the source machine halts and accepts exactly when
    the first non-g outcome is a; because the outcome-summed evolution is
    trace preserving, summing over every continuation after that first a
    reproduces the halting-accept mass exactly.
    """
    eye = np.eye(m.n)
    for sym, fam in m.measurements.items():
        if len(fam.projectors) != 1 or max_abs(fam.projectors[0] - eye) > 1e-10:
            raise ValidationError(
                f"kwqfa_to_qfc requires identity measurements, M_{sym} is not"
            )
    def span(names: frozenset[str]) -> np.ndarray:
        p = np.zeros((m.n, m.n), dtype=np.complex128)
        for i, q in enumerate(m.states):
            if q in names:
                p[i, i] = 1.0
        return p

    non_halting = frozenset(m.non_halting)
    observable = projector_family(
        [span(non_halting), span(m.accepting), span(m.rejecting)],
        labels=(HALT_CONTINUE, HALT_ACCEPT, HALT_REJECT),
    )
    return build_qfc(
        states=m.states,
        initial=m.initial,
        alphabet=m.alphabet,
        unitaries=m.unitaries,
        observable=observable,
        control=first_accept_control(),
    )


def outcome_operator_matrix(
    u: np.ndarray, p: np.ndarray, basis: HermitianBasis
) -> np.ndarray:
    """Real matrix of the map "evolve by u, project onto outcome p"."""
    n2 = basis.dimension ** 2
    ud = u.conj().T
    pd = p.conj().T
    out = np.empty((n2, n2), dtype=np.float64)
    for i, e in enumerate(basis.elements):
        out[:, i] = vectorize(p @ (u @ e @ ud) @ pd, basis)
    return out


def qfc_to_gpfa(m: QFC) -> GPFA:
    """Compile a QFC into a GPFA with |control states| · n² states.

    The composite configuration is one unnormalized density matrix per
    control state; per tape symbol, each outcome branch is routed to the
    DFA successor of its source block. That map is real-linear on the
    stacked Hermitian coordinates, so it becomes one big real matrix per
    symbol. Acceptance is read at the end (total trace over accepting
    blocks), so no accumulator coordinate is needed; markers fold into the
    initial and final vectors as usual.
    """
    n = m.n
    basis = hermitian_basis(n)
    n2 = n * n
    control_states = m.control.states
    block_of = {d: i for i, d in enumerate(control_states)}
    size = len(control_states) * n2
    labels = m.observable.labels or ()

    def symbol_matrix(sym: str) -> np.ndarray:
        u = m.unitaries[sym]
        outcome_ops = {
            c: outcome_operator_matrix(u, p, basis)
            for c, p in zip(labels, m.observable.projectors)
        }
        big = np.zeros((size, size), dtype=np.float64)
        for d in control_states:
            src = block_of[d] * n2
            for c in labels:
                dst = block_of[m.control.step(d, c)] * n2
                big[dst : dst + n2, src : src + n2] += outcome_ops[c]
        return big

    rho0 = np.zeros((n, n), dtype=np.complex128)
    rho0[m.state_index(m.initial), m.state_index(m.initial)] = 1.0
    start = np.zeros(size, dtype=np.float64)
    d0 = block_of[m.control.start] * n2
    start[d0 : d0 + n2] = vectorize(rho0, basis)
    v = symbol_matrix(m.alphabet.left_marker) @ start

    trace_coords = np.array(
        [_real_scalar(complex(np.trace(e)), "basis trace") for e in basis.elements]
    )
    read_accept = np.zeros(size, dtype=np.float64)
    for d in m.control.accepting:
        dst = block_of[d] * n2
        read_accept[dst : dst + n2] = trace_coords
    f = symbol_matrix(m.alphabet.right_marker).T @ read_accept

    transitions = {sym: symbol_matrix(sym).T for sym in m.alphabet.symbols}
    return build_gpfa(m.alphabet.symbols, v, transitions, f)


def pfa_to_gpfa(m: PFA) -> GPFA:
    """Identity embedding; a PFA already is a GPFA, values are bit-exact."""
    return GPFA(
        alphabet=m.alphabet,
        initial=m.initial,
        transitions=m.transitions,
        final=m.final,
    )
