"""Step-exact simulators for every model.

These are the reference semantics: converters and analysis routines are
all judged against the acceptance values computed here. Density matrices
are the working representation for the measured quantum models (the
intermediate measurement produces mixed states), with an independent
pure-state code path for the measurement-free case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InputError, ValidationError
from .linalg import max_abs
from .models import GPFA, NQFA, QFC, Word, check_word

# Probability conservation along a run.
TOL_SIM = 1e-9


@dataclass(frozen=True)
class StepRecord:
    """State of a run after processing one tape symbol."""

    symbol: str
    cumulative_accept: float
    cumulative_reject: float
    survivor_trace: float


@dataclass(frozen=True)
class RunResult:
    """Outcome of a full run over ``left_marker word right_marker``.

    ``final_reject`` absorbs whatever probability mass never halted, so
    ``final_accept + final_reject = 1`` and ``residual`` is 0; the trace
    records keep the pre-fold survivor mass visible per step.
    """

    final_accept: float
    final_reject: float
    residual: float
    trace: tuple[StepRecord, ...]


def _halting_indices(m: NQFA) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    acc = np.array([i for i, q in enumerate(m.states) if q in m.accepting], dtype=int)
    rej = np.array([i for i, q in enumerate(m.states) if q in m.rejecting], dtype=int)
    non = np.array([i for i, q in enumerate(m.states) if q in m.non_halting], dtype=int)
    return acc, rej, non


def iter_nqfa_steps(
    m: NQFA, word: Word
) -> Iterator[tuple[str, np.ndarray, float, float]]:
    """Yield (symbol, surviving density matrix, cum accept, cum reject) per step.

    The yielded matrix is the unnormalized post-halting-measurement state;
    its trace is the probability that the run is still going.
    """
    word = check_word(m.alphabet.symbols, word)
    n = m.n
    acc_idx, rej_idx, non_idx = _halting_indices(m)
    halt_mask = np.ones(n, dtype=bool)
    halt_mask[non_idx] = False
    rho = np.zeros((n, n), dtype=np.complex128)
    i0 = m.state_index(m.initial)
    rho[i0, i0] = 1.0
    cum_acc = 0.0
    cum_rej = 0.0
    for sym in (m.alphabet.left_marker,) + word + (m.alphabet.right_marker,):
        u = m.unitaries[sym]
        rho = u @ rho @ u.conj().T
        fam = m.measurements[sym]
        rho = sum(p @ rho @ p.conj().T for p in fam.projectors)
        diag = rho.diagonal().real
        cum_acc += float(diag[acc_idx].sum())
        cum_rej += float(diag[rej_idx].sum())
        rho = rho.copy()
        rho[halt_mask, :] = 0.0
        rho[:, halt_mask] = 0.0
        yield sym, rho, cum_acc, cum_rej


def run_nqfa(m: NQFA, word: Word) -> RunResult:
    """Simulate an NQFA (or KWQFA); unhalted mass at the end counts as rejection."""
    records: list[StepRecord] = []
    cum_acc = cum_rej = survivor = 0.0
    for sym, rho, cum_acc, cum_rej in iter_nqfa_steps(m, word):
        survivor = float(np.trace(rho).real)
        records.append(StepRecord(sym, cum_acc, cum_rej, survivor))
    return RunResult(
        final_accept=cum_acc,
        final_reject=cum_rej + survivor,
        residual=0.0,
        trace=tuple(records),
    )


def run_kwqfa_pure(m: NQFA, word: Word) -> RunResult:
    """Pure-state simulation for identity-measurement machines.

    Tracks the unnormalized state vector and halted mass directly; valid
    only when every intermediate measurement is the identity, which keeps
    the surviving state pure. Serves as an independent cross-check of the
    density-matrix path.
    """
    n = m.n
    eye = np.eye(n)
    for sym, fam in m.measurements.items():
        if len(fam.projectors) != 1 or max_abs(fam.projectors[0] - eye) > 1e-10:
            raise ValidationError(
                f"pure-state simulation requires identity measurements, M_{sym} is not"
            )
    word = check_word(m.alphabet.symbols, word)
    acc_idx, rej_idx, non_idx = _halting_indices(m)
    halt_mask = np.ones(n, dtype=bool)
    halt_mask[non_idx] = False
    psi = np.zeros(n, dtype=np.complex128)
    psi[m.state_index(m.initial)] = 1.0
    cum_acc = cum_rej = 0.0
    records: list[StepRecord] = []
    for sym in (m.alphabet.left_marker,) + word + (m.alphabet.right_marker,):
        psi = m.unitaries[sym] @ psi
        amp2 = np.abs(psi) ** 2
        cum_acc += float(amp2[acc_idx].sum())
        cum_rej += float(amp2[rej_idx].sum())
        psi = psi.copy()
        psi[halt_mask] = 0.0
        records.append(StepRecord(sym, cum_acc, cum_rej, float((np.abs(psi) ** 2).sum())))
    survivor = records[-1].survivor_trace
    return RunResult(cum_acc, cum_rej + survivor, 0.0, tuple(records))


def run_qfc(m: QFC, word: Word) -> RunResult:
    """Simulate a QFC by carrying one unnormalized density matrix per DFA state.

    Summing the per-outcome branches into the DFA successor states computes
    the total probability of all outcome words the control language accepts
    without ever enumerating them. Nothing halts mid-run, so the step
    records carry zero cumulative accept/reject and full survivor mass.
    """
    word = check_word(m.alphabet.symbols, word)
    n = m.n
    labels = m.observable.labels or ()
    projectors = m.observable.projectors
    rhos = {d: np.zeros((n, n), dtype=np.complex128) for d in m.control.states}
    start = rhos[m.control.start].copy()
    i0 = m.state_index(m.initial)
    start[i0, i0] = 1.0
    rhos[m.control.start] = start
    records: list[StepRecord] = []
    for sym in (m.alphabet.left_marker,) + word + (m.alphabet.right_marker,):
        u = m.unitaries[sym]
        ud = u.conj().T
        nxt = {d: np.zeros((n, n), dtype=np.complex128) for d in m.control.states}
        for d, rho in rhos.items():
            if not rho.any():
                continue
            evolved = u @ rho @ ud
            for label, p in zip(labels, projectors):
                nxt[m.control.step(d, label)] += p @ evolved @ p.conj().T
        rhos = nxt
        total = float(sum(np.trace(rho).real for rho in rhos.values()))
        records.append(StepRecord(sym, 0.0, 0.0, total))
    accept = float(sum(np.trace(rhos[d]).real for d in m.control.accepting))
    return RunResult(accept, 1.0 - accept, 0.0, tuple(records))


def run_gpfa(g: GPFA, word: Word) -> float:
    """Evaluate v · A_w1 ··· A_wm · f by a left fold over the word."""
    word = check_word(g.alphabet, word)
    x = g.initial
    for sym in word:
        x = x @ g.transitions[sym]
    return float(x @ g.final)


def acceptance_value(model: object, word: Word) -> float:
    """Acceptance probability of any model on a word (dispatch helper)."""
    if isinstance(model, QFC):
        return run_qfc(model, word).final_accept
    if isinstance(model, NQFA):
        return run_nqfa(model, word).final_accept
    if isinstance(model, GPFA):
        return run_gpfa(model, word)
    raise TypeError(f"not a runnable model: {type(model).__name__}")


def sweep(model: object, pattern: str, max_len: int) -> list[tuple[int, float]]:
    """Acceptance value on pattern^k for k = 0..max_len."""
    if max_len < 0:
        raise InputError(f"max_len must be >= 0, got {max_len}")
    if isinstance(model, GPFA):
        symbols: tuple[str, ...] = model.alphabet
    elif isinstance(model, (NQFA, QFC)):
        symbols = model.alphabet.symbols
    else:
        raise TypeError(f"not a runnable model: {type(model).__name__}")
    check_word(symbols, (pattern,))
    return [(k, acceptance_value(model, (pattern,) * k)) for k in range(max_len + 1)]
