"""Automaton model definitions and validating constructors.

Five models live here: the measured quantum automaton (NQFA), its
measurement-free restriction (KWQFA), the quantum automaton with a control
language (QFC), the generalized probabilistic automaton (GPFA), and its
stochastic restriction (PFA). Constructors collect *every* violated
invariant before raising, which makes hand-written automaton files much
easier to debug than fail-fast validation would.

Quantum models read their input between two end markers: a word ``w`` is
processed as ``left_marker w right_marker``, and every tape symbol
(markers included) carries its own unitary and measurement. GPFAs are
marker-free; the converters fold the marker steps into the initial and
final vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionError, InputError, ModelError, Violation
from .linalg import (
    TOL_VALID,
    ProjectorFamily,
    as_complex_matrix,
    max_abs,
    projector_family,
    projector_family_violations,
    validate_unitary,
)

LEFT_MARKER = "¢"  # ¢
RIGHT_MARKER = "$"


@dataclass(frozen=True)
class Alphabet:
    """Input symbols plus the two reserved tape markers."""

    symbols: tuple[str, ...]
    left_marker: str = LEFT_MARKER
    right_marker: str = RIGHT_MARKER

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("alphabet must have at least one input symbol")
        names = list(self.symbols) + [self.left_marker, self.right_marker]
        if len(set(names)) != len(names):
            raise ValueError(
                f"alphabet symbols and markers must be pairwise distinct: {names}"
            )

    @property
    def tape_symbols(self) -> tuple[str, ...]:
        """Markers and input symbols; every run processes left, word, right."""
        return (self.left_marker,) + self.symbols + (self.right_marker,)


Word = tuple[str, ...]


def check_word(symbols: Sequence[str], word: Sequence[str]) -> Word:
    """Validate that every symbol of ``word`` is in ``symbols``."""
    allowed = set(symbols)
    for sym in word:
        if sym not in allowed:
            raise InputError(
                f"symbol {sym!r} is not in the input alphabet {sorted(allowed)}"
            )
    return tuple(word)


@dataclass(frozen=True)
class NQFA:
    """Quantum automaton with a per-symbol intermediate measurement.

    One step per tape symbol: apply the symbol's unitary, apply the
    symbol's projective measurement (summed over outcomes), then measure
    the halting observable given by the accept/reject/non-halting state
    partition. Halting mass is removed; the run continues on the
    non-halting component.
    """

    states: tuple[str, ...]
    initial: str
    accepting: frozenset[str]
    rejecting: frozenset[str]
    alphabet: Alphabet
    unitaries: Mapping[str, np.ndarray]
    measurements: Mapping[str, ProjectorFamily]

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def non_halting(self) -> tuple[str, ...]:
        return tuple(
            q for q in self.states if q not in self.accepting and q not in self.rejecting
        )

    def state_index(self, name: str) -> int:
        return self.states.index(name)


@dataclass(frozen=True)
class KWQFA(NQFA):
    """NQFA whose intermediate measurements are all the identity."""


@dataclass(frozen=True)
class DFA:
    """Deterministic finite automaton used as a control language."""

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    start: str
    accepting: frozenset[str]
    transitions: Mapping[tuple[str, str], str]

    def step(self, state: str, symbol: str) -> str:
        return self.transitions[(state, symbol)]


@dataclass(frozen=True)
class QFC:
    """Quantum automaton whose measurement outcomes feed a control DFA.

    Each tape symbol applies a unitary followed by the (single, labeled)
    observable; the word of outcome labels is fed to the control DFA, and
    the run accepts with the total probability of outcome words the DFA
    accepts.
    """

    states: tuple[str, ...]
    initial: str
    alphabet: Alphabet
    unitaries: Mapping[str, np.ndarray]
    observable: ProjectorFamily
    control: DFA

    @property
    def n(self) -> int:
        return len(self.states)

    def state_index(self, name: str) -> int:
        return self.states.index(name)


@dataclass(frozen=True)
class GPFA:
    """Generalized probabilistic automaton: value(w) = v · A_w1 ··· A_wm · f.

    Entries are arbitrary finite reals; no stochasticity is required.
    """

    alphabet: tuple[str, ...]
    initial: np.ndarray
    transitions: Mapping[str, np.ndarray]
    final: np.ndarray

    @property
    def size(self) -> int:
        return int(self.initial.shape[0])


@dataclass(frozen=True)
class PFA(GPFA):
    """GPFA restricted to a stochastic start vector, row-stochastic
    transition matrices, and a 0/1 final indicator vector."""


@dataclass(frozen=True)
class Cutpoint:
    """Acceptance threshold; membership is the strict comparison value > cutpoint."""

    value: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.value < 1.0):
            raise ValueError(f"cutpoint must lie in [0, 1), got {self.value}")


# ---------------------------------------------------------------------------
# Validation helpers (each checks one aspect; constructors and the
# re-validation entry points compose them so no violation is reported twice).


def _partition_violations(
    states: tuple[str, ...],
    initial: str,
    accepting: frozenset[str],
    rejecting: frozenset[str],
) -> list[Violation]:
    v: list[Violation] = []
    if not states:
        v.append(Violation("states", "state set is empty"))
        return v
    if len(set(states)) != len(states):
        v.append(Violation("states", "state names are not distinct"))
    state_set = set(states)
    for name in sorted(accepting - state_set):
        v.append(Violation("accepting", f"unknown state {name!r}"))
    for name in sorted(rejecting - state_set):
        v.append(Violation("rejecting", f"unknown state {name!r}"))
    for name in sorted(accepting & rejecting):
        v.append(Violation("accepting", f"state {name!r} is both accepting and rejecting"))
    if initial not in state_set:
        v.append(Violation("initial", f"unknown state {initial!r}"))
    elif initial in accepting or initial in rejecting:
        v.append(Violation("initial", f"initial state must be non-halting, {initial!r} is not"))
    return v


def _unitary_violations(
    unitaries: Mapping[str, np.ndarray],
    alphabet: Alphabet,
    n: int,
    already_reported: frozenset[str] = frozenset(),
) -> list[Violation]:
    v: list[Violation] = []
    for sym in alphabet.tape_symbols:
        u = unitaries.get(sym)
        if u is None:
            if sym not in already_reported:
                v.append(Violation("unitaries", f"missing unitary for symbol {sym!r}"))
        elif u.shape != (n, n):
            v.append(
                Violation(f"unitaries.{sym}", f"U_{sym} has shape {u.shape}, expected ({n}, {n})")
            )
        elif not validate_unitary(u, TOL_VALID):
            v.append(Violation(f"unitaries.{sym}", f"U_{sym} not unitary"))
    for sym in unitaries:
        if sym not in alphabet.tape_symbols:
            v.append(Violation("unitaries", f"unknown symbol {sym!r}"))
    return v


def _coerce_unitaries(
    raw: Mapping[str, object], alphabet: Alphabet, violations: list[Violation]
) -> tuple[dict[str, np.ndarray], frozenset[str]]:
    """Convert raw matrices; returns the dict and the symbols that failed."""
    out: dict[str, np.ndarray] = {}
    failed: set[str] = set()
    for sym in alphabet.tape_symbols:
        if sym not in raw:
            continue  # reported by _unitary_violations afterwards
        try:
            m = as_complex_matrix(raw[sym])
        except (DimensionError, ValueError) as exc:
            violations.append(Violation(f"unitaries.{sym}", str(exc)))
            failed.add(sym)
            continue
        m = m.copy()
        m.setflags(write=False)
        out[sym] = m
    return out, frozenset(failed)


def _measurement_violations(
    measurements: Mapping[str, ProjectorFamily], alphabet: Alphabet, n: int
) -> list[Violation]:
    v: list[Violation] = []
    for sym in alphabet.tape_symbols:
        fam = measurements.get(sym)
        if fam is None:
            v.append(Violation("measurements", f"missing measurement for symbol {sym!r}"))
            continue
        loc = f"measurements.{sym}"
        if fam.dimension != n:
            v.append(Violation(loc, f"M_{sym} has dimension {fam.dimension}, expected {n}"))
            continue
        try:
            problems = projector_family_violations(fam, TOL_VALID)
        except DimensionError as exc:
            v.append(Violation(loc, str(exc)))
            continue
        for p in problems:
            v.append(Violation(loc, f"M_{sym} {p}"))
    for sym in measurements:
        if sym not in alphabet.tape_symbols:
            v.append(Violation("measurements", f"unknown symbol {sym!r}"))
    return v


def nqfa_violations(m: NQFA) -> list[Violation]:
    """Re-validate a constructed NQFA; empty list means valid."""
    v = _partition_violations(m.states, m.initial, m.accepting, m.rejecting)
    v += _unitary_violations(m.unitaries, m.alphabet, m.n)
    v += _measurement_violations(m.measurements, m.alphabet, m.n)
    if isinstance(m, KWQFA):
        eye = np.eye(m.n)
        for sym, fam in m.measurements.items():
            if len(fam.projectors) != 1 or max_abs(fam.projectors[0] - eye) > TOL_VALID:
                v.append(
                    Violation(f"measurements.{sym}", f"M_{sym} must be the identity measurement")
                )
    return v


def build_nqfa(
    states: Sequence[str],
    initial: str,
    accepting: Sequence[str],
    rejecting: Sequence[str],
    alphabet: Alphabet,
    unitaries: Mapping[str, object],
    measurements: Mapping[str, ProjectorFamily],
) -> NQFA:
    """Validate and build an NQFA, reporting every violation at once."""
    states_t = tuple(states)
    n = len(states_t)
    violations: list[Violation] = []
    unit, failed = _coerce_unitaries(unitaries, alphabet, violations)
    candidate = NQFA(
        states_t,
        initial,
        frozenset(accepting),
        frozenset(rejecting),
        alphabet,
        unit,
        dict(measurements),
    )
    violations += _partition_violations(states_t, initial, candidate.accepting, candidate.rejecting)
    violations += _unitary_violations(unit, alphabet, n, failed)
    violations += _measurement_violations(candidate.measurements, alphabet, n)
    if violations:
        raise ModelError(violations)
    return candidate


def identity_measurements(alphabet: Alphabet, n: int) -> dict[str, ProjectorFamily]:
    """The trivial {identity} measurement for every tape symbol."""
    fam = projector_family([np.eye(n, dtype=np.complex128)])
    return {sym: fam for sym in alphabet.tape_symbols}


def build_kwqfa(
    states: Sequence[str],
    initial: str,
    accepting: Sequence[str],
    rejecting: Sequence[str],
    alphabet: Alphabet,
    unitaries: Mapping[str, object],
) -> KWQFA:
    """Build a KWQFA: an NQFA with identity intermediate measurements."""
    states_t = tuple(states)
    n = len(states_t)
    violations: list[Violation] = []
    unit, failed = _coerce_unitaries(unitaries, alphabet, violations)
    candidate = KWQFA(
        states_t,
        initial,
        frozenset(accepting),
        frozenset(rejecting),
        alphabet,
        unit,
        identity_measurements(alphabet, n),
    )
    violations += _partition_violations(states_t, initial, candidate.accepting, candidate.rejecting)
    violations += _unitary_violations(unit, alphabet, n, failed)
    if violations:
        raise ModelError(violations)
    return candidate


def _observable_violations(m: QFC) -> list[Violation]:
    v: list[Violation] = []
    if m.observable.labels is None:
        v.append(Violation("observable.labels", "observable outcomes must be labeled"))
    else:
        labels = m.observable.labels
        if len(set(labels)) != len(labels):
            v.append(Violation("observable.labels", f"labels are not distinct: {list(labels)}"))
        if set(labels) != set(m.control.alphabet):
            v.append(
                Violation(
                    "observable.labels",
                    f"labels {sorted(set(labels))} do not match control alphabet "
                    f"{sorted(set(m.control.alphabet))}",
                )
            )
    if m.observable.dimension != m.n:
        v.append(
            Violation(
                "observable", f"observable dimension {m.observable.dimension}, expected {m.n}"
            )
        )
    else:
        for p in projector_family_violations(m.observable, TOL_VALID):
            v.append(Violation("observable", p))
    return v


def _dfa_violations(d: DFA) -> list[Violation]:
    v: list[Violation] = []
    if not d.states:
        v.append(Violation("control.states", "control DFA has no states"))
        return v
    if len(set(d.states)) != len(d.states):
        v.append(Violation("control.states", "state names are not distinct"))
    if d.start not in d.states:
        v.append(Violation("control.start", f"unknown state {d.start!r}"))
    for name in sorted(d.accepting - set(d.states)):
        v.append(Violation("control.accepting", f"unknown state {name!r}"))
    for (src, sym), dst in sorted(d.transitions.items()):
        if src not in d.states:
            v.append(Violation("control.transitions", f"unknown source state {src!r}"))
        if sym not in d.alphabet:
            v.append(Violation("control.transitions", f"unknown symbol {sym!r}"))
        if dst not in d.states:
            v.append(Violation("control.transitions", f"unknown target state {dst!r}"))
    for src in d.states:
        for sym in d.alphabet:
            if (src, sym) not in d.transitions:
                v.append(
                    Violation("control.transitions", f"missing transition for ({src!r}, {sym!r})")
                )
    return v


def qfc_violations(m: QFC) -> list[Violation]:
    """Re-validate a constructed QFC; empty list means valid."""
    v: list[Violation] = []
    if not m.states:
        v.append(Violation("states", "state set is empty"))
    else:
        if len(set(m.states)) != len(m.states):
            v.append(Violation("states", "state names are not distinct"))
        if m.initial not in m.states:
            v.append(Violation("initial", f"unknown state {m.initial!r}"))
    v += _unitary_violations(m.unitaries, m.alphabet, m.n)
    v += _observable_violations(m)
    v += _dfa_violations(m.control)
    return v


def build_qfc(
    states: Sequence[str],
    initial: str,
    alphabet: Alphabet,
    unitaries: Mapping[str, object],
    observable: ProjectorFamily,
    control: DFA,
) -> QFC:
    """Validate and build a QFC; the control DFA must be total."""
    states_t = tuple(states)
    violations: list[Violation] = []
    unit, failed = _coerce_unitaries(unitaries, alphabet, violations)
    candidate = QFC(states_t, initial, alphabet, unit, observable, control)
    if not states_t:
        violations.append(Violation("states", "state set is empty"))
    else:
        if len(set(states_t)) != len(states_t):
            violations.append(Violation("states", "state names are not distinct"))
        if initial not in states_t:
            violations.append(Violation("initial", f"unknown state {initial!r}"))
    violations += _unitary_violations(unit, alphabet, candidate.n, failed)
    violations += _observable_violations(candidate)
    violations += _dfa_violations(control)
    if violations:
        raise ModelError(violations)
    return candidate


def _gpfa_vector_violations(g: GPFA) -> list[Violation]:
    v: list[Violation] = []
    if not g.alphabet:
        v.append(Violation("alphabet", "alphabet is empty"))
    if len(set(g.alphabet)) != len(g.alphabet):
        v.append(Violation("alphabet", "symbols are not distinct"))
    s = g.size
    if not np.all(np.isfinite(g.initial)):
        v.append(Violation("initial", "non-finite entries"))
    if g.final.shape != (s,):
        v.append(Violation("final", f"final vector has shape {g.final.shape}, expected ({s},)"))
    elif not np.all(np.isfinite(g.final)):
        v.append(Violation("final", "non-finite entries"))
    return v


def _gpfa_transition_violations(g: GPFA) -> list[Violation]:
    v: list[Violation] = []
    s = g.size
    for sym in g.alphabet:
        a = g.transitions.get(sym)
        if a is None:
            v.append(Violation("transitions", f"missing matrix for symbol {sym!r}"))
        elif a.shape != (s, s):
            v.append(
                Violation(f"transitions.{sym}", f"A_{sym} has shape {a.shape}, expected ({s}, {s})")
            )
        elif not np.all(np.isfinite(a)):
            v.append(Violation(f"transitions.{sym}", "non-finite entries"))
    for sym in g.transitions:
        if sym not in g.alphabet:
            v.append(Violation("transitions", f"unknown symbol {sym!r}"))
    return v


def _pfa_violations(p: PFA) -> list[Violation]:
    v: list[Violation] = []
    if np.any(p.initial < 0):
        v.append(Violation("initial", "negative entries in the start distribution"))
    if abs(float(p.initial.sum()) - 1.0) > TOL_VALID:
        v.append(Violation("initial", f"start distribution sums to {float(p.initial.sum())!r}"))
    for sym in p.alphabet:
        a = p.transitions.get(sym)
        if a is None or a.shape != (p.size, p.size):
            continue  # reported by the GPFA checks
        for i in range(p.size):
            if np.any(a[i] < 0):
                v.append(
                    Violation(f"transitions.{sym}", f"row {i} of A_{sym} has negative entries")
                )
            row_sum = float(a[i].sum())
            if abs(row_sum - 1.0) > TOL_VALID:
                v.append(
                    Violation(
                        f"transitions.{sym}", f"row {i} of A_{sym} sums to {row_sum!r}, not 1"
                    )
                )
    if not np.all(np.isin(p.final, (0.0, 1.0))):
        v.append(Violation("final", "final vector entries must be 0 or 1"))
    return v


def gpfa_violations(g: GPFA) -> list[Violation]:
    """Re-validate a constructed GPFA (or PFA); empty list means valid."""
    v = _gpfa_vector_violations(g) + _gpfa_transition_violations(g)
    if isinstance(g, PFA):
        v += _pfa_violations(g)
    return v


def _coerce_real_vector(raw: object, loc: str, violations: list[Violation]) -> np.ndarray | None:
    try:
        v = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        violations.append(Violation(loc, str(exc)))
        return None
    if v.ndim != 1:
        violations.append(Violation(loc, f"expected a vector, got ndim {v.ndim}"))
        return None
    v = v.copy()
    v.setflags(write=False)
    return v


def build_gpfa(
    alphabet: Sequence[str],
    initial: object,
    transitions: Mapping[str, object],
    final: object,
    *,
    stochastic: bool = False,
) -> GPFA:
    """Validate and build a GPFA; with ``stochastic=True``, build a PFA."""
    violations: list[Violation] = []
    alpha = tuple(alphabet)
    init = _coerce_real_vector(initial, "initial", violations)
    fin = _coerce_real_vector(final, "final", violations)
    trans: dict[str, np.ndarray] = {}
    for sym, raw in transitions.items():
        try:
            a = np.asarray(raw, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            violations.append(Violation(f"transitions.{sym}", str(exc)))
            continue
        a = a.copy()
        a.setflags(write=False)
        trans[sym] = a
    if init is None or fin is None:
        raise ModelError(violations)
    cls = PFA if stochastic else GPFA
    candidate = cls(alpha, init, trans, fin)
    violations += gpfa_violations(candidate)
    if violations:
        raise ModelError(violations)
    return candidate


def build_pfa(
    alphabet: Sequence[str],
    initial: object,
    transitions: Mapping[str, object],
    final: object,
) -> PFA:
    """Validate and build a PFA (stochastic GPFA)."""
    g = build_gpfa(alphabet, initial, transitions, final, stochastic=True)
    assert isinstance(g, PFA)
    return g
