"""Decision procedures and random model generation.

``gpfa_equivalent`` decides functional equality of two GPFAs over all
words by spanning the reachable row-vector space of their difference
automaton: starting from the paired initial vector, push through each
symbol matrix and keep vectors while they grow the span. The span's
dimension is bounded by the total state count, so the walk terminates; the
machines agree everywhere iff every reachable vector is orthogonal to the
paired final vector. Numeric mode uses pivoted elimination with a relative
rank threshold; exact mode runs the same walk in rational arithmetic.

The ``random_*`` generators produce seeded, reproducible models for
property suites: Haar-distributed unitaries (QR of a complex Gaussian
matrix with the phases of the R diagonal normalized away), measurement
families built by conjugating coordinate-block projectors with a Haar
unitary, and uniform or grid-valued GPFA entries.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal

import numpy as np

from .errors import InputError, ModeError
from .linalg import ProjectorFamily, max_abs, projector_family
from .models import (
    DFA,
    GPFA,
    KWQFA,
    NQFA,
    QFC,
    Alphabet,
    Cutpoint,
    Word,
    build_gpfa,
    build_kwqfa,
    build_nqfa,
    build_qfc,
)
from .sim import run_gpfa

# Rank decisions in numeric mode, relative to the largest pivot seen.
TOL_RANK = 1e-8
# Largest denominator exact mode will attribute to a floating-point entry.
RATIONAL_DENOMINATOR_LIMIT = 10**6

Mode = Literal["exact", "numeric"]


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Outcome of an equivalence check.

    ``witness`` is a word on which the two value functions differ (present
    iff ``equivalent`` is false); ``max_observed_gap`` is the largest
    |value1(w) - value2(w)| over all words examined by the walk.
    """

    equivalent: bool
    witness: Word | None
    max_observed_gap: float


class _NumericSpan:
    """Reduced-echelon basis of row vectors with relative pivot threshold."""

    def __init__(self, dim: int):
        self.dim = dim
        self.vectors: list[np.ndarray] = []
        self.pivots: list[int] = []
        self.pivot_scale = 0.0

    def try_add(self, vec: np.ndarray) -> bool:
        r = vec.astype(np.float64, copy=True)
        for pivot, b in zip(self.pivots, self.vectors):
            r -= r[pivot] * b
        pivot = int(np.argmax(np.abs(r)))
        magnitude = float(abs(r[pivot]))
        if magnitude <= TOL_RANK * self.pivot_scale or magnitude == 0.0:
            return False
        r /= r[pivot]
        for k in range(len(self.vectors)):
            self.vectors[k] = self.vectors[k] - self.vectors[k][pivot] * r
        self.vectors.append(r)
        self.pivots.append(pivot)
        self.pivot_scale = max(self.pivot_scale, magnitude)
        if len(self.vectors) > self.dim:
            raise AssertionError("span exceeded the ambient dimension")
        return True


class _ExactSpan:
    """Echelon basis over the rationals; zero threshold."""

    def __init__(self, dim: int):
        self.dim = dim
        self.vectors: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def try_add(self, vec: list[Fraction]) -> bool:
        r = list(vec)
        for pivot, b in zip(self.pivots, self.vectors):
            c = r[pivot]
            if c:
                r = [x - c * y for x, y in zip(r, b)]
        pivot = next((i for i, x in enumerate(r) if x), None)
        if pivot is None:
            return False
        inv = Fraction(1) / r[pivot]
        r = [x * inv for x in r]
        for k in range(len(self.vectors)):
            c = self.vectors[k][pivot]
            if c:
                self.vectors[k] = [x - c * y for x, y in zip(self.vectors[k], r)]
        self.vectors.append(r)
        self.pivots.append(pivot)
        if len(self.vectors) > self.dim:
            raise AssertionError("span exceeded the ambient dimension")
        return True


def as_rational(x: float) -> Fraction:
    """Recover the rational a float plausibly denotes, or refuse.

    Snaps to the simplest fraction with denominator at most
    ``RATIONAL_DENOMINATOR_LIMIT`` and accepts it only if that fraction
    rounds back to the exact same float. Entries that survive a chain of
    irrational normalizations (square roots and the like) fail this test.
    """
    snapped = Fraction(x).limit_denominator(RATIONAL_DENOMINATOR_LIMIT)
    if float(snapped) != x:
        raise ModeError(
            f"entry {x!r} is not recognizably rational "
            f"(no denominator <= {RATIONAL_DENOMINATOR_LIMIT})"
        )
    return snapped


def _difference_system_numeric(
    g1: GPFA, g2: GPFA
) -> tuple[np.ndarray, dict[str, np.ndarray], np.ndarray]:
    s1, s2 = g1.size, g2.size
    u = np.concatenate([g1.initial, -g2.initial])
    phi = np.concatenate([g1.final, g2.final])
    mats: dict[str, np.ndarray] = {}
    for sym in g1.alphabet:
        big = np.zeros((s1 + s2, s1 + s2), dtype=np.float64)
        big[:s1, :s1] = g1.transitions[sym]
        big[s1:, s1:] = g2.transitions[sym]
        mats[sym] = big
    return u, mats, phi


def _spanning_walk(
    alphabet: tuple[str, ...],
    start: object,
    step: Callable[[object, str], object],
    gap_at: Callable[[object], float],
    try_add: Callable[[object], bool],
    decision_tol: float,
) -> EquivalenceVerdict:
    max_gap = gap_at(start)
    if max_gap > decision_tol:
        return EquivalenceVerdict(False, (), max_gap)
    queue: deque[tuple[Word, object]] = deque()
    if try_add(start):
        queue.append(((), start))
    while queue:
        word, vec = queue.popleft()
        for sym in alphabet:
            nxt = step(vec, sym)
            gap = gap_at(nxt)
            max_gap = max(max_gap, gap)
            if gap > decision_tol:
                return EquivalenceVerdict(False, word + (sym,), gap)
            if try_add(nxt):
                queue.append((word + (sym,), nxt))
    return EquivalenceVerdict(True, None, max_gap)


def gpfa_equivalent(g1: GPFA, g2: GPFA, mode: Mode = "numeric") -> EquivalenceVerdict:
    """Decide whether two GPFAs compute the same value on every word.

    Breadth-first order makes the returned witness a shortest separating
    word (ties broken by alphabet order). Exact mode requires every entry
    to be recognizably rational (see ``as_rational``) and decides with no
    tolerance at all; numeric mode uses ``TOL_RANK``-relative thresholds.
    """
    if tuple(g1.alphabet) != tuple(g2.alphabet):
        raise InputError(
            f"alphabet mismatch: {list(g1.alphabet)} vs {list(g2.alphabet)}"
        )
    alphabet = tuple(g1.alphabet)
    dim = g1.size + g2.size
    if mode == "numeric":
        u, mats, phi = _difference_system_numeric(g1, g2)
        span = _NumericSpan(dim)
        decision_tol = TOL_RANK * max(1.0, max_abs(phi))
        return _spanning_walk(
            alphabet,
            u,
            lambda vec, sym: vec @ mats[sym],
            lambda vec: abs(float(vec @ phi)),
            span.try_add,
            decision_tol,
        )
    if mode == "exact":
        return _gpfa_equivalent_exact(g1, g2, alphabet, dim)
    raise ValueError(f"unknown mode {mode!r}, expected 'exact' or 'numeric'")


def _gpfa_equivalent_exact(
    g1: GPFA, g2: GPFA, alphabet: tuple[str, ...], dim: int
) -> EquivalenceVerdict:
    def vec_of(a: np.ndarray, negate: bool = False) -> list[Fraction]:
        sign = -1 if negate else 1
        return [sign * as_rational(float(x)) for x in a]

    def mat_of(a: np.ndarray) -> list[list[Fraction]]:
        return [[as_rational(float(x)) for x in row] for row in a]

    s1 = g1.size
    u = vec_of(g1.initial) + vec_of(g2.initial, negate=True)
    phi = vec_of(g1.final) + vec_of(g2.final)
    mats: dict[str, list[list[Fraction]]] = {}
    zero = Fraction(0)
    for sym in alphabet:
        a1 = mat_of(g1.transitions[sym])
        a2 = mat_of(g2.transitions[sym])
        rows = [a1[i] + [zero] * (dim - s1) for i in range(s1)]
        rows += [[zero] * s1 + a2[i] for i in range(dim - s1)]
        mats[sym] = rows

    def step(vec: list[Fraction], sym: str) -> list[Fraction]:
        rows = mats[sym]
        return [
            sum((vec[i] * rows[i][j] for i in range(dim)), zero) for j in range(dim)
        ]

    span = _ExactSpan(dim)
    return _spanning_walk(
        alphabet,
        u,
        step,
        lambda vec: abs(float(sum((x * y for x, y in zip(vec, phi)), zero))),
        span.try_add,
        0.0,
    )


def cutpoint_member(g: GPFA, cutpoint: Cutpoint, word: Word) -> bool:
    """Strict cutpoint acceptance: value(word) > cutpoint.

    Words whose value lands exactly on the cutpoint are not members.
    """
    return run_gpfa(g, word) > cutpoint.value


# ---------------------------------------------------------------------------
# Random model generation


@dataclass(frozen=True)
class RandomSpec:
    """Seeded description of a random model; equal specs give equal models."""

    seed: int
    states: int
    alphabet_size: int
    accepting: int | None = None
    rejecting: int | None = None
    control_states: int = 2

    def __post_init__(self) -> None:
        if self.alphabet_size < 1 or self.alphabet_size > 26:
            raise ValueError(f"alphabet_size must be in 1..26, got {self.alphabet_size}")
        if self.states < 1:
            raise ValueError(f"states must be >= 1, got {self.states}")
        if self.control_states < 1:
            raise ValueError(f"control_states must be >= 1, got {self.control_states}")


def _symbols(count: int) -> tuple[str, ...]:
    return tuple("abcdefghijklmnopqrstuvwxyz"[:count])


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x n unitary: QR of a complex Gaussian matrix with
    the phases of R's diagonal folded into Q."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_projector_family(
    n: int, rng: np.random.Generator, labels: tuple[str, ...] | None = None
) -> ProjectorFamily:
    """Complete orthogonal family with 1..n blocks of random sizes, rotated
    by a Haar unitary.

    Block count uniform in {1..n} covers both the identity-measurement
    extreme and a fully dephasing one; sizes come from uniformly chosen cut
    positions.
    """
    blocks = int(rng.integers(1, n + 1)) if labels is None else len(labels)
    if not 1 <= blocks <= n:
        raise ValueError(f"cannot split dimension {n} into {blocks} blocks")
    if blocks > 1:
        cuts = sorted(rng.choice(np.arange(1, n), size=blocks - 1, replace=False).tolist())
    else:
        cuts = []
    bounds = [0] + cuts + [n]
    basis_change = haar_unitary(n, rng)
    projectors = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        d = np.zeros((n, n), dtype=np.complex128)
        d[lo:hi, lo:hi] = np.eye(hi - lo)
        projectors.append(basis_change @ d @ basis_change.conj().T)
    return projector_family(projectors, labels=labels)


def _random_partition(
    spec: RandomSpec, rng: np.random.Generator
) -> tuple[list[str], list[str], list[str]]:
    n = spec.states
    if n < 2:
        raise ValueError("random quantum machines need at least 2 states")
    if spec.accepting is None and spec.rejecting is None:
        non = int(rng.integers(1, n))
        acc = int(rng.integers(0, n - non + 1))
        rej = n - non - acc
    else:
        acc = spec.accepting or 0
        rej = spec.rejecting or 0
        non = n - acc - rej
    if acc < 0 or rej < 0 or non < 1:
        raise ValueError(
            f"infeasible partition sizes for {n} states: "
            f"accepting={acc}, rejecting={rej} (at least one non-halting state "
            "must remain for the initial state)"
        )
    states = [f"q{i}" for i in range(n)]
    rest = [str(name) for name in rng.permutation(states[1:])]
    non_halting = [states[0]] + rest[: non - 1]
    accepting = rest[non - 1 : non - 1 + acc]
    rejecting = rest[non - 1 + acc :]
    assert len(rejecting) == rej
    return non_halting, accepting, rejecting


def random_kwqfa(spec: RandomSpec) -> KWQFA:
    """Seeded random measurement-free machine with Haar unitaries."""
    rng = np.random.default_rng(spec.seed)
    _, accepting, rejecting = _random_partition(spec, rng)
    alphabet = Alphabet(_symbols(spec.alphabet_size))
    states = [f"q{i}" for i in range(spec.states)]
    unitaries = {sym: haar_unitary(spec.states, rng) for sym in alphabet.tape_symbols}
    return build_kwqfa(states, "q0", accepting, rejecting, alphabet, unitaries)


def random_nqfa(spec: RandomSpec) -> NQFA:
    """Seeded random machine with Haar unitaries and random block measurements."""
    rng = np.random.default_rng(spec.seed)
    _, accepting, rejecting = _random_partition(spec, rng)
    alphabet = Alphabet(_symbols(spec.alphabet_size))
    states = [f"q{i}" for i in range(spec.states)]
    unitaries = {sym: haar_unitary(spec.states, rng) for sym in alphabet.tape_symbols}
    measurements = {
        sym: random_projector_family(spec.states, rng) for sym in alphabet.tape_symbols
    }
    return build_nqfa(states, "q0", accepting, rejecting, alphabet, unitaries, measurements)


def random_qfc(spec: RandomSpec) -> QFC:
    """Seeded random QFC: Haar unitaries, random labeled observable, random
    total control DFA over the outcome labels."""
    rng = np.random.default_rng(spec.seed)
    n = spec.states
    alphabet = Alphabet(_symbols(spec.alphabet_size))
    states = [f"q{i}" for i in range(n)]
    unitaries = {sym: haar_unitary(n, rng) for sym in alphabet.tape_symbols}
    outcome_count = int(rng.integers(1, n + 1))
    labels = tuple(f"c{i}" for i in range(outcome_count))
    observable = random_projector_family(n, rng, labels=labels)
    control_states = tuple(f"d{i}" for i in range(spec.control_states))
    transitions = {
        (d, c): control_states[int(rng.integers(0, len(control_states)))]
        for d in control_states
        for c in labels
    }
    accepting = frozenset(
        d for d in control_states if rng.integers(0, 2) == 1
    )
    control = DFA(control_states, labels, control_states[0], accepting, transitions)
    return build_qfc(states, "q0", alphabet, unitaries, observable, control)


def random_gpfa(spec: RandomSpec, grid_denominator: int | None = None) -> GPFA:
    """Seeded random GPFA with entries in [-1, 1].

    With ``grid_denominator`` set, entries are integer multiples of
    1/denominator; a power-of-two denominator keeps them exactly
    representable, which exact-mode equivalence checking relies on.
    """
    rng = np.random.default_rng(spec.seed)
    s = spec.states

    def draw(shape: tuple[int, ...]) -> np.ndarray:
        if grid_denominator is None:
            return rng.uniform(-1.0, 1.0, size=shape)
        ints = rng.integers(-grid_denominator, grid_denominator + 1, size=shape)
        return ints.astype(np.float64) / grid_denominator

    symbols = _symbols(spec.alphabet_size)
    return build_gpfa(
        symbols,
        draw((s,)),
        {sym: draw((s, s)) for sym in symbols},
        draw((s,)),
    )
