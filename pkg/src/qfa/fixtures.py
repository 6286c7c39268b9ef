"""Small canonical machines used throughout the tests and docs."""

from __future__ import annotations

import math

import numpy as np

from .linalg import projector_family
from .models import (
    DFA,
    KWQFA,
    NQFA,
    PFA,
    QFC,
    Alphabet,
    build_kwqfa,
    build_nqfa,
    build_pfa,
    build_qfc,
    identity_measurements,
)

_SWAP_HALT = np.array(
    # q0 <-> q_rej and q1 <-> q_acc, a permutation on 4 states.
    [
        [0, 0, 0, 1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [1, 0, 0, 0],
    ],
    dtype=np.complex128,
)


def rotation_kwqfa(theta: float) -> KWQFA:
    """Four-state machine accepting a^k with probability sin²(k·theta).

    Each 'a' rotates the live plane span(q0, q1) by theta; the right
    marker routes q1 to the accepting state and q0 to the rejecting one.
    """
    c, s = math.cos(theta), math.sin(theta)
    rotate = np.array(
        [
            [c, -s, 0, 0],
            [s, c, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ],
        dtype=np.complex128,
    )
    alphabet = Alphabet(("a",))
    return build_kwqfa(
        states=("q0", "q1", "q_acc", "q_rej"),
        initial="q0",
        accepting=("q_acc",),
        rejecting=("q_rej",),
        alphabet=alphabet,
        unitaries={
            alphabet.left_marker: np.eye(4, dtype=np.complex128),
            "a": rotate,
            alphabet.right_marker: _SWAP_HALT,
        },
    )


def dephasing_nqfa(theta: float) -> NQFA:
    """The rotation machine with a dephasing measurement after every 'a'.

    The intermediate measurement projects onto q0, q1, and the halting
    plane separately, killing the coherence the rotation builds up. For
    theta = pi/4 the live dynamics collapse to a two-state Markov chain
    with transition matrix [[1/2, 1/2], [1/2, 1/2]], so every non-empty
    word is accepted with probability 1/2, while the measurement-free
    machine would give sin²(k·theta).
    """
    rotation = rotation_kwqfa(theta)
    alphabet = rotation.alphabet
    p0 = np.zeros((4, 4), dtype=np.complex128)
    p0[0, 0] = 1.0
    p1 = np.zeros((4, 4), dtype=np.complex128)
    p1[1, 1] = 1.0
    p_halt = np.zeros((4, 4), dtype=np.complex128)
    p_halt[2, 2] = 1.0
    p_halt[3, 3] = 1.0
    measurements = identity_measurements(alphabet, 4)
    measurements["a"] = projector_family([p0, p1, p_halt])
    return build_nqfa(
        states=rotation.states,
        initial=rotation.initial,
        accepting=rotation.accepting,
        rejecting=rotation.rejecting,
        alphabet=alphabet,
        unitaries=rotation.unitaries,
        measurements=measurements,
    )


def always_accept_kwqfa(symbols: tuple[str, ...] = ("a",)) -> KWQFA:
    """Two-state machine accepting every word with probability 1.

    Nothing happens until the right marker swaps the initial state into
    the accepting one.
    """
    alphabet = Alphabet(symbols)
    eye = np.eye(2, dtype=np.complex128)
    swap = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    unitaries: dict[str, np.ndarray] = {sym: eye for sym in alphabet.tape_symbols}
    unitaries[alphabet.right_marker] = swap
    return build_kwqfa(
        states=("q0", "q_acc"),
        initial="q0",
        accepting=("q_acc",),
        rejecting=(),
        alphabet=alphabet,
        unitaries=unitaries,
    )


def binary_expansion_pfa() -> PFA:
    """Rabin's two-state coin-flip automaton over {0, 1}.

    value(w1 ... wm) is the binary expansion 0.wm ... w1, i.e. the word
    read as a binary fraction with the *last* symbol most significant:
    reading sigma from acceptance weight p gives (sigma + p) / 2. No
    two-state row-stochastic machine can produce the first-symbol-most-
    significant order, since that needs position-dependent increments.
    """
    return build_pfa(
        alphabet=("0", "1"),
        initial=(1.0, 0.0),
        transitions={
            "0": [[1.0, 0.0], [0.5, 0.5]],
            "1": [[0.5, 0.5], [0.0, 1.0]],
        },
        final=(0.0, 1.0),
    )


def trivial_qfc(accept_all: bool = True) -> QFC:
    """One quantum state, identity observable, one-state control DFA.

    Accepts everything with probability 1, or nothing at all when
    ``accept_all`` is false.
    """
    alphabet = Alphabet(("a",))
    eye = np.eye(1, dtype=np.complex128)
    control = DFA(
        states=("d0",),
        alphabet=("c",),
        start="d0",
        accepting=frozenset({"d0"}) if accept_all else frozenset(),
        transitions={("d0", "c"): "d0"},
    )
    return build_qfc(
        states=("q0",),
        initial="q0",
        alphabet=alphabet,
        unitaries={sym: eye for sym in alphabet.tape_symbols},
        observable=projector_family([eye], labels=("c",)),
        control=control,
    )
