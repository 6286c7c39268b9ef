"""Shared helpers for the test suite."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from qfa.models import Word


def random_words(
    symbols: tuple[str, ...], count: int, max_len: int, seed: int
) -> list[Word]:
    """Seeded batch of words over ``symbols`` with lengths 0..max_len."""
    rng = np.random.default_rng(seed)
    words = []
    for _ in range(count):
        length = int(rng.integers(0, max_len + 1))
        words.append(tuple(str(s) for s in rng.choice(list(symbols), size=length)))
    return words


def reversed_binary_value(word: Word) -> Fraction:
    """Value of the coin-flip automaton: fold (digit + value) / 2 left to right."""
    v = Fraction(0)
    for sym in word:
        v = (Fraction(int(sym)) + v) / 2
    return v


SIN2_QUARTER_TURN = (0.0, 0.5, 1.0, 0.5, 0.0, 0.5, 1.0, 0.5)
"""sin²(k·pi/4) for k mod 8; exact rational values of the rotation fixture."""
