"""Dense complex-matrix kernel.

Validation of unitaries and projective measurements, orthonormal Hermitian
bases, and the round-trip between Hermitian matrices and real coordinate
vectors. Everything here works on plain ``numpy`` arrays of ``complex128``;
automata in this package stay small (a few hundred states at most), so all
storage is dense.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, ValidationError

# Structural validation (is this a unitary / projector / density matrix?).
TOL_VALID = 1e-10
# Round-trip identities (vectorize/devectorize, basis Gram matrices).
TOL_ROUNDTRIP = 1e-12
# Smallest admissible eigenvalue for "positive semidefinite within noise".
TOL_PSD = -1e-10


def as_complex_matrix(entries: object) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting non-finite entries."""
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of ndim {m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValidationError("matrix contains NaN or infinite entries")
    return m


def max_abs(m: np.ndarray) -> float:
    """Entrywise max-norm; 0.0 for empty arrays."""
    return float(np.max(np.abs(m))) if m.size else 0.0


def validate_unitary(m: np.ndarray, tol: float = TOL_VALID) -> bool:
    """True iff ``m`` is square and ``m† m = I`` within ``tol`` (max-norm)."""
    m = as_complex_matrix(m)
    rows, cols = m.shape
    if rows != cols:
        raise DimensionError(f"unitarity check needs a square matrix, got {rows}x{cols}")
    return max_abs(m.conj().T @ m - np.eye(rows)) <= tol


@dataclass(frozen=True)
class ProjectorFamily:
    """An ordered complete family of mutually orthogonal projectors.

    ``labels``, when present, name the measurement outcomes (one per
    projector); they are required for observables that feed a control
    automaton and optional everywhere else.
    """

    dimension: int
    projectors: tuple[np.ndarray, ...]
    labels: tuple[str, ...] | None = None


def projector_family_violations(f: ProjectorFamily, tol: float = TOL_VALID) -> list[str]:
    """All structural violations of the family, in a fixed check order."""
    problems: list[str] = []
    n = f.dimension
    for i, p in enumerate(f.projectors):
        if p.shape != (n, n):
            raise DimensionError(
                f"projector {i} has shape {p.shape}, family dimension is {n}"
            )
    for i, p in enumerate(f.projectors):
        if max_abs(p - p.conj().T) > tol:
            problems.append(f"projector {i} is not Hermitian")
        if max_abs(p @ p - p) > tol:
            problems.append(f"projector {i} is not idempotent")
    for i in range(len(f.projectors)):
        for j in range(i + 1, len(f.projectors)):
            if max_abs(f.projectors[i] @ f.projectors[j]) > tol:
                problems.append(f"projectors {i} and {j} are not orthogonal")
    total = sum(f.projectors) if f.projectors else np.zeros((n, n), dtype=np.complex128)
    if max_abs(total - np.eye(n)) > tol:
        problems.append("projectors do not sum to identity")
    if f.labels is not None and len(f.labels) != len(f.projectors):
        problems.append(
            f"{len(f.labels)} labels for {len(f.projectors)} projectors"
        )
    return problems


def validate_projector_family(f: ProjectorFamily, tol: float = TOL_VALID) -> bool:
    """True iff the family is Hermitian, idempotent, orthogonal, complete."""
    return not projector_family_violations(f, tol)


def projector_family(
    matrices: Sequence[object], labels: Sequence[str] | None = None
) -> ProjectorFamily:
    """Build a ProjectorFamily from array-likes (no validation beyond shape)."""
    mats = tuple(as_complex_matrix(m) for m in matrices)
    if not mats:
        raise DimensionError("a projector family needs at least one projector")
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise DimensionError(
                f"projector family members must all be {n}x{n}, got {m.shape}"
            )
    for m in mats:
        m.setflags(write=False)
    return ProjectorFamily(n, mats, tuple(labels) if labels is not None else None)


@dataclass(frozen=True)
class HermitianBasis:
    """Orthonormal basis (Hilbert-Schmidt inner product) of Hermitian n x n matrices."""

    dimension: int
    elements: tuple[np.ndarray, ...]


def hermitian_basis(n: int) -> HermitianBasis:
    """Orthonormal Hermitian basis with a fixed, documented ordering.

    Ordering: identity/sqrt(n) first, then the symmetric off-diagonal
    elements (|j><k| + |k><j|)/sqrt(2) for j < k, then the antisymmetric
    ones (-i|j><k| + i|k><j|)/sqrt(2), then the n-1 traceless diagonal
    elements diag(1,...,1,-l,0,...)/sqrt(l(l+1)). This is the normalized
    generalized Gell-Mann family; the identity-first convention makes the
    trace of a matrix readable off its first coordinate.
    """
    if n < 1:
        raise ValueError(f"basis dimension must be >= 1, got {n}")
    elements: list[np.ndarray] = [np.eye(n, dtype=np.complex128) / np.sqrt(n)]
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            e = np.zeros((n, n), dtype=np.complex128)
            e[j, k] = inv_sqrt2
            e[k, j] = inv_sqrt2
            elements.append(e)
    for j in range(n):
        for k in range(j + 1, n):
            e = np.zeros((n, n), dtype=np.complex128)
            e[j, k] = -1j * inv_sqrt2
            e[k, j] = 1j * inv_sqrt2
            elements.append(e)
    for l in range(1, n):
        e = np.zeros((n, n), dtype=np.complex128)
        scale = 1.0 / np.sqrt(l * (l + 1))
        for i in range(l):
            e[i, i] = scale
        e[l, l] = -l * scale
        elements.append(e)
    for e in elements:
        e.setflags(write=False)
    return HermitianBasis(n, tuple(elements))


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product trace(a† b)."""
    return complex(np.trace(a.conj().T @ b))


def vectorize(h: np.ndarray, b: HermitianBasis) -> np.ndarray:
    """Real coordinates of a Hermitian matrix in the given basis.

    Coordinate i is the Hilbert-Schmidt inner product of basis element i
    with ``h``; these are real for Hermitian inputs, so the imaginary
    parts (floating noise) are discarded after the Hermiticity check.
    """
    h = as_complex_matrix(h)
    n = b.dimension
    if h.shape != (n, n):
        raise DimensionError(f"matrix is {h.shape}, basis dimension is {n}")
    if max_abs(h - h.conj().T) > TOL_VALID:
        raise ValidationError("vectorize requires a Hermitian matrix")
    coords = np.array([hs_inner(e, h) for e in b.elements])
    return coords.real.copy()


def devectorize(v: np.ndarray, b: HermitianBasis) -> np.ndarray:
    """Hermitian matrix with the given real coordinates: sum_i v[i] E_i."""
    v = np.asarray(v, dtype=np.float64)
    n = b.dimension
    if v.shape != (n * n,):
        raise DimensionError(f"coordinate vector has shape {v.shape}, expected ({n * n},)")
    out = np.zeros((n, n), dtype=np.complex128)
    for coeff, e in zip(v, b.elements):
        out += coeff * e
    return out


def is_density_like(m: np.ndarray, tol: float = TOL_VALID) -> bool:
    """Hermitian, PSD within eigenvalue noise, trace in [0, 1 + tol].

    Accepts subnormalized states: trace below 1 encodes probability mass
    that already halted.
    """
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError("density check needs a square matrix")
    if max_abs(m - m.conj().T) > tol:
        return False
    herm = (m + m.conj().T) / 2
    smallest = float(np.linalg.eigvalsh(herm)[0]) if m.size else 0.0
    if smallest < TOL_PSD:
        return False
    tr = float(np.trace(herm).real)
    return -tol <= tr <= 1 + tol
