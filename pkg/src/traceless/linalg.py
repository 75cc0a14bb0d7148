"""Dense complex matrix primitives: norms, SVD profiles, polar decomposition.

All functions accept anything convertible to a 2-d complex ndarray and are
pure; tolerances are relative to the scale of the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SingularProfile",
    "as_matrix",
    "commutator",
    "operator_norm",
    "hs_norm",
    "nuclear_norm",
    "singular_profile",
    "polar_decompose",
    "is_normal",
]


def as_matrix(a, square: bool = False) -> np.ndarray:
    """Coerce to a 2-d complex128 array, validating shape and finiteness."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={m.ndim}")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix has non-finite entries")
    return m


def commutator(b, c) -> np.ndarray:
    """Return BC - CB.  Its trace vanishes up to roundoff for any B, C."""
    b = as_matrix(b, square=True)
    c = as_matrix(c, square=True)
    if b.shape != c.shape:
        raise ValueError(f"dimension mismatch: {b.shape} vs {c.shape}")
    return b @ c - c @ b


def operator_norm(m) -> float:
    """Largest singular value (norm as an operator on l2)."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def hs_norm(m) -> float:
    """Hilbert-Schmidt (Frobenius) norm: sqrt of the sum of |entry|^2."""
    return float(np.linalg.norm(as_matrix(m)))


def nuclear_norm(m) -> float:
    """Sum of singular values (trace norm)."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


@dataclass
class SingularProfile:
    """Singular values in non-increasing order together with partial sums.

    ``partial_sums[k]`` is the sum of the first k+1 values, so the sum of
    the leading l values is ``partial_sums[l - 1]``.
    """

    values: np.ndarray
    partial_sums: np.ndarray

    def leading_sum(self, l: int) -> float:
        """Sum of the l largest singular values."""
        if not 1 <= l <= len(self.values):
            raise ValueError(f"l={l} out of range 1..{len(self.values)}")
        return float(self.partial_sums[l - 1])


def singular_profile(m) -> SingularProfile:
    """Full singular spectrum of a square matrix, sorted non-increasing.

    Raises ``numpy.linalg.LinAlgError`` if the SVD fails to converge; the
    failure is deliberately not swallowed.
    """
    m = as_matrix(m, square=True)
    values = np.linalg.svd(m, compute_uv=False)
    return SingularProfile(values=values, partial_sums=np.cumsum(values))


def polar_decompose(m) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition M = U H with U unitary and H = |M| PSD Hermitian.

    Computed from the full SVD, so U is always unitary (hence a partial
    isometry on the range of H) even when M is singular.
    """
    m = as_matrix(m, square=True)
    u, s, vh = np.linalg.svd(m)
    unitary = u @ vh
    h = vh.conj().T @ (s[:, None] * vh)
    h = 0.5 * (h + h.conj().T)
    return unitary, h


def is_normal(m, tol: float = 1e-10) -> bool:
    """True iff ||M M* - M* M||_2 <= tol * max(1, ||M||^2)."""
    m = as_matrix(m, square=True)
    defect = hs_norm(m @ m.conj().T - m.conj().T @ m)
    return defect <= tol * max(1.0, operator_norm(m) ** 2)
