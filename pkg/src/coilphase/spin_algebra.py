"""Spin-j operator algebra in units with hbar = 1.

Matrices are dense complex numpy arrays in the s3-descending basis
(m = j, j-1, ..., -j).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

_HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class SpinOperatorSet:
    """Cartesian and ladder spin matrices for a single spin j."""

    j: float
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray

    @property
    def dim(self) -> int:
        return self.s3.shape[0]

    @property
    def m_values(self) -> np.ndarray:
        return np.real(np.diag(self.s3))

    def vector(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.s1, self.s2, self.s3

    def basis_state(self, m: float) -> np.ndarray:
        """Return the s3 eigenvector |m>."""
        return np.eye(self.dim, dtype=complex)[self.index_of(m)]

    def index_of(self, m: float) -> int:
        idx = np.flatnonzero(np.isclose(self.m_values, m, atol=1e-9))
        if idx.size != 1:
            raise ValueError(f"m={m} is not a valid projection for j={self.j}")
        return int(idx[0])


def _as_half_integer(j) -> Fraction:
    try:
        frac = Fraction(j).limit_denominator(1000)
    except (TypeError, ValueError):
        raise ValueError(f"spin j must be a number, got {j!r}") from None
    if abs(float(frac) - float(j)) > 1e-12 or (2 * frac).denominator != 1:
        raise ValueError(f"spin j must be a half-integer, got {j}")
    if frac <= 0:
        raise ValueError(f"spin j must be positive, got {j}")
    return frac


def make_spin_operators(j) -> SpinOperatorSet:
    """Build S1, S2, S3 and S+- for spin ``j`` (1/2, 1, 3/2, ...)."""
    jf = _as_half_integer(j)
    jj = float(jf)
    dim = int(2 * jf) + 1
    m = jj - np.arange(dim)

    # <m+1|S+|m> = sqrt(j(j+1) - m(m+1)); basis is m-descending so S+ sits above the diagonal
    s_plus = np.diag(np.sqrt(jj * (jj + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    s_minus = s_plus.conj().T.copy()
    s1 = 0.5 * (s_plus + s_minus)
    s2 = -0.5j * (s_plus - s_minus)
    s3 = np.diag(m).astype(complex)
    # s+- = s1 +- i s2 exactly, rebuilt from the Cartesian parts
    s_plus = s1 + 1j * s2
    s_minus = s1 - 1j * s2
    for arr in (s1, s2, s3, s_plus, s_minus):
        arr.setflags(write=False)
    return SpinOperatorSet(jj, s1, s2, s3, s_plus, s_minus)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ValueError(f"commutator needs square matrices of equal shape, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def dot_with_spin(n, ops: SpinOperatorSet) -> np.ndarray:
    """Return n . S for a unit 3-vector ``n``."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {n.shape}")
    if abs(np.linalg.norm(n) - 1.0) > 1e-10:
        raise ValueError(f"direction must be a unit vector, |n| = {np.linalg.norm(n)!r}")
    return n[0] * ops.s1 + n[1] * ops.s2 + n[2] * ops.s3


def vector_dot_spin(v, ops: SpinOperatorSet) -> np.ndarray:
    """Return v . S for an arbitrary (possibly complex) 3-vector."""
    v = np.asarray(v)
    return v[0] * ops.s1 + v[1] * ops.s2 + v[2] * ops.s3


def is_hermitian(a: np.ndarray, tol: float = _HERMITIAN_TOL) -> bool:
    return bool(np.allclose(a, a.conj().T, rtol=0.0, atol=tol * max(1.0, np.abs(a).max(initial=0.0))))


def matrix_exponential(a: np.ndarray) -> np.ndarray:
    """exp(a) for a dense square matrix.

    Hermitian and anti-Hermitian inputs go through an eigendecomposition,
    which keeps the result exactly (anti-)unitary-structured; anything else
    falls back to scaling-and-squaring Pade.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix_exponential needs a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix_exponential input has non-finite entries")
    if is_hermitian(a):
        w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
        return (v * np.exp(w)) @ v.conj().T
    if is_hermitian(1j * a):
        h = 1j * a
        w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
        return (v * np.exp(-1j * w)) @ v.conj().T
    return scipy.linalg.expm(a)


def expm_hermitian_batch(h: np.ndarray, dt: float | np.ndarray) -> np.ndarray:
    """Stack of exp(-i dt H_k) for Hermitian ``h`` of shape (N, d, d)."""
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * np.asarray(dt)[..., None] * w) if np.ndim(dt) else np.exp(-1j * dt * w)
    return (v * phases[:, None, :]) @ np.conj(np.swapaxes(v, -1, -2))
