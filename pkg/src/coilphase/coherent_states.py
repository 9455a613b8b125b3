"""Single-mode coherent states whose number components carry evolution phases.

A phase table stores the geometric and dynamical parts of gamma_n
separately; the phase applied to |n> is geometric - dynamical.  The R mode
is treated explicitly; for the L mode flip the sign of theta-dependent terms
through ``berry_phase_table``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .fiber_geometry import solid_angle
from .fock_modes import _sign, ladder

UNIFORM_TOL = 1e-12


@dataclass(frozen=True)
class PhaseTable:
    geometric: np.ndarray
    dynamical: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.geometric, dtype=float)
        d = np.asarray(self.dynamical, dtype=float)
        if g.ndim != 1 or g.shape != d.shape:
            raise ValueError("geometric and dynamical tables must be 1-d and equally long")
        object.__setattr__(self, "geometric", g)
        object.__setattr__(self, "dynamical", d)

    def __len__(self):
        return self.geometric.size

    @property
    def total(self) -> np.ndarray:
        return self.geometric - self.dynamical

    @classmethod
    def zeros(cls, n_max: int) -> "PhaseTable":
        return cls(np.zeros(n_max + 1), np.zeros(n_max + 1))


def berry_phase_table(handedness: str, theta: float, n_max: int, omega_t: float = 0.0,
                      vacuum_offset: bool = True) -> PhaseTable:
    """gamma_n for n = 0..n_max from the second-quantized cyclic phases.

    The dynamical part is (n + 1/2) * omega_t, the oscillator energy times
    the period.  ``vacuum_offset=False`` drops the +1/2 in both parts.
    """
    n = np.arange(n_max + 1, dtype=float) + (0.5 if vacuum_offset else 0.0)
    return PhaseTable(_sign(handedness) * solid_angle(theta) * n, omega_t * n)


@dataclass(frozen=True)
class PhasedCoherentState:
    alpha: complex
    phases: PhaseTable
    amplitudes: np.ndarray

    @property
    def n_max(self) -> int:
        return self.amplitudes.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def mean_number(self) -> float:
        return float(np.sum(np.arange(self.amplitudes.size) * np.abs(self.amplitudes) ** 2))


def poisson_tail(alpha: complex, n_max: int) -> float:
    """Probability weight e^{-|a|^2} sum_{n > n_max} |a|^{2n}/n! lost to truncation."""
    return float(poisson.sf(n_max, abs(alpha) ** 2))


def build_phased_coherent(alpha: complex, gamma_of_n: PhaseTable, n_max: int | None = None) -> PhasedCoherentState:
    alpha = complex(alpha)
    n_max = len(gamma_of_n) - 1 if n_max is None else int(n_max)
    if len(gamma_of_n) < n_max + 1:
        raise ValueError(f"phase table covers {len(gamma_of_n)} occupations, need {n_max + 1}")
    r = abs(alpha)
    if r * r > n_max - 10.0 * r:
        raise ValueError(f"|alpha|^2 = {r * r:.3g} exceeds the truncation-safe bound n_max - 10|alpha| = {n_max - 10 * r:.3g}")
    n = np.arange(n_max + 1)
    # log-space magnitudes avoid overflow in alpha^n / sqrt(n!)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_mag = -0.5 * r * r + n * np.log(r) - 0.5 * gammaln(n + 1)
    mag = np.where(n == 0, math.exp(-0.5 * r * r), np.exp(log_mag)) if r > 0 else (n == 0).astype(float)
    phase = n * np.angle(alpha) + gamma_of_n.total[: n_max + 1]
    return PhasedCoherentState(alpha, gamma_of_n, mag * np.exp(1j * phase))


def quadrature_operator(n_max: int) -> np.ndarray:
    a = ladder(n_max)
    return (a + a.conj().T) / math.sqrt(2.0)


def quadrature_expectation(state: PhasedCoherentState, return_imag: bool = False):
    """<q> with q = (a + a^dag)/sqrt(2), by direct contraction."""
    c = state.amplitudes
    val = np.vdot(c, quadrature_operator(state.n_max) @ c)
    return (float(val.real), float(val.imag)) if return_imag else float(val.real)


def quadrature_closed_form(alpha: complex, delta: float) -> float:
    alpha = complex(alpha)
    return float(((alpha.conjugate() * np.exp(-1j * delta) + alpha * np.exp(1j * delta)) / math.sqrt(2.0)).real)


@dataclass(frozen=True)
class PhaseShift:
    total: float
    geometric: float
    dynamical: float
    uniform: bool


def phase_shift_delta(gamma_of_n) -> PhaseShift:
    """First difference gamma_{n+1} - gamma_n, per part, and whether it is n-independent.

    Accepts a ``PhaseTable`` or a plain array (read as purely geometric).
    """
    if not isinstance(gamma_of_n, PhaseTable):
        arr = np.asarray(gamma_of_n, dtype=float)
        gamma_of_n = PhaseTable(arr, np.zeros_like(arr))
    if len(gamma_of_n) < 2:
        raise ValueError("phase table needs at least 2 entries")
    dg = np.diff(gamma_of_n.geometric)
    dd = np.diff(gamma_of_n.dynamical)
    uniform = all(np.all(np.abs(x - x[0]) <= UNIFORM_TOL * max(1.0, abs(x[0]))) for x in (dg, dd))
    return PhaseShift(total=float(dg[0] - dd[0]), geometric=float(dg[0]), dynamical=float(dd[0]), uniform=bool(uniform))
