"""Chiral-medium dispersion, precession splitting and field-energy forms.

Constitutive relations D = eps eps0 E + i zeta B, H = i zeta E + B/mu0 with
zeta in siemens.  SI units throughout; constants are CODATA via scipy.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import epsilon_0 as EPS0
from scipy.constants import mu_0 as MU0

from .fiber_geometry import HelixSpec

SMALL_ZETA_FRACTION = 0.01


@dataclass(frozen=True)
class ChiralMedium:
    epsilon: float
    zeta: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"relative permittivity must be > 0, got {self.epsilon}")
        if not np.isfinite(self.zeta):
            raise ValueError("chirality must be finite")

    @property
    def admittance(self) -> float:
        """sqrt(eps eps0 / mu0), the scale against which zeta is small."""
        return math.sqrt(self.epsilon * EPS0 / MU0)

    @property
    def small_zeta(self) -> bool:
        return abs(self.zeta) < SMALL_ZETA_FRACTION * self.admittance

    @property
    def kappa(self) -> float:
        """Effective permittivity eps eps0 + mu0 zeta^2 of the field energy."""
        return self.epsilon * EPS0 + MU0 * self.zeta ** 2

    def negated(self) -> "ChiralMedium":
        return ChiralMedium(self.epsilon, -self.zeta)


def small_zeta_threshold(epsilon: float) -> float:
    return SMALL_ZETA_FRACTION * math.sqrt(epsilon * EPS0 / MU0)


@dataclass(frozen=True)
class DispersionResult:
    omega: float
    k_R: float
    k_L: float
    delta_k: float


def dispersion(omega: float, m: ChiralMedium) -> DispersionResult:
    """Positive roots of k^2 +- 2 zeta mu0 omega k - eps eps0 mu0 omega^2 = 0.

    The root with the sum (not the difference) is evaluated directly and the
    other via the root product k_R k_L = eps eps0 mu0 omega^2, so neither
    suffers cancellation.  delta_k = k_R - k_L = -2 zeta mu0 omega.
    """
    if not (np.isfinite(omega) and omega > 0):
        raise ValueError(f"omega must be > 0, got {omega}")
    s = math.hypot(m.zeta, m.admittance)
    big = MU0 * omega * (abs(m.zeta) + s)
    small = m.epsilon * EPS0 * MU0 * omega * omega / big if m.zeta else big
    k_R, k_L = (small, big) if m.zeta >= 0 else (big, small)
    return DispersionResult(omega, k_R, k_L, -2.0 * m.zeta * MU0 * omega + 0.0)


def quadratic_residuals(res: DispersionResult, m: ChiralMedium) -> tuple[float, float]:
    """Relative residuals of both roots in their quadratics (scaled by the largest term)."""
    out = []
    for k, sign in ((res.k_R, +1.0), (res.k_L, -1.0)):
        terms = (k * k, sign * 2.0 * m.zeta * MU0 * res.omega * k, -m.epsilon * EPS0 * MU0 * res.omega ** 2)
        out.append(abs(math.fsum(terms)) / max(abs(x) for x in terms))
    return out[0], out[1]


@dataclass(frozen=True)
class PrecessionSplit:
    """Per-handedness precession rates and their splitting.

    Differences are R minus L.  ``*_closed`` are the closed forms quoted for
    small zeta; ``*_exact`` follow from the exact roots.
    """

    omega: float
    Omega_R: float
    Omega_L: float
    delta_Omega_closed: float
    delta_Omega_exact: float
    delta_T_closed: float
    delta_T_exact: float
    small_zeta: bool

    @property
    def delta_Omega(self) -> float:
        return self.delta_Omega_closed if self.small_zeta else self.delta_Omega_exact

    @property
    def delta_T(self) -> float:
        return self.delta_T_closed if self.small_zeta else self.delta_T_exact


def precession_split(m: ChiralMedium, helix: HelixSpec, omega: float = 1.0) -> PrecessionSplit:
    """Split of precession rate and period between R and L light on a helix.

    Rates use the phase velocity v_h = omega / k_h of each handedness.  The
    splits themselves do not depend on ``omega``.
    """
    arc = helix.precession_length
    d = dispersion(omega, m)
    Omega_R = 2.0 * math.pi * omega / (arc * d.k_R)
    Omega_L = 2.0 * math.pi * omega / (arc * d.k_L)
    # 1/k_R - 1/k_L = -delta_k / (k_R k_L): no subtraction of nearly equal rates
    dO_exact = -2.0 * math.pi * omega * d.delta_k / (arc * d.k_R * d.k_L)
    dT_exact = arc * d.delta_k / omega
    dO_closed = 4.0 * m.zeta * math.pi * SPEED_OF_LIGHT ** 2 * MU0 / (m.epsilon * arc)
    dT_closed = -2.0 * m.zeta * MU0 * arc
    if not m.small_zeta:
        warnings.warn(f"|zeta| = {abs(m.zeta):.3g} S is not small against sqrt(eps eps0/mu0) = {m.admittance:.3g} S; "
                      "use the exact-dispersion split", stacklevel=2)
    return PrecessionSplit(omega, Omega_R, Omega_L, dO_closed, dO_exact, dT_closed, dT_exact, m.small_zeta)


@dataclass(frozen=True)
class ModeAmplitudeSet:
    omega: np.ndarray
    f: np.ndarray
    volume: float

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.omega, dtype=float))
        f = np.atleast_1d(np.asarray(self.f, dtype=complex))
        if w.shape != f.shape or w.ndim != 1:
            raise ValueError("omega and f must be 1-d and equally long")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(f))):
            raise ValueError("mode set has non-finite entries")
        if not (np.isfinite(self.volume) and self.volume > 0):
            raise ValueError(f"volume must be > 0, got {self.volume}")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "f", f)


def canonical_coordinates(modes: ModeAmplitudeSet, m: ChiralMedium) -> tuple[np.ndarray, np.ndarray]:
    root = math.sqrt(m.kappa * modes.volume)
    f = modes.f
    q = root * (f + f.conj())
    p = -1j * root * modes.omega * (f - f.conj())
    return q.real, p.real


def field_energy_forms(modes: ModeAmplitudeSet, m: ChiralMedium) -> tuple[float, float]:
    """Field energy 2 kappa V sum w^2 |f|^2 and the same from (q, p)."""
    w_direct = 2.0 * m.kappa * modes.volume * float(np.sum(modes.omega ** 2 * np.abs(modes.f) ** 2))
    q, p = canonical_coordinates(modes, m)
    w_canonical = 0.5 * float(np.sum(p ** 2 + modes.omega ** 2 * q ** 2))
    return w_direct, w_canonical
