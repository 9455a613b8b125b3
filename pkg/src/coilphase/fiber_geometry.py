"""Coiled-fiber geometry: tangent directions, helices and path schedules.

Angles are in radians, lengths in meters, times in seconds.  The azimuth
phi is never range-reduced, so a schedule keeps its total winding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT


def _check_theta(theta) -> None:
    th = np.asarray(theta, dtype=float)
    if np.any(~np.isfinite(th)) or np.any(th < 0.0) or np.any(th > math.pi):
        raise ValueError(f"polar angle must lie in [0, pi], got {theta!r}")


def tangent_direction(theta, phi) -> np.ndarray:
    """Unit vector (sin t cos p, sin t sin p, cos t); broadcasts over arrays."""
    _check_theta(theta)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta) + 0.0 * phi], axis=-1)


def solid_angle(theta):
    """Solid angle 2*pi*(1 - cos theta) of the cone swept at polar angle theta."""
    _check_theta(theta)
    # 2 sin^2(theta/2) avoids cancellation near theta = 0
    out = 4.0 * math.pi * np.sin(np.asarray(theta, dtype=float) / 2.0) ** 2
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class HelixSpec:
    """Helical fiber: coil radius, pitch, and either index or phase velocity.

    ``radius = 0`` is a straight fiber and ``pitch = 0`` a flat ring; the two
    limits theta = 0 and theta = pi/2 are then exact.
    """

    radius: float
    pitch: float
    refractive_index: float | None = None
    phase_velocity: float | None = None

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius >= 0.0):
            raise ValueError(f"helix radius must be >= 0, got {self.radius}")
        if not (np.isfinite(self.pitch) and self.pitch >= 0.0):
            raise ValueError(f"helix pitch must be >= 0, got {self.pitch}")
        if self.radius == 0.0 and self.pitch == 0.0:
            raise ValueError("helix radius and pitch cannot both be zero")
        if (self.refractive_index is None) == (self.phase_velocity is None):
            raise ValueError("give exactly one of refractive_index or phase_velocity")
        if self.refractive_index is not None and not self.refractive_index >= 1.0:
            raise ValueError(f"refractive index must be >= 1, got {self.refractive_index}")
        if self.phase_velocity is not None and not 0.0 < self.phase_velocity <= SPEED_OF_LIGHT:
            raise ValueError(f"phase velocity must lie in (0, c], got {self.phase_velocity}")

    @property
    def velocity(self) -> float:
        if self.phase_velocity is not None:
            return float(self.phase_velocity)
        return SPEED_OF_LIGHT / self.refractive_index

    @property
    def precession_length(self) -> float:
        """sqrt(d^2 + (4 pi a)^2), the length entering the precession rate."""
        return math.hypot(self.pitch, 4.0 * math.pi * self.radius)

    @property
    def turn_length(self) -> float:
        """Arc length of one turn of the parametric helix, sqrt(d^2 + (2 pi a)^2)."""
        return math.hypot(self.pitch, 2.0 * math.pi * self.radius)


def precession_frequency(helix: HelixSpec, velocity: float | None = None) -> float:
    """Omega = 2 pi v / sqrt(d^2 + (4 pi a)^2).

    Note the (4 pi a) term: this is not the one-turn arc length of the
    helix, which has (2 pi a).  ``velocity`` overrides the helix's own phase
    velocity (used for the per-handedness rates in chiral media).
    """
    v = helix.velocity if velocity is None else velocity
    return 2.0 * math.pi * v / helix.precession_length


def helix_polar_angle(helix: HelixSpec) -> float:
    """Angle between the helix tangent and its axis: cos theta = d / sqrt(d^2 + (2 pi a)^2)."""
    return math.atan2(2.0 * math.pi * helix.radius, helix.pitch)


class PathSchedule:
    """Time history of the fiber tangent direction (theta(t), phi(t)).

    Subclasses provide the angles, the azimuthal rate, and the breakpoints
    between which both angles are smooth.
    """

    omega: float
    duration: float
    start: float = 0.0

    def angles(self, t):
        raise NotImplementedError

    def phi_rate(self, t):
        raise NotImplementedError

    def breakpoints(self) -> np.ndarray:
        return np.array([self.start, self.start + self.duration])

    def direction(self, t) -> np.ndarray:
        theta, phi = self.angles(t)
        return tangent_direction(theta, phi)

    def solid_angle_integral(self) -> float:
        """Integral of (1 - cos theta) dphi along the schedule."""
        raise NotImplementedError

    def _check_common(self):
        if not (np.isfinite(self.omega) and self.omega > 0.0):
            raise ValueError(f"optical frequency must be > 0, got {self.omega}")
        if not (np.isfinite(self.duration) and self.duration > 0.0):
            raise ValueError(f"duration must be > 0, got {self.duration}")


@dataclass(frozen=True)
class HelicalPath(PathSchedule):
    """Constant polar angle with a uniformly advancing azimuth phi0 + Omega t."""

    theta0: float
    precession: float
    omega: float
    duration: float
    phi0: float = 0.0

    def __post_init__(self):
        _check_theta(self.theta0)
        if not np.isfinite(self.precession):
            raise ValueError("precession rate must be finite")
        self._check_common()

    @classmethod
    def one_cycle(cls, theta0: float, precession: float, omega: float, phi0: float = 0.0, cycles: float = 1.0):
        return cls(theta0, precession, omega, cycles * 2.0 * math.pi / abs(precession), phi0)

    @classmethod
    def from_helix(cls, helix: HelixSpec, omega: float, cycles: float = 1.0):
        prec = precession_frequency(helix)
        return cls.one_cycle(helix_polar_angle(helix), prec, omega, cycles=cycles)

    def angles(self, t):
        t = np.asarray(t, dtype=float)
        return np.full_like(t, self.theta0), self.phi0 + self.precession * t

    def phi_rate(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.precession)

    def solid_angle_integral(self) -> float:
        return (1.0 - math.cos(self.theta0)) * self.precession * self.duration

    def adiabatic_ratio(self) -> float:
        return self.omega / abs(self.precession) if self.precession else math.inf

    def to_samples(self, times) -> "SampledPath":
        times = np.asarray(times, dtype=float)
        theta, phi = self.angles(times)
        return SampledPath(times, theta, phi, self.omega)


class SampledPath(PathSchedule):
    """Tabulated (t_k, theta_k, phi_k), linearly interpolated in both angles."""

    def __init__(self, times, theta, phi, omega: float):
        times = np.array(times, dtype=float)
        theta = np.array(theta, dtype=float)
        phi = np.array(phi, dtype=float)
        if times.ndim != 1 or times.shape != theta.shape or times.shape != phi.shape:
            raise ValueError("times, theta and phi must be 1-d arrays of equal length")
        if times.size < 2:
            raise ValueError("a sampled path needs at least 2 points")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("sample times must be strictly increasing")
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(times))):
            raise ValueError("sampled path has non-finite entries")
        _check_theta(theta)
        for arr in (times, theta, phi):
            arr.setflags(write=False)
        self.times, self.theta, self.phi = times, theta, phi
        self.omega = float(omega)
        self.start = float(times[0])
        self.duration = float(times[-1] - times[0])
        self._check_common()

    def __repr__(self):
        return f"SampledPath(n={self.times.size}, t=[{self.times[0]:g}, {self.times[-1]:g}], omega={self.omega:g})"

    def angles(self, t):
        t = np.asarray(t, dtype=float)
        return np.interp(t, self.times, self.theta), np.interp(t, self.times, self.phi)

    def phi_rate(self, t):
        t = np.asarray(t, dtype=float)
        slopes = np.diff(self.phi) / np.diff(self.times)
        k = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, slopes.size - 1)
        return slopes[k]

    def breakpoints(self) -> np.ndarray:
        return self.times

    def solid_angle_integral(self) -> float:
        # exact for the linear interpolant: mean of cos over a linear theta segment
        a, b = self.theta[:-1], self.theta[1:]
        half = 0.5 * (b - a)
        mean_cos = np.cos(0.5 * (a + b)) * np.sinc(half / np.pi)
        return float(np.sum(np.diff(self.phi) * (1.0 - mean_cos)))

    def reparameterized(self, new_times) -> "SampledPath":
        """Same angle samples visited at different (still increasing) times."""
        return SampledPath(new_times, self.theta, self.phi, self.omega)
