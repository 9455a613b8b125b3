"""Adiabatic transport of the photon helicity state along a coiled fiber.

The effective Hamiltonian is H(t) = omega n(t).S (hbar = 1).  ``unitary_V``
rotates the s3 basis onto the instantaneous eigenbasis of H; the phase
functionals integrate along a ``PathSchedule``; ``integrate_schrodinger``
solves the Schrodinger equation directly and never touches V, so
``extract_phases`` can compare the two routes.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fiber_geometry import HelicalPath, PathSchedule, _check_theta, tangent_direction
from .spin_algebra import SpinOperatorSet, expm_hermitian_batch, matrix_exponential

log = logging.getLogger(__name__)

ADIABATIC_THRESHOLD = 100.0
DEFAULT_STEPS_PER_CYCLE = 10_000
NORM_DRIFT_LIMIT = 1e-9
MAX_INCREMENT = math.pi / 2


class StepSizeError(RuntimeError):
    """Raised when the time step is too coarse for the requested evolution."""


@dataclass(frozen=True)
class PhaseDecomposition:
    total: float
    dynamical: float
    geometric: float
    m: float = 0.0
    steps: int = 0

    @property
    def physical(self) -> bool:
        # the m = 0 (longitudinal) spin-1 state carries no photon polarization
        return self.m != 0


@dataclass(frozen=True)
class ClassicalFieldVector:
    """Complex field G = E +- i v B and the phase velocity v."""

    g: np.ndarray
    v: float

    def __post_init__(self):
        g = np.asarray(self.g, dtype=complex)
        if g.shape != (3,) or not np.all(np.isfinite(g)):
            raise ValueError("field vector must have 3 finite components")
        if not (np.isfinite(self.v) and self.v > 0):
            raise ValueError(f"phase velocity must be > 0, got {self.v}")
        object.__setattr__(self, "g", g)


def _v_generator(theta, phi, ops: SpinOperatorSet) -> np.ndarray:
    """Anti-Hermitian exponent of V, broadcast over angle arrays."""
    theta = np.asarray(theta, dtype=float)[..., None, None]
    phi = np.asarray(phi, dtype=float)[..., None, None]
    return (-0.5 * theta * np.exp(-1j * phi)) * ops.s_plus - (-0.5 * theta * np.exp(1j * phi)) * ops.s_minus


def unitary_V(theta: float, phi: float, ops: SpinOperatorSet) -> np.ndarray:
    """V = exp{-(theta/2) e^{-i phi} S+ + (theta/2) e^{i phi} S-}.

    V|m> is the eigenvector of n(theta, phi).S with eigenvalue m.
    """
    _check_theta(theta)
    return matrix_exponential(_v_generator(theta, phi, ops))


def unitary_V_batch(theta, phi, ops: SpinOperatorSet) -> np.ndarray:
    _check_theta(theta)
    a = _v_generator(theta, phi, ops)
    # V = exp(a) = exp(-i h) with h = i a Hermitian
    return expm_hermitian_batch(1j * a, 1.0)


def hamiltonian_batch(schedule: PathSchedule, t, ops: SpinOperatorSet) -> np.ndarray:
    n = schedule.direction(np.atleast_1d(t))
    return schedule.omega * np.einsum("ka,aij->kij", n, np.stack(ops.vector()))


def _check_m(m, ops: SpinOperatorSet) -> int:
    if abs(m) > ops.j + 1e-12:
        raise ValueError(f"|m| must not exceed j={ops.j}, got m={m}")
    return ops.index_of(m)


def _gauss_nodes(schedule: PathSchedule, order: int = 8, min_panels: int = 64):
    """Composite Gauss-Legendre nodes/weights over the schedule's smooth pieces."""
    bps = schedule.breakpoints()
    panels = max(1, math.ceil(min_panels / (bps.size - 1)))
    edges = np.concatenate([np.linspace(a, b, panels + 1)[:-1] for a, b in zip(bps[:-1], bps[1:])] + [bps[-1:]])
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    t = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    wt = 0.5 * (hi - lo) * w
    return t.ravel(), wt.ravel()


def dynamical_phase(schedule: PathSchedule, m: float, ops: SpinOperatorSet) -> float:
    """Integral over the schedule of <m|V^dag H V|m> (hbar = 1)."""
    k = _check_m(m, ops)
    t, w = _gauss_nodes(schedule)
    theta, phi = schedule.angles(t)
    vm = unitary_V_batch(theta, phi, ops)[:, :, k]
    h = hamiltonian_batch(schedule, t, ops)
    integrand = np.einsum("ki,kij,kj->k", vm.conj(), h, vm).real
    return float(np.dot(w, integrand))


def solid_angle_swept(schedule: PathSchedule) -> float:
    """Quadrature of phi_dot (1 - cos theta) over the schedule."""
    t, w = _gauss_nodes(schedule)
    theta, _ = schedule.angles(t)
    # 1 - cos = 2 sin^2(theta/2) keeps precision for shallow cones
    return float(np.dot(w, schedule.phi_rate(t) * 2.0 * np.sin(0.5 * theta) ** 2))


def geometric_phase(schedule: PathSchedule, m: float, ops: SpinOperatorSet) -> float:
    """Berry phase -m * integral phi_dot (1 - cos theta) dt."""
    _check_m(m, ops)
    if schedule.breakpoints().size < 2:
        raise ValueError("schedule needs at least 2 samples")
    return -float(m) * solid_angle_swept(schedule)


def berry_phase_closed_form(theta: float, m: float) -> float:
    """Cyclic Berry phase -2 pi (1 - cos theta) m for one precession period."""
    _check_theta(theta)
    return -4.0 * math.pi * math.sin(0.5 * theta) ** 2 * m


def geometric_phase_connection(schedule: PathSchedule, m: float, ops: SpinOperatorSet, h: float | None = None) -> float:
    """Berry phase from the connection i<m|V^dag dV/dt|m>, by central differences.

    Slower and less accurate than ``geometric_phase``; kept as a cross-check
    that does not use the closed-form integrand.
    """
    k = _check_m(m, ops)
    t, w = _gauss_nodes(schedule)
    if h is None:
        h = 1e-5 * schedule.duration / max(1, schedule.breakpoints().size - 1)
    lo, hi = schedule.start, schedule.start + schedule.duration
    tp, tm = np.minimum(t + h, hi), np.maximum(t - h, lo)
    v0 = unitary_V_batch(*schedule.angles(t), ops)[:, :, k]
    vp = unitary_V_batch(*schedule.angles(tp), ops)[:, :, k]
    vm = unitary_V_batch(*schedule.angles(tm), ops)[:, :, k]
    dv = (vp - vm) / (tp - tm)[:, None]
    integrand = np.real(1j * np.einsum("ki,ki->k", v0.conj(), dv))
    return float(np.dot(w, integrand))


def _time_grid(schedule: PathSchedule, steps: int) -> np.ndarray:
    return schedule.start + schedule.duration * np.arange(steps + 1) / steps


def _propagators_magnus4(schedule: PathSchedule, t: np.ndarray, ops: SpinOperatorSet) -> np.ndarray:
    h = t[1] - t[0]
    c = math.sqrt(3.0) / 6.0
    h1 = hamiltonian_batch(schedule, t[:-1] + (0.5 - c) * h, ops)
    h2 = hamiltonian_batch(schedule, t[:-1] + (0.5 + c) * h, ops)
    k = 0.5 * h * (h1 + h2) + 1j * (math.sqrt(3.0) * h * h / 12.0) * (h1 @ h2 - h2 @ h1)
    k = 0.5 * (k + np.conj(np.swapaxes(k, -1, -2)))
    return expm_hermitian_batch(k, 1.0)


def _states_rk4(schedule: PathSchedule, t: np.ndarray, psi0: np.ndarray, ops: SpinOperatorSet) -> np.ndarray:
    h = t[1] - t[0]
    a0 = -1j * hamiltonian_batch(schedule, t[:-1], ops)
    am = -1j * hamiltonian_batch(schedule, t[:-1] + 0.5 * h, ops)
    a1 = -1j * hamiltonian_batch(schedule, t[1:], ops)
    out = np.empty((t.size, psi0.size), dtype=complex)
    psi = out[0] = psi0
    for k in range(t.size - 1):
        k1 = a0[k] @ psi
        k2 = am[k] @ (psi + 0.5 * h * k1)
        k3 = am[k] @ (psi + 0.5 * h * k2)
        k4 = a1[k] @ (psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = psi
    return out


def evolve_states(schedule: PathSchedule, psi0, ops: SpinOperatorSet, steps: int, method: str = "magnus4") -> tuple[np.ndarray, np.ndarray]:
    """States on the uniform grid t_0..t_steps; returns (times, states)."""
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (ops.dim,):
        raise ValueError(f"initial state must have {ops.dim} components, got shape {psi0.shape}")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValueError("initial state must be normalized")
    steps = int(steps)
    if steps < 1:
        raise ValueError("steps must be positive")
    t = _time_grid(schedule, steps)
    if method == "magnus4":
        props = _propagators_magnus4(schedule, t, ops)
        states = np.empty((t.size, ops.dim), dtype=complex)
        psi = states[0] = psi0
        for k in range(steps):
            psi = props[k] @ psi
            states[k + 1] = psi
    elif method == "rk4":
        states = _states_rk4(schedule, t, psi0, ops)
    else:
        raise ValueError(f"unknown integrator {method!r}")
    drift = float(np.max(np.abs(np.linalg.norm(states, axis=1) - 1.0)))
    if drift > NORM_DRIFT_LIMIT:
        raise StepSizeError(f"norm drifted by {drift:.3g} over {steps} steps; increase steps")
    return t, states


def integrate_schrodinger(schedule: PathSchedule, psi0, ops: SpinOperatorSet, steps: int, method: str = "magnus4") -> np.ndarray:
    """Solve i dpsi/dt = omega n(t).S psi with a fixed-step 4th-order scheme.

    ``method`` is "magnus4" (fourth-order Magnus, exactly unitary) or "rk4".
    """
    return evolve_states(schedule, psi0, ops, steps, method)[1][-1]


def default_steps(schedule: PathSchedule, steps_per_cycle: int = DEFAULT_STEPS_PER_CYCLE) -> int:
    if isinstance(schedule, HelicalPath) and schedule.precession != 0:
        cycles = abs(schedule.precession) * schedule.duration / (2.0 * math.pi)
        return max(1, math.ceil(steps_per_cycle * cycles))
    return steps_per_cycle


def adiabatic_ratio(schedule: PathSchedule) -> float:
    """omega over the fastest angular rate of the tangent direction."""
    if isinstance(schedule, HelicalPath):
        return schedule.adiabatic_ratio()
    t = np.linspace(schedule.start, schedule.start + schedule.duration, 2049)
    n = schedule.direction(t)
    rate = np.max(np.linalg.norm(np.diff(n, axis=0), axis=1) / np.diff(t))
    return schedule.omega / rate if rate > 0 else math.inf


def _eigen_label(psi0: np.ndarray, ops: SpinOperatorSet) -> float:
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (ops.dim,):
        raise ValueError(f"initial state must have {ops.dim} components")
    k = int(np.argmax(np.abs(psi0)))
    if abs(abs(psi0[k]) - 1.0) > 1e-10 or np.linalg.norm(np.delete(psi0, k)) > 1e-10:
        raise ValueError("initial state must be an s3 eigenstate |m>")
    return float(ops.m_values[k])


def extract_phases(schedule: PathSchedule, psi0, ops: SpinOperatorSet, steps: int | None = None,
                   method: str = "magnus4", max_refinements: int = 8) -> PhaseDecomposition:
    """Split the phase of a directly integrated state into dynamical and geometric parts.

    ``psi0`` is an s3 eigenstate |m>; evolution starts from V(t0)|m>, which
    equals |m> when the schedule starts with theta = 0.  The total phase is
    accumulated step by step relative to V(t)|m>; the step count is doubled
    until no single increment reaches pi/2.
    """
    m = _eigen_label(psi0, ops)
    k = ops.index_of(m)
    ratio = adiabatic_ratio(schedule)
    if ratio < ADIABATIC_THRESHOLD:
        warnings.warn(f"omega/Omega = {ratio:.3g} is below the adiabatic threshold {ADIABATIC_THRESHOLD:g}", stacklevel=2)
    n = default_steps(schedule) if steps is None else int(steps)
    for _ in range(max_refinements + 1):
        # sampled increments alias mod 2 pi, so also bound them by ||H|| h
        if schedule.omega * ops.j * schedule.duration / n >= MAX_INCREMENT:
            n *= 2
            continue
        t = _time_grid(schedule, n)
        theta, phi = schedule.angles(t)
        refs = unitary_V_batch(theta, phi, ops)[:, :, k]
        _, states = evolve_states(schedule, refs[0], ops, n, method)
        overlaps = np.einsum("ki,ki->k", refs.conj(), states)
        increments = np.angle(overlaps[1:] * overlaps[:-1].conj())
        if np.max(np.abs(increments)) < MAX_INCREMENT:
            break
        log.debug("phase increment %.3g at %d steps; refining", np.max(np.abs(increments)), n)
        n *= 2
    else:
        raise StepSizeError(f"phase increments still >= pi/2 at {n // 2} steps; pass a larger steps value "
                            f"or raise max_refinements")
    total = float(np.sum(increments) + np.angle(overlaps[0]))
    dyn = dynamical_phase(schedule, m, ops)
    return PhaseDecomposition(total=total, dynamical=dyn, geometric=total + dyn, m=m, steps=n)


def _rotate_about(n: np.ndarray, g: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation of (complex) g about unit n by ``angle``."""
    par = np.dot(n, g) * n
    return par + math.cos(angle) * (g - par) + math.sin(angle) * np.cross(n, g)


def lvn_residual(schedule: PathSchedule, g0: ClassicalFieldVector, ops: SpinOperatorSet, steps: int) -> float:
    """Relative Liouville-von Neumann residual of I(t) = G(t).S under H = v k.S.

    G is advanced classically by dG/dt = v k x G (exact rotation per step,
    k frozen at the step midpoint).  Returns
    max_k ||dI/dt + (1/i)[I, H]|| / (omega max_k ||I||) with dI/dt from
    centered differences, so the value is dimensionless and O(h^2).
    """
    steps = int(steps)
    if steps < 2:
        raise ValueError("need at least 2 steps")
    t = _time_grid(schedule, steps)
    h = t[1] - t[0]
    w = schedule.omega
    mids = schedule.direction(0.5 * (t[:-1] + t[1:]))
    g = np.empty((t.size, 3), dtype=complex)
    g[0] = g0.g
    for k in range(steps):
        g[k + 1] = _rotate_about(mids[k], g[k], w * h)
    spin = np.stack(ops.vector())
    inv = np.einsum("ka,aij->kij", g, spin)
    ham = hamiltonian_batch(schedule, t, ops)
    d_inv = (inv[2:] - inv[:-2]) / (2.0 * h)
    comm = inv[1:-1] @ ham[1:-1] - ham[1:-1] @ inv[1:-1]
    res = np.linalg.norm(d_inv - 1j * comm, axis=(1, 2))
    scale = w * np.max(np.linalg.norm(inv, axis=(1, 2)))
    return float(np.max(res) / scale) if scale > 0 else 0.0
