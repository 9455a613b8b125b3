"""Two-mode truncated Fock space and second-quantized Berry phases.

Modes 1 and 2 are the two linear polarizations of a single wave vector.
Product states |n1, n2> are indexed as n1 * (n_max + 1) + n2.  Circular
modes follow a_R = (a1 - i a2)/sqrt(2), a_L = (a1 + i a2)/sqrt(2).

Handedness convention: R carries helicity m = +1 and L carries m = -1, so
the second-quantized phases are -2 pi (1 - cos theta) <S3> per mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fiber_geometry import _check_theta

DEFAULT_N_MAX = 30
_SIGN = {"R": -1.0, "L": +1.0}


def _sign(handedness: str) -> float:
    try:
        return _SIGN[handedness.upper()]
    except (KeyError, AttributeError):
        raise ValueError(f"handedness must be 'L' or 'R', got {handedness!r}") from None


def ladder(n_max: int) -> np.ndarray:
    """Single-mode annihilator on occupations 0..n_max."""
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)


@dataclass(frozen=True)
class TwoModeFock:
    n_max: int
    a1: np.ndarray
    a1_dag: np.ndarray
    a2: np.ndarray
    a2_dag: np.ndarray

    @property
    def dim(self) -> int:
        return (self.n_max + 1) ** 2

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def index(self, n1: int, n2: int) -> int:
        if not (0 <= n1 <= self.n_max and 0 <= n2 <= self.n_max):
            raise ValueError(f"occupation ({n1}, {n2}) outside 0..{self.n_max}")
        return n1 * (self.n_max + 1) + n2

    def number_state(self, n1: int, n2: int) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[self.index(n1, n2)] = 1.0
        return psi

    def vacuum(self) -> np.ndarray:
        return self.number_state(0, 0)

    def below_cutoff(self) -> np.ndarray:
        """Indices of product states with total occupation n1 + n2 < n_max."""
        n1, n2 = np.divmod(np.arange(self.dim), self.n_max + 1)
        return np.flatnonzero(n1 + n2 < self.n_max)


@dataclass(frozen=True)
class CircularModes:
    aR: np.ndarray
    aR_dag: np.ndarray
    aL: np.ndarray
    aL_dag: np.ndarray


def build_fock(n_max: int = DEFAULT_N_MAX) -> TwoModeFock:
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be an integer >= 1, got {n_max}")
    n_max = int(n_max)
    a = ladder(n_max)
    eye = np.eye(n_max + 1)
    a1 = np.kron(a, eye)
    a2 = np.kron(eye, a)
    return TwoModeFock(n_max, a1, a1.conj().T.copy(), a2, a2.conj().T.copy())


def circular_transform(f: TwoModeFock) -> CircularModes:
    r2 = math.sqrt(2.0)
    return CircularModes(
        aR=(f.a1 - 1j * f.a2) / r2,
        aR_dag=(f.a1_dag + 1j * f.a2_dag) / r2,
        aL=(f.a1 + 1j * f.a2) / r2,
        aL_dag=(f.a1_dag - 1j * f.a2_dag) / r2,
    )


def spin3_operator(f: TwoModeFock) -> np.ndarray:
    """S3 = (i/2)[a1 a2^dag - a1^dag a2 - a2 a1^dag + a2^dag a1] (hbar = 1)."""
    return 0.5j * (f.a1 @ f.a2_dag - f.a1_dag @ f.a2 - f.a2 @ f.a1_dag + f.a2_dag @ f.a1)


def spin3_circular(modes: CircularModes, symmetric: bool = False) -> np.ndarray:
    """S3 in the circular basis.

    Default is (aR^dag aR + 1/2) - (aL^dag aL + 1/2); ``symmetric=True`` gives
    the anticommutator form (aR aR^dag + aR^dag aR)/2 - (L), which differs
    from it only at the truncation edge.
    """
    if symmetric:
        r = 0.5 * (modes.aR @ modes.aR_dag + modes.aR_dag @ modes.aR)
        l = 0.5 * (modes.aL @ modes.aL_dag + modes.aL_dag @ modes.aL)
        return r - l
    eye = np.eye(modes.aR.shape[0])
    return (modes.aR_dag @ modes.aR + 0.5 * eye) - (modes.aL_dag @ modes.aL + 0.5 * eye)


def circular_number_state(f: TwoModeFock, n_left: int, n_right: int, modes: CircularModes | None = None) -> np.ndarray:
    """|n_L, n_R> built by applying creation operators to the vacuum."""
    if n_left < 0 or n_right < 0:
        raise ValueError("occupations must be non-negative")
    if n_left + n_right >= f.n_max:
        raise ValueError(f"total occupation {n_left + n_right} reaches the cutoff n_max={f.n_max}")
    modes = circular_transform(f) if modes is None else modes
    psi = f.vacuum()
    for _ in range(n_right):
        psi = modes.aR_dag @ psi
    for _ in range(n_left):
        psi = modes.aL_dag @ psi
    return psi / np.linalg.norm(psi)


def second_quantized_berry_phase(handedness: str, n: int, theta: float) -> float:
    """Cyclic phase of n circular photons: L -> +2pi(1-cos)(n+1/2), R -> -2pi(1-cos)(n+1/2)."""
    sign = _sign(handedness)
    if n < 0:
        raise ValueError(f"occupation must be >= 0, got {n}")
    _check_theta(theta)
    return sign * 4.0 * math.pi * math.sin(0.5 * theta) ** 2 * (n + 0.5)


def vacuum_phase_magnitude(theta: float) -> float:
    _check_theta(theta)
    return 2.0 * math.pi * math.sin(0.5 * theta) ** 2


def vacuum_cancellation(theta: float) -> float:
    """gamma_0L + gamma_0R; zero by construction."""
    mag = vacuum_phase_magnitude(theta)
    return (+mag) + (-mag)


def hannay_relation_check(handedness: str, n: int, theta: float) -> tuple[float, float]:
    """Hannay angle -d gamma/dn (forward difference) and the vacuum constant gamma0."""
    g_n = second_quantized_berry_phase(handedness, n, theta)
    g_next = second_quantized_berry_phase(handedness, n + 1, theta)
    delta_theta = -(g_next - g_n)
    return delta_theta, g_n + n * delta_theta


@dataclass(frozen=True)
class PhaseRow:
    handedness: str
    n: int
    theta: float
    gamma_g: float


def occupation_phase_table(theta: float, n_values=range(6), handedness=("L", "R")) -> list[PhaseRow]:
    return [PhaseRow(h, int(n), theta, second_quantized_berry_phase(h, n, theta))
            for h in handedness for n in n_values]
