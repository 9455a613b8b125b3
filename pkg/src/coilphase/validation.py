"""Invariant suite behind ``coilphase validate``.

Each check returns a measured error that must not exceed its tolerance.
"""
from __future__ import annotations

import math

import numpy as np

from .chiral_medium import (EPS0, MU0, ChiralMedium, ModeAmplitudeSet, dispersion, field_energy_forms,
                            precession_split, quadratic_residuals, small_zeta_threshold)
from .coherent_states import (berry_phase_table, build_phased_coherent, phase_shift_delta,
                              quadrature_closed_form, quadrature_expectation)
from .evolution import (ClassicalFieldVector, HelicalPath, berry_phase_closed_form, extract_phases,
                        geometric_phase, lvn_residual, unitary_V)
from .fiber_geometry import HelixSpec, solid_angle, tangent_direction
from .fock_modes import (build_fock, circular_number_state, circular_transform, hannay_relation_check,
                         second_quantized_berry_phase, spin3_circular, spin3_operator, vacuum_cancellation)
from .spin_algebra import commutator, dot_with_spin, make_spin_operators, matrix_exponential, vector_dot_spin

LEVI_CIVITA = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]


def _random_unit(rng, size=None):
    v = rng.normal(size=(size or 1, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v if size else v[0]


def check_su2(j) -> float:
    ops = make_spin_operators(j)
    s = ops.vector()
    err = max(np.abs(commutator(s[a], s[b]) - 1j * s[c]).max() for a, b, c in LEVI_CIVITA)
    casimir = sum(x @ x for x in s) - ops.j * (ops.j + 1) * np.eye(ops.dim)
    return float(max(err, np.abs(casimir).max()))


def check_vector_identity(j, pairs=100, seed=0) -> float:
    ops = make_spin_operators(j)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for a, b in zip(_random_unit(rng, pairs), _random_unit(rng, pairs)):
        lhs = commutator(dot_with_spin(a, ops), dot_with_spin(b, ops))
        worst = max(worst, np.linalg.norm(lhs - 1j * vector_dot_spin(np.cross(a, b), ops)))
    return float(worst)


def check_rotation(j, samples=100, seed=1) -> float:
    """Unitarity of V and V s3 V^dag = n.S over random angles."""
    ops = make_spin_operators(j)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for theta, phi in zip(rng.uniform(0, math.pi, samples), rng.uniform(-4 * math.pi, 4 * math.pi, samples)):
        v = unitary_V(theta, phi, ops)
        worst = max(worst, np.abs(v @ v.conj().T - np.eye(ops.dim)).max(),
                    np.abs(v @ ops.s3 @ v.conj().T - dot_with_spin(tangent_direction(theta, phi), ops)).max())
    return float(worst)


def check_expm_unitary(seed=2) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for d in (2, 3, 5):
        x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        a = 0.5 * (x - x.conj().T)
        a *= 15.0 / np.linalg.norm(a, 2)
        u = matrix_exponential(a)
        worst = max(worst, np.abs(u @ u.conj().T - np.eye(d)).max())
    return float(worst)


def check_geometric_closed_form() -> float:
    ops = make_spin_operators(1)
    worst = 0.0
    for theta in np.linspace(0, math.pi, 37):
        path = HelicalPath.one_cycle(theta, 2.0, 1e3)
        for m in (-1, 0, 1):
            worst = max(worst, abs(geometric_phase(path, m, ops) - berry_phase_closed_form(theta, m)))
    return worst


def check_extraction(ratio=1e3) -> float:
    ops = make_spin_operators(1)
    theta = math.pi / 3
    dec = extract_phases(HelicalPath.one_cycle(theta, 1.0, ratio), ops.basis_state(1), ops)
    return abs(dec.geometric - berry_phase_closed_form(theta, 1))


def check_lvn() -> float:
    ops = make_spin_operators(1)
    path = HelicalPath(0.4, 0.3, 1.0, 1.0)
    return lvn_residual(path, ClassicalFieldVector([1.0, 0.5j, -0.2], 2e8), ops, 10_000)


def check_vacuum() -> float:
    worst = 0.0
    for theta in np.linspace(0, math.pi, 100):
        worst = max(worst, abs(vacuum_cancellation(theta)))
        worst = max(worst, abs(second_quantized_berry_phase("L", 0, theta) - math.pi * (1 - math.cos(theta))))
        worst = max(worst, abs(second_quantized_berry_phase("R", 0, theta) + math.pi * (1 - math.cos(theta))))
    return worst


def check_hannay() -> float:
    worst = 0.0
    for theta in np.linspace(0, math.pi, 13):
        for hand, sign in (("L", 1), ("R", -1)):
            for n in range(11):
                dth, g0 = hannay_relation_check(hand, n, theta)
                worst = max(worst, abs(g0 - sign * math.pi * (1 - math.cos(theta))),
                            abs(dth + sign * solid_angle(theta)))
    return worst


def check_spin3(n_max=12) -> float:
    f = build_fock(n_max)
    modes = circular_transform(f)
    keep = f.below_cutoff()
    lam = spin3_operator(f)
    worst = 0.0
    for other in (spin3_circular(modes), spin3_circular(modes, symmetric=True)):
        worst = max(worst, np.abs((lam - other)[np.ix_(keep, keep)]).max())
    for total in range(n_max):
        for nl in range(total + 1):
            psi = circular_number_state(f, nl, total - nl, modes)
            worst = max(worst, np.linalg.norm(lam @ psi - (total - 2 * nl) * psi))
    return float(worst)


def check_coherent() -> float:
    theta = math.pi / 3
    table = berry_phase_table("R", theta, 30, omega_t=7.0)
    shift = phase_shift_delta(table)
    state = build_phased_coherent(1.0, table)
    err = abs(quadrature_expectation(state) - quadrature_closed_form(1.0, shift.total))
    err = max(err, abs(shift.geometric + solid_angle(theta)), 0.0 if shift.uniform else 1.0)
    return err


def _dispersion_grid():
    for eps in (1.0, 2.25, 12.0):
        thr = small_zeta_threshold(eps)
        for zeta in (-50 * thr, -thr, 0.0, 1e-3 * thr, thr, 50 * thr):
            for omega in (1e9, 1.2e15, 1e18):
                m = ChiralMedium(eps, zeta)
                yield m, dispersion(omega, m)


def check_dispersion() -> float:
    return max(max(quadratic_residuals(d, m)) for m, d in _dispersion_grid())


def check_root_gap() -> float:
    """|(k_L - k_R) - 2 zeta mu0 omega| in units of the spacing of k_L."""
    return max(abs((d.k_L - d.k_R) - 2 * m.zeta * MU0 * d.omega) / np.spacing(d.k_L) for m, d in _dispersion_grid())


_SPLIT_HELIX = HelixSpec(0.05, 0.2, refractive_index=1.5)


def check_period_split() -> float:
    worst = 0.0
    for zeta in (1e-7, 1e-6, 1e-5):
        m = ChiralMedium(2.25, zeta)
        target = -2 * zeta * MU0 * _SPLIT_HELIX.precession_length
        for omega in (1e12, 1e13, 1e14, 1e15):
            sp = precession_split(m, _SPLIT_HELIX, omega)
            worst = max(worst, abs(sp.delta_T_exact - target) / abs(target))
    return worst


def check_rate_split() -> float:
    """Relative gap between the quoted and exact rate split, over 10 zeta^2 mu0/(eps eps0)."""
    worst = 0.0
    for zeta in (1e-7, 1e-6, 1e-5):
        m = ChiralMedium(2.25, zeta)
        sp = precession_split(m, _SPLIT_HELIX, 1.2e15)
        rel = abs(sp.delta_Omega_closed - sp.delta_Omega_exact) / abs(sp.delta_Omega_exact)
        worst = max(worst, rel / (10 * zeta ** 2 * MU0 / (m.epsilon * EPS0)))
    return worst


def check_energy(seed=3) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for zeta in (0.0, 1e-6, small_zeta_threshold(2.25)):
        m = ChiralMedium(2.25, zeta)
        for _ in range(20):
            k = rng.integers(1, 11)
            modes = ModeAmplitudeSet(rng.uniform(1e14, 1e15, k), rng.normal(size=k) + 1j * rng.normal(size=k),
                                     rng.uniform(1e-9, 1e-3))
            wd, wc = field_energy_forms(modes, m)
            worst = max(worst, abs(wd - wc) / wd)
    return worst


def run_all(n_max: int = 12) -> list[dict]:
    checks = [
        ("su2_closure_casimir_j1/2", lambda: check_su2(0.5), 1e-12),
        ("su2_closure_casimir_j1", lambda: check_su2(1), 1e-12),
        ("vector_operator_identity_j1/2", lambda: check_vector_identity(0.5), 1e-12),
        ("vector_operator_identity_j1", lambda: check_vector_identity(1), 1e-12),
        ("rotation_V_j1/2", lambda: check_rotation(0.5), 1e-10),
        ("rotation_V_j1", lambda: check_rotation(1), 1e-10),
        ("expm_antihermitian_unitary", check_expm_unitary, 1e-12),
        ("geometric_phase_closed_form", check_geometric_closed_form, 1e-8),
        ("extracted_geometric_phase_ratio1e3", check_extraction, 5e-2),
        ("liouville_von_neumann_residual", check_lvn, 1e-8),
        ("vacuum_phase_cancellation", check_vacuum, 1e-12),
        ("berry_hannay_gamma0", check_hannay, 1e-12),
        ("spin3_forms_and_spectrum", lambda: check_spin3(n_max), 1e-12),
        ("coherent_phase_shift", check_coherent, 1e-8),
        ("dispersion_root_residuals", check_dispersion, 1e-12),
        ("dispersion_root_gap_ulps", check_root_gap, 8.0),
        ("precession_period_split", check_period_split, 1e-12),
        ("precession_rate_split_over_bound", check_rate_split, 1.0),
        ("field_energy_forms", check_energy, 1e-12),
    ]
    report = []
    for name, fn, tol in checks:
        measured = float(fn())
        report.append({"invariant": name, "tolerance": tol, "measured": measured, "passed": measured <= tol})
    return report
