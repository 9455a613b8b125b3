import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coilphase.coherent_states import (PhaseTable, berry_phase_table, build_phased_coherent, phase_shift_delta,
                                       poisson_tail, quadrature_closed_form, quadrature_expectation)
from coilphase.fiber_geometry import solid_angle


def test_vacuum_state_carries_phase():
    table = PhaseTable(np.full(11, 0.7), np.full(11, 0.2))
    state = build_phased_coherent(0.0, table)
    expected = np.zeros(11, dtype=complex)
    expected[0] = np.exp(0.5j)
    np.testing.assert_allclose(state.amplitudes, expected, atol=1e-15)


def test_plain_coherent_state_mean():
    state = build_phased_coherent(1.0, PhaseTable.zeros(30))
    assert state.mean_number() == pytest.approx(1.0, abs=1e-10)


def test_norm_within_poisson_tail():
    state = build_phased_coherent(1.0, PhaseTable.zeros(30))
    assert abs(state.norm() - 1.0) < 1e-10
    assert abs(1.0 - state.norm() ** 2) == pytest.approx(poisson_tail(1.0, 30), abs=1e-15)


def test_amplitudes_match_direct_formula():
    alpha = 1.3 * np.exp(0.4j)
    table = berry_phase_table("R", 0.9, 30, omega_t=3.0)
    state = build_phased_coherent(alpha, table)
    n = np.arange(31)
    direct = np.array([math.exp(-abs(alpha) ** 2 / 2) * alpha ** k / math.sqrt(math.factorial(k)) for k in n])
    np.testing.assert_allclose(state.amplitudes, direct * np.exp(1j * table.total), rtol=1e-12, atol=1e-30)


def test_truncation_guard():
    with pytest.raises(ValueError):
        build_phased_coherent(3.0, PhaseTable.zeros(30))
    with pytest.raises(ValueError):
        build_phased_coherent(1.0, PhaseTable.zeros(10), n_max=30)


def test_quadrature_examples():
    assert quadrature_expectation(build_phased_coherent(0.0, PhaseTable.zeros(30))) == 0.0
    assert quadrature_expectation(build_phased_coherent(1.0, PhaseTable.zeros(30))) == pytest.approx(math.sqrt(2), abs=1e-10)


def test_quadrature_with_berry_shift():
    table = berry_phase_table("R", math.pi / 3, 30)
    shift = phase_shift_delta(table)
    assert shift.geometric == pytest.approx(-math.pi, abs=1e-14)
    value = quadrature_expectation(build_phased_coherent(1.0, table))
    assert quadrature_closed_form(1.0, shift.total) == pytest.approx(-math.sqrt(2), abs=1e-14)
    assert value == pytest.approx(-math.sqrt(2), abs=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 2), st.floats(-math.pi, math.pi), st.floats(0, math.pi), st.floats(-50, 50),
       st.sampled_from(["L", "R"]))
def test_quadrature_contraction_matches_closed_form(r, arg, theta, omega_t, hand):
    alpha = r * np.exp(1j * arg)
    table = berry_phase_table(hand, theta, 30, omega_t=omega_t)
    state = build_phased_coherent(alpha, table)
    re, im = quadrature_expectation(state, return_imag=True)
    assert abs(im) < 1e-12
    bound = 2 * math.sqrt(2) * abs(alpha) * poisson_tail(alpha, 29) + 1e-13
    assert abs(re - quadrature_closed_form(alpha, phase_shift_delta(table).total)) < max(bound, 1e-12)


def test_phase_shift_geometric_part_flat_coil():
    shift = phase_shift_delta(berry_phase_table("R", math.pi / 2, 20))
    assert shift.geometric == pytest.approx(-2 * math.pi, rel=1e-15)
    assert shift.uniform


def test_phase_shift_constant_table():
    shift = phase_shift_delta(np.full(5, 1.7))
    assert shift.total == 0.0 and shift.uniform


def test_phase_shift_uniform_across_n():
    table = berry_phase_table("R", 1.1, 20, omega_t=12.5)
    assert phase_shift_delta(table).uniform
    d = np.diff(table.geometric)
    assert np.all(np.abs(d - d[0]) < 1e-12)


def test_phase_shift_detects_nonuniform():
    assert not phase_shift_delta(np.array([0.0, 1.0, 2.5])).uniform


def test_vacuum_offset_drops_out_of_shift():
    with_offset = phase_shift_delta(berry_phase_table("L", 0.8, 20, omega_t=4.0))
    without = phase_shift_delta(berry_phase_table("L", 0.8, 20, omega_t=4.0, vacuum_offset=False))
    assert with_offset.geometric == pytest.approx(without.geometric, abs=1e-13)
    assert with_offset.dynamical == pytest.approx(without.dynamical, abs=1e-13)
    assert with_offset.geometric == pytest.approx(solid_angle(0.8), rel=1e-13)


def test_phase_shift_too_short():
    with pytest.raises(ValueError):
        phase_shift_delta([1.0])
