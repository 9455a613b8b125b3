import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coilphase.spin_algebra import (commutator, dot_with_spin, make_spin_operators, matrix_exponential,
                                    vector_dot_spin)

SPINS = [0.5, 1, 1.5, 2]


def test_spin_half_s3_is_diagonal(spin_half):
    np.testing.assert_array_equal(spin_half.s3, np.diag([0.5, -0.5]))


def test_spin_one_spectrum(spin_one):
    np.testing.assert_allclose(np.linalg.eigvalsh(spin_one.s3), [-1, 0, 1], atol=1e-15)
    np.testing.assert_array_equal(spin_one.m_values, [1, 0, -1])


@pytest.mark.parametrize("j", SPINS)
def test_su2_closure(j):
    ops = make_spin_operators(j)
    s = ops.vector()
    for a, b, c in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        np.testing.assert_allclose(commutator(s[a], s[b]), 1j * s[c], rtol=0, atol=1e-12)


@pytest.mark.parametrize("j", SPINS)
def test_casimir(j):
    ops = make_spin_operators(j)
    total = sum(x @ x for x in ops.vector())
    np.testing.assert_allclose(total, ops.j * (ops.j + 1) * np.eye(ops.dim), rtol=0, atol=1e-12)


@pytest.mark.parametrize("j", SPINS)
def test_ladder_definition_is_exact(j):
    ops = make_spin_operators(j)
    np.testing.assert_array_equal(ops.s_plus, ops.s1 + 1j * ops.s2)
    np.testing.assert_array_equal(ops.s_minus, ops.s1 - 1j * ops.s2)
    assert np.array_equal(ops.s_plus.conj().T, ops.s_minus)


def test_operators_are_read_only(spin_one):
    with pytest.raises(ValueError):
        spin_one.s1[0, 0] = 1.0


@pytest.mark.parametrize("bad", [0, -0.5, 0.3, 1.25, "x", None])
def test_rejects_bad_spin(bad):
    with pytest.raises(ValueError):
        make_spin_operators(bad)


def test_self_commutator_vanishes(spin_one):
    assert not np.any(commutator(spin_one.s1, spin_one.s1))


def test_commutator_shape_mismatch(spin_half, spin_one):
    with pytest.raises(ValueError):
        commutator(spin_half.s1, spin_one.s1)


def test_vector_identity_axes(spin_one):
    a, b = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    lhs = commutator(dot_with_spin(a, spin_one), dot_with_spin(b, spin_one))
    np.testing.assert_allclose(lhs, 1j * spin_one.s3, atol=1e-15)


@pytest.mark.parametrize("j", [0.5, 1])
def test_vector_identity_random_pairs(j, rng):
    ops = make_spin_operators(j)
    for _ in range(100):
        a, b = rng.normal(size=(2, 3))
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        lhs = commutator(dot_with_spin(a, ops), dot_with_spin(b, ops))
        rhs = 1j * vector_dot_spin(np.cross(a, b), ops)
        assert np.linalg.norm(lhs - rhs) < 1e-12


def test_dot_with_spin_axes(spin_one):
    np.testing.assert_array_equal(dot_with_spin([0, 0, 1], spin_one), spin_one.s3)
    np.testing.assert_array_equal(dot_with_spin([1, 0, 0], spin_one), spin_one.s1)


def test_dot_with_spin_tilted_spectrum(spin_one):
    th = math.pi / 3
    h = dot_with_spin([math.sin(th), 0, math.cos(th)], spin_one)
    np.testing.assert_allclose(h, h.conj().T, atol=0)
    np.testing.assert_allclose(np.linalg.eigvalsh(h), [-1, 0, 1], atol=1e-12)


def test_dot_with_spin_rejects_non_unit(spin_one):
    with pytest.raises(ValueError):
        dot_with_spin([1, 1, 0], spin_one)


def test_expm_zero_is_identity():
    np.testing.assert_array_equal(matrix_exponential(np.zeros((3, 3))), np.eye(3))


def test_expm_diagonal(spin_half):
    u = matrix_exponential(-1j * math.pi * spin_half.s3)
    np.testing.assert_allclose(u, np.diag([np.exp(-0.5j * math.pi), np.exp(0.5j * math.pi)]), atol=1e-15)


def _taylor_expm(a, terms=200):
    # independent reference: scaling-and-squaring of a long Taylor series
    s = max(0, int(np.ceil(np.log2(max(np.linalg.norm(a, 1), 1e-300)))) + 1)
    b = a / 2 ** s
    out, term = np.eye(a.shape[0], dtype=complex), np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ b / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


@pytest.mark.parametrize("kind", ["hermitian", "antihermitian", "general"])
def test_expm_matches_taylor_reference(kind, rng):
    for d in (2, 3, 4):
        x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        a = {"hermitian": x + x.conj().T, "antihermitian": x - x.conj().T, "general": x}[kind]
        a *= 3.0 / np.linalg.norm(a, 2)
        ref = _taylor_expm(a)
        np.testing.assert_allclose(matrix_exponential(a), ref, rtol=1e-12, atol=1e-12 * np.abs(ref).max())


def test_expm_antihermitian_inverse_and_unitary(rng):
    for d in (2, 3, 5):
        x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        a = x - x.conj().T
        a *= 20.0 / np.linalg.norm(a, 2)
        u = matrix_exponential(a)
        np.testing.assert_allclose(u @ matrix_exponential(-a), np.eye(d), atol=1e-12)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(d), atol=1e-12)


def test_expm_rejects_nonfinite():
    with pytest.raises(ValueError):
        matrix_exponential(np.array([[np.nan, 0], [0, 1]]))


unit_vectors = st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 3).filter(lambda v: np.linalg.norm(v) > 1e-3)


@settings(max_examples=60, deadline=None)
@given(unit_vectors, unit_vectors, st.sampled_from([0.5, 1, 1.5]))
def test_vector_identity_property(a, b, j):
    ops = make_spin_operators(j)
    a = np.array(a) / np.linalg.norm(a)
    b = np.array(b) / np.linalg.norm(b)
    lhs = commutator(dot_with_spin(a, ops), dot_with_spin(b, ops))
    assert np.abs(lhs - 1j * vector_dot_spin(np.cross(a, b), ops)).max() < 1e-12
