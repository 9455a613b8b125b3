"""
Spin operators and the helix-following rotation
================================================

Build spin-1/2 and spin-1 matrices, check their algebra, and rotate the
z-axis eigenstates onto an arbitrary tangent direction.
"""
# %%
import math

import numpy as np

from coilphase import make_spin_operators, tangent_direction, unitary_V
from coilphase.spin_algebra import commutator, dot_with_spin

ops = make_spin_operators(1)
print("m values:", ops.m_values)
print("[S1, S2] - i S3 =", np.abs(commutator(ops.s1, ops.s2) - 1j * ops.s3).max())

# %% V maps s3 onto n.S, so V|m> is the helicity-m state along n
theta, phi = 0.7, 2.1
v = unitary_V(theta, phi, ops)
n_dot_s = dot_with_spin(tangent_direction(theta, phi), ops)
print("|V s3 V^dag - n.S| =", np.abs(v @ ops.s3 @ v.conj().T - n_dot_s).max())

# %% at j = 1/2 the rotated |+> has the familiar half-angle form
half = make_spin_operators(0.5)
print(unitary_V(theta, phi, half) @ half.basis_state(0.5))
print(math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2))
