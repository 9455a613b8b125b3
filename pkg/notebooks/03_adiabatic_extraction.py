"""
Extracting the geometric phase from a simulated evolution
=========================================================

Integrate i d/dt psi = omega k(t).S psi along one coil period and split the
accumulated phase into dynamical and geometric parts.  The error against the
closed form shrinks in proportion to Omega/omega.
"""
# %%
import math
import warnings

from coilphase import HelicalPath, berry_phase_closed_form, extract_phases, make_spin_operators

ops = make_spin_operators(1)
theta = math.pi / 3
closed = berry_phase_closed_form(theta, 1)
print("closed form:", closed)

# %%
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    for ratio in (1e2, 1e3, 1e4):
        dec = extract_phases(HelicalPath.one_cycle(theta, 1.0, ratio), ops.basis_state(1), ops)
        print(f"omega/Omega={ratio:.0e}  geometric={dec.geometric:+.6f}  "
              f"error={abs(dec.geometric - closed):.2e}  steps={dec.steps}")

# %% the longitudinal m = 0 state carries no geometric phase and is not physical
dec = extract_phases(HelicalPath.one_cycle(theta, 1.0, 1e3), ops.basis_state(0), ops)
print(dec.geometric, dec.physical)
