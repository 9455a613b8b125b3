"""
Circular birefringence in a chiral medium
=========================================

Left and right light see different wave numbers, so they precess at
different rates on the same helix.
"""
# %%
import warnings

from coilphase import ChiralMedium, HelixSpec, dispersion, precession_split
from coilphase.chiral_medium import field_energy_forms, ModeAmplitudeSet, small_zeta_threshold

medium = ChiralMedium(epsilon=2.25, zeta=1e-6)
d = dispersion(1.2e15, medium)
print(f"k_R={d.k_R:.10g}  k_L={d.k_L:.10g}  delta_k={d.delta_k:.6g}")

# %% period and rate splits; the period split does not depend on omega
helix = HelixSpec(0.05, 0.2, refractive_index=1.5)
for omega in (1e13, 1e14, 1e15):
    sp = precession_split(medium, helix, omega)
    print(f"omega={omega:.0e}  dT={sp.delta_T_exact:.6e}  dOmega={sp.delta_Omega_exact:.6e}")

# %% above the small-zeta threshold the exact split is the one to use
print("threshold:", small_zeta_threshold(2.25), "S")
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    sp = precession_split(ChiralMedium(2.25, 1e-4), helix, 1e15)
print(caught[0].message)

# %% field energy from amplitudes and from canonical coordinates
w_direct, w_canonical = field_energy_forms(ModeAmplitudeSet([1e15, 2e15], [0.3 + 0.1j, -0.2j], 1e-6), medium)
print(w_direct, w_canonical)
