"""
Helix geometry and the swept solid angle
========================================

A fiber coiled on a helix keeps its tangent at a fixed angle to the axis.
The tangent then sweeps a cone once per precession period.
"""
# %%
import math

from coilphase import HelicalPath, HelixSpec, helix_polar_angle, precession_frequency, solid_angle

helix = HelixSpec(radius=0.05, pitch=0.2, refractive_index=1.5)
theta = helix_polar_angle(helix)
print(f"theta = {theta:.6f} rad, solid angle = {solid_angle(theta):.6f} sr")

# %% the precession rate uses sqrt(d^2 + (4 pi a)^2), not the one-turn arc length
print("Omega =", precession_frequency(helix), "rad/s")
print("precession length", helix.precession_length, "vs turn length", helix.turn_length)

# %% straight fiber and flat ring limits
print(helix_polar_angle(HelixSpec(0.0, 0.2, refractive_index=1.5)))
print(helix_polar_angle(HelixSpec(0.05, 0.0, refractive_index=1.5)), math.pi / 2)

path = HelicalPath.from_helix(helix, omega=1.2e15)
print("adiabatic ratio omega/Omega =", path.adiabatic_ratio())
