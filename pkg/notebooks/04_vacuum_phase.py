"""
Second quantization and the vacuum phase
========================================

With the zero-point term kept, each circular mode picks up an extra
occupation-independent phase.  The two handednesses cancel.
"""
# %%
import math

import numpy as np

from coilphase import build_fock, circular_transform
from coilphase.fock_modes import (hannay_relation_check, occupation_phase_table, spin3_circular, spin3_operator,
                                  vacuum_cancellation)

theta = 1.0
for row in occupation_phase_table(theta, range(4)):
    print(row.handedness, row.n, f"{row.gamma_g:+.6f}")
print("L + R vacuum:", vacuum_cancellation(theta))

# %% the two forms of S3 agree below the Fock cutoff
f = build_fock(10)
modes = circular_transform(f)
keep = f.below_cutoff()
diff = (spin3_operator(f) - spin3_circular(modes))[np.ix_(keep, keep)]
print("max |S3 difference| below cutoff:", np.abs(diff).max())

# %% Hannay angle and the n-independent offset
for n in range(3):
    print(n, hannay_relation_check("L", n, theta), math.pi * (1 - math.cos(theta)))
