"""
A coherent state picks up a uniform phase shift
===============================================

Each number component gets its own gamma_n.  Since gamma_n is linear in n,
the state stays coherent with alpha rotated by the per-photon phase.
"""
# %%
import math

from coilphase.coherent_states import (berry_phase_table, build_phased_coherent, phase_shift_delta,
                                       quadrature_closed_form, quadrature_expectation)

table = berry_phase_table("R", math.pi / 3, n_max=30)
shift = phase_shift_delta(table)
print("per-photon shift:", shift.total, "uniform:", shift.uniform)

state = build_phased_coherent(1.0, table)
print("norm:", state.norm(), "mean photon number:", state.mean_number())
print("<q> by contraction:", quadrature_expectation(state))
print("<q> closed form:   ", quadrature_closed_form(1.0, shift.total), -math.sqrt(2))
