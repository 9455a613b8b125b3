"""Berry phases of polarized light in coiled fibers, from single photons to the vacuum."""

__version__ = "0.1.0"

from .chiral_medium import (ChiralMedium, DispersionResult, ModeAmplitudeSet, PrecessionSplit, dispersion,
                            field_energy_forms, precession_split)
from .coherent_states import (PhasedCoherentState, PhaseShift, PhaseTable, berry_phase_table,
                              build_phased_coherent, phase_shift_delta, quadrature_expectation)
from .evolution import (ClassicalFieldVector, PhaseDecomposition, StepSizeError, berry_phase_closed_form,
                        dynamical_phase, extract_phases, geometric_phase, integrate_schrodinger, lvn_residual,
                        unitary_V)
from .fiber_geometry import (HelicalPath, HelixSpec, PathSchedule, SampledPath, helix_polar_angle,
                             precession_frequency, solid_angle, tangent_direction)
from .fock_modes import (CircularModes, TwoModeFock, build_fock, circular_transform, hannay_relation_check,
                         second_quantized_berry_phase, spin3_operator, vacuum_cancellation)
from .spin_algebra import SpinOperatorSet, commutator, dot_with_spin, make_spin_operators, matrix_exponential
