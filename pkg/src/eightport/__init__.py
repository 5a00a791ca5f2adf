"""Eight-port homodyne phase measurement with unequal detector efficiencies.

Library layout:

- `fock`: truncated number-basis operators, displacements, squeezed vacua
- `smearing`: the Gaussian inefficiency measure and state convolution
- `phase`: covariant phase observables, distributions, minimum variance
- `compensation`: beam-splitter and squeezing balancing strategies
- `detector_sim`: seeded Monte Carlo of detection events
- `verification`: the quantitative acceptance checks
- `cli`: command-line front end (`eightport` entry point)
"""

from .compensation import (CompensationReport, DetectorQuad,
                           beam_splitter_transparency, compensate,
                           effective_efficiency, eta, gamma_ratio,
                           series_approx, solve_squeezing, sweep)
from .fock import (SqueezedVacuum, coherent_state, conjugation_map,
                   eig_hermitian, number_state, rotate, squeezed_vacuum,
                   weyl_matrix_element, weyl_operator)
from .phase import (PhaseDistribution, min_variance, phase_distribution,
                    phase_matrix, smearing_ratio, tail_limit_check,
                    vacuum_phase_matrix)
from .smearing import (DiagonalState, GaussianSmear, compose_measures,
                       convolve_state, geometric_state, is_diagonal,
                       overall_efficiency)
from .detector_sim import (EventBatch, PhaseHistogram, bin_phases,
                           chi_square_vs_distribution, histogram_min_variance,
                           phase_space_density, sample_events)

__version__ = "0.1.0"
