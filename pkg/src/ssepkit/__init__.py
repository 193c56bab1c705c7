"""Toolkit for the symmetric simple exclusion process with boundary reservoirs.

Subpackages by theme:

* :mod:`ssepkit.profiles`         -- macroscopic density profiles and their class
* :mod:`ssepkit.spectral`         -- lattice heat equation, spectrally solved
* :mod:`ssepkit.product_measures` -- distances between product Bernoulli measures
* :mod:`ssepkit.exact_chain`      -- exact chain analysis at small n
* :mod:`ssepkit.monte_carlo`      -- kinetic Monte Carlo at large n
* :mod:`ssepkit.experiments`      -- experiment drivers and file emission
"""

from .profiles import ProfileSpec, ProfileError
from .spectral import (
    DiscreteField, HeatSolution, CutoffTime, NoDetectableModeError,
    eigenvalue, eigenvalues, eigenfunction, discrete_fourier_coeff,
    discrete_fourier_coeffs, continuum_fourier_coeff, find_leading_mode,
    discrete_gradient_sup, gradient_decay_bound, cutoff_time,
    lattice_laplacian,
)
from .product_measures import (
    BernoulliField, LLRCoefficients, GridDistribution, llr_coefficients,
    gaussian_profile, tv_exact_enum, tv_grid_dp, tv_monte_carlo,
    statistic_lattice_law, product_relative_entropy, gamma_const, pinsker_gap,
)
from .exact_chain import (
    Configuration, GeneratorSpec, generator_apply, generator_matrix,
    forward_evolve, product_distribution, site_means, tv_distance,
    relative_entropy, carre_du_champ_integral, dirichlet_forms,
    theta_default, omega_correlations, yau_rhs, adjoint_apply,
    adjoint_identity_check, ls_ratio_minimize, entropy_trajectory,
    entropy_dissipation_check,
)
from .monte_carlo import (
    SimConfig, OccupationStats, TVLowerBound, sample_initial, simulate_to,
    estimate_occupation, tv_lower_bound_statistic, event_rate,
)

__version__ = "0.1.0"
