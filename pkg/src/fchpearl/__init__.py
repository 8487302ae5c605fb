"""Pearled bilayers of the planar functionalized Cahn-Hilliard equation.

Library layout:

* :mod:`fchpearl.potential` -- double-well potentials W and derivatives
* :mod:`fchpearl.profile` -- bilayer profile u0 and corrections v0, u1
* :mod:`fchpearl.operator` -- transverse linearization L0, spectra, solves
* :mod:`fchpearl.coefficients` -- alpha0, beta0, gamma1, nu/mu/omega, alpha2
* :mod:`fchpearl.normal_form` -- PNF and 8D normal form, orbits, shooting
* :mod:`fchpearl.pearls` -- asymptotic pearled-solution constructors
* :mod:`fchpearl.simulator` -- 2D pseudo-spectral FCH gradient-flow solver
* :mod:`fchpearl.cli` -- configuration-driven command-line front end
"""

from .potential import WellSpec, eval_well, validate_well, WellError
from .profile import (RadialGrid, BilayerData, compute_u0, compute_v0,
                      compute_u1, with_corrections, turning_point,
                      NoHomoclinicError, DomainTooSmallError)
from .operator import (SpectralData, assemble_L0, ground_state, lambda0_refined,
                       NotABilayerError, ResonantSolveError, LinearSolveError)
from .coefficients import (CoefficientTable, coefficient_table, alpha0, beta0,
                           gamma1, nu_mu_omega, alpha2, verify_alpha1)
from .normal_form import (NFState, NFCoefficients, pnf_rhs, nf8_rhs,
                          first_integrals, pnf_periodic_orbit, PNFOrbit,
                          integrate, reversible_shoot, s1_reverse, rotate,
                          NoPearlingError, SupercriticalityError, ShootingError)
from .pearls import (PearlSolution, flat_pearl, circular_pearl, circular_radii,
                     supercriticality_bound, pearl_amplitude, pearl_period,
                     circular_radius, default_box)
from .simulator import (Field2D, SimConfig, FCHSimulator, SimResult,
                        extract_flat_metrics, extract_circular_metrics,
                        BlowUpError, GeometryError, NoInterfaceError)
from .config import RunConfig, parse_config, build_config, ConfigError
from .verify import run_verification

__version__ = "0.1.0"
