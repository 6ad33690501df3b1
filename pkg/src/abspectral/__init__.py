"""Spectral estimates for the Aharonov-Bohm operator.

Local spectral density, its Riesz-type moments, the sharp diamagnetic
excess constant, and exact Dirichlet spectra on discs, annuli and squares.
"""

from .density import FluxParameter, rho, rho_asymptotic, rho_half, rho_prime
from .diamag import (BlyCheck, PointwiseDensityGap, annulus_trace_gaps, check_bly_bound,
                     density_gap, find_violating_annulus)
from .errors import (AbSpectralError, AccuracyError, BracketError, DomainError, EmptyResult,
                     RangeError, SearchError, UnsupportedError)
from .moments import (AsymptoticCoefficients, MomentOrder, c_gamma, cross_check_inteq, laplace_complement,
                      sigma,
                      sigma_asymptotic, sigma_by_parts, sigma_laplace, sigma_prime,
                      sigma_prime_asymptotic)
from .sharpconst import SupremumResult, r_constant, r_constant_table
from .specfun import DEFAULT_POLICY, NumericPolicy
from .spectra import (PRESETS, Annulus, Disc, SpectrumTable, Square, WeylQuotientCurve,
                      bessel_zeros, cross_product_zeros, eigenvalue_branches, parse_domain,
                      spectrum, weyl_quotient)

__version__ = "0.1.0"
