"""Zeta-regularised determinants and Casimir quantities for point interactions."""

from .bound_states import SpectrumResult, eigenvalue_residual, point_spectrum, spectrum_threshold
from .errors import (BracketError, CapabilityError, ConvergenceError, DeltaCasimirError, DomainError,
                     OrderError, PoleError, SpectrumError, StripError)
from .models import (ALL_GEOMETRIES, H1, H2, H3, R1, R2, R3, ExtensionParam, Geometry, Model,
                     an_bn_constants, dn_cutoff, gn_function, trace_resolvent_diff)
from .numerics import (QuadratureSpec, ZetaLaurent, bessel_k, find_root, gamma_fn,
                       integrate_semi_infinite, laurent_extract, log_neg, sqrt_upper)
from .report import VerificationReport
from .spectral import SpectralSample, asymptotics_check, cross_cut_measure, spectral_measure
from .thermo import (ForceExpansion, ThermalParams, In_constants, casimir_energy, casimir_force,
                     force_small_a, log_eta, log_partition)
from .zeta import (ZetaEvaluation, laurent_at_minus_half, relative_zeta, zeta0_quadrature,
                   zeta_closed_whole, zeta_inf_closed)

__version__ = "0.1.0"
