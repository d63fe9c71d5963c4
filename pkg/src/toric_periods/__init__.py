"""Periods of toric varieties: quadrature, series, operator algebra and PDE checks."""
from .errors import (BadShape, ConfigError, DimensionTooLarge, NegativeEntry, NotConverged,
                     NotIntegrable, RankDeficient, ResonantParameters, SingularGram,
                     StencilOutOfRange, ToricError)
from .toric_data import (ChargeMatrix, KernelBasis, ToricData, build_toric_data, integrability_check,
                         kernel_basis, validate_charge_matrix)
from .reduction import SpectralParams, ReducedIntegrand, jacobian_factor, log_reduce, particular_solution
from .quadrature import PeriodValue, QuadratureSettings, evaluate_matrix_element, evaluate_period
from .bessel import bessel_k_oracle, p1_closed_form
from .series import SeriesCoefficients, build_series, series_eval, series_residual, step_factor
from .operator_algebra import (DiffOperator, Letter, NormalForm, XSpaceOperator, annihilator, apply_diffop,
                               gkz_operator, normal_order, parse_word, rep_map, verify_annihilator)
from .pde_check import GridSpec, ResidualReport, fd_apply, verify_system

__version__ = "0.1.0"
