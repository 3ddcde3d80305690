"""Theta-group Mellin transforms F_z(s) and their limit toward the completed zeta function."""
from .asymptotics import (CorrectionExpansion, convergence_study, corrected_f_z, correction_C,
                          correction_D, proposition_corrections)
from .errors import DomainError, ThetaXiError, ToleranceError
from .mellin import QuadratureConfig, breakpoints, f_z, f_z_segment, functional_equation_residual
from .modular_forms import (IntegerMatrix2x2, PolePoint, UpperHalfPoint, axis_margin, h_z,
                            in_theta_group, j_theta, lambda_modular, reduce_to_fundamental_domain,
                            theta, theta2)
from .quadrature import QuadratureResult, integrate
from .special_functions import (AsymptoticOrder, SpectralParameter, confluent_1f1_asymptotic,
                                gamma_fn, incomplete_gamma_asymptotic, log_gamma,
                                polylog_unit_circle, riemann_zeta, upper_incomplete_gamma,
                                xi_completed, xi_via_theta)

__all__ = [
    "AsymptoticOrder", "CorrectionExpansion", "DomainError", "IntegerMatrix2x2", "PolePoint",
    "QuadratureConfig", "QuadratureResult", "SpectralParameter", "ThetaXiError", "ToleranceError",
    "UpperHalfPoint", "axis_margin", "breakpoints", "confluent_1f1_asymptotic", "convergence_study",
    "corrected_f_z", "correction_C", "correction_D", "f_z", "f_z_segment",
    "functional_equation_residual", "gamma_fn", "h_z", "in_theta_group", "incomplete_gamma_asymptotic",
    "integrate", "j_theta", "lambda_modular", "log_gamma", "polylog_unit_circle",
    "proposition_corrections", "reduce_to_fundamental_domain", "riemann_zeta", "theta", "theta2",
    "upper_incomplete_gamma", "xi_completed", "xi_via_theta",
]
