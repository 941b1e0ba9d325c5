"""Numerics for the orbit space of the extended affine Jacobi group of type A1."""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DomainError, JacobianSingular, JacobiOrbitError,
                     NoConvergence, PoleError)
from .special import (SeriesConfig, eisenstein_e2, g1, theta1, theta1_dtau, theta1_dv,
                      theta1_jet, wp, wp_dv, wsigma, wzeta)
from .group import (DomainPoint, GroupElement, act, compose, conformal_factor, inverse,
                    quadratic_form)
from .forms import (FormSignature, PHI0_SIGNATURE, PHI1_SIGNATURE, generating_function,
                    invariance_residual, phi0, phi1, superpotential)
from .frobenius import (FlatPoint, canonical_spectrum, det_jacobian, domain_from_flat,
                        euler_residual, flat_from_domain, free_energy, intersection_form_domain,
                        intersection_form_flat, intersection_form_pushforward,
                        metric_potential_residual, saito_metric, structure_constants,
                        third_derivatives, wdvv_residual)

__all__ = [
    "ConvergenceError", "DomainError", "JacobianSingular", "JacobiOrbitError", "NoConvergence",
    "PoleError", "SeriesConfig", "eisenstein_e2", "g1", "theta1", "theta1_dtau", "theta1_dv",
    "theta1_jet", "wp", "wp_dv", "wsigma", "wzeta", "DomainPoint", "GroupElement", "act",
    "compose", "conformal_factor", "inverse", "quadratic_form", "FormSignature",
    "PHI0_SIGNATURE", "PHI1_SIGNATURE", "generating_function", "invariance_residual", "phi0",
    "phi1", "superpotential", "FlatPoint", "canonical_spectrum", "det_jacobian",
    "domain_from_flat", "euler_residual", "flat_from_domain", "free_energy",
    "intersection_form_domain", "intersection_form_flat", "intersection_form_pushforward",
    "metric_potential_residual", "saito_metric", "structure_constants", "third_derivatives",
    "wdvv_residual",
]
