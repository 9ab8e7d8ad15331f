"""First-order derivatives of a simple eigenvalue, its eigenvectors and its
eigenprojector along an analytic family.

Left-eigenvector quantities are returned as *row functionals*: a 1-D array
``r`` standing for the row vector ``(y*)'``, so that ``(y*)' x == r @ x``.
``y(tau)`` itself is not analytic in ``tau``; ``y(tau)*`` is.
"""

from dataclasses import dataclass

import numpy as np

from .eigentriple import EigenTriple
from .errors import DimensionMismatch
from .linalg_core import as_matrix, norm2
from .spectral import SpectralStructure, derivative_bound

__all__ = [
    "SensitivityReport",
    "eigenvector_derivatives",
    "lambda_derivative",
    "lambda_derivative_trace",
    "projector_derivative",
    "sensitivity",
]


def _check(n, Aprime):
    Ap = as_matrix(Aprime, name="A'")
    if Ap.shape[0] != n:
        raise DimensionMismatch(f"A' is {Ap.shape}, expected {n}x{n}")
    return Ap


def lambda_derivative(t: EigenTriple, Aprime):
    Ap = _check(t.n, Aprime)
    return complex(np.vdot(t.y0, Ap @ t.x0))


def lambda_derivative_trace(Pi0, Aprime):
    Pi0 = as_matrix(Pi0, name="Pi0")
    Ap = _check(Pi0.shape[0], Aprime)
    # tr(P A) without forming the product
    return complex(np.sum(Pi0 * Ap.T))


def eigenvector_derivatives(ss: SpectralStructure, Aprime):
    """Return ``(x', (y*)')`` = ``(-S A' x0, -y0* A' S)``."""
    Ap = _check(ss.triple.n, Aprime)
    x_prime = -(ss.S @ (Ap @ ss.triple.x0))
    ystar_prime = -((ss.triple.y0.conj() @ Ap) @ ss.S)
    return x_prime, ystar_prime


def projector_derivative(ss: SpectralStructure, Aprime):
    """``-Pi0 A' S - S A' Pi0``."""
    Ap = _check(ss.triple.n, Aprime)
    return -(ss.Pi0 @ Ap @ ss.S) - (ss.S @ Ap @ ss.Pi0)


@dataclass(frozen=True)
class SensitivityReport:
    lambda_prime: complex
    lambda_prime_trace_form: complex
    x_prime: np.ndarray
    ystar_prime: np.ndarray
    pi_prime: np.ndarray
    bound_rhs: float
    chi_times_normAprime: float


def sensitivity(ss: SpectralStructure, Aprime):
    """All first-order quantities from one structure (one consistent ``x0, y0``)."""
    Ap = _check(ss.triple.n, Aprime)
    xp, yp = eigenvector_derivatives(ss, Ap)
    return SensitivityReport(
        lambda_prime=lambda_derivative(ss.triple, Ap),
        lambda_prime_trace_form=lambda_derivative_trace(ss.Pi0, Ap),
        x_prime=xp,
        ystar_prime=yp,
        pi_prime=projector_derivative(ss, Ap),
        bound_rhs=derivative_bound(ss, Ap),
        chi_times_normAprime=ss.triple.chi * norm2(Ap),
    )
