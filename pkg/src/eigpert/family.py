"""Analytic one-parameter matrix families ``A(tau)``.

Three kinds are supported:

* ``linear``      ``A(tau) = A0 + (tau - tau0) * dA``
* ``polynomial``  ``A(tau) = C0 + tau C1 + ... + tau^d Cd``
* ``sampled``     a black-box callable; the derivative is either supplied or
                  taken by a central difference along a unit complex direction.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, EvaluatorFailure, InputError
from .linalg_core import EPS, as_matrix

MAX_DEGREE = 32
DEFAULT_FD_STEP = EPS ** (1.0 / 3.0)

__all__ = [
    "MatrixFamily",
    "DerivativeEvaluation",
    "eval_family",
    "eval_derivative",
    "random_linear_family",
    "example_family",
]


@dataclass(frozen=True)
class MatrixFamily:
    kind: str
    terms: tuple
    tau0: complex = 0j
    evaluator: Optional[Callable] = field(default=None, compare=False)
    derivative: Optional[Callable] = field(default=None, compare=False)
    fd_step: Optional[float] = None
    fd_direction: complex = 1 + 0j

    @property
    def n(self):
        return self.terms[0].shape[0]

    @classmethod
    def linear(cls, A0, dA, tau0=0j):
        A0 = as_matrix(A0, name="A0")
        dA = as_matrix(dA, name="dA")
        if A0.shape != dA.shape:
            raise DimensionMismatch(f"A0 {A0.shape} and dA {dA.shape} differ")
        return cls("linear", (A0, dA), complex(tau0))

    @classmethod
    def polynomial(cls, coefficients, tau0=0j):
        coeffs = tuple(as_matrix(C, name=f"C{k}") for k, C in enumerate(coefficients))
        if not coeffs:
            raise InputError("polynomial family needs at least one coefficient")
        if len(coeffs) - 1 > MAX_DEGREE:
            raise InputError(f"polynomial degree {len(coeffs) - 1} exceeds cap {MAX_DEGREE}")
        if any(C.shape != coeffs[0].shape for C in coeffs):
            raise DimensionMismatch("coefficient matrices must share one shape")
        return cls("polynomial", coeffs, complex(tau0))

    @classmethod
    def sampled(cls, evaluator, tau0=0j, derivative=None, fd_step=None, fd_direction=1 + 0j):
        """Wrap a callable ``tau -> A(tau)``.

        If `derivative` is given it is used as the exact ``A'(tau)``; otherwise
        a central difference with step `fd_step` (default ``eps**(1/3)`` scaled
        by ``max(1, |tau|)``) along `fd_direction` is used.
        """
        if abs(abs(fd_direction) - 1.0) > 1e-12:
            raise InputError("fd_direction must have unit modulus")
        if fd_step is not None and not fd_step > 0:
            raise InputError("fd_step must be positive")
        tau0 = complex(tau0)
        A0 = _call(evaluator, tau0)
        return cls("sampled", (A0,), tau0, evaluator, derivative, fd_step, complex(fd_direction))

    def __call__(self, tau):
        return eval_family(self, tau)


@dataclass(frozen=True)
class DerivativeEvaluation:
    A_at: np.ndarray
    Aprime_at: np.ndarray
    derivative_source: str


def _call(fn, tau, shape=None):
    try:
        A = fn(tau)
    except Exception as exc:
        raise EvaluatorFailure(f"family evaluator raised at tau={tau}: {exc!r}") from exc
    A = as_matrix(A)
    if shape is not None and A.shape != shape:
        raise DimensionMismatch(f"evaluator returned {A.shape}, expected {shape}")
    return A


def eval_family(F, tau):
    tau = complex(tau)
    if F.kind == "linear":
        A0, dA = F.terms
        if tau == F.tau0:
            return A0.copy()
        return A0 + (tau - F.tau0) * dA
    if F.kind == "polynomial":
        # Horner
        out = F.terms[-1].copy()
        for C in reversed(F.terms[:-1]):
            out = out * tau + C
        return out
    if F.kind == "sampled":
        return _call(F.evaluator, tau, F.terms[0].shape)
    raise InputError(f"unknown family kind {F.kind!r}")


def eval_derivative(F, tau):
    tau = complex(tau)
    A = eval_family(F, tau)
    if F.kind == "linear":
        return DerivativeEvaluation(A, F.terms[1].copy(), "exact")
    if F.kind == "polynomial":
        d = len(F.terms) - 1
        if d == 0:
            return DerivativeEvaluation(A, np.zeros_like(A), "exact")
        out = d * F.terms[d]
        for k in range(d - 1, 0, -1):
            out = out * tau + k * F.terms[k]
        return DerivativeEvaluation(A, out, "exact")
    if F.kind == "sampled":
        if F.derivative is not None:
            return DerivativeEvaluation(A, _call(F.derivative, tau, A.shape), "exact")
        h = F.fd_step if F.fd_step is not None else DEFAULT_FD_STEP * max(1.0, abs(tau))
        d = F.fd_direction
        Ap = (_call(F.evaluator, tau + h * d, A.shape) - _call(F.evaluator, tau - h * d, A.shape)) / (2 * h * d)
        return DerivativeEvaluation(A, Ap, f"finite-difference({h!r})")
    raise InputError(f"unknown family kind {F.kind!r}")


def _unit_norm_gaussian(rng, n):
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return M / np.linalg.norm(M, 2)


def random_linear_family(n, seed):
    """Seeded linear family with ``||A0|| = ||dA|| = 1`` and ``tau0 = 0``.

    Both matrices have i.i.d. standard complex Gaussian entries (real and
    imaginary parts drawn in that order from ``numpy.random.default_rng(seed)``)
    rescaled to unit spectral norm.
    """
    rng = np.random.default_rng(seed)
    A0 = _unit_norm_gaussian(rng, n)
    dA = _unit_norm_gaussian(rng, n)
    return MatrixFamily.linear(A0, dA, 0j)


def example_family(example_id, tau0=0j):
    """The two 2x2 families with a multiple eigenvalue at ``tau = 0``.

    1: ``[[0, 1], [tau, 0]]`` (Jordan block at 0)
    2: ``[[0, tau], [tau^2, 0]]`` (zero matrix at 0)
    """
    z = np.zeros((2, 2))
    if example_id == 1:
        return MatrixFamily.polynomial([np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])], tau0)
    if example_id == 2:
        return MatrixFamily.polynomial([z, np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])], tau0)
    raise InputError(f"unknown example id {example_id!r}; expected 1 or 2")
