"""Dense complex linear algebra substrate.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
Eigen- and Schur decompositions are delegated to LAPACK through
``scipy.linalg``; this module only fixes the contracts (validation, unit-norm
eigenvectors, residual reporting, singularity detection) that the rest of the
package relies on.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import NonConvergence, NonFiniteInput, NotSquare, SingularToTolerance

EPS = np.finfo(float).eps

__all__ = [
    "EPS",
    "EigenDecomposition",
    "as_matrix",
    "as_vector",
    "eig_dense",
    "norm2",
    "schur_dense",
    "solve_dense",
]


def as_matrix(A, square=True, name="A"):
    """Return `A` as a finite complex128 2-D array (a fresh copy)."""
    M = np.array(A, dtype=complex, copy=True)
    if M.ndim != 2:
        raise NotSquare(f"{name} must be 2-D, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise NotSquare(f"{name} must be square, got shape {M.shape}")
    if M.size == 0:
        raise NotSquare(f"{name} is empty")
    if not np.all(np.isfinite(M)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return M


def as_vector(v, name="v"):
    w = np.array(v, dtype=complex, copy=True).reshape(-1)
    if w.size == 0:
        raise NonFiniteInput(f"{name} is empty")
    if not np.all(np.isfinite(w)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return w


def norm2(A):
    """Spectral norm for matrices, Euclidean norm for vectors."""
    A = np.asarray(A)
    if A.ndim == 1:
        return float(np.linalg.norm(A))
    return float(np.linalg.norm(A, 2))


@dataclass(frozen=True)
class EigenDecomposition:
    """Full spectrum of a square matrix.

    ``right_vectors[:, k]`` is a unit-norm eigenvector for ``eigenvalues[k]``
    and ``residual_bound`` is ``max_k ||A v_k - l_k v_k|| / ||A||``.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    residual_bound: float


def eig_dense(A):
    A = as_matrix(A)
    try:
        w, V = sla.eig(A, check_finite=False)
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise NonConvergence(f"eigensolver did not converge: {exc}") from exc
    V = V / np.linalg.norm(V, axis=0)
    nrm = norm2(A)
    if nrm == 0.0:
        res = 0.0
    else:
        res = float(np.max(np.linalg.norm(A @ V - V * w, axis=0))) / nrm
    return EigenDecomposition(eigenvalues=w, right_vectors=V, residual_bound=res)


def schur_dense(A):
    """Complex Schur form ``A = Q T Q*`` with ``Q`` unitary, ``T`` upper triangular."""
    A = as_matrix(A)
    try:
        T, Q = sla.schur(A, output="complex", check_finite=False)
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise NonConvergence(f"Schur iteration did not converge: {exc}") from exc
    return Q, np.triu(T)


def solve_dense(A, B, pivot_tol=None):
    """Solve ``A X = B`` by partial-pivoted LU.

    Raises ``SingularToTolerance`` (carrying the smallest pivot modulus) when a
    pivot falls below ``pivot_tol``; the default is ``n * eps * ||A||``.
    """
    A = as_matrix(A)
    B = np.asarray(B, dtype=complex)
    n = A.shape[0]
    with warnings.catch_warnings():
        # singularity is reported below with our own tolerance
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    smallest = float(pivots.min())
    if pivot_tol is None:
        pivot_tol = n * EPS * max(norm2(A), np.finfo(float).tiny)
    if smallest <= pivot_tol:
        raise SingularToTolerance(
            f"matrix is singular to tolerance (smallest pivot {smallest:.3e})",
            pivot=smallest,
        )
    return sla.lu_solve((lu, piv), B, check_finite=False)
