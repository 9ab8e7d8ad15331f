"""Block diagonalization around a simple eigenvalue, the eigenprojector and
the group inverse (reduced resolvent).

Given a triple ``(lambda0, x0, y0)`` of ``A0`` we build ``X = [x0, X1]`` and
``Y = [y0, Y1]`` with ``Y* X = I`` and ``Y* A0 X = diag(lambda0, B1)``, then

    S = X1 (B1 - lambda0 I)^{-1} Y1*.

Construction: complex Schur form, reorder so ``lambda0`` leads the diagonal,
then decouple the leading row with one triangular solve. Nothing here needs
the rest of the spectrum to be diagonalizable.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .eigentriple import EigenTriple
from .errors import DimensionMismatch, ReorderFailure, SingularDecoupling
from .linalg_core import EPS, as_matrix, norm2, schur_dense

__all__ = [
    "SpectralStructure",
    "build_structure",
    "derivative_bound",
    "gap_form_bound",
    "group_inverse",
    "swap_schur_to_front",
]


@dataclass(frozen=True)
class SpectralStructure:
    A0: np.ndarray
    triple: EigenTriple
    X1: np.ndarray
    Y1: np.ndarray
    B1: np.ndarray
    S: np.ndarray
    Pi0: np.ndarray
    Pi1: np.ndarray
    kappaX: float
    resolvent_norm: float

    @property
    def X(self):
        return np.column_stack([self.triple.x0, self.X1])

    @property
    def Y(self):
        return np.column_stack([self.triple.y0, self.Y1])


def _givens_swap(T, Q, k):
    """Swap diagonal entries ``k`` and ``k+1`` of triangular `T` in place."""
    a, b, c = T[k, k], T[k, k + 1], T[k + 1, k + 1]
    v = np.array([b, c - a])
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return
    g1, g2 = v / nv
    G = np.array([[g1, -np.conj(g2)], [g2, np.conj(g1)]])
    T[:, k:k + 2] = T[:, k:k + 2] @ G
    T[k:k + 2, :] = G.conj().T @ T[k:k + 2, :]
    Q[:, k:k + 2] = Q[:, k:k + 2] @ G
    T[k + 1, k] = 0.0


def swap_schur_to_front(Q, T, p):
    """Move diagonal entry `p` of the Schur pair ``(Q, T)`` to position 0 by
    adjacent unitary swaps. Returns new copies."""
    Q = Q.copy()
    T = T.copy()
    for k in range(p - 1, -1, -1):
        _givens_swap(T, Q, k)
    return Q, T


def build_structure(A, t: EigenTriple, tol=1e-10):
    A = as_matrix(A)
    n = A.shape[0]
    if t.n != n:
        raise DimensionMismatch(f"triple has length {t.n}, matrix is {n}x{n}")
    lam = t.lambda0
    nrmA = norm2(A)
    x0, y0 = t.x0, t.y0
    Pi0 = np.outer(x0, y0.conj())

    if n == 1:
        empty = np.zeros((1, 0), dtype=complex)
        return SpectralStructure(
            A, t, empty, empty.copy(), np.zeros((0, 0), dtype=complex),
            np.zeros((1, 1), dtype=complex), Pi0, np.eye(1) - Pi0,
            float(np.linalg.norm(x0) * np.linalg.norm(y0)), 0.0,
        )

    Q, T = schur_dense(A)
    diag = np.diag(T)
    dist = np.abs(diag - lam)
    p = int(np.argmin(dist))
    Q, T = swap_schur_to_front(Q, T, p)
    if abs(T[0, 0] - lam) > max(t.gap / 2, EPS * nrmA) * 0.999:
        raise ReorderFailure(f"could not bring {lam} to the front of the Schur form")
    if norm2(np.tril(T, -1)) > 1e3 * n * EPS * max(nrmA, 1e-300) or norm2(A - Q @ T @ Q.conj().T) > tol * max(nrmA, 1e-300):
        raise ReorderFailure("reordered Schur form lost accuracy")

    lam_t = T[0, 0]
    t_row = T[0, 1:]
    T22 = T[1:, 1:]
    M = lam_t * np.eye(n - 1) - T22
    pivots = np.abs(np.diag(M))
    if pivots.min() <= 1e-14 * max(nrmA, 1e-300):
        raise SingularDecoupling(
            f"lambda0*I - T22 is singular to tolerance (pivot {pivots.min():.3e})"
        )
    # row vector u with u (lam I - T22) = -t
    u = sla.solve_triangular(M, -t_row, trans="T", lower=False, check_finite=False)

    q1 = Q[:, 0]
    Q2 = Q[:, 1:]
    X1 = Q2 + np.outer(q1, u)
    Y1 = Q2
    B1 = T22

    # x0 = c q1 up to rounding; X1, Y1 are already biorthogonal to the triple
    Binv = sla.solve_triangular(B1 - lam * np.eye(n - 1), np.eye(n - 1), lower=False, check_finite=False)
    S = X1 @ Binv @ Y1.conj().T
    Pi1 = np.eye(n) - Pi0
    X = np.column_stack([x0, X1])
    Y = np.column_stack([y0, Y1])
    kappaX = norm2(X) * norm2(Y)
    return SpectralStructure(A, t, X1, Y1, B1, S, Pi0, Pi1, kappaX, norm2(Binv))


def group_inverse(ss: SpectralStructure):
    return ss.S.copy()


def derivative_bound(ss: SpectralStructure, Aprime):
    """``kappa(X) ||(lambda0 I - B1)^{-1}|| ||A'||``, an upper bound on both
    ``||x'|| / ||x0||`` and ``||(y*)'|| / ||y0||``."""
    return ss.kappaX * ss.resolvent_norm * norm2(Aprime)


def gap_form_bound(ss: SpectralStructure, Aprime, tol=1e-12) -> Optional[float]:
    """``kappa(X) ||A'|| / min_j |lambda0 - lambda_j|``.

    Only valid when ``B1`` is diagonal; returns ``None`` otherwise.
    """
    B1 = ss.B1
    if B1.size == 0:
        return 0.0
    off = B1 - np.diag(np.diag(B1))
    if norm2(off) > tol * max(norm2(ss.A0), 1e-300):
        return None
    mingap = float(np.min(np.abs(np.diag(B1) - ss.triple.lambda0)))
    return ss.kappaX * norm2(Aprime) / mingap
