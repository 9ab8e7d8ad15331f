"""Simple eigenvalue with paired right/left eigenvectors, ``y0* x0 = 1``."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError, NearOrthogonalPair, NotSimple, PairingAmbiguous
from .linalg_core import as_matrix, as_vector, eig_dense, norm2

DEFAULT_SIMPLICITY_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-12

__all__ = [
    "EigenSelector",
    "EigenTriple",
    "canonicalize_pair",
    "condition_number",
    "default_selector",
    "extract_triple",
]


@dataclass(frozen=True)
class EigenSelector:
    """Rule picking one eigenvalue out of a computed spectrum.

    Use the constructors: ``closest_to(z)``, ``largest_real()``,
    ``largest_modulus()`` or ``index(k)``.
    """

    mode: str
    target: Optional[complex] = None
    k: Optional[int] = None

    @classmethod
    def closest_to(cls, target):
        return cls("closest", target=complex(target))

    @classmethod
    def largest_real(cls):
        return cls("largest-real")

    @classmethod
    def largest_modulus(cls):
        return cls("largest-modulus")

    @classmethod
    def index(cls, k):
        if k < 0:
            raise InputError("index selector needs k >= 0")
        return cls("index", k=int(k))

    def pick(self, eigenvalues):
        w = np.asarray(eigenvalues)
        if self.mode == "closest":
            return int(np.argmin(np.abs(w - self.target)))
        if self.mode == "largest-real":
            return int(np.argmax(w.real))
        if self.mode == "largest-modulus":
            return int(np.argmax(np.abs(w)))
        if self.mode == "index":
            if not 0 <= self.k < w.size:
                raise InputError(f"index {self.k} out of range for n={w.size}")
            return self.k
        raise InputError(f"unknown selector mode {self.mode!r}")

    def describe(self):
        if self.mode == "closest":
            return f"closest={self.target.real!r},{self.target.imag!r}"
        if self.mode == "index":
            return f"index={self.k}"
        return self.mode


def default_selector():
    return EigenSelector.largest_real()


@dataclass(frozen=True)
class EigenTriple:
    lambda0: complex
    x0: np.ndarray
    y0: np.ndarray
    gap: float
    chi: float
    residuals: tuple

    @property
    def n(self):
        return self.x0.size


def canonicalize_pair(x, y):
    """Scale ``(x, y)`` to unit-norm ``x`` with its max-modulus entry real
    positive, and ``y`` with ``y* x = 1``.

    The result does not depend on the input scalings ``(w x, y / conj(w'))``.
    """
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    s = np.vdot(y, x)
    if abs(s) < ORTHOGONALITY_TOL * np.linalg.norm(x) * np.linalg.norm(y):
        raise NearOrthogonalPair(
            f"|y*x| = {abs(s):.3e} is below {ORTHOGONALITY_TOL:g} ||x|| ||y||; "
            "eigenvalue is defective or nearly so"
        )
    x = x / np.linalg.norm(x)
    j = int(np.argmax(np.abs(x)))
    x = x * (np.conj(x[j]) / abs(x[j]))
    x[j] = abs(x[j])
    y = y / np.conj(np.vdot(y, x))
    return x, y


def extract_triple(A, sel=None, simplicity_tol=DEFAULT_SIMPLICITY_TOL):
    """Select a simple eigenvalue of `A` and return its normalized triple.

    The right vector comes from the eigendecomposition of `A`, the left one
    from that of ``A*`` at the eigenvalue nearest ``conj(lambda0)``.

    Raises
    ------
    NotSimple
        gap to the rest of the spectrum is ``<= simplicity_tol * ||A||``.
    PairingAmbiguous
        no unique eigenvalue of ``A*`` within ``gap/2`` of ``conj(lambda0)``.
    NearOrthogonalPair
        ``|y* x|`` numerically zero.
    """
    if not simplicity_tol > 0:
        raise InputError("simplicity_tol must be positive")
    A = as_matrix(A)
    sel = sel or default_selector()
    n = A.shape[0]
    nrmA = norm2(A)

    right = eig_dense(A)
    w = right.eigenvalues
    k = sel.pick(w)
    lam = complex(w[k])
    others = np.delete(w, k)
    gap = float(np.min(np.abs(others - lam))) if n > 1 else np.inf
    if gap <= simplicity_tol * nrmA:
        raise NotSimple(
            f"eigenvalue {lam} is not simple to tolerance: gap {gap:.3e} <= "
            f"{simplicity_tol:g} * ||A|| = {simplicity_tol * nrmA:.3e}"
        )
    x = right.right_vectors[:, k]

    left = eig_dense(A.conj().T)
    dist = np.abs(np.conj(left.eigenvalues) - lam)
    order = np.argsort(dist, kind="stable")
    m = int(order[0])
    if n > 1 and (dist[m] >= gap / 2 or dist[order[1]] <= gap / 2):
        raise PairingAmbiguous(
            f"cannot pair a unique left eigenvalue with {lam} within gap/2 = {gap / 2:.3e}"
        )
    y = left.right_vectors[:, m]

    x, y = canonicalize_pair(x, y)
    chi = float(np.linalg.norm(y))  # ||x|| == 1
    res_r = float(np.linalg.norm(A @ x - lam * x))
    res_l = float(np.linalg.norm(y.conj() @ A - lam * y.conj()))
    return EigenTriple(lam, x, y, gap, chi, (res_r, res_l))


def condition_number(t):
    """``||x0|| ||y0||`` for a triple normalized with ``y0* x0 = 1``."""
    return float(np.linalg.norm(t.x0) * np.linalg.norm(t.y0))
