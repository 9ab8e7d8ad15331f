"""Eigenvector normalizations and transport of the eigenvector derivatives.

Write the normalized vectors as ``xh(tau) = alpha(tau) x(tau)`` and
``yh(tau)* = beta*(tau) y(tau)*`` where ``x(tau), y(tau)*`` are the
projector-based vectors (scheme ``n0``). Then

    xh'   = alpha(tau0) x'      + alpha'(tau0) x0
    (yh*)' = beta*(tau0) (y*)'  + beta*'(tau0) y0*

so each scheme only has to supply ``alpha, alpha', beta*, beta*'`` at tau0.

Schemes (``j``, ``k`` are 0-based entry indices, default: max-modulus entry):

``n0``  projector-based, ``y* x = 1``
``n1``  ``x[j] = 1`` and ``y[k] = 1``
``n2``  ``x[j] = 1`` and ``y* x = 1``
``n3``  ``x^T x = 1`` and ``y* x = 1`` (two branches, ``sign_choice``)
``n4``  ``||x|| = ||y|| = 1`` with ``y* x`` real positive; not unique, so no
        derivative is ever reported for it.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    AmbiguousSign,
    BranchCutViolation,
    InputError,
    IsotropicVector,
    PinnedEntryZero,
)
from .linalg_core import as_vector
from .spectral import SpectralStructure

PIN_TOL = 1e-8
ISOTROPY_TOL = 1e-8
BRANCH_GUARD = 1e-8
SIGN_FALLBACK_TOL = 1e-8

SCHEMES = ("n0", "n1", "n2", "n3", "n4")

__all__ = [
    "NormalizationScheme",
    "NormalizedPair",
    "apply_normalization",
    "default_indices",
    "normalize0_computed",
    "normalize_computed",
    "sign_consistency",
]


@dataclass(frozen=True)
class NormalizationScheme:
    kind: str
    index_j: Optional[int] = None
    index_k: Optional[int] = None
    sign_choice: Optional[int] = None

    def __post_init__(self):
        if self.kind not in SCHEMES:
            raise InputError(f"unknown normalization {self.kind!r}; expected one of {SCHEMES}")
        if self.sign_choice not in (None, 1, -1):
            raise InputError("sign_choice must be +1 or -1")


@dataclass(frozen=True)
class NormalizedPair:
    x_hat: np.ndarray
    y_hat: np.ndarray
    x_hat_prime: Optional[np.ndarray]
    y_hat_star_prime: Optional[np.ndarray]
    alpha0: complex
    alpha_prime0: Optional[complex]
    beta_star0: complex
    beta_star_prime0: Optional[complex]
    well_defined: bool = True
    unique: bool = True
    j: Optional[int] = None
    k: Optional[int] = None
    sign: Optional[int] = None


def default_indices(x0, y0):
    """Indices of the max-modulus entries of `x0` and `y0` (lowest index on ties)."""
    x0 = np.asarray(x0)
    y0 = np.asarray(y0)
    return int(np.argmax(np.abs(x0))), int(np.argmax(np.abs(y0)))


def _guard_cut(z, what):
    z = complex(z)
    dist = abs(z.imag) if z.real <= 0 else abs(z)
    if dist < BRANCH_GUARD:
        raise BranchCutViolation(
            f"square-root argument {what} = {z} lies within {BRANCH_GUARD:g} of the branch cut"
        )


def _root(ratio, anchor):
    """Square root of `ratio` with the sign making ``Re(root * anchor) > 0``."""
    s = complex(np.sqrt(complex(ratio)))
    return -s if (s * anchor).real < 0 else s


def normalize0_computed(x_t, y_t, x0, y0):
    """Projector-based normalization of a computed pair ``(x_t, y_t)`` with
    ``y_t* x_t = 1``, without forming the projector:

        xx = (y_t* x0 / y0* x_t)^{1/2} x_t
        yy = (x_t* y0 / x0* y_t)^{1/2} y_t

    The root is the one for which ``y0* xx`` is the principal square root of
    ``w = y0* Pi(tau) x0 = (y_t* x0)(y0* x_t)``. That quantity does not depend
    on how the solver scaled ``(x_t, y_t)``, so neither does the result, and
    ``w`` near the nonpositive real axis means tau is too far from tau0.
    """
    x_t = as_vector(x_t, "x_t")
    y_t = as_vector(y_t, "y_t")
    x0 = as_vector(x0, "x0")
    y0 = as_vector(y0, "y0")
    yt_x0 = np.vdot(y_t, x0)
    y0_xt = np.vdot(y0, x_t)
    _guard_cut(yt_x0 * y0_xt, "y0* Pi(tau) x0")
    s_x = _root(yt_x0 / y0_xt, y0_xt)
    x0_yt = np.vdot(x0, y_t)
    s_y = _root(np.vdot(x_t, y0) / x0_yt, x0_yt)
    return NormalizedPair(
        x_hat=s_x * x_t,
        y_hat=s_y * y_t,
        x_hat_prime=None,
        y_hat_star_prime=None,
        alpha0=s_x,
        alpha_prime0=None,
        beta_star0=np.conj(s_y),
        beta_star_prime0=None,
    )


def _sign_of(v, tol=SIGN_FALLBACK_TOL):
    if abs(v.real) >= tol * abs(v):
        return 1 if v.real > 0 else -1
    if abs(v.imag) >= tol * abs(v) and v != 0:
        return 1 if v.imag > 0 else -1
    raise AmbiguousSign(f"reference entry {v} has no usable real or imaginary part")


def sign_consistency(x_hat_tau, x_hat_ref, j):
    """Return ``s`` in ``{+1, -1}`` so that ``s * x_hat_tau[j]`` and
    ``x_hat_ref[j]`` have real parts of equal sign (imaginary parts when the
    reference real part is negligible)."""
    ref = complex(np.asarray(x_hat_ref)[j])
    cand = complex(np.asarray(x_hat_tau)[j])
    if abs(ref) == 0.0:
        raise AmbiguousSign("reference entry is zero")
    if abs(ref.real) >= SIGN_FALLBACK_TOL * abs(ref):
        return 1 if (cand.real > 0) == (ref.real > 0) else -1
    return 1 if (cand.imag > 0) == (ref.imag > 0) else -1


def _resolve(scheme, x0, y0):
    jd, kd = default_indices(x0, y0)
    j = jd if scheme.index_j is None else scheme.index_j
    k = kd if scheme.index_k is None else scheme.index_k
    n = x0.size
    if not (0 <= j < n and 0 <= k < n):
        raise InputError(f"pinned indices ({j}, {k}) out of range for n={n}")
    return j, k


def _pin_check(v, idx, what):
    if abs(v[idx]) < PIN_TOL * np.linalg.norm(v):
        raise PinnedEntryZero(f"entry {idx} (0-based) of {what} is numerically zero ({abs(v[idx]):.3e})")


def _n3_root(x0):
    q = complex(x0 @ x0)
    if abs(q) < ISOTROPY_TOL * np.vdot(x0, x0).real:
        raise IsotropicVector(f"x0^T x0 = {q:.3e} vanishes; x0 is (nearly) isotropic")
    return complex(np.sqrt(q))


def _n3_sign(scheme, x0, r, j):
    if scheme.sign_choice is not None:
        return scheme.sign_choice
    return _sign_of(complex(x0[j] / r))


def apply_normalization(scheme, ss: SpectralStructure, x_prime, ystar_prime):
    """Normalized eigenvectors at tau0 and their transported derivatives."""
    x0 = ss.triple.x0
    y0 = ss.triple.y0
    x_prime = as_vector(x_prime, "x_prime")
    ystar_prime = as_vector(ystar_prime, "ystar_prime")
    y0s = y0.conj()
    kind = scheme.kind
    j = k = sign = None

    if kind == "n0":
        a, ap, b, bp = 1.0, 0.0, 1.0, 0.0
    elif kind in ("n1", "n2"):
        j, k = _resolve(scheme, x0, y0)
        _pin_check(x0, j, "x0")
        a = 1.0 / x0[j]
        ap = -x_prime[j] / x0[j] ** 2
        if kind == "n1":
            _pin_check(y0, k, "y0")
            b = 1.0 / y0s[k]
            bp = -ystar_prime[k] / y0s[k] ** 2
        else:
            k = None
            b = x0[j]
            bp = x_prime[j]
    elif kind == "n3":
        j, _ = _resolve(scheme, x0, y0)
        r = _n3_root(x0)
        sign = _n3_sign(scheme, x0, r, j)
        d = complex(x_prime @ x0)
        a = sign / r
        ap = -sign * d / r ** 3
        b = sign * r
        bp = sign * d / r
    else:
        nx = np.linalg.norm(x0)
        ny = np.linalg.norm(y0)
        return NormalizedPair(
            x_hat=x0 / nx,
            y_hat=y0 / ny,
            x_hat_prime=None,
            y_hat_star_prime=None,
            alpha0=1.0 / nx,
            alpha_prime0=None,
            beta_star0=1.0 / ny,
            beta_star_prime0=None,
            well_defined=True,
            unique=False,
        )

    a, ap, b, bp = (complex(v) for v in (a, ap, b, bp))
    return NormalizedPair(
        x_hat=a * x0,
        y_hat=np.conj(b) * y0,
        x_hat_prime=a * x_prime + ap * x0,
        y_hat_star_prime=b * ystar_prime + bp * y0s,
        alpha0=a,
        alpha_prime0=ap,
        beta_star0=b,
        beta_star_prime0=bp,
        j=j,
        k=k,
        sign=sign,
    )


def normalize_computed(pair: NormalizedPair, kind, x_t, y_t, x0, y0):
    """Apply scheme `kind` to a computed pair ``(x_t, y_t)`` at some tau.

    `pair` is the reference normalization at tau0 (from
    ``apply_normalization``); it fixes the pinned indices and, for ``n3``,
    the sign branch. Returns ``(x_hat, y_hat_star_row)``.
    """
    x_t = as_vector(x_t, "x_t")
    y_t = as_vector(y_t, "y_t")
    yx = np.vdot(y_t, x_t)
    if kind == "n0":
        p = normalize0_computed(x_t, y_t, x0, y0)
        return p.x_hat, p.y_hat.conj()
    if kind == "n1":
        j, k = pair.j, pair.k
        return x_t / x_t[j], y_t.conj() / np.conj(y_t[k])
    if kind == "n2":
        j = pair.j
        return x_t / x_t[j], (x_t[j] / yx) * y_t.conj()
    if kind == "n3":
        r = _n3_root(x_t)
        xh = x_t / r
        yh = (r / yx) * y_t.conj()
        s = sign_consistency(xh, pair.x_hat, pair.j)
        return s * xh, s * yh
    raise InputError(f"scheme {kind!r} has no computed-vector form")
