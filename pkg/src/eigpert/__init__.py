"""First-order perturbation of a simple eigenvalue of an analytic matrix family.

Typical use::

    from eigpert import MatrixFamily, extract_triple, build_structure, sensitivity

    F = MatrixFamily.linear(A0, dA)
    t = extract_triple(F(0))
    ss = build_structure(F(0), t)
    rep = sensitivity(ss, dA)      # lambda', x', (y*)', Pi', bounds

Verification helpers (finite-difference sweeps, contour-integral oracle) live
in :mod:`eigpert.verify`; the command-line tool in :mod:`eigpert.cli`.
"""

__version__ = "0.1.0"

from .derivatives import (
    SensitivityReport,
    eigenvector_derivatives,
    lambda_derivative,
    lambda_derivative_trace,
    projector_derivative,
    sensitivity,
)
from .eigentriple import EigenSelector, EigenTriple, condition_number, extract_triple
from .family import MatrixFamily, eval_derivative, eval_family, example_family, random_linear_family
from .normalizations import (
    NormalizationScheme,
    apply_normalization,
    default_indices,
    normalize0_computed,
    sign_consistency,
)
from .spectral import SpectralStructure, build_structure, derivative_bound, group_inverse
