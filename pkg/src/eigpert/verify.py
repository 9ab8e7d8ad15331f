"""Numerical verification of the first-order formulas.

Two independent routes are provided:

* finite-difference sweeps: recompute the eigen-data of ``A(tau0 + h d)`` on a
  geometric ladder of steps ``h`` and difference against the formulas;
* a contour-integral oracle: trapezoidal quadrature of the resolvent on a
  circle around ``lambda0`` gives the eigenprojector (and an eigenvalue
  count) without using any eigenvector.

Plus the two 2x2 families with a multiple eigenvalue at ``tau = 0``, where
the eigenvalues split like fractional powers of ``tau``.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from . import family as fam
from .derivatives import sensitivity
from .eigentriple import (
    DEFAULT_SIMPLICITY_TOL,
    EigenSelector,
    EigenTriple,
    default_selector,
    extract_triple,
)
from .errors import (
    EigPertError,
    InputError,
    MatchingFailure,
    NonIntegerResult,
    NotVerifiable,
    NumericalError,
    ResolventBreakdown,
    SingularToTolerance,
)
from .linalg_core import as_matrix, eig_dense, norm2, solve_dense
from .normalizations import NormalizationScheme, apply_normalization, normalize_computed
from .spectral import build_structure

DEFAULT_STEPS = tuple(10.0 ** -k for k in range(1, 13))
FLOOR_FACTOR = 10.0
SLOPE_POINTS = 3
CHI_WARNING = 1e6
THRESHOLDS = {"lambda": 1e-6, "projector": 1e-5, "x": 1e-5, "ystar": 1e-5}

__all__ = [
    "CHI_WARNING",
    "ContourSpec",
    "DefectiveDemo",
    "ExponentFit",
    "SweepConfig",
    "SweepResult",
    "StepRecord",
    "THRESHOLDS",
    "VerificationReport",
    "contour_for",
    "contour_oracle",
    "count_eigs_in_disk",
    "defective_demo",
    "eigenvalue_via_contour",
    "fd_verify_eigenvectors",
    "fd_verify_lambda",
    "fd_verify_projector",
    "projector_via_contour",
    "verify_family",
]


@dataclass(frozen=True)
class SweepConfig:
    direction: complex = 1 + 0j
    steps: tuple = DEFAULT_STEPS
    selector: Optional[EigenSelector] = None
    simplicity_tol: float = DEFAULT_SIMPLICITY_TOL

    def __post_init__(self):
        steps = tuple(float(h) for h in self.steps)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "direction", complex(self.direction))
        if not steps or any(h <= 0 for h in steps):
            raise InputError("sweep steps must be positive")
        if any(b >= a for a, b in zip(steps, steps[1:])):
            raise InputError("sweep steps must be strictly decreasing")
        if abs(abs(self.direction) - 1.0) > 1e-12:
            raise InputError("sweep direction must have unit modulus")


@dataclass(frozen=True)
class StepRecord:
    step: float
    fd: object
    formula: object
    abs_error: float
    rel_error: float


@dataclass(frozen=True)
class SweepResult:
    quantity: str
    records: tuple
    dropped: tuple
    best_step: float
    best_error: float
    truncation_slope: float
    floor_dominated: bool
    chi: float

    @property
    def unreliable(self):
        return self.chi > CHI_WARNING


# -- sweep machinery ---------------------------------------------------------


@dataclass
class _Base:
    F: object
    cfg: SweepConfig
    A0: np.ndarray
    Aprime: np.ndarray
    ss: object
    sens: object
    points: list = field(default_factory=list)  # (h, triple) pairs
    dropped: list = field(default_factory=list)  # (h, reason) pairs


def _base(F, cfg):
    dev = fam.eval_derivative(F, F.tau0)
    t = extract_triple(dev.A_at, cfg.selector or default_selector(), cfg.simplicity_tol)
    ss = build_structure(dev.A_at, t)
    base = _Base(F, cfg, dev.A_at, dev.Aprime_at, ss, sensitivity(ss, dev.Aprime_at))
    for h in cfg.steps:
        try:
            base.points.append((h, _matched_triple(F, F.tau0 + h * cfg.direction, t, cfg)))
        except EigPertError as exc:
            base.dropped.append((h, f"{type(exc).__name__}: {exc}"))
    return base


def _matched_triple(F, tau, t0: EigenTriple, cfg):
    A = fam.eval_family(F, tau)
    w = eig_dense(A).eigenvalues
    near = np.flatnonzero(np.abs(w - t0.lambda0) < t0.gap / 2)
    if near.size != 1:
        raise MatchingFailure(
            f"{near.size} eigenvalues of A(tau) within gap/2 = {t0.gap / 2:.3e} of lambda0"
        )
    return extract_triple(A, EigenSelector.closest_to(w[near[0]]), cfg.simplicity_tol)


def _errors(fd, formula, floor_scale):
    fd = np.asarray(fd)
    formula = np.asarray(formula)
    abs_err = float(np.linalg.norm(fd - formula))
    size = float(np.linalg.norm(formula))
    # relative error, falling back to absolute when the formula vanishes to roundoff
    rel_err = abs_err / size if size > 1e-12 * floor_scale else abs_err
    return abs_err, rel_err


def _fit_slope(steps, errs, best_step, best_error):
    """Log-log slope over the truncation-dominated end of the ladder.

    Uses the ``SLOPE_POINTS`` smallest steps above `best_step` whose error is
    still ``FLOOR_FACTOR`` times the best one; the largest steps are usually
    outside the asymptotic regime and are left out.
    """
    pts = [(h, e) for h, e in zip(steps, errs) if h > best_step and e > FLOOR_FACTOR * best_error]
    pts = sorted(pts)[:SLOPE_POINTS]
    if len(pts) < 2:
        return float("nan"), True
    lh = np.log10([p[0] for p in pts])
    le = np.log10([p[1] for p in pts])
    slope = np.polyfit(lh, le, 1)[0]
    return float(slope), False


def _result(quantity, base, records, dropped):
    if not records:
        raise MatchingFailure(f"no usable step in the {quantity} sweep")
    errs = [r.rel_error for r in records]
    i = int(np.argmin(errs))
    slope, floor = _fit_slope([r.step for r in records], errs, records[i].step, errs[i])
    return SweepResult(
        quantity=quantity,
        records=tuple(records),
        dropped=tuple(dropped),
        best_step=records[i].step,
        best_error=errs[i],
        truncation_slope=slope,
        floor_dominated=floor,
        chi=base.ss.triple.chi,
    )


def _scale(base):
    return base.ss.triple.chi * max(norm2(base.Aprime), 1e-300)


def _lambda_sweep(base):
    t0 = base.ss.triple
    d = base.cfg.direction
    formula = base.sens.lambda_prime
    recs = []
    for h, t in base.points:
        q = (t.lambda0 - t0.lambda0) / (h * d)
        recs.append(StepRecord(h, complex(q), formula, *_errors(q, formula, _scale(base))))
    return _result("lambda", base, recs, base.dropped)


def _projector_sweep(base):
    ss = base.ss
    d = base.cfg.direction
    formula = base.sens.pi_prime
    recs = []
    for h, t in base.points:
        Pi_t = np.outer(t.x0, t.y0.conj())
        q = (Pi_t - ss.Pi0) / (h * d)
        recs.append(StepRecord(h, q, formula, *_errors(q, formula, _scale(base))))
    return _result("projector", base, recs, base.dropped)


def _reject_unverifiable(scheme):
    if scheme.kind == "n4":
        raise NotVerifiable(
            "normalization n4 does not determine the eigenvectors uniquely; "
            "there is no smooth continuation of computed vectors to verify against"
        )


def _eigenvector_sweeps(base, scheme, vector_hook=None):
    _reject_unverifiable(scheme)
    ss = base.ss
    x0, y0 = ss.triple.x0, ss.triple.y0
    d = base.cfg.direction
    pair = apply_normalization(scheme, ss, base.sens.x_prime, base.sens.ystar_prime)
    ref_x, ref_y = pair.x_hat, pair.y_hat.conj()
    fx, fy = pair.x_hat_prime, pair.y_hat_star_prime
    rx, ry = [], []
    dropped = list(base.dropped)
    for i, (h, t) in enumerate(base.points):
        xt, yt = t.x0, t.y0
        if vector_hook is not None:
            xt, yt = vector_hook(i, xt, yt)
        try:
            xh, yh = normalize_computed(pair, scheme.kind, xt, yt, x0, y0)
        except NumericalError as exc:
            dropped.append((h, f"{type(exc).__name__}: {exc}"))
            continue
        qx = (xh - ref_x) / (h * d)
        qy = (yh - ref_y) / (h * d)
        rx.append(StepRecord(h, qx, fx, *_errors(qx, fx, _scale(base))))
        ry.append(StepRecord(h, qy, fy, *_errors(qy, fy, _scale(base))))
    dropped.sort(key=lambda p: -p[0])
    return _result("x", base, rx, dropped), _result("ystar", base, ry, dropped)


def fd_verify_lambda(F, cfg=None):
    """Sweep ``(lambda(tau0 + h d) - lambda0) / (h d)`` against ``y0* A' x0``."""
    return _lambda_sweep(_base(F, cfg or SweepConfig()))


def fd_verify_projector(F, cfg=None):
    """Sweep ``(Pi(tau0 + h d) - Pi0) / (h d)`` against ``-Pi0 A' S - S A' Pi0``
    (Frobenius norm errors)."""
    return _projector_sweep(_base(F, cfg or SweepConfig()))


def fd_verify_eigenvectors(F, cfg=None, scheme=None, vector_hook: Optional[Callable] = None):
    """Sweep normalized computed eigenvectors against the transported
    derivatives. Returns ``(x_result, ystar_result)``.

    `vector_hook(i, x, y) -> (x, y)` may alter the computed pair at step ``i``
    before normalization (used to inject solver sign/phase changes).
    """
    scheme = scheme or NormalizationScheme("n0")
    _reject_unverifiable(scheme)
    return _eigenvector_sweeps(_base(F, cfg or SweepConfig()), scheme, vector_hook)


# -- contour-integral oracle -------------------------------------------------


@dataclass(frozen=True)
class ContourSpec:
    center: complex
    radius: float
    nodes: int = 64

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise InputError("contour radius must be positive")
        if int(self.nodes) != self.nodes or self.nodes < 8:
            raise InputError("contour needs at least 8 nodes")


def contour_for(t: EigenTriple, radius=None, nodes=64):
    """Circle centred at ``lambda0`` (default radius ``gap / 2``)."""
    r = t.gap / 2 if radius is None else float(radius)
    if not r < t.gap:
        raise InputError(f"radius {r} must be smaller than the gap {t.gap}")
    return ContourSpec(t.lambda0, r, nodes)


def _resolvent_nodes(A, spec):
    A = as_matrix(A)
    n = A.shape[0]
    w = eig_dense(A).eigenvalues
    clearance = np.abs(np.abs(w - spec.center) - spec.radius)
    if np.any(clearance < 1e-3 * spec.radius):
        raise ResolventBreakdown(
            f"an eigenvalue lies within {1e-3 * spec.radius:.3e} of the contour"
        )
    theta = 2 * np.pi * np.arange(spec.nodes) / spec.nodes
    I = np.eye(n)
    for th in theta:
        e = np.exp(1j * th)
        zeta = spec.center + spec.radius * e
        try:
            R = solve_dense(A - zeta * I, I)
        except SingularToTolerance as exc:
            raise ResolventBreakdown(f"resolvent singular at zeta={zeta}") from exc
        # d zeta = i r e^{i th} d th, weight 2 pi / N
        yield zeta, R, spec.radius * e / spec.nodes


def projector_via_contour(A, spec: ContourSpec):
    """``-(1/2 pi i) \\oint (A - zeta I)^{-1} d zeta`` by the trapezoidal rule."""
    P = None
    for _, R, wgt in _resolvent_nodes(A, spec):
        P = -wgt * R if P is None else P - wgt * R
    return P


def _trace_moment(A, spec, power):
    total = 0j
    for zeta, R, wgt in _resolvent_nodes(A, spec):
        total -= wgt * zeta ** power * np.trace(R)
    return total


def count_eigs_in_disk(A, spec: ContourSpec):
    """Number of eigenvalues inside the circle via ``-(1/2 pi i) \\oint tr R``."""
    val = _trace_moment(A, spec, 0)
    k = int(round(val.real))
    if abs(val - k) > 0.1:
        raise NonIntegerResult(f"winding integral {val} is not close to an integer")
    return k


def eigenvalue_via_contour(A, spec: ContourSpec):
    """Sum of the eigenvalues inside the circle, ``-(1/2 pi i) \\oint zeta tr R``."""
    return complex(_trace_moment(A, spec, 1))


def contour_oracle(A, t: EigenTriple, nodes=64, radius=None):
    """Residuals of the contour route against the triple: projector error at
    `nodes` and at ``nodes // 2`` nodes, eigenvalue count and eigenvalue error."""
    spec = contour_for(t, radius, nodes)
    half = ContourSpec(spec.center, spec.radius, max(8, nodes // 2))
    Pi0 = np.outer(t.x0, t.y0.conj())
    err = norm2(projector_via_contour(A, spec) - Pi0)
    err_half = norm2(projector_via_contour(A, half) - Pi0)
    return {
        "radius": spec.radius,
        "nodes": spec.nodes,
        "projector_error": err,
        "projector_error_half_nodes": err_half,
        "count": count_eigs_in_disk(A, spec),
        "eigenvalue_error": abs(eigenvalue_via_contour(A, spec) - t.lambda0),
    }


# -- full verification -------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    triple: EigenTriple
    sensitivity: object
    sweeps: dict
    contour: Optional[dict]
    verdicts: dict
    warnings: List[str]


def verify_family(F, cfg=None, scheme=None, nodes=64):
    cfg = cfg or SweepConfig()
    scheme = scheme or NormalizationScheme("n0")
    _reject_unverifiable(scheme)
    base = _base(F, cfg)
    sweeps = {"lambda": _lambda_sweep(base), "projector": _projector_sweep(base)}
    sweeps["x"], sweeps["ystar"] = _eigenvector_sweeps(base, scheme)
    warnings = []
    t = base.ss.triple
    if t.chi > CHI_WARNING:
        warnings.append(f"condition number {t.chi:.3e} exceeds {CHI_WARNING:g}; FD results unreliable")
    try:
        contour = contour_oracle(base.A0, t, nodes)
    except NumericalError as exc:
        contour = None
        warnings.append(f"contour oracle failed: {type(exc).__name__}: {exc}")
    verdicts = {q: bool(s.best_error <= THRESHOLDS[q]) for q, s in sweeps.items()}
    if contour is not None:
        verdicts["contour"] = bool(contour["projector_error"] <= 1e-9 and contour["count"] == 1)
    return VerificationReport(t, base.sens, sweeps, contour, verdicts, warnings)


# -- multiple-eigenvalue examples --------------------------------------------


@dataclass(frozen=True)
class ExponentFit:
    quantity: str
    fitted_exponent: float
    fit_residual: float
    tau_grid: tuple
    expected_exponent: float


@dataclass(frozen=True)
class DefectiveDemo:
    example_id: int
    fits: tuple
    tau0_error: Optional[str]


DEFAULT_DEMO_GRID = tuple(np.logspace(-1, -5, 9))
_EXPECTED = {1: (0.5, -0.5), 2: (1.5, -0.5)}


def _check_grid(tau_grid):
    g = np.asarray(tau_grid, dtype=float)
    if g.ndim != 1 or g.size < 5:
        raise InputError("tau grid needs at least 5 points")
    if np.any(g <= 0) or np.any(g > 0.1):
        raise InputError("tau grid must lie in (0, 0.1]")
    ratios = np.diff(np.log(g))
    if np.any(ratios == 0) or not np.allclose(ratios, ratios[0], rtol=1e-6, atol=0):
        raise InputError("tau grid must be log-spaced")
    return g


def _fit(quantity, tau, values, expected):
    lx = np.log(tau)
    ly = np.log(values)
    coef = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((np.polyval(coef, lx) - ly) ** 2)))
    return ExponentFit(quantity, float(coef[0]), resid, tuple(float(v) for v in tau), expected)


def defective_demo(example_id, tau_grid=DEFAULT_DEMO_GRID):
    """Fit ``|lambda(tau)| ~ tau^p`` and ``chi(tau) ~ tau^q`` for the 2x2
    examples and record how extraction fails at ``tau = 0``."""
    if example_id not in _EXPECTED:
        raise InputError(f"unknown example id {example_id!r}; expected 1 or 2")
    g = _check_grid(tau_grid)
    F = fam.example_family(example_id)
    sel = EigenSelector.largest_real()
    mods, chis = [], []
    for tau in g:
        t = extract_triple(F(tau), sel)
        mods.append(abs(t.lambda0))
        chis.append(t.chi)
    try:
        extract_triple(F(0.0), sel)
        tau0_error = None
    except EigPertError as exc:
        tau0_error = type(exc).__name__
    p, q = _EXPECTED[example_id]
    fits = (_fit("eigenvalue", g, mods, p), _fit("chi", g, chis, q))
    return DefectiveDemo(example_id, fits, tau0_error)
