import numpy as np
import pytest

from eigpert.derivatives import eigenvector_derivatives
from eigpert.eigentriple import EigenSelector, extract_triple
from eigpert.errors import (
    AmbiguousSign,
    BranchCutViolation,
    InputError,
    IsotropicVector,
    PinnedEntryZero,
)
from eigpert.normalizations import (
    NormalizationScheme,
    apply_normalization,
    default_indices,
    normalize0_computed,
    normalize_computed,
    sign_consistency,
)
from eigpert.spectral import build_structure

from conftest import random_complex


def _setup(rng, n=6):
    A0 = random_complex(rng, (n, n))
    Ap = random_complex(rng, (n, n))
    ss = build_structure(A0, extract_triple(A0))
    return A0, Ap, ss


def _pair(scheme, ss, Ap):
    return apply_normalization(scheme, ss, *eigenvector_derivatives(ss, Ap))


def test_default_indices_lowest_on_ties():
    assert default_indices([1, -1, 1j], [0.5, 2, 2]) == (0, 1)


def test_scheme_validation():
    with pytest.raises(InputError):
        NormalizationScheme("n7")
    with pytest.raises(InputError):
        NormalizationScheme("n3", sign_choice=2)


def test_n0_is_identity_transport(rng):
    _, Ap, ss = _setup(rng)
    p = _pair(NormalizationScheme("n0"), ss, Ap)
    xp, yp = eigenvector_derivatives(ss, Ap)
    assert np.array_equal(p.x_hat_prime, xp) and np.array_equal(p.y_hat_star_prime, yp)
    assert p.unique and p.well_defined


@pytest.mark.parametrize("pins", [(None, None), (0, 3), (5, 2)])
def test_n1_postconditions(rng, pins):
    _, Ap, ss = _setup(rng)
    p = _pair(NormalizationScheme("n1", *pins), ss, Ap)
    j, k = p.j, p.k
    if pins[0] is not None:
        assert (j, k) == pins
    assert abs(p.x_hat[j] - 1) <= 1e-10 and abs(p.y_hat[k] - 1) <= 1e-10
    assert abs(p.x_hat_prime[j]) <= 1e-10 * np.linalg.norm(p.x_hat_prime)
    assert abs(p.y_hat_star_prime[k]) <= 1e-10 * np.linalg.norm(p.y_hat_star_prime)


def test_n2_postconditions(rng):
    _, Ap, ss = _setup(rng)
    p = _pair(NormalizationScheme("n2"), ss, Ap)
    j = p.j
    assert abs(p.x_hat[j] - 1) <= 1e-10
    assert abs(np.vdot(p.y_hat, p.x_hat) - 1) <= 1e-10
    assert abs(p.x_hat_prime[j]) <= 1e-10 * np.linalg.norm(p.x_hat_prime)
    d = p.y_hat_star_prime @ p.x_hat + p.y_hat.conj() @ p.x_hat_prime
    assert abs(d) <= 1e-10 * np.linalg.norm(p.y_hat_star_prime) * np.linalg.norm(p.x_hat)


@pytest.mark.parametrize("sign", [None, 1, -1])
def test_n3_postconditions(rng, sign):
    _, Ap, ss = _setup(rng)
    p = _pair(NormalizationScheme("n3", sign_choice=sign), ss, Ap)
    assert abs(p.x_hat @ p.x_hat - 1) <= 1e-10
    assert abs(np.vdot(p.y_hat, p.x_hat) - 1) <= 1e-10
    assert abs(p.x_hat @ p.x_hat_prime) <= 1e-10 * np.linalg.norm(p.x_hat_prime)
    if sign is None:
        assert p.x_hat[p.j].real > 0
    else:
        assert p.sign == sign


def test_n3_branches_differ_by_sign(rng):
    _, Ap, ss = _setup(rng)
    a = _pair(NormalizationScheme("n3", sign_choice=1), ss, Ap)
    b = _pair(NormalizationScheme("n3", sign_choice=-1), ss, Ap)
    np.testing.assert_allclose(a.x_hat, -b.x_hat, atol=1e-15)
    np.testing.assert_allclose(a.x_hat_prime, -b.x_hat_prime, atol=1e-14)


@pytest.mark.parametrize("kind", ["n0", "n1", "n2", "n3"])
def test_transport_against_central_difference(rng, kind):
    # oracle: renormalize the recomputed eigenvectors at tau0 +- h directly
    A0, Ap, ss = _setup(rng, 7)
    t0 = ss.triple
    p = _pair(NormalizationScheme(kind), ss, Ap)
    sel = EigenSelector.closest_to(t0.lambda0)

    def at(h):
        t = extract_triple(A0 + h * Ap, sel)
        return normalize_computed(p, kind, t.x0, t.y0, t0.x0, t0.y0)

    h = 1e-5
    (xp_, yp_), (xm_, ym_) = at(h), at(-h)
    x_fd = (xp_ - xm_) / (2 * h)
    y_fd = (yp_ - ym_) / (2 * h)
    assert np.linalg.norm(p.x_hat_prime - x_fd) <= 1e-6 * np.linalg.norm(x_fd)
    assert np.linalg.norm(p.y_hat_star_prime - y_fd) <= 1e-6 * np.linalg.norm(y_fd)


def test_n4_reports_no_derivative(rng):
    _, Ap, ss = _setup(rng)
    p = _pair(NormalizationScheme("n4"), ss, Ap)
    assert not p.unique
    assert p.x_hat_prime is None and p.y_hat_star_prime is None
    assert np.linalg.norm(p.x_hat) == pytest.approx(1.0)
    assert np.linalg.norm(p.y_hat) == pytest.approx(1.0)
    assert np.vdot(p.y_hat, p.x_hat).real > 0


def test_pinned_entry_zero():
    # x0 = e1 for [[1, 1], [0, 2]] at lambda = 1
    A = np.array([[1.0, 1.0], [0.0, 2.0]])
    ss = build_structure(A, extract_triple(A, EigenSelector.closest_to(1)))
    Ap = np.eye(2)
    for kind in ("n1", "n2"):
        with pytest.raises(PinnedEntryZero):
            _pair(NormalizationScheme(kind, index_j=1), ss, Ap)
    with pytest.raises(InputError):
        _pair(NormalizationScheme("n1", index_j=2), ss, Ap)


def test_isotropic_vector():
    # eigenvector (1, i) satisfies x^T x = 0
    V = np.array([[1, 1], [1j, 0]])
    A = V @ np.diag([1.0, 2.0]) @ np.linalg.inv(V)
    ss = build_structure(A, extract_triple(A, EigenSelector.closest_to(1)))
    with pytest.raises(IsotropicVector):
        _pair(NormalizationScheme("n3"), ss, np.eye(2))


def test_normalize0_computed_recovers_reference(rng):
    _, _, ss = _setup(rng)
    t = ss.triple
    c = 2.0 * np.exp(0.3j)
    p = normalize0_computed(c * t.x0, t.y0 / np.conj(c), t.x0, t.y0)
    np.testing.assert_allclose(p.x_hat, t.x0, atol=1e-14)
    np.testing.assert_allclose(p.y_hat, t.y0, atol=1e-14 * np.linalg.norm(t.y0))


def test_normalize0_computed_fixed_point_is_exact(rng):
    _, _, ss = _setup(rng)
    t = ss.triple
    p = normalize0_computed(t.x0, t.y0, t.x0, t.y0)
    assert np.array_equal(p.x_hat, t.x0) and np.array_equal(p.y_hat, t.y0)


@pytest.mark.parametrize("omega", [-1.0, 1j, -1j, 3 * np.exp(2.9j), 1e-3 * np.exp(-2j)])
def test_normalize0_computed_rescaling_invariant(rng, omega):
    A0, Ap, ss = _setup(rng)
    t0 = ss.triple
    t = extract_triple(A0 + 1e-3 * Ap, EigenSelector.closest_to(t0.lambda0))
    ref = normalize0_computed(t.x0, t.y0, t0.x0, t0.y0)
    p = normalize0_computed(omega * t.x0, t.y0 / np.conj(omega), t0.x0, t0.y0)
    np.testing.assert_allclose(p.x_hat, ref.x_hat, atol=1e-12)
    np.testing.assert_allclose(p.y_hat, ref.y_hat, atol=1e-12 * np.linalg.norm(ref.y_hat))
    assert abs(np.vdot(p.y_hat, p.x_hat) - 1) <= 1e-10


def test_normalize0_computed_symmetric_example():
    # diag(1, 2) + tau [[0, 1], [1, 0]]: the N0 eigenvector slope is (0, -1)
    tau = 1e-4
    A = np.diag([1.0, 2.0]) + tau * np.array([[0.0, 1.0], [1.0, 0.0]])
    sel = EigenSelector.closest_to(1)
    t0 = extract_triple(np.diag([1.0, 2.0]), sel)
    t = extract_triple(A, sel)
    p = normalize0_computed(-t.x0, -t.y0, t0.x0, t0.y0)
    np.testing.assert_allclose((p.x_hat - t0.x0) / tau, [0, -1], atol=1e-3)


def test_normalize0_computed_branch_guard():
    # y_t* x_t = 1 but y0* Pi(tau) x0 = -1: far from tau0
    x0 = y0 = np.array([1.0, 0.0])
    with pytest.raises(BranchCutViolation):
        normalize0_computed([1.0, 1.0], [-1.0, 2.0], x0, y0)


def test_sign_consistency():
    ref = np.array([0.5 + 0.1j, 1.0])
    assert sign_consistency(np.array([0.4, 0.0]), ref, 0) == 1
    assert sign_consistency(np.array([-0.4 + 2j, 0.0]), ref, 0) == -1
    # negligible real part: fall back to the imaginary part
    ref = np.array([1e-12 + 1j])
    assert sign_consistency(np.array([3 - 1j]), ref, 0) == -1
    assert sign_consistency(np.array([-3 + 1j]), ref, 0) == 1
    with pytest.raises(AmbiguousSign):
        sign_consistency(np.array([1.0]), np.array([0.0]), 0)
