import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigpert.eigentriple import (
    EigenSelector,
    canonicalize_pair,
    condition_number,
    extract_triple,
)
from eigpert.errors import InputError, NearOrthogonalPair, NotSimple
from eigpert.family import example_family

from conftest import random_complex


def test_selectors():
    w = np.array([1 + 5j, 3 - 1j, -4 + 0j, 2 + 2j])
    assert EigenSelector.largest_real().pick(w) == 1
    assert EigenSelector.largest_modulus().pick(w) == 0  # |1+5i| = 5.10
    assert EigenSelector.closest_to(2 + 1.8j).pick(w) == 3
    assert EigenSelector.index(2).pick(w) == 2
    with pytest.raises(InputError):
        EigenSelector.index(4).pick(w)
    with pytest.raises(InputError):
        EigenSelector.index(-1)


def test_upper_triangular_pair():
    # A = [[1, 1], [0, 2]]: x0 = e1, y0 = (1, -1), chi = sqrt(2)
    t = extract_triple([[1, 1], [0, 2]], EigenSelector.closest_to(1))
    assert t.lambda0 == pytest.approx(1)
    np.testing.assert_allclose(t.x0, [1, 0], atol=1e-15)
    np.testing.assert_allclose(t.y0, [1, -1], atol=1e-15)
    assert t.chi == pytest.approx(np.sqrt(2), rel=1e-14)
    assert condition_number(t) == pytest.approx(np.sqrt(2), rel=1e-14)
    assert t.gap == pytest.approx(1.0)


def test_triple_contract(rng):
    A = random_complex(rng, (10, 10))
    t = extract_triple(A)
    assert abs(np.vdot(t.y0, t.x0) - 1) < 1e-13
    assert np.linalg.norm(t.x0) == pytest.approx(1.0, rel=1e-14)
    j = np.argmax(np.abs(t.x0))
    assert t.x0[j].imag == 0 and t.x0[j].real > 0
    nA = np.linalg.norm(A, 2)
    assert np.linalg.norm(A @ t.x0 - t.lambda0 * t.x0) <= 1e-12 * nA
    assert np.linalg.norm(t.y0.conj() @ A - t.lambda0 * t.y0.conj()) <= 1e-12 * nA * t.chi
    assert max(t.residuals) <= 1e-12 * nA * t.chi
    assert t.lambda0.real == pytest.approx(max(np.linalg.eigvals(A).real))


def test_one_by_one():
    t = extract_triple([[3 - 2j]])
    assert t.lambda0 == 3 - 2j
    assert t.gap == np.inf
    assert t.chi == pytest.approx(1.0)


def test_multiple_eigenvalue_is_not_simple():
    with pytest.raises(NotSimple):
        extract_triple(np.eye(3))
    with pytest.raises(NotSimple):
        extract_triple(example_family(1)(0.0))
    with pytest.raises(NotSimple):
        extract_triple(example_family(2)(0.0))


def test_simplicity_tol_is_respected():
    A = np.diag([1.0, 1.0 + 1e-6])
    extract_triple(A, EigenSelector.closest_to(1))
    with pytest.raises(NotSimple):
        extract_triple(A, EigenSelector.closest_to(1), simplicity_tol=1e-5)
    with pytest.raises(InputError):
        extract_triple(A, simplicity_tol=0.0)


def test_near_orthogonal_pair():
    with pytest.raises(NearOrthogonalPair):
        canonicalize_pair([1, 0], [0, 1])


@pytest.mark.parametrize("tau", [1e-1, 1e-2, 1e-3, 1e-4])
def test_jordan_perturbation_condition_number(tau):
    # [[0, 1], [tau, 0]]: x ~ (1, sqrt(tau)), y* ~ (sqrt(tau), 1),
    # so chi = (1 + tau) / (2 sqrt(tau))
    t = extract_triple(example_family(1)(tau))
    assert t.lambda0 == pytest.approx(np.sqrt(tau), rel=1e-12)
    assert t.chi == pytest.approx((1 + tau) / (2 * np.sqrt(tau)), rel=1e-10)


def test_hermitian_pair_coincides(rng):
    H = random_complex(rng, (8, 8))
    H = H + H.conj().T
    t = extract_triple(H)
    assert t.chi == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(t.x0, t.y0, atol=1e-12)


phases = st.floats(0, 2 * np.pi, allow_nan=False)
mags = st.floats(1e-3, 1e3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(a=phases, b=phases, r=mags, s=mags, seed=st.integers(0, 2 ** 16))
def test_canonicalization_ignores_input_scaling(a, b, r, s, seed):
    rng = np.random.default_rng(seed)
    x = random_complex(rng, 5)
    y = random_complex(rng, 5)
    x1, y1 = canonicalize_pair(x, y)
    x2, y2 = canonicalize_pair(r * np.exp(1j * a) * x, s * np.exp(1j * b) * y)
    np.testing.assert_allclose(x2, x1, atol=1e-12)
    np.testing.assert_allclose(y2, y1, atol=1e-12 * np.linalg.norm(y1))
