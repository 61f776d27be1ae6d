import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bpedelay.kernels import KernelSpec, cross, evaluate, gram

SE1 = KernelSpec("se", 1.0, input_dim=1)


def test_se_diagonal_is_output_scale():
    assert evaluate(SE1, 0.3, 0.3) == 1.0
    k = KernelSpec("se", 0.7, output_scale=2.5, input_dim=3)
    x = np.array([0.1, -2.0, 4.0])
    assert evaluate(k, x, x) == 2.5


def test_se_unit_distance():
    # exp(-1/2), from a 40-digit evaluation
    assert evaluate(SE1, 0.0, 1.0) == pytest.approx(0.6065306597126334, rel=1e-15)


def test_linear_inner_product():
    k = KernelSpec("linear", input_dim=2)
    assert evaluate(k, [1, 2], [3, 4]) == 11.0


def test_dimension_mismatch():
    k = KernelSpec("se", 1.0, input_dim=2)
    with pytest.raises(ValueError):
        evaluate(k, [1.0, 2.0, 3.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        cross(k, np.zeros((3, 2)), [1.0, 2.0, 3.0])


@pytest.mark.parametrize(
    "kw",
    [dict(family="se", lengthscale=0.0), dict(family="se", output_scale=-1.0), dict(family="matern", nu=3.5), dict(family="poly")],
)
def test_invalid_specs(kw):
    with pytest.raises(ValueError):
        KernelSpec(**kw)


def test_gram_small_cases():
    assert gram(SE1, np.zeros((0, 1))).shape == (0, 0)
    assert np.array_equal(gram(SE1, [[0.4]]), [[1.0]])
    K = gram(SE1, [[0.4], [0.4]])
    assert np.array_equal(K, np.ones((2, 2)))
    assert np.linalg.eigvalsh(K).min() == pytest.approx(0.0, abs=1e-15)


def test_gram_random_psd():
    rng = np.random.default_rng(3)
    pts = rng.uniform(-1, 1, size=(10, 2))
    K = gram(KernelSpec("se", 0.8, input_dim=2), pts)
    assert np.linalg.eigvalsh(K).min() >= -1e-10


def test_cross_matches_elementwise():
    k = KernelSpec("se", 1.0, input_dim=2)
    pts = np.array([[0.0, 0.0], [0.5, 0.0], [1.0, 1.0]])
    x = np.array([0.25, 0.75])
    expected = [math.exp(-0.5 * float(np.sum((p - x) ** 2))) for p in pts]
    np.testing.assert_allclose(cross(k, pts, x), expected, rtol=1e-15)
    assert cross(k, pts[:1], pts[0])[0] == 1.0
    assert cross(k, np.zeros((0, 2)), x).shape == (0,)


def _matern_textbook(nu, r, ell):
    # independent closed forms written from the half-integer Bessel expansions
    if nu == 0.5:
        return math.exp(-r / ell)
    if nu == 1.5:
        a = math.sqrt(3) * r / ell
        return (1 + a) * math.exp(-a)
    a = math.sqrt(5) * r / ell
    return (1 + a + 5 * r * r / (3 * ell * ell)) * math.exp(-a)


@pytest.mark.parametrize("nu", [0.5, 1.5, 2.5])
def test_matern_closed_forms(nu):
    k = KernelSpec("matern", 0.6, nu=nu, input_dim=2)
    rng = np.random.default_rng(int(nu * 10))
    for _ in range(50):
        x, y = rng.uniform(-2, 2, size=(2, 2))
        r = math.dist(x, y)
        assert evaluate(k, x, y) == pytest.approx(_matern_textbook(nu, r, 0.6), rel=1e-12)


def test_matern_half_is_scipy_bessel_form():
    # cross-check nu=1.5 against the general Bessel-K expression
    from scipy.special import gamma, kv

    nu, ell = 1.5, 0.9
    k = KernelSpec("matern", ell, nu=nu, input_dim=1)
    for r in (0.05, 0.3, 1.0, 2.7):
        z = math.sqrt(2 * nu) * r / ell
        ref = 2 ** (1 - nu) / gamma(nu) * z**nu * kv(nu, z)
        assert evaluate(k, 0.0, r) == pytest.approx(ref, rel=1e-12)


KERNELS = st.sampled_from(
    [
        KernelSpec("se", 0.5, input_dim=2),
        KernelSpec("matern", 0.7, nu=0.5, input_dim=2),
        KernelSpec("matern", 0.7, nu=1.5, input_dim=2),
        KernelSpec("matern", 1.2, nu=2.5, input_dim=2),
        KernelSpec("linear", input_dim=2),
    ]
)
POINTS = st.integers(1, 50).flatmap(
    lambda n: arrays(np.float64, (n, 2), elements=st.floats(-3, 3, allow_nan=False, width=64))
)


@settings(max_examples=60, deadline=None)
@given(KERNELS, POINTS)
def test_symmetry_and_psd(kernel, pts):
    K = gram(kernel, pts)
    assert np.array_equal(K, K.T)
    k_max = kernel.k_max(pts)
    assert np.linalg.eigvalsh(K).min() >= -1e-8 * max(k_max, 1.0)


@settings(max_examples=40, deadline=None)
@given(KERNELS, POINTS)
def test_stationary_diagonal(kernel, pts):
    if kernel.stationary:
        assert np.all(np.diag(gram(kernel, pts)) == kernel.output_scale)
