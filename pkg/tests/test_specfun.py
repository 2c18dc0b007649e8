import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from lgradial import (
    DomainError,
    bessel_i,
    bessel_j,
    binomial,
    hermite,
    laguerre,
    laguerre_function,
    laguerre_genfun_residual,
    laguerre_positive_zeros,
    ln_factorial,
)


def test_laguerre_known_values():
    assert laguerre(0, 3, 7.2) == 1.0
    assert laguerre(1, 1, 0.5) == pytest.approx(1.5)
    assert laguerre(2, 1, 0.0) == pytest.approx(3.0)
    assert laguerre(1, 0, 2.0) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("p", [0, 4, 17, 30])
@pytest.mark.parametrize("a", [0, 3, 30])
def test_laguerre_at_origin(p: int, a: int):
    assert laguerre(p, a, 0.0) == pytest.approx(math.comb(p + a, p), rel=1e-12)


@given(
    p=st.integers(min_value=0, max_value=20),
    a=st.integers(min_value=0, max_value=10),
    x=st.floats(min_value=0.1, max_value=25.0),
)
@settings(deadline=None, max_examples=200)
def test_laguerre_matches_scipy(p: int, a: int, x: float):
    oracle = special.eval_genlaguerre(p, a, x)
    # L(-x) bounds every partial sum, so it is the rounding scale near roots
    envelope = max(1.0, special.eval_genlaguerre(p, a, -x))
    assert abs(laguerre(p, a, x) - oracle) <= 1e-10 * envelope


def test_laguerre_vectorized():
    x = np.linspace(0, 20, 41)
    ours = laguerre(6, 1, x)
    oracle = special.eval_genlaguerre(6, 1, x)
    assert ours.shape == x.shape
    assert np.max(np.abs(ours - oracle)) <= 1e-12 * np.max(np.abs(oracle))


def test_laguerre_rejects_negative_order():
    with pytest.raises(DomainError):
        laguerre(-1, 0, 1.0)
    with pytest.raises(DomainError):
        laguerre(2, -3, 1.0)


def test_laguerre_function_matches_closed_form():
    x = np.linspace(0.05, 25, 200)
    table = laguerre_function(12, 2, x)
    assert table.shape == (13, 200)
    for p in (0, 5, 12):
        expected = (
            np.exp(0.5 * (special.gammaln(p + 1) - special.gammaln(p + 3)))
            * np.exp(-x / 2)
            * x
            * special.eval_genlaguerre(p, 2, x)
        )
        assert np.allclose(table[p], expected, rtol=1e-9, atol=1e-12)


def test_laguerre_function_orthonormal():
    # Gauss-Laguerre nodes integrate x * polynomial against e^{-x} exactly
    nodes, weights = special.roots_laguerre(80)
    table = laguerre_function(10, 1, nodes) * np.exp(nodes / 2)
    gram = (table * weights) @ table.T
    assert np.allclose(gram, np.eye(11), atol=1e-10)


def test_laguerre_function_survives_large_arguments():
    table = laguerre_function(400, 3, np.array([0.0, 1e-3, 50.0, 1600.0, 3000.0]))
    assert np.all(np.isfinite(table))
    assert np.all(table[:, 0] == 0.0)
    assert np.max(np.abs(table[:, 2])) < 10.0


def test_laguerre_function_rejects_negative_x():
    with pytest.raises(DomainError):
        laguerre_function(3, 0, np.array([1.0, -0.5]))


def test_positive_zeros():
    assert laguerre_positive_zeros(0, 2) == []
    assert laguerre_positive_zeros(1, 1) == pytest.approx([2.0], abs=1e-11)
    assert laguerre_positive_zeros(2, 0) == pytest.approx(
        [2 - math.sqrt(2), 2 + math.sqrt(2)], abs=1e-11
    )

    zeros = laguerre_positive_zeros(3, 2)
    assert len(zeros) == 3
    assert zeros == sorted(zeros)
    for z in zeros:
        assert abs(laguerre(3, 2, z)) < 1e-9

    nodes, _ = special.roots_genlaguerre(7, 1)
    assert np.allclose(laguerre_positive_zeros(7, 1), nodes, atol=1e-10)


def test_hermite():
    assert hermite(0, 3.1) == 1.0
    assert hermite(1, 0.25) == pytest.approx(0.5)
    assert hermite(2, 1.0) == pytest.approx(2.0)
    assert hermite(3, 0.5) == pytest.approx(-5.0)

    x = np.linspace(-4, 4, 33)
    for n in range(12):
        oracle = special.eval_hermite(n, x)
        assert np.max(np.abs(hermite(n, x) - oracle)) <= 1e-12 * max(1.0, np.max(np.abs(oracle)))

    with pytest.raises(DomainError):
        hermite(-1, 0.0)


@given(
    nu=st.integers(min_value=0, max_value=10),
    x=st.floats(min_value=0.0, max_value=30.0),
)
@settings(deadline=None, max_examples=200)
def test_bessel_i_matches_scipy(nu: int, x: float):
    assert bessel_i(nu, x) == pytest.approx(special.iv(nu, x), rel=1e-12, abs=1e-300)


@given(
    nu=st.integers(min_value=0, max_value=10),
    x=st.floats(min_value=0.0, max_value=50.0),
)
@settings(deadline=None, max_examples=200)
def test_bessel_j_matches_scipy(nu: int, x: float):
    assert bessel_j(nu, x) == pytest.approx(special.jv(nu, x), abs=1e-12)


@pytest.mark.parametrize("x", [10.5, 20.0, 30.0, 50.0, -30.0])
@pytest.mark.parametrize("nu", [0, 1, 4, 25, 60])
def test_bessel_j_large_argument(nu: int, x: float):
    assert bessel_j(nu, x) == pytest.approx(special.jv(nu, x), abs=1e-12)


def test_bessel_j_continuous_at_series_switch():
    below = bessel_j(3, 10.0)
    above = bessel_j(3, 10.0 + 1e-9)
    assert above == pytest.approx(below, abs=1e-8)


def test_bessel_edges():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(2, 0.0) == 0.0
    assert bessel_j(1, 0.0) == 0.0
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(2, -1.0) == pytest.approx(special.jv(2, -1.0))
    with pytest.raises(DomainError):
        bessel_i(1, -1.0)


def test_ln_factorial_and_binomial():
    assert ln_factorial(0) == 0.0
    assert ln_factorial(10) == pytest.approx(math.log(math.factorial(10)))
    assert np.allclose(ln_factorial(np.arange(5.0)), np.log([1, 1, 2, 6, 24]))
    with pytest.raises(DomainError):
        ln_factorial(-1)

    assert binomial(4, 2) == 6.0
    assert binomial(2.0, 1) == pytest.approx(2.0)
    assert binomial(2.5, 2) == pytest.approx(2.5 * 1.5 / 2)
    with pytest.raises(DomainError):
        binomial(3, 5)


def test_binomial_real_order_past_n():
    # n < r < n + 1 leaves a positive Gamma(n - r + 1)
    assert binomial(2.5, 3) == pytest.approx(2.5 * 1.5 * 0.5 / 6, rel=1e-13)
    with pytest.raises(DomainError):
        binomial(2.5, 4)


@pytest.mark.parametrize("n", [7, 33, 60])
def test_binomial_matches_product(n: int):
    for r in range(0, n + 1, 3):
        product = 1.0
        for i in range(r):
            product *= (n - i) / (i + 1)
        assert binomial(n, r) == pytest.approx(product, rel=1e-13)

        half = 1.0
        for i in range(r):
            half *= (n + 0.5 - i) / (i + 1)
        assert binomial(n + 0.5, r) == pytest.approx(half, rel=1e-11)


def test_generating_function():
    assert laguerre_genfun_residual(0.0, 5.0, 2, 1) == 0.0
    assert laguerre_genfun_residual(0.5, 1.0, 0, 200) < 1e-10
    assert laguerre_genfun_residual(0.8, 10.0, 3, 400) < 1e-10
    assert laguerre_genfun_residual(-0.5, 1.7, 2, 300) < 1e-12
    with pytest.raises(DomainError):
        laguerre_genfun_residual(1.0, 1.0, 0, 10)
