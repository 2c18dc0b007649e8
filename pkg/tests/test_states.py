import cmath
import math

import numpy as np
import pytest
import ujson
from hypothesis import given, settings
from hypothesis import strategies as st

from lgradial import (
    DomainError,
    IrrepLabel,
    IrrepMismatchError,
    RadialState,
    Truncation,
    TruncationError,
    barut_girardello,
    bg_prefactor,
    build_operator,
    dumps,
    expectation,
    fock_state,
    intelligent_eigenvalue,
    intelligent_residual,
    intelligent_seed,
    intelligent_state,
    mean_rings,
    perelomov,
    state_from_dict,
    state_to_dict,
    uncertainty_report,
    wp_distribution,
)
from lgradial.states import overlap


def test_radial_state_validation():
    state = RadialState(IrrepLabel(0), [0.6, 0.8j])
    assert state.p_max == 1
    assert state.norm2() == pytest.approx(1.0)
    assert np.allclose(state.padded(3), [0.6, 0.8j, 0, 0])

    with pytest.raises(DomainError):
        state.padded(0)
    with pytest.raises(DomainError):
        RadialState(IrrepLabel(0), [1.0, 1.0])
    with pytest.raises(DomainError):
        RadialState(IrrepLabel(0), [])
    # a declared tail allows a short vector
    RadialState(IrrepLabel(0), [math.sqrt(0.99)], tail_mass=0.01)


def test_fock_state():
    state = fock_state(IrrepLabel(2), 3, 10)
    assert state.probabilities[3] == 1.0
    kz = build_operator(IrrepLabel(2), "kz", Truncation(10, 2))
    assert expectation(state, kz) == pytest.approx(1.5 + 3)
    with pytest.raises(DomainError):
        fock_state(IrrepLabel(2), 11, 10)


@pytest.mark.parametrize("ell,zeta", [(0, 0.7071), (1, 0.5 * cmath.exp(1j * math.pi / 6)), (3, 0.8)])
def test_perelomov(ell: int, zeta: complex):
    irrep = IrrepLabel(ell)
    state = perelomov(irrep, zeta, tail_tol=1e-14)
    assert state.norm2() == pytest.approx(1.0, abs=1e-12)
    assert state.tail_mass <= 1e-14

    r2 = abs(zeta) ** 2
    c = state.coeffs
    assert c[0] == pytest.approx((1 - r2) ** irrep.k, rel=1e-13)
    assert c[1] == pytest.approx(c[0] * math.sqrt(irrep.two_k) * zeta, rel=1e-13)
    assert c[2] == pytest.approx(c[0] * math.sqrt(irrep.two_k * (irrep.two_k + 1) / 2) * zeta**2, rel=1e-13)

    w = wp_distribution(irrep, zeta, state.p_max, tail_tol=1e-14)[: state.p_max + 1]
    assert np.allclose(w, state.probabilities, atol=1e-12)
    assert np.sum(np.arange(w.shape[0]) * w) == pytest.approx(mean_rings(irrep, zeta), abs=1e-10)


def test_perelomov_grows_basis():
    state = perelomov(IrrepLabel(0), 0.95)
    assert state.p_max > 64
    assert state.tail_mass <= 1e-10
    assert state.norm2() == pytest.approx(1.0, abs=1e-9)


def test_perelomov_vacuum_and_errors():
    vacuum = perelomov(IrrepLabel(4), 0.0)
    assert vacuum.coeffs[0] == 1.0
    assert vacuum.norm2() == 1.0

    with pytest.raises(DomainError):
        perelomov(IrrepLabel(0), 1.0)
    with pytest.raises(DomainError):
        mean_rings(IrrepLabel(0), 1.2j)
    with pytest.raises(TruncationError):
        perelomov(IrrepLabel(0), 0.999, p_cap=128)


def test_mean_rings():
    assert mean_rings(IrrepLabel(0), 0.0) == 0.0
    # pbar = (|l|+1) |zeta|^2 / (1 - |zeta|^2)
    assert mean_rings(IrrepLabel(1), math.sqrt(0.5)) == pytest.approx(2.0)
    assert mean_rings(IrrepLabel(-3), 0.5j) == pytest.approx(4 / 3)


def test_wp_distribution_vacuum():
    w = wp_distribution(IrrepLabel(1), 0.0)
    assert w[0] == 1.0
    assert np.sum(w) == 1.0


@pytest.mark.parametrize("ell,zeta", [(0, 0.5), (1, 1.0), (2, 1.5 - 0.5j), (4, 6.0)])
def test_barut_girardello_is_kminus_eigenstate(ell: int, zeta: complex):
    irrep = IrrepLabel(ell)
    state = barut_girardello(irrep, zeta)
    kminus = build_operator(irrep, "kminus", Truncation(state.p_max, 0))
    assert np.linalg.norm(kminus.apply(state.coeffs) - zeta * state.coeffs) < 1e-10
    assert state.norm2() == pytest.approx(1.0, abs=1e-12)


def test_barut_girardello_closed_form():
    irrep = IrrepLabel(2)
    zeta = 1.3 * cmath.exp(0.4j)
    state = barut_girardello(irrep, zeta)
    prefactor = bg_prefactor(irrep, zeta)
    for p in range(10):
        expected = prefactor * zeta**p / math.sqrt(math.factorial(p) * math.factorial(p + 2))
        assert state.coeffs[p] == pytest.approx(expected, rel=1e-10)


def test_barut_girardello_vacuum_and_errors():
    state = barut_girardello(IrrepLabel(3), 0.0)
    assert state.coeffs[0] == 1.0
    assert bg_prefactor(IrrepLabel(3), 0.0) == pytest.approx(math.sqrt(6))

    with pytest.raises(DomainError):
        barut_girardello(IrrepLabel(0), complex(math.inf, 0))


def test_intelligent_seed():
    irrep = IrrepLabel(1)
    seed = intelligent_seed(irrep, 0, 0.9)
    assert seed.p_max == 0
    assert seed.coeffs[0] == 1.0

    seed = intelligent_seed(irrep, 3, 0.9)
    assert seed.p_max == 3
    assert seed.norm2() == pytest.approx(1.0)
    t = math.tanh(0.9)
    # c_1 / c_0 = M tanh(tau) / sqrt(2k)
    assert seed.coeffs[1] / seed.coeffs[0] == pytest.approx(3 * t / math.sqrt(2))

    with pytest.raises(DomainError):
        intelligent_seed(irrep, -1, 0.9)
    with pytest.raises(DomainError):
        intelligent_seed(irrep, 1.5, 0.9)  # type: ignore[arg-type]


def test_intelligent_eigenvalue():
    assert intelligent_eigenvalue(IrrepLabel(3), 2, 1.0) == pytest.approx(4 * math.sinh(1.0))
    assert intelligent_eigenvalue(IrrepLabel(3), 2, -1.0) == pytest.approx(-4 * math.sinh(1.0))


@pytest.mark.parametrize("ell", [0, 1, 3, 5])
@pytest.mark.parametrize("m", [0, 2, 5])
@pytest.mark.parametrize("tau", [0.5, 1.5])
def test_intelligent_state(ell: int, m: int, tau: float):
    irrep = IrrepLabel(ell)
    state = intelligent_state(irrep, m, tau, tail_tol=1e-24)
    assert state.norm2() == pytest.approx(1.0, abs=1e-12)
    assert intelligent_residual(state, tau, intelligent_eigenvalue(irrep, m, tau)) < 1e-9

    report = uncertainty_report(state)
    assert report.intelligent
    assert report.product == pytest.approx(report.bound, abs=1e-8)
    assert report.squeezed_y
    assert not report.squeezed_x


def test_intelligent_state_negative_tau():
    irrep = IrrepLabel(1)
    state = intelligent_state(irrep, 2, -1.0, tail_tol=1e-24)
    assert intelligent_residual(state, 1.0, -intelligent_eigenvalue(irrep, 2, 1.0)) < 1e-9


def test_intelligent_ground_state_is_perelomov():
    irrep = IrrepLabel(1)
    tau = 0.8
    fidelity = abs(overlap(intelligent_state(irrep, 0, tau), perelomov(irrep, math.tanh(tau / 2))))
    assert fidelity == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("ell,m,tau", [(1, 2, 0.7), (0, 4, 1.2)])
def test_intelligent_dense_matches_action(ell: int, m: int, tau: float):
    irrep = IrrepLabel(ell)
    action = intelligent_state(irrep, m, tau)
    dense = intelligent_state(irrep, m, tau, method="dense")
    p_max = max(action.p_max, dense.p_max)
    assert np.allclose(action.padded(p_max), dense.padded(p_max), atol=1e-10)


def test_intelligent_state_errors():
    with pytest.raises(DomainError):
        intelligent_state(IrrepLabel(0), 60, 0.5, Truncation(64, 8))
    with pytest.raises(DomainError):
        intelligent_state(IrrepLabel(0), 1, 9.0)


def test_uncertainty_of_known_states():
    irrep = IrrepLabel(1)

    bg = uncertainty_report(barut_girardello(irrep, 0.9))
    assert bg.intelligent
    assert not bg.squeezed

    coherent = uncertainty_report(perelomov(irrep, 0.5))
    assert coherent.intelligent
    assert coherent.squeezed_y

    vacuum = uncertainty_report(perelomov(IrrepLabel(0), 0.0))
    assert vacuum.var_kx == pytest.approx(0.25)
    assert vacuum.var_ky == pytest.approx(0.25)
    assert vacuum.bound == pytest.approx(0.25)
    assert not vacuum.squeezed


@given(
    ell=st.integers(min_value=-6, max_value=6),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    size=st.integers(min_value=1, max_value=12),
)
@settings(deadline=None, max_examples=100)
def test_robertson_bound_holds(ell: int, seed: int, size: int):
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    state = RadialState(IrrepLabel(ell), coeffs / np.linalg.norm(coeffs))
    report = uncertainty_report(state)
    assert report.product >= report.bound - 1e-10


def test_overlap_and_expectation_mismatch():
    a = perelomov(IrrepLabel(1), 0.3)
    b = perelomov(IrrepLabel(2), 0.3)
    with pytest.raises(IrrepMismatchError):
        overlap(a, b)
    with pytest.raises(IrrepMismatchError):
        a.combine(1, b, 1)
    with pytest.raises(IrrepMismatchError):
        expectation(a, build_operator(IrrepLabel(1), "kz", Truncation(10, 2)))
    with pytest.raises(IrrepMismatchError):
        expectation(a, build_operator(IrrepLabel(2), "kz", Truncation(a.p_max, 2)))


def test_state_json():
    state = perelomov(IrrepLabel(-2), 0.4 * cmath.exp(1j))
    data = ujson.loads(dumps(state))
    assert data["irrep"] == {"ell": -2, "k": 1.5}
    assert len(data["coeffs"]) == len(state_to_dict(state)["coeffs"]) == state.p_max + 1

    restored = state_from_dict(data)
    assert restored.irrep == state.irrep
    assert np.allclose(restored.coeffs, state.coeffs, rtol=1e-13, atol=1e-300)


def test_report_json():
    report = uncertainty_report(perelomov(IrrepLabel(1), 0.5))
    data = ujson.loads(dumps(report))
    assert data["intelligent"] is True
    assert data["squeezed_y"] is True
    assert data["bound"] == pytest.approx(report.bound)
