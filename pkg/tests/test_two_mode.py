import math

import numpy as np
import pytest

from lgradial import (
    DomainError,
    TwoModeBasis,
    UnknownOperatorError,
    build_two_mode,
    canonical_residuals,
    degeneracy_spectrum,
    kplus_ladder_elements,
    ladder_vector,
    radial_link_check,
)


def test_basis_layout():
    basis = TwoModeBasis(3)
    assert basis.dim == 10
    assert len(basis.states) == 10
    assert basis.states[:3] == ((0, 0), (0, 1), (1, 0))
    assert basis.index[(2, 1)] == basis.states.index((2, 1))
    assert len(basis.interior()) == 3

    with pytest.raises(DomainError):
        TwoModeBasis(1)


def test_operator_shapes_and_symmetry():
    basis = TwoModeBasis(6)
    for tag in ("ax", "ay", "aplus", "aminus", "n", "ell"):
        assert build_two_mode(tag, basis).shape == (basis.dim, basis.dim)

    ell = build_two_mode("ell", basis)
    number = build_two_mode("n", basis)
    assert np.allclose(ell, ell.conj().T)
    assert np.allclose(number, np.diag([nx + ny for nx, ny in basis.states]))

    with pytest.raises(UnknownOperatorError):
        build_two_mode("az", basis)  # type: ignore[arg-type]


@pytest.mark.parametrize("n_max", [4, 12, 24])
def test_canonical_identities(n_max: int):
    residuals = canonical_residuals(TwoModeBasis(n_max))
    assert len(residuals) == 11
    for name, residual in residuals.items():
        assert residual < 1e-12, name


def test_top_shell_breaks_canonical_commutator():
    basis = TwoModeBasis(6)
    ax = build_two_mode("ax", basis)
    comm = ax @ ax.conj().T - ax.conj().T @ ax
    top = basis.index[(6, 0)]
    assert abs(comm[top, top] - 1) > 1


def test_degeneracy():
    spectrum = degeneracy_spectrum(TwoModeBasis(20))
    assert spectrum == [(n, n + 1) for n in range(21)]


@pytest.mark.parametrize("ell", [2, -1, 0, 5, -10])
def test_radial_link(ell: int):
    assert radial_link_check(TwoModeBasis(10), ell) < 1e-10


def test_radial_link_rejects_large_ell():
    with pytest.raises(DomainError):
        radial_link_check(TwoModeBasis(10), 11)


@pytest.mark.parametrize("n_plus,n_minus", [(0, 0), (3, 1), (0, 4), (2, 2)])
def test_ladder_vector(n_plus: int, n_minus: int):
    basis = TwoModeBasis(8)
    vector = ladder_vector(basis, n_plus, n_minus)
    assert np.linalg.norm(vector) == pytest.approx(1.0)

    ell = build_two_mode("ell", basis)
    number = build_two_mode("n", basis)
    assert np.allclose(ell @ vector, (n_plus - n_minus) * vector, atol=1e-12)
    assert np.allclose(number @ vector, (n_plus + n_minus) * vector, atol=1e-12)


def test_ladder_vector_bounds():
    basis = TwoModeBasis(4)
    with pytest.raises(DomainError):
        ladder_vector(basis, 3, 2)
    with pytest.raises(DomainError):
        ladder_vector(basis, -1, 0)


@pytest.mark.parametrize("ell", [0, 1, 2, -1, -3])
def test_kplus_ladder_elements(ell: int):
    basis = TwoModeBasis(16)
    elements = kplus_ladder_elements(basis, ell)
    a = abs(ell)
    assert elements.shape == ((16 - a) // 2,)
    expected = [math.sqrt((a + 1 + p) * (p + 1)) for p in range(elements.shape[0])]
    assert np.allclose(elements, expected, atol=1e-12)
