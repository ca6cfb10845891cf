"""Fock-space numerics: states, wavefunctions, pdfs, displacement."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from quadtomo import fock
from quadtomo.oscalg import PhasePolyOperator, quadrature_power, wick_multiply


def test_ladder_small():
    a = fock.ladder(2)
    assert np.allclose(a, [[0, 1], [0, 0]])
    num = fock.ladder(6).conj().T @ fock.ladder(6)
    assert np.allclose(np.diag(num).real, np.arange(6))


def test_ladder_commutator_truncation():
    dim = 7
    a = fock.ladder(dim)
    comm = a @ a.conj().T - a.conj().T @ a
    expected = np.eye(dim)
    expected[-1, -1] = -(dim - 1)  # truncation artifact, computed directly
    assert np.allclose(comm, expected)


def test_state_constructors():
    assert np.allclose(fock.state_coherent(0, 8), fock.state_fock(0, 8))
    assert np.allclose(np.diag(fock.state_fock(1, 4)).real, [0, 1, 0, 0])
    rho = fock.state_coherent(0.8, 24)
    a = fock.ladder(24)
    assert abs(fock.expectation(rho, a) - 0.8) < 1e-8
    assert abs(fock.expectation(rho, a.conj().T @ a) - 0.64) < 1e-8
    fock.check_density_matrix(rho)
    fock.check_density_matrix(fock.state_thermal(0.5, 40))


def test_state_cutoff_too_small():
    with pytest.raises(fock.PrecisionError):
        fock.state_coherent(3.0, 4)
    with pytest.raises(fock.PrecisionError):
        fock.state_thermal(2.0, 5)


def test_wavefunction_normalization_and_moments():
    # n = 0 value at the origin fixed by the normalization integral
    assert abs(fock.quadrature_wavefunction(0, 0.0) - (2 / math.pi) ** 0.25) < 1e-14
    norm, _ = quad(lambda x: fock.quadrature_wavefunction(0, x) ** 2, -8, 8)
    assert abs(norm - 1) < 1e-12
    var, _ = quad(lambda x: x ** 2 * fock.quadrature_wavefunction(0, x) ** 2, -8, 8)
    assert abs(var - 0.25) < 1e-12  # vacuum variance 1/4
    orth, _ = quad(
        lambda x: fock.quadrature_wavefunction(0, x)
        * fock.quadrature_wavefunction(1, x),
        -8,
        8,
    )
    assert abs(orth) < 1e-12
    for n in range(2, 12):
        nn, _ = quad(lambda x: fock.quadrature_wavefunction(n, x) ** 2, -10, 10)
        assert abs(nn - 1) < 1e-10


def test_pdf_vacuum_and_fock1():
    x = np.linspace(-5, 5, 1001)
    p = fock.quadrature_pdf(fock.state_fock(0, 6), 0.3, x)
    assert np.allclose(p, math.sqrt(2 / math.pi) * np.exp(-2 * x ** 2), atol=1e-12)
    p1 = fock.quadrature_pdf(fock.state_fock(1, 6), 1.1, x)
    assert np.allclose(
        p1, math.sqrt(2 / math.pi) * 4 * x ** 2 * np.exp(-2 * x ** 2), atol=1e-12
    )


@pytest.mark.parametrize("phi", [0.0, 0.7, 2.0])
def test_pdf_coherent_gaussian(phi):
    alpha = 0.8 - 0.3j
    rho = fock.state_coherent(alpha, 30)
    x = np.linspace(-6, 6, 2001)
    p = fock.quadrature_pdf(rho, phi, x)
    mean = (alpha * np.exp(-1j * phi)).real
    gauss = np.sqrt(2 / math.pi) * np.exp(-2 * (x - mean) ** 2)
    assert np.max(np.abs(p - gauss)) < 1e-8


@pytest.mark.parametrize(
    "rho_builder,phi",
    [
        (lambda: fock.state_coherent(0.5 + 0.4j, 26), 0.0),
        (lambda: fock.state_coherent(0.5 + 0.4j, 26), 1.2),
        (lambda: fock.state_thermal(0.5, 40), 0.9),
        (lambda: fock.state_fock(3, 8), 2.5),
    ],
)
def test_pdf_normalization_and_first_moment(rho_builder, phi):
    rho = rho_builder()
    dim = rho.shape[0]
    x = np.linspace(-9, 9, 4001)
    p = fock.quadrature_pdf(rho, phi, x)
    assert p.min() > -1e-10
    assert abs(np.trapezoid(p, x) - 1) < 1e-8
    mean = np.trapezoid(x * p, x)
    a = fock.ladder(dim)
    expected = (fock.expectation(rho, a) * np.exp(-1j * phi)).real
    assert abs(mean - expected) < 1e-7


def test_pdf_second_moment_consistency():
    # integral of x^2 p(x|phi) against the exact expansion of X_phi^2
    rho = fock.state_coherent(0.7, 26)
    phi = 0.8
    x = np.linspace(-9, 9, 4001)
    p = fock.quadrature_pdf(rho, phi, x)
    m2 = np.trapezoid(x ** 2 * p, x)
    xphi2 = fock.phasepoly_to_matrix(quadrature_power(2), 26, phi)
    assert abs(m2 - fock.expectation(rho, xphi2).real) < 1e-7


def test_displacement():
    dim = 24
    alpha = 0.4 + 0.2j
    D = fock.displacement(alpha, dim)
    assert np.allclose(fock.displacement(0, 6), np.eye(6))
    assert abs(D[0, 0] - math.exp(-abs(alpha) ** 2 / 2)) < 1e-10
    core = (D @ fock.displacement(-alpha, dim))[: dim - 4, : dim - 4]
    assert np.max(np.abs(core - np.eye(dim - 4))) < 1e-8
    # unitarity away from the cutoff corner
    U = (D.conj().T @ D)[: dim - 4, : dim - 4]
    assert np.max(np.abs(U - np.eye(dim - 4))) < 1e-8


def test_expectation_errors():
    with pytest.raises(ValueError):
        fock.expectation(fock.state_fock(0, 4), np.eye(5))


def test_phasepoly_evaluation_homomorphism():
    # multiply exactly then map, versus map then matrix-multiply: the
    # central block must agree once dim exceeds the degree by 4
    A = quadrature_power(3)
    B = wick_multiply(PhasePolyOperator.creator(), quadrature_power(2))
    dim, phi = 12, 0.6
    lhs = fock.phasepoly_to_matrix(wick_multiply(A, B), dim, phi)
    rhs = fock.phasepoly_to_matrix(A, dim, phi) @ fock.phasepoly_to_matrix(B, dim, phi)
    deg = 6
    blk = dim - deg
    assert np.max(np.abs(lhs[:blk, :blk] - rhs[:blk, :blk])) < 1e-12
