"""Truncated Fock-space numerics: states, operators, quadrature pdfs.

Conventions, fixed once for the whole package:

- X_phi = (ad e^{i phi} + a e^{-i phi}) / 2, so the vacuum quadrature
  variance is 1/4;
- the number-basis wavefunctions <n|x>_0 are real, with
  psi_n(x) = (2/pi)^{1/4} (2^n n!)^{-1/2} H_n(sqrt(2) x) e^{-x^2};
- p(x|phi) = sum_{nm} rho_{nm} e^{i(m-n) phi} psi_n(x) psi_m(x), the sign
  that makes the first moment equal Re(<a> e^{-i phi}).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import expm

__all__ = [
    "PrecisionError",
    "ladder",
    "number_operator",
    "state_fock",
    "state_coherent",
    "state_thermal",
    "check_density_matrix",
    "quadrature_wavefunction",
    "wavefunction_table",
    "quadrature_pdf",
    "displacement",
    "expectation",
    "embed",
    "phasepoly_to_matrix",
]


class PrecisionError(Exception):
    """Raised when a cutoff is too small for the requested accuracy."""


def ladder(dim: int) -> np.ndarray:
    """Annihilation operator a with <n-1|a|n> = sqrt(n)."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    return a


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim).astype(complex))


def state_fock(n: int, dim: int) -> np.ndarray:
    if not 0 <= n < dim:
        raise ValueError(f"fock index {n} outside cutoff {dim}")
    rho = np.zeros((dim, dim), dtype=complex)
    rho[n, n] = 1.0
    return rho


def _coherent_vector(alpha: complex, dim: int) -> np.ndarray:
    ns = np.arange(dim)
    # log-space amplitudes; the phase is alpha^n
    if alpha == 0:
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        return vec
    logmag = ns * math.log(abs(alpha)) - 0.5 * np.cumsum(
        np.concatenate(([0.0], np.log(np.arange(1, dim))))
    )
    phase = np.exp(1j * ns * np.angle(alpha))
    vec = np.exp(logmag - abs(alpha) ** 2 / 2) * phase
    return vec


def state_coherent(alpha: complex, dim: int, norm_tol: float = 1e-8) -> np.ndarray:
    """Coherent-state density matrix, renormalized after truncation."""
    vec = _coherent_vector(complex(alpha), dim)
    norm = float(np.vdot(vec, vec).real)
    if 1.0 - norm > norm_tol:
        raise PrecisionError(
            f"coherent cutoff {dim} leaves norm deficit {1 - norm:.3e} > {norm_tol:g}"
        )
    vec = vec / math.sqrt(norm)
    return np.outer(vec, vec.conj())


def state_thermal(nbar: float, dim: int, norm_tol: float = 1e-8) -> np.ndarray:
    """Thermal state diag p_n = nbar^n / (1+nbar)^{n+1}, renormalized."""
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    if nbar == 0:
        return state_fock(0, dim)
    ns = np.arange(dim)
    p = np.exp(ns * math.log(nbar / (1 + nbar)) - math.log(1 + nbar))
    mass = float(p.sum())
    if 1.0 - mass > norm_tol:
        raise PrecisionError(
            f"thermal cutoff {dim} leaves norm deficit {1 - mass:.3e} > {norm_tol:g}"
        )
    return np.diag((p / mass).astype(complex))


def check_density_matrix(rho: np.ndarray, herm_tol: float = 1e-12,
                         trace_tol: float = 1e-9, eig_tol: float = 1e-10) -> None:
    """Validate hermiticity, unit trace and positivity; raise on failure."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > trace_tol:
        raise ValueError("density matrix trace differs from 1")
    w = np.linalg.eigvalsh(rho)
    if w.min() < -eig_tol:
        raise ValueError(f"density matrix has negative eigenvalue {w.min():.3e}")


def quadrature_wavefunction(n: int, x) -> np.ndarray:
    """<n|x>_0, real, via the stable two-term recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = np.asarray(x, dtype=float)
    psi_prev = (2.0 / math.pi) ** 0.25 * np.exp(-(x ** 2))
    if n == 0:
        return psi_prev
    psi = 2.0 * x * psi_prev  # n = 1
    for m in range(1, n):
        psi, psi_prev = (
            (2.0 * x * psi - math.sqrt(m) * psi_prev) / math.sqrt(m + 1),
            psi,
        )
    return psi


def wavefunction_table(dim: int, x) -> np.ndarray:
    """psi_n(x) for all n < dim, shape (dim, len(x))."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((dim, x.size))
    out[0] = (2.0 / math.pi) ** 0.25 * np.exp(-(x ** 2))
    if dim > 1:
        out[1] = 2.0 * x * out[0]
    for m in range(1, dim - 1):
        out[m + 1] = (2.0 * x * out[m] - math.sqrt(m) * out[m - 1]) / math.sqrt(m + 1)
    return out


def quadrature_pdf(rho: np.ndarray, phi: float, x) -> np.ndarray:
    """p(x|phi) for the state rho at quadrature phase phi."""
    dim = rho.shape[0]
    x = np.atleast_1d(np.asarray(x, dtype=float))
    psi = wavefunction_table(dim, x)
    ph = np.exp(1j * phi * np.arange(dim))
    # rho with e^{i(m-n) phi}: conjugate rotation of the chosen sign
    rot = ph.conj()[:, None] * rho * ph[None, :]
    vals = np.einsum("ni,nm,mi->i", psi, rot, psi).real
    return vals


def displacement(alpha: complex, dim: int) -> np.ndarray:
    """D(alpha) = exp(alpha ad - conj(alpha) a) on the truncated space."""
    a = ladder(dim)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def expectation(rho: np.ndarray, op: np.ndarray) -> complex:
    if rho.shape != op.shape:
        raise ValueError("dimension mismatch between state and operator")
    return complex(np.trace(rho @ op))


def embed(op: np.ndarray, dim: int) -> np.ndarray:
    """Zero-pad an operator/state into a larger cutoff."""
    if dim < op.shape[0]:
        raise ValueError("target dim smaller than source")
    out = np.zeros((dim, dim), dtype=complex)
    out[: op.shape[0], : op.shape[1]] = op
    return out


def phasepoly_to_matrix(poly, dim: int, phi: float) -> np.ndarray:
    """Evaluate an exact PhasePolyOperator as a matrix at a phase value."""
    a = ladder(dim)
    ad = a.conj().T
    pows_a = [np.eye(dim, dtype=complex)]
    pows_ad = [np.eye(dim, dtype=complex)]
    deg = poly.max_degree()
    for _ in range(deg):
        pows_a.append(pows_a[-1] @ a)
        pows_ad.append(pows_ad[-1] @ ad)
    out = np.zeros((dim, dim), dtype=complex)
    for (n, m, k), c in poly.terms.items():
        out += c.to_complex() * np.exp(1j * k * phi) * (pows_ad[n] @ pows_a[m])
    return out
