"""Shared quadrature helpers: cached Gauss rules and Richardson weights."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["gauss_legendre", "uniform_phases", "richardson3", "gauss_hermite"]


@lru_cache(maxsize=None)
def _gl_cache(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(n: int, a: float, b: float):
    """Gauss-Legendre nodes/weights on [a, b]."""
    t, w = _gl_cache(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * t, half * w


@lru_cache(maxsize=None)
def gauss_hermite(n: int):
    """Nodes/weights for int f(g) e^{-g^2} dg."""
    t, w = np.polynomial.hermite.hermgauss(n)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def uniform_phases(m: int):
    """Midpoint rule on [0, pi) with weight 1/pi; exact for trig polynomials
    of degree below m."""
    phi = (np.arange(m) + 0.5) * np.pi / m
    w = np.full(m, 1.0 / m)
    return phi, w


def richardson3(values, ratio: float = 2.0):
    """Extrapolate f(eps), f(eps/r), f(eps/r^2) to eps -> 0 assuming
    f = f0 + a eps + b eps^2.  Returns (f0, error_estimate)."""
    f1, f2, f3 = values
    r = ratio
    # eliminate the linear then the quadratic term
    g12 = (r * f2 - f1) / (r - 1)
    g23 = (r * f3 - f2) / (r - 1)
    f0 = (r ** 2 * g23 - g12) / (r ** 2 - 1)
    return f0, abs(f0 - f3)
