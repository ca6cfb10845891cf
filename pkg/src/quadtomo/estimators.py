"""Estimator kernels and the averaging engine.

A kernel is a scalar function f_phi(x | X) whose average over homodyne
records equals Tr[rho X].  Kernels here:

- moment(n, m): targets ad^n a^m, the Hermite-polynomial pattern function;
- dyad(n, d): targets |n><n+d|, the oscillatory-integral pattern function
  with detector efficiency handled inside the integral;
- displacement(alpha): targets D(alpha), in closed form;
- moment_dual(n, m, order): targets |n><m| through the moments-frame dual
  (an alternative, generally unbounded pattern function);
- unbounded_g(target): targets any normal-ordered operator through the
  Gaussian-window coherent-dyad expansion, by double quadrature.

Detector efficiency eta enters as Gaussian smearing of the outcomes with
variance (1 - eta)/(4 eta); each kernel family carries its own exact
unbiasing transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import eval_genlaguerre

from . import fock
from ._quad import gauss_hermite, gauss_legendre, richardson3, uniform_phases
from .sampler import HomodyneData

__all__ = [
    "InsufficientEfficiency",
    "RangeError",
    "EstimatorKernel",
    "EstimateReport",
    "moment_kernel",
    "dyad_kernel",
    "displacement_kernel",
    "moment_dual_kernel",
    "unbounded_g_kernel",
    "parse_kernel",
    "eval_moment",
    "eval_displacement",
    "eval_dyad",
    "eval_moment_dual",
    "eval_unbounded_g",
    "displacement_theta_form",
    "estimate",
    "unbias_eta",
    "unbias_gaussian",
    "expectation_by_integration",
    "pauli_demo",
]

EXP_BUDGET = 700.0  # max exponent magnitude before a RangeError


class InsufficientEfficiency(ValueError):
    """Detector efficiency at or below 1/2: dyad patterns are unbounded."""


class RangeError(ValueError):
    """Evaluation would overflow the floating-point exponent budget."""


# ---------------------------------------------------------------------------
# moment kernels
# ---------------------------------------------------------------------------


def _hermite_value(N: int, z: np.ndarray) -> np.ndarray:
    """Physicists' Hermite polynomial H_N via the two-term recurrence."""
    h_prev = np.ones_like(z)
    if N == 0:
        return h_prev
    h = 2.0 * z
    for k in range(1, N):
        h, h_prev = 2.0 * z * h - 2.0 * k * h_prev, h
    return h


def eval_moment(n: int, m: int, x, phi, eta: float = 1.0) -> np.ndarray:
    """Pattern function for ad^n a^m:

        C(n+m, n)^(-1) (2 eta)^(-(n+m)/2) H_{n+m}(sqrt(2 eta) x) e^{i(m-n)phi}

    which at eta = 1 is the Hermite form and for eta < 1 absorbs the
    Gaussian smearing exactly (a finite transform for every n, m).
    """
    if n < 0 or m < 0:
        raise ValueError("moment orders must be nonnegative")
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    x = np.asarray(x, dtype=float)
    phi = np.asarray(phi, dtype=float)
    N = n + m
    scale = (2.0 * eta) ** (-N / 2.0) / math.comb(N, n)
    vals = scale * _hermite_value(N, math.sqrt(2.0 * eta) * x)
    return vals * np.exp(1j * (m - n) * phi)


def eval_displacement(alpha: complex, x, phi, eta: float = 1.0) -> np.ndarray:
    """Pattern function for D(alpha), closed form.

    With A = alpha e^{-i phi}, B = -conj(alpha) e^{i phi} and
    s2 = (1-eta)/(4 eta):

        f = (A e^{2Ax - 2 s2 A^2} - B e^{2Bx - 2 s2 B^2}) / (A - B),

    reducing at eta = 1 to (z e^z + z* e^{-z*})/(z + z*) with z = 2 x A.
    The A -> B degeneracy is removable; near it the derivative limit
    e^{2Ax - 2 s2 A^2} (1 + A(2x - 4 s2 A)) is used.
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    x = np.asarray(x, dtype=float)
    phi = np.asarray(phi, dtype=float)
    x, phi = np.broadcast_arrays(x, phi)
    alpha = complex(alpha)
    s2 = (1.0 - eta) / (4.0 * eta)
    A = alpha * np.exp(-1j * phi)
    B = -np.conj(alpha) * np.exp(1j * phi)
    expo_a = 2.0 * A * x - 2.0 * s2 * A * A
    expo_b = 2.0 * B * x - 2.0 * s2 * B * B
    worst = max(np.max(np.abs(expo_a.real), initial=0.0),
                np.max(np.abs(expo_b.real), initial=0.0))
    if worst > EXP_BUDGET:
        raise RangeError(f"displacement kernel exponent {worst:.1f} over budget")
    den = A - B
    tiny = np.abs(den) < 1e-6 * (1.0 + np.abs(2.0 * A * x))
    den_safe = np.where(tiny, 1.0, den)
    f = (A * np.exp(expo_a) - B * np.exp(expo_b)) / den_safe
    limit = np.exp(expo_a) * (1.0 + A * (2.0 * x - 4.0 * s2 * A))
    return np.where(tiny, limit, f)


def displacement_theta_form(alpha: complex, x: float, phi: float,
                            n_theta: int = 200, dx: float = 1e-5) -> complex:
    """Cross-check route: d/dx [ x * integral over coherent overlaps ].

    Numeric theta quadrature plus a central difference; agrees with
    eval_displacement to quadrature accuracy.
    """
    theta, w = gauss_legendre(n_theta, 0.0, 1.0)
    alpha = complex(alpha)

    def g(xv: float) -> complex:
        e = np.exp(
            -2.0 * xv * np.exp(1j * phi) * np.conj(alpha) * theta
            + 2.0 * xv * np.exp(-1j * phi) * alpha * (1.0 - theta)
        )
        return xv * complex(np.sum(w * e))

    return (g(x + dx) - g(x - dx)) / (2.0 * dx)


# ---------------------------------------------------------------------------
# dyad kernels: oscillatory k-integral, tabulated and splined
# ---------------------------------------------------------------------------

_DYAD_XMAX = 14.0
_DYAD_POINTS = 4601
_DYAD_KNODES = 900


def _dyad_profile_raw(n: int, d: int, gauss_coeff: float,
                      xs: np.ndarray) -> np.ndarray:
    """Core integral (1/4) int dk |k| (ik/2)^d e^{-G k^2} L_n^d(k^2/4) e^{-ikx},
    returned on the grid xs (complex).  Requires d >= 0 and G > 0."""
    kmax = math.sqrt(42.0 / gauss_coeff)
    k, wk = gauss_legendre(_DYAD_KNODES, 0.0, kmax)
    radial = (
        k ** (d + 1)
        * (0.5 ** d)
        * np.exp(-gauss_coeff * k * k)
        * eval_genlaguerre(n, d, k * k / 4.0)
        * wk
    )
    kx = np.outer(xs, k)
    if d % 2 == 0:
        base = np.cos(kx) @ radial * 0.5
    else:
        base = np.sin(kx) @ radial * (-0.5j)
    return (1j ** d) * base


@lru_cache(maxsize=256)
def _dyad_profile(n: int, d: int, eta: float):
    """Splined x-profile of the dyad kernel core, with the phase factor and
    normalization sqrt(n!/(n+d)!) included; eta = 1 is handled by Gaussian
    regularization e^{-eps k^2} with Richardson extrapolation eps -> 0."""
    xs = np.linspace(-_DYAD_XMAX, _DYAD_XMAX, _DYAD_POINTS)
    norm = math.exp(0.5 * (math.lgamma(n + 1) - math.lgamma(n + d + 1)))
    base_g = (2.0 * eta - 1.0) / (8.0 * eta)
    if eta < 1.0:
        vals = _dyad_profile_raw(n, d, base_g, xs)
        err = 0.0
    else:
        eps = (1e-2, 5e-3, 2.5e-3)
        stack = [_dyad_profile_raw(n, d, base_g + e, xs) for e in eps]
        vals, err = richardson3(stack)
        err = float(np.max(np.abs(err)))
    vals = norm * vals
    re = CubicSpline(xs, vals.real)
    im = CubicSpline(xs, vals.imag)
    return re, im, err


def eval_dyad(n: int, d: int, eta: float, x, phi) -> np.ndarray:
    """Pattern function for the dyad |n><n+d| (its average is <n+d|rho|n>).

    Negative d is served by conjugation symmetry.  Requires eta > 1/2.
    """
    if eta <= 0.5 or eta > 1.0:
        raise InsufficientEfficiency(
            f"dyad patterns need eta in (1/2, 1], got {eta}"
        )
    if d < 0:
        return np.conj(eval_dyad(n + d, -d, eta, x, phi))
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = np.asarray(x, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.max(np.abs(x), initial=0.0) > _DYAD_XMAX:
        raise RangeError(f"dyad profile tabulated for |x| <= {_DYAD_XMAX}")
    re, im, _err = _dyad_profile(n, d, float(eta))
    return (re(x) + 1j * im(x)) * np.exp(1j * d * phi)


def dyad_profile_error(n: int, d: int, eta: float = 1.0) -> float:
    """Richardson error estimate attached to the eta = 1 regularization."""
    return _dyad_profile(n, abs(d), float(eta))[2]


# ---------------------------------------------------------------------------
# moments-frame dual kernel
# ---------------------------------------------------------------------------


def eval_moment_dual(n: int, m: int, order: int, x, phi) -> np.ndarray:
    """Pattern function for |n><m| built from the moments-frame dual:

        e^{i(m-n)phi} / sqrt(m! n!) * sum_{t<=order} (-1)^t / t!
            C(m+n+2t, m+t)^(-1) 2^{-(m+n+2t)/2} H_{m+n+2t}(sqrt(2) x)

    evaluated through a scaled two-term recurrence so no intermediate
    overflows; the series grows like e^{x^2} in |x| and is flagged when the
    cancellation exceeds the double-precision budget.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    x = np.asarray(x, dtype=float)
    phi = np.asarray(phi, dtype=float)
    x, phi = np.broadcast_arrays(x, phi)
    z = math.sqrt(2.0) * x
    N = m + n
    c0 = math.comb(N, m) ** -1 * 2.0 ** (-N / 2.0)
    u = c0 * _hermite_value(N, z)  # c_t H_{N+2t}, t = 0
    v = c0 * _hermite_value(N + 1, z)
    total = u.astype(complex).copy()
    peak = np.abs(u)
    for t in range(order):
        Nt = N + 2 * t
        ratio = -0.5 * (m + t + 1) * (n + t + 1) / (
            (t + 1) * (Nt + 1) * (Nt + 2)
        )
        u_next = ratio * (2.0 * z * v - 2.0 * (Nt + 1) * u)
        v_next = 2.0 * z * u_next - 2.0 * (Nt + 2) * ratio * v
        u, v = u_next, v_next
        total += u
        peak = np.maximum(peak, np.abs(u))
    scale = math.exp(-0.5 * (math.lgamma(m + 1) + math.lgamma(n + 1)))
    out = scale * total * np.exp(1j * (m - n) * phi)
    if np.any(peak > 1e13 * (1.0 + np.abs(total))):
        raise RangeError(
            "moments-dual series cancellation beyond double precision "
            "(|x| too large for the requested order)"
        )
    return out


# ---------------------------------------------------------------------------
# Gaussian-window coherent-dyad kernel (double quadrature)
# ---------------------------------------------------------------------------


def eval_unbounded_g(target: np.ndarray, x, phi, n_t: int = 400,
                     t_max: float = 8.0, n_theta: int = 48) -> np.ndarray:
    """Pattern function for an arbitrary matrix-represented target with a
    normal-ordered form, via the Gaussian-window expansion over coherent
    dyads.  Double quadrature in (t, theta); the d/dt is integrated by
    parts.  Grows like e^{2 x^2}, so keep |x| moderate.
    """
    target = np.asarray(target, dtype=complex)
    dim = target.shape[0]
    x = np.atleast_1d(np.asarray(x, dtype=float))
    phi_arr = np.atleast_1d(np.asarray(phi, dtype=float))
    if phi_arr.size == 1:
        phi_val = float(phi_arr[0])
    else:
        raise ValueError("evaluate one phase at a time (vectorized in x)")
    if np.max(np.abs(x)) ** 2 * 2.0 > EXP_BUDGET:
        raise RangeError("unbounded-G kernel exponent over budget")

    t, wt = gauss_legendre(n_t, -t_max, t_max)
    th, wth = gauss_legendre(n_theta, 0.0, 1.0)
    T, TH = np.meshgrid(t, th, indexing="ij")  # (n_t, n_theta)

    ps = np.arange(dim)
    fac = np.exp(-0.5 * np.array([math.lgamma(p + 1) for p in ps]))
    # u_p = (beta*)^p / sqrt(p!), v_q = alpha^q / sqrt(q!), phases explicit
    base_u = (-1j * (1.0 - TH) * T)[..., None] ** ps * fac
    base_v = (-1j * TH * T)[..., None] ** ps * fac
    eph = np.exp(1j * phi_val * ps)
    u = base_u * eph.conj()
    v = base_v * eph
    M = np.einsum("ijp,pq,ijq->ij", u, target, v)
    M = M * np.exp(T * T * TH * (1.0 - TH))
    theta_int = M @ wth  # (n_t,)

    damp = np.exp(-0.5 * t * t) * t * theta_int * wt
    phase = np.exp(2j * np.outer(x, t))  # (nx, n_t)
    core = phase @ ((t - 0.0) * damp) - 2j * x * (phase @ damp)
    return np.exp(2.0 * x * x) / math.sqrt(2.0 * math.pi) * core


# ---------------------------------------------------------------------------
# kernel descriptor + averaging engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EstimatorKernel:
    """Descriptor of one scalar estimator f_phi(x); call it on arrays."""

    kind: str
    n: int = 0
    m: int = 0
    d: int = 0
    alpha: complex = 0j
    order: int = 60
    eta: float = 1.0
    nbar: float = 0.0
    target: tuple | None = None  # frozen matrix for unbounded_g

    def evaluate(self, x, phi) -> np.ndarray:
        k = self.kind
        if k == "moment":
            if self.nbar > 0.0:
                return _eval_moment_gaussian(self.n, self.m, self.nbar, x, phi)
            return eval_moment(self.n, self.m, x, phi, self.eta)
        if k == "simple_a":
            return eval_moment(0, 1, x, phi, self.eta)
        if k == "simple_num":
            return eval_moment(1, 1, x, phi, self.eta)
        if k == "displacement":
            return eval_displacement(self.alpha, x, phi, self.eta)
        if k == "dyad":
            return eval_dyad(self.n, self.d, self.eta, x, phi)
        if k == "moment_dual":
            return eval_moment_dual(self.n, self.m, self.order, x, phi)
        if k == "unbounded_g":
            mat = np.array(self.target, dtype=complex)
            return eval_unbounded_g(mat, x, phi)
        raise ValueError(f"unknown kernel kind {self.kind!r}")

    __call__ = evaluate

    def label(self) -> str:
        if self.kind == "moment":
            s = f"moment:{self.n},{self.m}"
        elif self.kind == "displacement":
            s = f"disp:{self.alpha.real:g},{self.alpha.imag:g}"
        elif self.kind == "dyad":
            s = f"dyad:{self.n},{self.d}"
        elif self.kind == "moment_dual":
            s = f"mdual:{self.n},{self.m},{self.order}"
        else:
            s = self.kind
        if self.eta != 1.0:
            s += f"@eta={self.eta:g}"
        if self.nbar:
            s += f"@nbar={self.nbar:g}"
        return s


def moment_kernel(n: int, m: int, eta: float = 1.0) -> EstimatorKernel:
    return EstimatorKernel("moment", n=n, m=m, eta=eta)


def dyad_kernel(n: int, d: int, eta: float = 1.0) -> EstimatorKernel:
    if eta <= 0.5 or eta > 1.0:
        raise InsufficientEfficiency(
            f"dyad patterns need eta in (1/2, 1], got {eta}"
        )
    return EstimatorKernel("dyad", n=n, d=d, eta=eta)


def displacement_kernel(alpha: complex, eta: float = 1.0) -> EstimatorKernel:
    return EstimatorKernel("displacement", alpha=complex(alpha), eta=eta)


def moment_dual_kernel(n: int, m: int, order: int = 60) -> EstimatorKernel:
    return EstimatorKernel("moment_dual", n=n, m=m, order=order)


def unbounded_g_kernel(target: np.ndarray) -> EstimatorKernel:
    frozen = tuple(tuple(complex(v) for v in row) for row in np.asarray(target))
    return EstimatorKernel("unbounded_g", target=frozen)


def parse_kernel(text: str, eta: float = 1.0) -> EstimatorKernel:
    """CLI syntax: moment:n,m | disp:re,im | dyad:n,d | mdual:n,m[,order]
    | a | num."""
    head, _, arg = text.partition(":")
    head = head.strip().lower()
    if head == "moment":
        n, m = (int(v) for v in arg.split(","))
        return moment_kernel(n, m, eta)
    if head == "disp":
        re, im = (float(v) for v in arg.split(","))
        return displacement_kernel(re + 1j * im, eta)
    if head == "dyad":
        n, d = (int(v) for v in arg.split(","))
        return dyad_kernel(n, d, eta)
    if head == "mdual":
        parts = [int(v) for v in arg.split(",")]
        n, m = parts[0], parts[1]
        order = parts[2] if len(parts) > 2 else 60
        return moment_dual_kernel(n, m, order)
    if head == "a":
        return EstimatorKernel("simple_a", eta=eta)
    if head == "num":
        return EstimatorKernel("simple_num", eta=eta)
    raise ValueError(f"cannot parse kernel descriptor {text!r}")


@dataclass
class EstimateReport:
    value: complex
    stderr_re: float
    stderr_im: float
    n: int
    kernel: str

    @property
    def stderr(self) -> float:
        return math.hypot(self.stderr_re, self.stderr_im)

    def within(self, expected: complex, n_sigma: float = 4.0) -> bool:
        dre = abs(self.value.real - complex(expected).real)
        dim_ = abs(self.value.imag - complex(expected).imag)
        return dre <= n_sigma * max(self.stderr_re, 1e-300) and (
            dim_ <= n_sigma * max(self.stderr_im, 1e-300)
        )

    def to_dict(self) -> dict:
        return {
            "kernel": self.kernel,
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "stderr_re": self.stderr_re,
            "stderr_im": self.stderr_im,
            "n": self.n,
        }


def estimate(
    data: HomodyneData, kernel: EstimatorKernel, stratify_by_phase: bool = False
) -> EstimateReport:
    """Sample mean of the kernel over records, with per-part stderr.

    For grid phase schemes ``stratify_by_phase`` averages per distinct
    phase first (equal phase weights), reducing phase-sampling variance.
    """
    if len(data) == 0:
        raise ValueError("no records")
    etas = np.unique(data.eta)
    if etas.size != 1:
        raise ValueError("records carry mixed efficiencies")
    if abs(float(etas[0]) - kernel.eta) > 1e-12:
        raise ValueError(
            f"kernel eta {kernel.eta} does not match records eta {etas[0]}"
        )
    vals = kernel.evaluate(data.x, data.phi)
    if stratify_by_phase:
        phases = np.unique(data.phi)
        means = []
        var_re = 0.0
        var_im = 0.0
        for p in phases:
            sel = vals[data.phi == p]
            means.append(sel.mean())
            var_re += sel.real.var(ddof=1) / sel.size
            var_im += sel.imag.var(ddof=1) / sel.size
        value = complex(np.mean(means))
        se_re = math.sqrt(var_re) / phases.size
        se_im = math.sqrt(var_im) / phases.size
    else:
        value = complex(vals.mean())
        se_re = float(vals.real.std(ddof=1)) / math.sqrt(len(data))
        se_im = float(vals.imag.std(ddof=1)) / math.sqrt(len(data))
    return EstimateReport(value, se_re, se_im, len(data), kernel.label())


# ---------------------------------------------------------------------------
# noise unbiasing
# ---------------------------------------------------------------------------


def _eval_moment_gaussian(n: int, m: int, nbar: float, x, phi) -> np.ndarray:
    """Moment pattern unbiased against displacement Gaussian noise of mean
    added photon number nbar (outcome smearing variance nbar/2)."""
    x = np.asarray(x, dtype=float)
    phi = np.asarray(phi, dtype=float)
    N = n + m
    stretch = 1.0 + 2.0 * nbar
    scale = stretch ** (N / 2.0) * 2.0 ** (-N / 2.0) / math.comb(N, n)
    vals = scale * _hermite_value(N, math.sqrt(2.0 / stretch) * x)
    return vals * np.exp(1j * (m - n) * phi)


def unbias_eta(obj, eta: float):
    """Efficiency unbiasing.

    - For a kernel: returns the kernel retargeted at efficiency-eta data
      (dyads take eta inside their integral; moments rescale their Hermite
      argument; the displacement closed form gains its Gaussian factor).
    - For a sequence of (alpha, coeff) displacement-frame coefficients:
      applies the dual transform (alpha, c) -> (sqrt(eta) alpha,
      eta e^{(1-eta)|alpha|^2/2} c).
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    if isinstance(obj, EstimatorKernel):
        if obj.kind == "dyad" and eta <= 0.5:
            raise InsufficientEfficiency(
                f"dyad patterns need eta > 1/2, got {eta}"
            )
        return replace(obj, eta=eta)
    transformed = []
    for alpha, coeff in obj:
        alpha = complex(alpha)
        scale = eta * math.exp((1.0 - eta) * abs(alpha) ** 2 / 2.0)
        transformed.append((math.sqrt(eta) * alpha, coeff * scale))
    return transformed


def unbias_gaussian(obj, nbar: float, s_class: float = 1.0):
    """Gaussian displacement-noise unbiasing for mean added photons nbar.

    Requires nbar <= s_class - 1/2 for the targeted operator class; the
    kernel route rescales the moment pattern exactly, the coefficient route
    multiplies displacement coefficients by e^{nbar |alpha|^2}.
    """
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    if nbar > s_class - 0.5 + 1e-15:
        raise ValueError(
            f"nbar = {nbar} violates the class bound nbar <= {s_class - 0.5}"
        )
    if isinstance(obj, EstimatorKernel):
        if obj.kind not in ("moment", "simple_a", "simple_num"):
            raise ValueError("kernel-level Gaussian unbiasing covers moments")
        kind = "moment"
        n, m = obj.n, obj.m
        if obj.kind == "simple_a":
            n, m = 0, 1
        if obj.kind == "simple_num":
            n, m = 1, 1
        return EstimatorKernel(kind, n=n, m=m, nbar=nbar)
    return [(complex(a), c * math.exp(nbar * abs(a) ** 2)) for a, c in obj]


# ---------------------------------------------------------------------------
# deterministic unbiasedness oracle
# ---------------------------------------------------------------------------


def expectation_by_integration(
    kernel: EstimatorKernel,
    rho: np.ndarray,
    eta: float = 1.0,
    n_x: int = 400,
    x_max: float = 9.0,
    n_phi: int = 64,
    n_noise: int = 21,
    extra: "EstimatorKernel | None" = None,
    extra_fn=None,
) -> complex:
    """No-Monte-Carlo check value: integral of kernel x noisy pdf.

    Computes  avg_phi  int dx p_eta(x|phi) f_phi(x)  by Gauss-Legendre in x,
    midpoint in phi (exact for the trigonometric content) and Gauss-Hermite
    over the efficiency smearing.
    """
    xs, wx = gauss_legendre(n_x, -x_max, x_max)
    phis, wphi = uniform_phases(n_phi)
    if eta < 1.0:
        sigma = math.sqrt((1.0 - eta) / (4.0 * eta))
        g, wg = gauss_hermite(n_noise)
    total = 0.0 + 0.0j
    fn = extra_fn if extra_fn is not None else kernel.evaluate
    for p, wp in zip(phis, wphi):
        pdf = fock.quadrature_pdf(rho, p, xs)
        if eta < 1.0:
            vals = np.zeros_like(xs, dtype=complex)
            for t, w in zip(g, wg):
                vals += (w / math.sqrt(math.pi)) * fn(
                    xs + math.sqrt(2.0) * sigma * t, p
                )
        else:
            vals = fn(xs, p)
        total += wp * np.sum(wx * pdf * vals)
    return complex(total)


# ---------------------------------------------------------------------------
# qubit depolarizing-channel demo
# ---------------------------------------------------------------------------


def pauli_demo(
    p: float = 0.3,
    shots: int = 100000,
    seed: int = 0,
    bloch=(0.3, -0.2, 0.5),
) -> dict:
    """Qubit tomography through a depolarizing channel, unbiased by the
    inverse noise map (estimator scale 1/(1-p), variance ~ (1-p)^-2).
    """
    if not 0 <= p < 1:
        raise ValueError("depolarizing probability must lie in [0, 1)")
    r = np.asarray(bloch, dtype=float)
    if np.linalg.norm(r) > 1:
        raise ValueError("Bloch vector outside the unit ball")
    rng = np.random.Generator(np.random.Philox(key=[seed, 0]))
    axes = rng.integers(0, 3, size=shots)
    u = rng.random(shots)
    r_noisy = (1.0 - p) * r
    prob_up = 0.5 * (1.0 + r_noisy[axes])
    outcomes = np.where(u < prob_up, 1.0, -1.0)
    # estimator: 3 * outcome / (1-p) on the drawn axis, 0 elsewhere
    scale = 3.0 / (1.0 - p)
    est = np.zeros((shots, 3))
    est[np.arange(shots), axes] = scale * outcomes
    mean = est.mean(axis=0)
    serr = est.std(axis=0, ddof=1) / math.sqrt(shots)
    ok = bool(np.all(np.abs(mean - r) <= 4.0 * serr))
    return {
        "p": p,
        "shots": shots,
        "bloch_true": r.tolist(),
        "bloch_est": mean.tolist(),
        "stderr": serr.tolist(),
        "ok_4sigma": ok,
        "variance_scale": 1.0 / (1.0 - p) ** 2,
    }
