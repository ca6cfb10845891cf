"""Exact algebra of normal-ordered ladder polynomials with phase factors.

An operator here is a finite sum

    sum_{n,m,k}  c[n,m,k] * ad^n a^m e^{i k phi}

where ``ad``/``a`` are the creation/annihilation operators with [a, ad] = 1,
phi is the quadrature phase, and every coefficient is an exact complex
rational plus an optional exact complex-rational multiple of 1/pi.  All
arithmetic is integer/Fraction based; no floating point enters a residual,
so an identity check that reports zero is zero.

The quadrature convention is X = (ad e^{i phi} + a e^{-i phi}) / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

__all__ = [
    "CRational",
    "Coefficient",
    "PhasePolyOperator",
    "OrderingTag",
    "NORMAL",
    "SYMMETRIC",
    "ANTINORMAL",
    "IdentityReport",
    "DegreeBudgetError",
    "UnknownIdentityError",
    "DEFAULT_DEGREE_BUDGET",
    "DEFAULT_PHASE_BUDGET",
    "wick_multiply",
    "quadrature_power",
    "normal_ordered_power",
    "phase_average",
    "phase_shift",
    "fold_phases",
    "reorder",
    "hermite_of_quadrature",
    "verify_identity",
    "identity_suite",
    "IDENTITY_IDS",
]

DEFAULT_DEGREE_BUDGET = 24
DEFAULT_PHASE_BUDGET = 24


class DegreeBudgetError(Exception):
    """Raised when an operation would exceed the configured degree budget."""


class UnknownIdentityError(ValueError):
    """Raised for an identity id that verify_identity does not know."""


_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected int or Fraction, got {type(v).__name__}")


class CRational:
    """Exact complex number with Fraction real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    def __add__(self, other: "CRational") -> "CRational":
        return CRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "CRational") -> "CRational":
        return CRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "CRational":
        return CRational(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, CRational):
            return CRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return CRational(self.re * _as_fraction(other), self.im * _as_fraction(other))

    __rmul__ = __mul__

    def conjugate(self) -> "CRational":
        return CRational(self.re, -self.im)

    def __pow__(self, n: int) -> "CRational":
        if n < 0:
            raise ValueError("negative powers not supported")
        out = CRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, CRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}j"
        return f"({self.re}{'+' if self.im >= 0 else ''}{self.im}j)"


_CZERO = CRational(0)
_CONE = CRational(1)


def _as_crational(v) -> CRational:
    if isinstance(v, CRational):
        return v
    if isinstance(v, (int, Fraction)):
        return CRational(v)
    if isinstance(v, tuple) and len(v) == 2:
        return CRational(v[0], v[1])
    raise TypeError(f"cannot interpret {v!r} as an exact complex rational")


class Coefficient:
    """Exact coefficient of the form q + r/pi with q, r complex rationals.

    The 1/pi slot is produced by phase averages of odd phase factors and by
    sampling against the period-pi Dirac comb; products that would need a
    1/pi^2 slot are outside the closure of the algebra and raise.
    """

    __slots__ = ("q", "r")

    def __init__(self, q=0, r=0):
        self.q = _as_crational(q)
        self.r = _as_crational(r)

    @classmethod
    def rational(cls, q) -> "Coefficient":
        return cls(q, 0)

    @classmethod
    def over_pi(cls, r) -> "Coefficient":
        return cls(0, r)

    def __add__(self, other: "Coefficient") -> "Coefficient":
        return Coefficient(self.q + other.q, self.r + other.r)

    def __sub__(self, other: "Coefficient") -> "Coefficient":
        return Coefficient(self.q - other.q, self.r - other.r)

    def __neg__(self) -> "Coefficient":
        return Coefficient(-self.q, -self.r)

    def __mul__(self, other):
        if isinstance(other, Coefficient):
            if not self.r.is_zero() and not other.r.is_zero():
                raise ArithmeticError(
                    "product of two 1/pi coefficients leaves the q + r/pi algebra"
                )
            return Coefficient(
                self.q * other.q, self.q * other.r + self.r * other.q
            )
        c = _as_crational(other)
        return Coefficient(self.q * c, self.r * c)

    __rmul__ = __mul__

    def conjugate(self) -> "Coefficient":
        return Coefficient(self.q.conjugate(), self.r.conjugate())

    def is_zero(self) -> bool:
        return self.q.is_zero() and self.r.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, Coefficient):
            return self.q == other.q and self.r == other.r
        return NotImplemented

    def __hash__(self):
        return hash((self.q, self.r))

    def to_complex(self) -> complex:
        return self.q.to_complex() + self.r.to_complex() / math.pi

    def __repr__(self) -> str:
        if self.r.is_zero():
            return repr(self.q)
        if self.q.is_zero():
            return f"({self.r!r})/pi"
        return f"{self.q!r} + ({self.r!r})/pi"


def _as_coefficient(v) -> Coefficient:
    if isinstance(v, Coefficient):
        return v
    return Coefficient(_as_crational(v), 0)


@dataclass(frozen=True)
class OrderingTag:
    """Ordering parameter s: -1, 0, +1 are normal, symmetric, anti-normal."""

    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s", _as_fraction(self.s))


NORMAL = OrderingTag(Fraction(-1))
SYMMETRIC = OrderingTag(Fraction(0))
ANTINORMAL = OrderingTag(Fraction(1))


class PhasePolyOperator:
    """Finite sum of normal-ordered monomials ad^n a^m with phase e^{i k phi}.

    Values are immutable after construction; zero coefficients are never
    stored.  Scalar multiplication is ``*``, the operator (Wick) product is
    ``@``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean: dict[tuple, Coefficient] = {}
        if terms:
            for (n, m, k), c in terms.items():
                if n < 0 or m < 0:
                    raise ValueError("ladder exponents must be nonnegative")
                coeff = _as_coefficient(c)
                if not coeff.is_zero():
                    clean[(int(n), int(m), int(k))] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "PhasePolyOperator":
        return cls()

    @classmethod
    def identity(cls) -> "PhasePolyOperator":
        return cls({(0, 0, 0): _CONE})

    @classmethod
    def annihilator(cls) -> "PhasePolyOperator":
        return cls({(0, 1, 0): _CONE})

    @classmethod
    def creator(cls) -> "PhasePolyOperator":
        return cls({(1, 0, 0): _CONE})

    @classmethod
    def phase(cls, k: int) -> "PhasePolyOperator":
        """The pure phase factor e^{i k phi}."""
        return cls({(0, 0, int(k)): _CONE})

    @classmethod
    def quadrature(cls) -> "PhasePolyOperator":
        """X = (ad e^{i phi} + a e^{-i phi}) / 2."""
        half = Fraction(1, 2)
        return cls({(1, 0, 1): CRational(half), (0, 1, -1): CRational(half)})

    @classmethod
    def monomial(cls, n: int, m: int, k: int = 0, coeff=1) -> "PhasePolyOperator":
        return cls({(n, m, k): _as_coefficient(coeff)})

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "PhasePolyOperator") -> "PhasePolyOperator":
        out = dict(self.terms)
        for key, c in other.terms.items():
            acc = out.get(key)
            out[key] = c if acc is None else acc + c
        return PhasePolyOperator(out)

    def __sub__(self, other: "PhasePolyOperator") -> "PhasePolyOperator":
        return self + (-other)

    def __neg__(self) -> "PhasePolyOperator":
        return PhasePolyOperator({k: -c for k, c in self.terms.items()})

    def __mul__(self, scalar) -> "PhasePolyOperator":
        c = scalar if isinstance(scalar, Coefficient) else _as_coefficient(scalar)
        return PhasePolyOperator({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "PhasePolyOperator") -> "PhasePolyOperator":
        return wick_multiply(self, other)

    def adjoint(self) -> "PhasePolyOperator":
        return PhasePolyOperator(
            {(m, n, -k): c.conjugate() for (n, m, k), c in self.terms.items()}
        )

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def max_degree(self) -> int:
        return max((n + m for (n, m, _k) in self.terms), default=0)

    def max_phase(self) -> int:
        return max((abs(k) for (_n, _m, k) in self.terms), default=0)

    def __eq__(self, other) -> bool:
        if isinstance(other, PhasePolyOperator):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (n, m, k) in sorted(self.terms):
            c = self.terms[(n, m, k)]
            sym = []
            if n:
                sym.append(f"ad^{n}" if n > 1 else "ad")
            if m:
                sym.append(f"a^{m}" if m > 1 else "a")
            if k:
                sym.append(f"E{k:+d}")
            body = " ".join(sym) if sym else "1"
            bits.append(f"({c!r})*{body}")
        return " + ".join(bits)


def _check_budget(n: int, m: int, k: int, degree_budget: int, phase_budget: int):
    if n + m > degree_budget or abs(k) > phase_budget:
        raise DegreeBudgetError(
            f"term ad^{n} a^{m} E^{k} exceeds budget "
            f"(degree {degree_budget}, phase {phase_budget})"
        )


def wick_multiply(
    A: PhasePolyOperator,
    B: PhasePolyOperator,
    degree_budget: int = DEFAULT_DEGREE_BUDGET,
    phase_budget: int = DEFAULT_PHASE_BUDGET,
) -> PhasePolyOperator:
    """Operator product AB re-expressed in normal order, exactly.

    Uses a^m ad^n = sum_j j! C(m,j) C(n,j) ad^{n-j} a^{m-j}.
    """
    out: dict[tuple, Coefficient] = {}
    for (n1, m1, k1), c1 in A.terms.items():
        for (n2, m2, k2), c2 in B.terms.items():
            base = c1 * c2
            k = k1 + k2
            _check_budget(n1 + n2, m1 + m2, k, degree_budget, phase_budget)
            for j in range(min(m1, n2) + 1):
                w = math.comb(m1, j) * math.comb(n2, j) * math.factorial(j)
                key = (n1 + n2 - j, m1 + m2 - j, k)
                add = base * Fraction(w)
                acc = out.get(key)
                out[key] = add if acc is None else acc + add
    return PhasePolyOperator(out)


def phase_shift(A: PhasePolyOperator, j: int) -> PhasePolyOperator:
    """Multiply by the pure phase e^{i j phi}."""
    return PhasePolyOperator(
        {(n, m, k + j): c for (n, m, k), c in A.terms.items()}
    )


def phase_average(A: PhasePolyOperator) -> PhasePolyOperator:
    """Exact phase average (1/pi) * integral_0^pi dphi.

    e^{i k phi} averages to 1 for k = 0, to 0 for even k != 0, and to
    2i/(k pi) for odd k; the odd case lands in the 1/pi coefficient slot.
    """
    out: dict[tuple, Coefficient] = {}
    for (n, m, k), c in A.terms.items():
        if k == 0:
            add = c
        elif k % 2 == 0:
            continue
        else:
            if not c.r.is_zero():
                raise ArithmeticError(
                    "odd-phase average of a 1/pi coefficient needs 1/pi^2"
                )
            add = Coefficient.over_pi(c.q * CRational(0, Fraction(2, k)))
        key = (n, m, 0)
        acc = out.get(key)
        out[key] = add if acc is None else acc + add
    return PhasePolyOperator(out)


def fold_phases(A: PhasePolyOperator) -> PhasePolyOperator:
    """Sample against the period-pi Dirac comb: (1/pi) * A at phi = 0.

    Every term keeps its monomial, drops its phase, and picks up 1/pi.
    """
    out: dict[tuple, Coefficient] = {}
    for (n, m, _k), c in A.terms.items():
        if not c.r.is_zero():
            raise ArithmeticError("folding a 1/pi coefficient needs 1/pi^2")
        add = Coefficient.over_pi(c.q)
        key = (n, m, 0)
        acc = out.get(key)
        out[key] = add if acc is None else acc + add
    return PhasePolyOperator(out)


def reorder(
    A: PhasePolyOperator, frm: OrderingTag, to: OrderingTag
) -> PhasePolyOperator:
    """Exact change of ordering convention for an s-ordered monomial sum.

    The terms of ``A`` are read as monomials in ordering ``frm``; the result
    holds the same operator written as monomials in ordering ``to`` via

        :ad^n a^m:_s = sum_j n! m! / (j! (n-j)! (m-j)!) ((s-r)/2)^j
                       :ad^{n-j} a^{m-j}:_r .
    """
    step = (frm.s - to.s) / 2
    out: dict[tuple, Coefficient] = {}
    for (n, m, k), c in A.terms.items():
        for j in range(min(n, m) + 1):
            w = Fraction(
                math.factorial(n) * math.factorial(m),
                math.factorial(j) * math.factorial(n - j) * math.factorial(m - j),
            ) * step ** j
            if w == 0:
                continue
            key = (n - j, m - j, k)
            add = c * w
            acc = out.get(key)
            out[key] = add if acc is None else acc + add
    return PhasePolyOperator(out)


@lru_cache(maxsize=None)
def quadrature_power(j: int) -> PhasePolyOperator:
    """X^j as an exact normal-ordered sum.

    Expands X^j = (1/2^j) sum_l C(j,l) S{ad^l a^{j-l}} e^{i phi (2l - j)}
    and converts the symmetric monomials to normal order.  Every phase
    index in the result has the parity of j.
    """
    if j < 0:
        raise ValueError("power must be nonnegative")
    half_pow = Fraction(1, 2 ** j)
    sym = PhasePolyOperator(
        {
            (l, j - l, 2 * l - j): CRational(half_pow * math.comb(j, l))
            for l in range(j + 1)
        }
    )
    return reorder(sym, SYMMETRIC, NORMAL)


@lru_cache(maxsize=None)
def normal_ordered_power(j: int) -> PhasePolyOperator:
    """:X^j: — the same binomial sum with ladder symbols already normal."""
    half_pow = Fraction(1, 2 ** j)
    return PhasePolyOperator(
        {
            (l, j - l, 2 * l - j): CRational(half_pow * math.comb(j, l))
            for l in range(j + 1)
        }
    )


def hermite_of_quadrature(n: int) -> PhasePolyOperator:
    """(1/sqrt(2^n)) H_n(sqrt(2) X) = sum_k C(n,k) ad^k a^{n-k} e^{i phi (2k-n)}.

    The scaling keeps every coefficient rational; the result equals
    2^n :X^n:.
    """
    if n < 0:
        raise ValueError("order must be nonnegative")
    return PhasePolyOperator(
        {(k, n - k, 2 * k - n): CRational(math.comb(n, k)) for k in range(n + 1)}
    )


# ---------------------------------------------------------------------------
# identity checkers
# ---------------------------------------------------------------------------


@dataclass
class IdentityReport:
    identity: str
    params: dict
    residual: PhasePolyOperator
    passed: bool
    notes: str = ""
    numeric_deviation: float | None = None

    def __repr__(self):
        status = "passed" if self.passed else "FAILED"
        return f"IdentityReport({self.identity} {self.params}: {status})"


def _pack(parts: Iterable[PhasePolyOperator]) -> PhasePolyOperator:
    """Stack phase-free residuals into distinct phase slots.

    Each part only has k = 0 terms; shifting the i-th part to phase slot i
    keeps 'zero iff every part is zero' true for the combined residual.
    """
    out = PhasePolyOperator.zero()
    for i, p in enumerate(parts):
        out = out + phase_shift(p, i)
    return out


def _scaled_power_poly(N: int, s: Fraction) -> list[tuple[int, Fraction]]:
    """Coefficients of sum_m N!/(m!(N-2m)!) (s/2)^m (2x)^{N-2m} as (power, coeff).

    This is the full-Hermite closed form of the s-ordered identity written
    with rational data only: it equals (sqrt(-s/2))^N H_N(sqrt(-2/s) x),
    and at s = 0 collapses to (2x)^N.
    """
    out = []
    for m in range(N // 2 + 1):
        c = Fraction(math.factorial(N), math.factorial(m) * math.factorial(N - 2 * m))
        c *= (s / 2) ** m * 2 ** (N - 2 * m)
        out.append((N - 2 * m, c))
    return out


def _poly_of_quadrature(powers: list[tuple[int, Fraction]]) -> PhasePolyOperator:
    out = PhasePolyOperator.zero()
    for p, c in powers:
        out = out + quadrature_power(p) * c
    return out


def _check_main_equiv(k: int, n: int) -> IdentityReport:
    shift = k + 2 * n + 2
    res = phase_average(phase_shift(quadrature_power(k), shift))
    return IdentityReport(
        "MAIN_EQUIV",
        {"k": k, "n": n},
        res,
        res.is_zero(),
        notes="minus-sign phase is the adjoint of this residual",
    )


def _check_hermite_equiv(k: int, n: int) -> IdentityReport:
    shift = k + 2 * n + 2
    res = phase_average(phase_shift(hermite_of_quadrature(k), shift))
    return IdentityReport(
        "HERMITE_EQUIV",
        {"k": k, "n": n},
        res,
        res.is_zero(),
        notes="minus-sign phase is the adjoint of this residual",
    )


def _check_trunc_hermite(l: int, n: int, kappa=Fraction(1)) -> IdentityReport:
    """Truncated vs full Hermite polynomial of degree 2l + n under e^{i n phi}.

    The difference D is a sum of terms x^j e^{i n phi} with n - j >= 2 even;
    each is a null estimator, so the phase average of D times any phase
    rotation e^{i q phi} with even q >= 0 (which maps null terms to null
    terms) must vanish identically.
    """
    kappa = _as_fraction(kappa)
    N = 2 * l + n
    diff = PhasePolyOperator.zero()
    for m in range(l + 1, N // 2 + 1):
        c = Fraction((-1) ** m * math.factorial(N),
                     math.factorial(m) * math.factorial(N - 2 * m))
        c *= (2 * kappa) ** (N - 2 * m)
        diff = diff + quadrature_power(N - 2 * m) * c
    diff = phase_shift(diff, n)
    parts = [phase_average(phase_shift(diff, q)) for q in range(0, 10, 2)]
    res = _pack(parts)
    return IdentityReport(
        "TRUNC_HERMITE",
        {"l": l, "n": n, "kappa": kappa},
        res,
        res.is_zero(),
        notes="checked against even nonnegative phase rotations of the quorum",
    )


def _check_richter(n: int, m: int) -> IdentityReport:
    lhs = PhasePolyOperator.monomial(n, m)
    rhs = phase_average(phase_shift(hermite_of_quadrature(n + m), m - n))
    rhs = rhs * Fraction(1, math.comb(n + m, n))
    res = lhs - rhs
    return IdentityReport("RICHTER", {"n": n, "m": m}, res, res.is_zero())


def _check_symm(n: int, m: int) -> IdentityReport:
    lhs = reorder(PhasePolyOperator.monomial(n, m), SYMMETRIC, NORMAL)
    rhs = phase_average(phase_shift(quadrature_power(n + m), m - n))
    rhs = rhs * Fraction(2 ** (n + m), math.comb(n + m, m))
    res = lhs - rhs
    return IdentityReport(
        "SYMM",
        {"n": n, "m": m},
        res,
        res.is_zero(),
        notes="total quadrature power read as n+m (the n+k in the source "
        "display is inconsistent with its own first line)",
    )


def _check_s_order(k: int, l: int, s) -> IdentityReport:
    s = _as_fraction(s)
    lhs = reorder(PhasePolyOperator.monomial(k, l), OrderingTag(s), NORMAL)
    integrand = _poly_of_quadrature(_scaled_power_poly(k + l, s))
    rhs = phase_average(phase_shift(integrand, l - k))
    rhs = rhs * Fraction(1, math.comb(k + l, k))
    res = lhs - rhs
    return IdentityReport(
        "S_ORDER",
        {"k": k, "l": l, "s": s},
        res,
        res.is_zero(),
        notes="closed form taken with the -s Hermite convention, the one "
        "consistent with the binomial derivation and with RICHTER at s=-1; "
        "the two-index truncated polynomial is read as truncation at "
        "min(k,l), which the full polynomial subsumes modulo null terms",
    )


def _check_mu_nu(n: int) -> IdentityReport:
    # coefficient of mu^l nu^{n-l} on both sides, exact for all mu, nu
    parts = []
    for l in range(n + 1):
        lhs = reorder(
            PhasePolyOperator.monomial(n - l, l), SYMMETRIC, NORMAL
        ) * Fraction(math.comb(n, l))
        rhs = phase_average(
            phase_shift(quadrature_power(n) * Fraction(2 ** n), 2 * l - n)
        )
        parts.append(lhs - rhs)
    res = _pack(parts)
    return IdentityReport(
        "MU_NU",
        {"n": n},
        res,
        res.is_zero(),
        notes="verified coefficient-wise in mu^l nu^{n-l}, all l",
    )


def _check_resample(n: int, phi0=None) -> IdentityReport:
    """X_{phi0}^n = avg_phi X_phi^n sin[(phi-phi0)(n+1)]/sin(phi-phi0).

    The Dirichlet kernel expands as sum_l e^{i(2l-n)(phi-phi0)}; collecting
    the reconstruction by powers of e^{i phi0} must reproduce the phase
    decomposition of X^n exactly, for every phi0 at once.
    """
    lhs: dict[int, PhasePolyOperator] = {}
    for (a, b, k), c in quadrature_power(n).terms.items():
        lhs.setdefault(k, PhasePolyOperator.zero())
        lhs[k] = lhs[k] + PhasePolyOperator.monomial(a, b, 0, c)
    rhs: dict[int, PhasePolyOperator] = {}
    xn = quadrature_power(n)
    for l in range(n + 1):
        avg = phase_average(phase_shift(xn, 2 * l - n))
        j = n - 2 * l  # phase picked up in phi0
        rhs.setdefault(j, PhasePolyOperator.zero())
        rhs[j] = rhs[j] + avg
    res = PhasePolyOperator.zero()
    for j in set(lhs) | set(rhs):
        d = lhs.get(j, PhasePolyOperator.zero()) - rhs.get(j, PhasePolyOperator.zero())
        res = res + phase_shift(d, j)
    return IdentityReport(
        "RESAMPLE",
        {"n": n},
        res,
        res.is_zero(),
        notes="verified symbolically in phi0 (phase slots of the residual "
        "are powers of e^{i phi0})",
    )


def _over_pi(A: PhasePolyOperator) -> PhasePolyOperator:
    """Multiply every coefficient by 1/pi (moving q into the 1/pi slot)."""
    out = {}
    for key, c in A.terms.items():
        if not c.r.is_zero():
            raise ArithmeticError("1/pi of a 1/pi coefficient needs 1/pi^2")
        out[key] = Coefficient.over_pi(c.q)
    return PhasePolyOperator(out)


def _check_poisson(kind: str, k: int) -> IdentityReport:
    """Dirac-comb identities for f(u) = u^k, even and odd branch.

    Left side: x^{2k} delta_pi(phi) (even) or x^{2k+1} e^{i phi}
    delta_pi(phi) (odd), evaluated through the truncated comb expansion
    delta_pi = (1/pi) sum_n eps^{|n|} e^{2 i n phi} and exact phase
    averages (terms beyond the polynomial band cannot match and drop).

    Right side, from the epsilon-regularized decomposition: two geometric
    tails whose phases all miss the polynomial band (averaged, they must
    be exactly zero) plus the concentrated kernel kappa_eps, which
    integrates against e^{2 i n phi} to eps^{|n|} -> 1 for every n.  That
    symmetric limit is forced: the one-sided step-function value sometimes
    quoted for this integral would break the identity for every k >= 1 and
    contradicts the comb expansion it came from.
    """
    kind = kind.upper()
    if kind not in ("EVEN", "ODD"):
        raise UnknownIdentityError(f"POISSON kind must be EVEN or ODD, got {kind}")
    if kind == "EVEN":
        P = quadrature_power(2 * k)
        phase0 = 0
    else:
        P = quadrature_power(2 * k + 1)
        phase0 = 1  # the e^{i phi} factor of the odd branch

    # left side: comb expansion, truncated two units beyond the band
    band = k + 2
    lhs = PhasePolyOperator.zero()
    for n in range(-band, band + 1):
        lhs = lhs + phase_average(phase_shift(P, phase0 + 2 * n))
    lhs = _over_pi(lhs)

    # right side: geometric tails (must average to exact zero).  The odd
    # branch has an asymmetric comb band, so its minus tail starts one
    # power higher.
    J = 2 * k + 4
    start_plus = k + 1
    start_minus = k + 1 if kind == "EVEN" else k + 2
    tail_plus = PhasePolyOperator.zero()
    tail_minus = PhasePolyOperator.zero()
    for j in range(J + 1):
        tail_plus = tail_plus - phase_average(
            phase_shift(P, phase0 + 2 * (start_plus + j))
        )
        tail_minus = tail_minus - phase_average(
            phase_shift(P, phase0 - 2 * (start_minus + j))
        )
    # ... plus the kappa term: every phase picked up with weight 1
    rhs = fold_phases(phase_shift(P, phase0))

    res = (lhs - rhs) + _pack([tail_plus, tail_minus])
    return IdentityReport(
        "POISSON",
        {"kind": kind, "k": k},
        res,
        res.is_zero(),
        notes="kappa integral taken in its symmetric limit (=1 for all "
        "Fourier indices); geometric tails checked to average to exact zero",
    )


def _check_displacement_series(alpha, order: int, tol: float = 1e-10) -> IdentityReport:
    """Partial sums of the displacement estimator series.

    Exact part: the double series sum z^h w^j / (h+j)! with z = 2 alpha
    e^{-i phi} X, w = -2 conj(alpha) e^{i phi} X equals, total degree by
    total degree, the regularized comb derivation's rearrangement.  Both
    are built as exact operators and subtracted.

    Numeric part: the scalar partial sum is compared with the closed form
    (z e^z + z* e^{-z*})/(z + z*) on a grid; the truncation remainder must
    stay below ``tol``.
    """
    alpha = _as_crational(alpha)
    alpha_c = alpha.conjugate()
    # direct double series, total degree N = h + j <= order
    direct = PhasePolyOperator.zero()
    for N in range(order + 1):
        inv = Fraction(1, math.factorial(N))
        pw = quadrature_power(N) * Fraction(2 ** N)
        for h in range(N + 1):
            j = N - h
            coeff = (alpha ** h) * ((-alpha_c) ** j) * inv
            direct = direct + phase_shift(pw, j - h) * coeff
    # comb-derivation rearrangement: sum over (n, j) with degree n + 2j
    comb_form = PhasePolyOperator.zero()
    for n in range(order + 1):
        for j in range((order - n) // 2 + 1):
            N = n + 2 * j
            base = quadrature_power(N) * Fraction(2 ** N, math.factorial(N))
            plus = ((-alpha_c) ** (n + j)) * (alpha ** j)
            minus = ((-alpha_c) ** j) * (alpha ** (n + j))
            if n == 0:
                # e^{+i0} and e^{-i0} coincide and the delta subtracts one copy
                term = base * plus
            else:
                term = phase_shift(base, n) * plus + phase_shift(base, -n) * minus
            comb_form = comb_form + term
    res = direct - comb_form

    # numeric agreement with the closed form on a grid
    import numpy as np

    a = alpha.to_complex()
    xs = np.linspace(-3.0, 3.0, 25)
    phis = np.linspace(0.0, math.pi, 9, endpoint=False)
    dev = 0.0
    for phi in phis:
        z = 2.0 * xs * a * np.exp(-1j * phi)
        w = -2.0 * xs * np.conj(a) * np.exp(1j * phi)
        total = np.zeros_like(z)
        term_pow = {}
        for N in range(order + 1):
            s = np.zeros_like(z)
            for h in range(N + 1):
                s = s + z ** h * w ** (N - h)
            total += s / math.factorial(N)
        den = z - w
        closed = np.where(
            np.abs(den) > 1e-12 * (1 + np.abs(z)),
            (z * np.exp(z) - w * np.exp(w)) / np.where(den == 0, 1, den),
            np.exp(z) * (1 + z),
        )
        dev = max(dev, float(np.max(np.abs(total - closed))))
    passed = res.is_zero() and dev < tol
    return IdentityReport(
        "DISPLACEMENT_SERIES",
        {"alpha": alpha, "order": order},
        res,
        passed,
        notes="exact residual is series-vs-rearrangement; numeric deviation "
        "is partial sum vs closed form",
        numeric_deviation=dev,
    )


_CHECKERS = {
    "MAIN_EQUIV": _check_main_equiv,
    "HERMITE_EQUIV": _check_hermite_equiv,
    "TRUNC_HERMITE": _check_trunc_hermite,
    "RICHTER": _check_richter,
    "SYMM": _check_symm,
    "S_ORDER": _check_s_order,
    "MU_NU": _check_mu_nu,
    "RESAMPLE": _check_resample,
    "POISSON": _check_poisson,
    "DISPLACEMENT_SERIES": _check_displacement_series,
}

IDENTITY_IDS = tuple(sorted(_CHECKERS))


def verify_identity(identity: str, degree_budget: int = DEFAULT_DEGREE_BUDGET,
                    **params) -> IdentityReport:
    """Run one exact identity check and return its report.

    Raises UnknownIdentityError for an unknown id and DegreeBudgetError when
    the requested parameters need operators beyond the degree budget.
    """
    identity = identity.upper()
    try:
        checker = _CHECKERS[identity]
    except KeyError:
        raise UnknownIdentityError(f"unknown identity id {identity!r}") from None
    degree = _required_degree(identity, params)
    if degree > degree_budget:
        raise DegreeBudgetError(
            f"{identity} with {params} needs degree {degree} "
            f"> budget {degree_budget}"
        )
    return checker(**params)


def _required_degree(identity: str, params: dict) -> int:
    if identity in ("MAIN_EQUIV", "HERMITE_EQUIV"):
        return params.get("k", 0)
    if identity == "TRUNC_HERMITE":
        return 2 * params.get("l", 0) + params.get("n", 0)
    if identity in ("RICHTER", "SYMM"):
        return params.get("n", 0) + params.get("m", 0)
    if identity == "S_ORDER":
        return params.get("k", 0) + params.get("l", 0)
    if identity == "MU_NU":
        return params.get("n", 0)
    if identity == "RESAMPLE":
        return params.get("n", 0)
    if identity == "POISSON":
        return 2 * params.get("k", 0) + 1
    if identity == "DISPLACEMENT_SERIES":
        return params.get("order", 0)
    return 0


def identity_suite(
    max_equiv: int = 8,
    max_richter: int = 10,
    max_symm: int = 8,
    max_s_order: int = 8,
    max_trunc: int = 4,
    max_mu_nu: int = 8,
    max_resample: int = 6,
    max_poisson: int = 5,
    degree_budget: int = DEFAULT_DEGREE_BUDGET,
) -> list[IdentityReport]:
    """The full exact-identity matrix at the given parameter ranges."""
    reports = []
    for k in range(max_equiv + 1):
        for n in range(max_equiv + 1):
            reports.append(verify_identity("MAIN_EQUIV", degree_budget, k=k, n=n))
            reports.append(verify_identity("HERMITE_EQUIV", degree_budget, k=k, n=n))
    for n in range(max_richter + 1):
        for m in range(max_richter + 1 - n):
            reports.append(verify_identity("RICHTER", degree_budget, n=n, m=m))
    for n in range(max_symm + 1):
        for m in range(max_symm + 1 - n):
            reports.append(verify_identity("SYMM", degree_budget, n=n, m=m))
    for k in range(max_s_order + 1):
        for l in range(max_s_order + 1 - k):
            for s in (-1, 0, 1):
                reports.append(
                    verify_identity("S_ORDER", degree_budget, k=k, l=l, s=Fraction(s))
                )
    for l in range(max_trunc + 1):
        for n in range(max_trunc + 1):
            reports.append(verify_identity("TRUNC_HERMITE", degree_budget, l=l, n=n))
    for n in range(max_mu_nu + 1):
        reports.append(verify_identity("MU_NU", degree_budget, n=n))
    for n in range(max_resample + 1):
        reports.append(verify_identity("RESAMPLE", degree_budget, n=n))
    for k in range(max_poisson + 1):
        for kind in ("EVEN", "ODD"):
            reports.append(verify_identity("POISSON", degree_budget, kind=kind, k=k))
    return reports
