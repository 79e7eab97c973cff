"""Closed-form densities of primes p = a (mod f) with g as a primitive root.

Every density is returned as an exact rational multiple of Artin's constant
``A = prod_p (1 - 1/(p(p-1)))``; floats are only produced at the boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import (
    DomainError,
    format_rational,
    jacobi_extended,
    kronecker,
    mobius,
    euler_phi,
    odd_part,
    prime_divisors,
    require_in_g,
)


@dataclass(frozen=True)
class ArtinConstant:
    value: Decimal
    source: str

    def __float__(self) -> float:
        return float(self.value)


ARTIN = ArtinConstant(Decimal("0.373955813619202288054728"), "printed value, 24 places")
A = float(ARTIN)


def times_artin(coeff: Fraction) -> float:
    """coeff * A evaluated in decimal before rounding to a float."""
    return float(_times_artin_decimal(coeff))


def _times_artin_decimal(coeff: Fraction) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 40
        return Decimal(coeff.numerator) * ARTIN.value / Decimal(coeff.denominator)


def format_decimal(coeff: Fraction, digits: int = 12) -> str:
    d = _times_artin_decimal(coeff)
    return format(d, f".{digits}g") if d else "0"


# ---------------------------------------------------------------------------

def check_progression(a: int, f: int) -> None:
    if f < 1 or not 1 <= a <= f:
        raise DomainError(f"need 1 <= a <= f, got a={a}, f={f}")
    if math.gcd(a, f) != 1:
        raise DomainError(f"a={a} is not coprime to f={f}")


def residues(f: int) -> list[int]:
    """The a in [1, f] coprime to f."""
    return [a for a in range(1, f + 1) if math.gcd(a, f) == 1]


@lru_cache(maxsize=8192)
def _euler_factor(f: int, h: int) -> Fraction:
    """prod_{p|h, p∤f} (1 - 1/(p-1)) / prod_{p | fh} (1 - 1/(p(p-1)))."""
    c = Fraction(1)
    for p in prime_divisors(f * h):
        if h % p == 0 and f % p:
            c *= Fraction(p - 2, p - 1)
        c /= Fraction(p * (p - 1) - 1, p * (p - 1))
    return c


def artin_coefficient(a: int, f: int, h: int) -> Fraction:
    """A(a, f, h) / A as an exact rational.

    Dividing the infinite product by A leaves finitely many local factors,
    one for every prime dividing f*h.
    """
    check_progression(a, f)
    if h < 1 or h % 2 == 0:
        raise DomainError(f"h must be a positive odd integer, got {h}")
    if math.gcd(math.gcd(a - 1, f), h) > 1:
        return Fraction(0)
    c = _euler_factor(f, h)
    for p in prime_divisors(math.gcd(a - 1, f)):
        c *= Fraction(p - 1, p)
    return c


def _local_product(m: int, h: int) -> int:
    """prod_{p | m, p | h} (p - 2) * prod_{p | m, p ∤ h} (p^2 - p - 1)."""
    out = 1
    for p in prime_divisors(m):
        out *= p - 2 if h % p == 0 else p * p - p - 1
    return out


class BranchCase(str, enum.Enum):
    B_ODD = "b_odd"
    B_EVEN = "b_even"


@dataclass(frozen=True)
class Branch:
    b: int
    gamma: int | None
    case: BranchCase
    correction_sign: int
    beta: int | None = None


@dataclass(frozen=True)
class DensityResult:
    a: int
    f: int
    g: Fraction
    coeff: Fraction
    branch: Branch
    value: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", times_artin(self.coeff))

    @property
    def vanishes(self) -> bool:
        return self.coeff == 0

    def to_dict(self) -> dict:
        d = {
            "coeff": format_rational(self.coeff),
            "value": format_decimal(self.coeff),
            "b": self.branch.b,
            "gamma": self.branch.gamma,
            "case": self.branch.case.value,
            "correction_sign": self.branch.correction_sign,
            "vanishes": self.vanishes,
        }
        if self.branch.beta is not None:
            d["beta"] = self.branch.beta
        return d


def _sign(q: Fraction | int) -> int:
    return (q > 0) - (q < 0)


def b_and_gamma(f: int, delta: int) -> tuple[int, int | None]:
    """b = delta/(f, delta) (signed) and gamma when b is odd."""
    d = math.gcd(f, delta)
    b = delta // d
    if b % 2 == 0:
        return b, None
    sign = -1 if ((b - 1) // 2) % 2 else 1
    return b, sign * d


def delta_closed(a: int, f: int, g) -> DensityResult:
    """Density via the Kronecker-symbol closed form."""
    inv = require_in_g(g)
    check_progression(a, f)
    base = artin_coefficient(a, f, inv.h) / euler_phi(f)
    b, gamma = b_and_gamma(f, inv.delta)
    if gamma is None:
        branch = Branch(b, None, BranchCase.B_EVEN, 0)
        return DensityResult(a, f, inv.g, base, branch)
    # mu(2|b|) = -mu(|b|) for odd b
    corr = Fraction(kronecker(gamma, a) * -mobius(abs(b)), _local_product(b, inv.h))
    branch = Branch(b, gamma, BranchCase.B_ODD, _sign(corr) if base else 0)
    return DensityResult(a, f, inv.g, base * (1 + corr), branch)


def correction_active(g1: int, f: int) -> bool:
    r = g1 % 4
    return r == 1 or (r == 2 and f % 8 == 0) or (r == 3 and f % 4 == 0)


def delta_jacobi_form(a: int, f: int, g) -> DensityResult:
    """Density via the Jacobi-symbol form, phrased in terms of g1."""
    inv = require_in_g(g)
    check_progression(a, f)
    base = artin_coefficient(a, f, inv.h) / euler_phi(f)
    b = inv.delta // math.gcd(f, inv.delta)
    if not correction_active(inv.g1, f):
        branch = Branch(b, None, BranchCase.B_EVEN, 0)
        return DensityResult(a, f, inv.g, base, branch)
    d = math.gcd(inv.g1, f)
    beta = inv.g1 // d
    g1_odd, a_odd = odd_part(inv.g1), odd_part(a)
    sign = -1 if ((g1_odd - 1) // 2 * ((a_odd - 1) // 2)) % 2 else 1
    term = Fraction(jacobi_extended(a, d) * sign * mobius(abs(beta)), _local_product(beta, inv.h))
    corr = -term
    branch = Branch(b, None, BranchCase.B_ODD, _sign(corr) if base else 0, beta)
    return DensityResult(a, f, inv.g, base * (1 + corr), branch)


# ---------------------------------------------------------------------------

class Vanishing(str, enum.Enum):
    NONE = "none"
    POWER = "power_obstruction"
    QUADRATIC = "quadratic_obstruction"
    CUBIC = "cubic_obstruction"


def vanishing_criterion(a: int, f: int, g) -> tuple[bool, Vanishing]:
    """Decide whether the density is zero from the three obstructions directly."""
    inv = require_in_g(g)
    check_progression(a, f)
    h, delta = inv.h, inv.delta
    if math.gcd(math.gcd(a - 1, f), h) > 1:
        return True, Vanishing.POWER
    if f % delta == 0 and kronecker(delta, a) == 1:
        return True, Vanishing.QUADRATIC
    if (3 * f) % delta == 0 and delta % 3 == 0 and h % 3 == 0:
        if kronecker(-delta // 3, a) == -1:
            return True, Vanishing.CUBIC
    return False, Vanishing.NONE


# ---------------------------------------------------------------------------
# weak uniform distribution

def is_wud(f: int, g) -> bool:
    """True when every reduced class mod f receives the same density."""
    require_in_g(g)
    if f < 1:
        raise DomainError(f"f must be positive, got {f}")
    coeffs = {delta_closed(a, f, g).coeff for a in residues(f)}
    return len(coeffs) == 1


@dataclass(frozen=True)
class WudSet:
    """A set of moduli: either a finite set or all products of given primes."""

    finite: frozenset[int] | None = None
    generators: tuple[int, ...] = ()
    description: str = ""

    def __contains__(self, f: object) -> bool:
        if not isinstance(f, int) or f < 1:
            return False
        if self.finite is not None:
            return f in self.finite
        for p in self.generators:
            while f % p == 0:
                f //= p
        return f == 1

    def __str__(self) -> str:
        return self.description


def wud_set(g) -> WudSet:
    """The moduli f for which the primes with primitive root g are WUD mod f."""
    inv = require_in_g(g)
    if inv.g1 == 21 and math.gcd(inv.h, 21) == 7:
        return WudSet(None, (2, 3), "{2^n 3^m : n, m >= 0}")
    r = inv.g1 % 4
    if r == 1:
        return WudSet(None, (2,), "{2^n : n >= 0}")
    if r == 2:
        return WudSet(frozenset({1, 2, 4}), (), "{1, 2, 4}")
    return WudSet(frozenset({1, 2}), (), "{1, 2}")


# ---------------------------------------------------------------------------

def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def artin_constant_partial(P: int) -> tuple[float, float]:
    """Truncated Euler product over p <= P and a bound on its distance to A.

    For 0 < x <= 1/2, -log(1 - x) <= 2x, so the omitted factors multiply to at
    least exp(-2 * sum_{n > P} 1/(n(n-1))) = exp(-2/P).  Since the partial
    product is below 1, it exceeds A by at most 1 - exp(-2/P) <= 2/P.
    """
    if P < 2:
        raise DomainError(f"cutoff must be >= 2, got {P}")
    p = primes_upto(P).astype(np.float64)
    logs = np.log1p(-1.0 / (p * (p - 1.0)))
    return math.exp(math.fsum(logs.tolist())), 2.0 / P


def artin_constant_partial_exact(P: int) -> Fraction:
    """Exact rational truncated product; only sensible for small P."""
    out = Fraction(1)
    for p in primes_upto(P).tolist():
        out *= Fraction(p * (p - 1) - 1, p * (p - 1))
    return out
