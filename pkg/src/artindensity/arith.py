"""Exact integer and rational arithmetic used throughout the package.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator, zero is ``0/1``).  Factorization is deterministic: trial division
by the primes below 10**6, then Miller-Rabin with a fixed witness set and
Brent's variant of Pollard rho.  Inputs are limited to ``|n| < 2**64``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

Rational = Fraction

MAX_FACTOR = 2**64
TRIAL_LIMIT = 10**6

# Deterministic for n < 3.3e24, which covers the 64-bit bound.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"7"``, ``"-8"`` or ``"8/9"`` into a reduced Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# primality and factorization

@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (TRIAL_LIMIT + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(TRIAL_LIMIT) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, TRIAL_LIMIT + 1, p)))
    return tuple(i for i, v in enumerate(sieve) if v)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n (deterministic)."""
    for c in range(1, 200):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")  # pragma: no cover


def _factor_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _factor_large(r, out)
        _factor_large(r, out)
        return
    d = _brent(n)
    _factor_large(d, out)
    _factor_large(n // d, out)


def _wheel(limit: int):
    yield from (p for p in (2, 3, 5) if p <= limit)
    for k in range(7, limit + 1, 30):
        for d in (0, 4, 6, 10, 12, 16, 22, 24):
            if k + d <= limit:
                yield k + d


def _trial_divide(m: int, candidates, out: dict[int, int]) -> int:
    for p in candidates:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = out.get(p, 0) + e
    return m


@dataclass(frozen=True)
class FactorMap:
    """Prime factorization ``sign * prod(p**e)`` with primes increasing."""

    factors: tuple[tuple[int, int], ...]
    sign: int = 1

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def value(self) -> int:
        return self.sign * math.prod(p**e for p, e in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __str__(self) -> str:
        body = " ".join(f"{p}^{e}" for p, e in self.factors)
        return ("-" if self.sign < 0 else "") + (body or "1")


@lru_cache(maxsize=4096)
def factorize(n: int) -> FactorMap:
    """Factor a nonzero integer with ``|n| < 2**64``.

    >>> str(factorize(28))
    '2^2 7^1'
    """
    if n == 0:
        raise DomainError("cannot factor 0")
    sign = -1 if n < 0 else 1
    m = abs(n)
    if m >= MAX_FACTOR:
        raise DomainError(f"|n| = {m} exceeds the 64-bit factorization bound")
    out: dict[int, int] = {}
    m = _trial_divide(m, _wheel(min(math.isqrt(m), 1000)), out)
    # the full table is only needed for cofactors that are not yet prime
    if m > 10**6 and not is_prime(m):
        m = _trial_divide(m, _small_primes(), out)
    if m > 1:
        if m <= TRIAL_LIMIT**2:
            out[m] = out.get(m, 0) + 1
        else:
            _factor_large(m, out)
    return FactorMap(tuple(sorted(out.items())), sign)


def prime_divisors(n: int) -> tuple[int, ...]:
    """Distinct primes dividing ``|n|`` (empty for n = +-1)."""
    return factorize(n).primes


# ---------------------------------------------------------------------------
# multiplicative functions

def mobius(n: int) -> int:
    if n < 1:
        raise DomainError(f"mobius undefined for {n}")
    fm = factorize(n)
    if any(e > 1 for _, e in fm.factors):
        return 0
    return -1 if len(fm.factors) % 2 else 1


def euler_phi(n: int) -> int:
    if n < 1:
        raise DomainError(f"euler_phi undefined for {n}")
    result = n
    for p in prime_divisors(n):
        result = result // p * (p - 1)
    return result


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factorize(n).factors)


def odd_part(m: int) -> int:
    """``m / 2**v`` with the sign of m kept."""
    if m == 0:
        raise DomainError("odd part of 0 is undefined")
    while m % 2 == 0:
        m //= 2
    return m


# ---------------------------------------------------------------------------
# rational invariants of g

def squarefree_decompose(g: Fraction | int) -> tuple[int, Fraction]:
    """Write ``g = g1 * g2**2`` with g1 a squarefree integer carrying the sign."""
    g = Fraction(g)
    if g == 0:
        raise DomainError("g = 0 has no squarefree decomposition")
    g1 = -1 if g < 0 else 1
    g2 = Fraction(1)
    for part, direction in ((g.numerator, 1), (g.denominator, -1)):
        for p, e in factorize(abs(part)).factors:
            if e % 2:
                g1 *= p
            # a prime with odd exponent in the denominator moves into g1
            # by borrowing one extra power into g2
            k = e // 2 if direction > 0 or e % 2 == 0 else (e + 1) // 2
            g2 *= Fraction(p) ** (k * direction)
    assert g1 * g2 * g2 == g
    return g1, g2


def power_index(g: Fraction | int) -> int:
    """Largest h such that g is an h-th power of a rational."""
    g = Fraction(g)
    if g in (0, 1, -1):
        raise DomainError(f"power index of {g} is undefined")
    h = 0
    for part in (g.numerator, g.denominator):
        for _, e in factorize(abs(part)).factors:
            h = math.gcd(h, e)
    if g < 0:
        h = odd_part(h)
    return h


class GClass(enum.Enum):
    ZERO = "zero"
    PLUS_ONE = "+1"
    MINUS_ONE = "-1"
    PERFECT_SQUARE = "perfect square"
    IN_G = "in G"


_CLASS_REASON = {
    GClass.ZERO: "g is zero (not in G)",
    GClass.PLUS_ONE: "g is +1, a perfect square (not in G)",
    GClass.MINUS_ONE: "g is -1 (not in G)",
    GClass.PERFECT_SQUARE: "g is a perfect square (not in G)",
}


def classify(g: Fraction | int) -> GClass:
    g = Fraction(g)
    if g == 0:
        return GClass.ZERO
    if g == 1:
        return GClass.PLUS_ONE
    if g == -1:
        return GClass.MINUS_ONE
    if g > 0 and all(_is_square(x) for x in (g.numerator, g.denominator)):
        return GClass.PERFECT_SQUARE
    return GClass.IN_G


def _is_square(n: int) -> bool:
    r = math.isqrt(n)
    return r * r == n


@dataclass(frozen=True)
class GInvariants:
    g: Fraction
    g_class: GClass
    h: int
    g1: int
    g2: Fraction
    delta: int


def discriminant(g1: int) -> int:
    """Discriminant of Q(sqrt(g1)) for squarefree g1."""
    return g1 if g1 % 4 == 1 else 4 * g1


@lru_cache(maxsize=256)
def compute_g_invariants(g: Fraction | int) -> GInvariants:
    g = Fraction(g)
    cls = classify(g)
    if cls is GClass.ZERO:
        raise DomainError(_CLASS_REASON[cls])
    g1, g2 = squarefree_decompose(g)
    # h is unbounded for +-1; report 1 and let the class carry the signal
    h = 1 if cls in (GClass.PLUS_ONE, GClass.MINUS_ONE) else power_index(g)
    return GInvariants(g, cls, h, g1, g2, discriminant(g1))


def require_in_g(g: Fraction | int) -> GInvariants:
    inv = compute_g_invariants(g)
    if inv.g_class is not GClass.IN_G:
        raise DomainError(_CLASS_REASON[inv.g_class])
    return inv


# ---------------------------------------------------------------------------
# quadratic symbols

def jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd positive m."""
    if m < 1 or m % 2 == 0:
        raise DomainError(f"Jacobi symbol needs odd positive modulus, got {m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def kronecker(c: int, d: int) -> int:
    """Kronecker symbol (c/d) for discriminant-shaped c and d >= 1.

    Perfect squares c are accepted and give the trivial character:
    1 when gcd(c, d) = 1 and 0 otherwise.
    """
    if c % 4 not in (0, 1):
        raise DomainError(f"Kronecker symbol needs c = 0 or 1 mod 4, got {c}")
    if d < 1:
        raise DomainError(f"Kronecker symbol needs d >= 1, got {d}")
    if math.gcd(c, d) != 1:
        return 0
    if c >= 0 and _is_square(c):
        return 1
    result = 1
    while d % 2 == 0:
        d //= 2
        # c is odd here since gcd(c, d) = 1; (c/2) = (2/|c|)
        if c % 8 in (3, 5):
            result = -result
    # (c/d) for odd d equals the Jacobi symbol of c mod d
    return result * jacobi(c, d)


def jacobi_extended(a: int, m: int) -> int:
    """Jacobi symbol extended to even m through (a/2) = (-1)**((a*a-1)/8)."""
    if m < 1:
        raise DomainError(f"modulus must be positive, got {m}")
    result = 1
    while m % 2 == 0:
        if a % 2 == 0:
            raise DomainError("(a/2) is only stipulated for odd a")
        m //= 2
        if ((a * a - 1) // 8) % 2:
            result = -result
    return result * jacobi(a, m)
