"""Independent check of the closed forms: the density as a truncated series.

The density equals

    sum_{n >= 1} mu(n) c_a(n) / [Q(zeta_f, zeta_n, g^(1/n)) : Q]

Field data never appears explicitly.  The degree of the compositum is
``degree_nkr(n, lcm(f, n))`` because Q(zeta_f, zeta_n) = Q(zeta_lcm(f, n)), and
the restriction test c_a(n) reduces to a congruence plus, in one exceptional
configuration, a Kronecker symbol.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import DomainError, euler_phi, is_squarefree, kronecker, mobius, prime_divisors, require_in_g
from .density import artin_coefficient, b_and_gamma, check_progression, times_artin


def w(k: int, f: int, h: int) -> int:
    """k * phi(lcm(k, f)) / ((k, h) * phi(f)); always an integer."""
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    num = k * euler_phi(k * f // math.gcd(k, f))
    den = math.gcd(k, h) * euler_phi(f)
    q, r = divmod(num, den)
    assert r == 0, (k, f, h)
    return q


def degree_nkr(k: int, r: int, g) -> int:
    """[Q(zeta_r, g^(1/k)) : Q] for squarefree k dividing r."""
    inv = require_in_g(g)
    if k < 1 or r % k or not is_squarefree(k):
        raise DomainError(f"need squarefree k dividing r, got k={k}, r={r}")
    deg = k // math.gcd(k, inv.h) * euler_phi(r)
    if k % 2 == 0 and r % abs(inv.delta) == 0:
        deg //= 2
    return deg


def _exceptional(n: int, f: int, delta: int) -> bool:
    # Q(zeta_f) meets Q(zeta_n, g^(1/n)) in more than Q(zeta_(f,n))
    lcm = f * n // math.gcd(f, n)
    return n % 2 == 0 and n % delta != 0 and lcm % delta == 0


def c_a(n: int, a: int, f: int, g) -> int:
    """1 if sigma_a fixes Q(zeta_f) ∩ Q(zeta_n, g^(1/n)) pointwise, else 0."""
    inv = require_in_g(g)
    check_progression(a, f)
    if n < 1 or not is_squarefree(n):
        raise DomainError(f"n must be squarefree and positive, got {n}")
    if (a - 1) % math.gcd(f, n):
        return 0
    _, gamma = b_and_gamma(f, inv.delta)
    if gamma is not None and _exceptional(n, f, abs(inv.delta)):
        return 1 if kronecker(gamma, a) == 1 else 0
    return 1


def lenstra_term(n: int, a: int, f: int, g) -> Fraction:
    """The n-th term mu(n) c_a(n) / degree as an exact rational."""
    mu = mobius(n)
    if mu == 0:
        return Fraction(0)
    lcm = f * n // math.gcd(f, n)
    return Fraction(mu * c_a(n, a, f, g), degree_nkr(n, lcm, g))


@lru_cache(maxsize=2)
def _tables(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Squarefree n <= N with mu(n) and phi(n); the full phi table too."""
    mu = np.ones(N + 1, dtype=np.int8)
    phi = np.arange(N + 1, dtype=np.int64)
    is_comp = np.zeros(N + 1, dtype=bool)
    for p in range(2, N + 1):
        if is_comp[p]:
            continue
        if p * p <= N:
            is_comp[p * p :: p] = True
            mu[p * p :: p * p] = 0
        mu[p::p] *= -1
        phi[p::p] -= phi[p::p] // p
    mu[0] = 0
    n = np.flatnonzero(mu).astype(np.int64)
    return n, mu[n].astype(np.int64), phi


def tail_bound(N: int, h: int) -> float:
    """Bound on the omitted part of the series beyond N.

    Each degree is at least (n/h) * phi(lcm(f, n)) / 2 >= n phi(n) / (2h), so
    |term| <= 2h / (n phi(n)).  For n > 6, phi(n) >= sqrt(n), hence
    |term| <= 2h n^(-3/2) and the tail is at most 2h * 2/sqrt(N) = 4h/sqrt(N).
    """
    return 4.0 * h / math.sqrt(N)


def delta_truncated(a: int, f: int, g, N: int = 10**6, exact: bool = False):
    """Sum the series over n <= N.

    Returns ``(value, tail_bound)``; value is a float unless ``exact`` is set,
    in which case it is a Fraction (slow, meant for small N).
    """
    inv = require_in_g(g)
    check_progression(a, f)
    if N < 7:
        raise DomainError(f"cutoff must be >= 7 for the tail bound, got {N}")
    bound = tail_bound(N, inv.h)
    if exact:
        total = sum((lenstra_term(n, a, f, g) for n in range(1, N + 1)), Fraction(0))
        return total, bound

    n, mu, phi = _tables(N)
    delta = abs(inv.delta)
    gcd_fn = np.gcd(n, f)
    lcm = n // gcd_fn * f
    keep = (a - 1) % gcd_fn == 0
    _, gamma = b_and_gamma(f, inv.delta)
    if gamma is not None and kronecker(gamma, a) != 1:
        exc = (n % 2 == 0) & (n % delta != 0) & (lcm % delta == 0)
        keep &= ~exc
    # phi(lcm) * phi(gcd) = phi(f) * phi(n)
    deg = (n // np.gcd(n, inv.h)) * (euler_phi(f) * phi[n] // phi[gcd_fn])
    halve = (n % 2 == 0) & (lcm % delta == 0)
    deg = np.where(halve, deg // 2, deg)
    terms = np.where(keep, mu / deg.astype(np.float64), 0.0)
    return math.fsum(terms.tolist()), bound


# ---------------------------------------------------------------------------
# the auxiliary sums S(b) and S_2(b)

def s_closed(b: int, a: int, f: int, h: int) -> Fraction:
    """S(b) / A: zero for even b, else mu(|b|) A(a,f,h) / prod_{p|b} (w(p) - 1)."""
    if b % 2 == 0:
        return Fraction(0)
    den = 1
    for p in prime_divisors(b):
        den *= w(p, f, h) - 1
    return mobius(abs(b)) * artin_coefficient(a, f, h) / den


def s2_closed(b: int, a: int, f: int, h: int) -> Fraction:
    return -s_closed(b, a, f, h)


def s_truncated(a: int, f: int, g, N: int = 10**5, even_only: bool = False) -> tuple[float, float]:
    """Direct partial sum of mu(n)/w(n) over n <= N with delta | lcm(n, f)
    and a = 1 mod (f, n); ``even_only`` restricts to even n (giving S_2).

    Terms are bounded by h phi(f) / (n phi(n)), so the tail is at most
    2 h phi(f) / sqrt(N) by the same argument as :func:`tail_bound`.
    """
    inv = require_in_g(g)
    check_progression(a, f)
    n, mu, phi = _tables(N)
    gcd_fn = np.gcd(n, f)
    lcm = n // gcd_fn * f
    keep = ((a - 1) % gcd_fn == 0) & (lcm % abs(inv.delta) == 0)
    if even_only:
        keep &= n % 2 == 0
    # w(n) = n phi(lcm) / ((n, h) phi(f)) = n phi(n) / ((n, h) phi(gcd))
    wn = n * phi[n] / (np.gcd(n, inv.h) * phi[gcd_fn]).astype(np.float64)
    terms = np.where(keep, mu / wn, 0.0)
    return math.fsum(terms.tolist()), 2.0 * inv.h * euler_phi(f) / math.sqrt(N)


def oracle_gap(a: int, f: int, g, coeff: Fraction, N: int = 10**6) -> tuple[float, float]:
    """|truncated series - coeff*A| together with the allowed tail."""
    value, bound = delta_truncated(a, f, g, N)
    return abs(value - times_artin(coeff)), bound
