import math
import random
from fractions import Fraction

import pytest

from artindensity.arith import DomainError, compute_g_invariants, euler_phi, is_prime, mobius
from artindensity.density import A, delta_closed, residues, times_artin
from artindensity.lenstra import (
    c_a,
    degree_nkr,
    delta_truncated,
    lenstra_term,
    s2_closed,
    s_closed,
    s_truncated,
    tail_bound,
    w,
)

SWEEP_G = [2, 3, 5, 6, -2, -3, -7, 8, 12, 27, 1801088541]


def test_w_examples():
    assert w(1, 28, 1) == 1
    assert w(3, 28, 1) == 6
    assert w(2, 28, 1) == 2


def test_w_multiplicative():
    for f, h in [(1, 1), (28, 1), (12, 5), (30, 7), (9, 3)]:
        for k1 in range(1, 201):
            for k2 in range(1, 201 // k1 + 1):
                if math.gcd(k1, k2) == 1:
                    assert w(k1 * k2, f, h) == w(k1, f, h) * w(k2, f, h)


def test_w_prime_cases():
    pairs = [(f, compute_g_invariants(g).h) for g in SWEEP_G for f in (1, 3, 7, 12, 21, 28, 60)]
    for f, h in pairs:
        for p in (q for q in range(2, 101) if is_prime(q)):
            if p == 2:
                assert w(2, f, h) == 2
            elif h % p and f % p:
                assert w(p, f, h) == p * (p - 1)
            elif h % p:
                assert w(p, f, h) == p
            elif f % p:
                assert w(p, f, h) == p - 1
            else:
                assert w(p, f, h) == 1


def test_degree_examples():
    assert degree_nkr(2, 8, 2) == 4
    assert degree_nkr(2, 4, 2) == 4
    assert degree_nkr(3, 3, 8) == 2
    with pytest.raises(DomainError):
        degree_nkr(2, 3, 2)
    with pytest.raises(DomainError):
        degree_nkr(4, 8, 2)


def test_c_a_examples():
    for g in (2, 5, -3):
        for f in (1, 8, 15):
            for a in residues(f):
                assert c_a(1, a, f, g) == 1
    assert c_a(2, 7, 8, 2) == 1
    assert c_a(2, 3, 8, 2) == 0
    with pytest.raises(DomainError):
        c_a(4, 1, 8, 2)


def test_c_a_depends_on_gcd_and_flags():
    for g in (2, 5, -7, 12):
        delta = abs(compute_g_invariants(g).delta)
        for f in (8, 12, 15, 28):
            for a in residues(f):
                seen = {}
                for n in range(1, 400):
                    if mobius(n) == 0:
                        continue
                    lcm = f * n // math.gcd(f, n)
                    key = (math.gcd(f, n), n % 2 == 0, n % delta == 0, lcm % delta == 0)
                    seen.setdefault(key, c_a(n, a, f, g))
                    assert seen[key] == c_a(n, a, f, g)


def test_vectorised_series_matches_exact_terms():
    for a, f, g in [(3, 28, 2), (7, 8, 2), (2, 15, -7), (5, 12, 1801088541), (1, 3, 8)]:
        exact, _ = delta_truncated(a, f, g, N=400, exact=True)
        fast, _ = delta_truncated(a, f, g, N=400)
        assert isinstance(exact, Fraction)
        assert fast == pytest.approx(float(exact), abs=1e-15)


def test_first_terms_by_hand():
    # g = 2, f = 1: n = 1 -> 1, n = 2 -> -1/2, n = 3 -> -1/6
    assert lenstra_term(1, 1, 1, 2) == 1
    assert lenstra_term(2, 1, 1, 2) == Fraction(-1, 2)
    assert lenstra_term(3, 1, 1, 2) == Fraction(-1, 6)
    assert lenstra_term(4, 1, 1, 2) == 0


@pytest.mark.parametrize("a, f, g, coeff", [
    (1, 1, 2, Fraction(1)),
    (3, 28, 2, Fraction(7, 82)),
    (1, 3, 8, Fraction(0)),
])
def test_truncated_examples(a, f, g, coeff):
    value, bound = delta_truncated(a, f, g, N=10**4)
    assert abs(value - times_artin(coeff)) <= bound


def test_truncated_converges_to_twenty_nineteenths():
    value, bound = delta_truncated(1, 1, 5, N=10**4)
    assert abs(value - 20 / 19 * A) <= bound


def test_tail_bound_formula():
    assert tail_bound(10**6, 1) == pytest.approx(0.004)
    assert tail_bound(10**6, 7) == pytest.approx(0.028)
    with pytest.raises(DomainError):
        delta_truncated(1, 1, 2, N=5)


def test_tail_bound_dominates_term_sizes():
    # |term| <= 2h / (n phi(n)) and phi(n) >= sqrt(n) past 6
    for g in (2, 8, 1801088541):
        h = compute_g_invariants(g).h
        for n in range(1, 500):
            if mobius(n):
                t = abs(lenstra_term(n, 1, 12, g))
                assert t <= Fraction(2 * h, n * euler_phi(n))
                if n > 6:
                    assert euler_phi(n) ** 2 >= n


def test_oracle_agreement_sample():
    rng = random.Random(7)
    triples = [(a, f, g) for g in SWEEP_G for f in range(1, 61) for a in residues(f)]
    for a, f, g in rng.sample(triples, 40):
        value, bound = delta_truncated(a, f, g, N=10**5)
        assert abs(value - delta_closed(a, f, g).value) <= bound


def test_s_closed_examples():
    assert s_closed(8, 1, 1, 1) == 0
    assert s_closed(5, 1, 1, 1) == Fraction(-1, 19)
    assert w(5, 1, 1) == 20


def test_s2_is_minus_s_and_truncation():
    for g in SWEEP_G:
        inv = compute_g_invariants(g)
        for f in (1, 4, 5, 8, 12, 15):
            b = inv.delta // math.gcd(f, inv.delta)
            for a in residues(f)[:3]:
                s = s_closed(b, a, f, inv.h)
                assert s2_closed(b, a, f, inv.h) == -s
                total, bound = s_truncated(a, f, g, N=10**5)
                even, _ = s_truncated(a, f, g, N=10**5, even_only=True)
                assert abs(total - float(s) * A) <= bound
                assert abs(even + float(s) * A) <= bound
