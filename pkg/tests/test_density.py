import json
import math
from fractions import Fraction

import pytest

from artindensity.arith import DomainError, compute_g_invariants, kronecker
from artindensity.density import (
    A,
    ARTIN,
    Vanishing,
    artin_coefficient,
    artin_constant_partial,
    artin_constant_partial_exact,
    b_and_gamma,
    delta_closed,
    delta_jacobi_form,
    is_wud,
    residues,
    times_artin,
    vanishing_criterion,
    wud_set,
)

SWEEP_G = [2, 3, 5, 6, -2, -3, -7, 8, 12, 27, 1801088541]


def sweep(fmax=60):
    for g in SWEEP_G:
        for f in range(1, fmax + 1):
            for a in residues(f):
                yield a, f, g


def test_artin_constant_printed():
    assert str(ARTIN.value) == "0.373955813619202288054728"
    assert A == pytest.approx(0.3739558136192023, abs=1e-16)


def test_artin_coefficient_examples():
    assert artin_coefficient(1, 1, 1) == 1
    assert artin_coefficient(1, 3, 3) == 0
    # (1 - 1/2) / ((1 - 1/2)(1 - 1/42))
    assert artin_coefficient(3, 28, 1) == Fraction(1, 2) / (Fraction(1, 2) * Fraction(41, 42)) == Fraction(42, 41)


def test_artin_coefficient_rejects_even_h():
    with pytest.raises(DomainError):
        artin_coefficient(1, 1, 2)


def _euler_product_ratio(a, f, h, P=200):
    """A(a,f,h)/A from the defining product truncated at P (exact beyond P)."""
    if math.gcd(math.gcd(a - 1, f), h) > 1:
        return Fraction(0)
    out = Fraction(1)
    for p in range(2, P):
        if any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
            continue
        full = Fraction(p * (p - 1) - 1, p * (p - 1))
        if f % p == 0:
            local = Fraction(p - 1, p) if (a - 1) % p == 0 else Fraction(1)
        elif h % p == 0:
            local = Fraction(p - 2, p - 1)
        else:
            local = full
        out *= local / full
    return out


@pytest.mark.parametrize("a, f, h", [(3, 28, 1), (1, 12, 5), (5, 12, 5), (7, 30, 7), (2, 9, 1), (4, 15, 9)])
def test_artin_coefficient_against_product(a, f, h):
    assert artin_coefficient(a, f, h) == _euler_product_ratio(a, f, h)


@pytest.mark.parametrize("a, f, g, coeff", [
    (3, 28, 2, Fraction(7, 82)),
    (19, 28, 2, Fraction(7, 82)),
    (27, 28, 2, Fraction(7, 82)),
    (1, 5, 5, Fraction(0)),
    (1, 1, 5, Fraction(20, 19)),
    (1, 1, 2, Fraction(1)),
])
def test_closed_and_jacobi_examples(a, f, g, coeff):
    assert delta_closed(a, f, g).coeff == coeff
    assert delta_jacobi_form(a, f, g).coeff == coeff


def test_branch_trace():
    r = delta_closed(1, 1, 5)
    assert (r.branch.b, r.branch.gamma, r.branch.case.value) == (5, 1, "b_odd")
    assert r.branch.correction_sign == 1
    r = delta_closed(3, 28, 2)
    assert (r.branch.b, r.branch.gamma, r.branch.case.value) == (2, None, "b_even")
    assert not r.vanishes
    assert delta_closed(1, 5, 5).vanishes


def test_gamma_is_one_uses_trivial_character():
    # g = 5, f = 4: b = 5, gamma = 1, a perfect square
    assert b_and_gamma(4, 5) == (5, 1)
    assert delta_closed(3, 4, 5).coeff == delta_closed(1, 4, 5).coeff


@pytest.mark.parametrize("g", [4, 1, -1, Fraction(9, 4)])
def test_not_in_g_rejected(g):
    with pytest.raises(DomainError):
        delta_closed(1, 1, g)
    with pytest.raises(DomainError):
        delta_jacobi_form(1, 1, g)
    with pytest.raises(DomainError):
        vanishing_criterion(1, 1, g)


@pytest.mark.parametrize("a, f", [(2, 4), (0, 5), (6, 5)])
def test_bad_progression(a, f):
    with pytest.raises(DomainError):
        delta_closed(a, f, 2)


def test_result_value_and_json():
    r = delta_closed(3, 28, 2)
    assert r.value == pytest.approx(7 / 82 * A, rel=1e-15)
    d = r.to_dict()
    assert d["coeff"] == "7/82" and d["b"] == 2 and d["case"] == "b_even"
    assert d["value"].startswith("0.0319230")
    s = json.dumps(d)
    assert json.dumps(json.loads(s)) == s


def test_formula_equivalence_sweep():
    for a, f, g in sweep():
        assert delta_closed(a, f, g).coeff == delta_jacobi_form(a, f, g).coeff, (a, f, g)


def test_vanishing_equivalence_sweep():
    for a, f, g in sweep():
        assert (delta_closed(a, f, g).coeff == 0) == vanishing_criterion(a, f, g)[0], (a, f, g)


def test_totality_and_range():
    for g in SWEEP_G:
        full = delta_closed(1, 1, g).coeff
        for f in range(1, 61):
            coeffs = [delta_closed(a, f, g).coeff for a in residues(f)]
            assert sum(coeffs) == full, (f, g)
            assert all(0 <= c <= 2 for c in coeffs)
            assert all(c * Fraction(ARTIN.value) < 1 for c in coeffs)


def test_progression_one_is_easiest():
    for g in SWEEP_G:
        for f in range(1, 61):
            van, case = vanishing_criterion(1, f, g)
            h = compute_g_invariants(g).h
            if math.gcd(f, h) == 1 and case not in (Vanishing.QUADRATIC, Vanishing.CUBIC):
                assert delta_closed(1, f, g).coeff > 0


def test_vanishing_examples():
    assert vanishing_criterion(1, 3, 8) == (True, Vanishing.POWER)
    assert vanishing_criterion(3, 4, 27) == (True, Vanishing.CUBIC)
    assert delta_closed(3, 4, 27).coeff == 0
    assert kronecker(-4, 3) == -1
    assert vanishing_criterion(1, 1, 2) == (False, Vanishing.NONE)
    assert vanishing_criterion(1, 5, 5) == (True, Vanishing.QUADRATIC)


def test_rodier_aggregate():
    total = sum(delta_closed(a, 28, 2).coeff for a in (3, 19, 27))
    assert total == Fraction(21, 82)


def test_wud_examples():
    assert is_wud(8, 5)
    assert not is_wud(3, 5)
    assert is_wud(12, 1801088541)
    assert 12 in wud_set(1801088541)
    assert 3 not in wud_set(5)
    assert str(wud_set(2)) == "{1, 2, 4}"


def test_wud_consistency():
    for g in SWEEP_G:
        s = wud_set(g)
        for f in range(1, 49):
            assert is_wud(f, g) == (f in s), (f, g)


def test_artin_partial_small():
    assert artin_constant_partial_exact(7) == Fraction(779, 2016)
    assert artin_constant_partial_exact(7) == Fraction(1, 2) * Fraction(5, 6) * Fraction(19, 20) * Fraction(41, 42)
    assert artin_constant_partial(7)[0] == pytest.approx(779 / 2016, rel=1e-14)
    assert artin_constant_partial(2) == (pytest.approx(0.5, rel=1e-15), 1.0)


def test_artin_partial_large():
    value, bound = artin_constant_partial(10**6)
    assert bound == 2e-6
    assert abs(value - float(ARTIN.value)) <= bound
    assert value > float(ARTIN.value)


def test_artin_partial_bound_holds_for_small_cutoffs():
    for P in (2, 3, 10, 100, 1000):
        value, bound = artin_constant_partial(P)
        assert 0 <= value - A <= bound


def test_times_artin():
    assert times_artin(Fraction(1)) == A
    assert times_artin(Fraction(0)) == 0.0
