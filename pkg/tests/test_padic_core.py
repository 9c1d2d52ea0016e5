from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padichg.padic_core import (
    FrobeniusConstantError, NotIntegralError, PadicBall, PadicError,
    PrecisionError, ball_combine, branch_constants, iwasawa_log_unit,
    log_over_p, parse_rational, pow_binomial, psi_gamma, reduce, valuation,
)

from oracles import harmonic, integer_exponent, log_partial, mod_pn

PRIMES = [2, 3, 5, 7, 13]


def p_integral(p, max_den=40):
    """Rationals with denominator prime to p."""
    dens = [d for d in range(1, max_den) if d % p]
    return st.builds(lambda num, den: Fraction(num, den),
                     st.integers(-500, 500), st.sampled_from(dens))


@pytest.mark.parametrize("x,p,expected", [
    (Fraction(25, 3), 5, 2),
    (Fraction(1), 7, 0),
    (Fraction(9, 64), 3, 2),
    (Fraction(3, 50), 5, -2),
])
def test_valuation(x, p, expected):
    assert valuation(x, p) == expected


def test_valuation_of_zero():
    with pytest.raises(PadicError, match="infinite valuation"):
        valuation(0, 5)


@pytest.mark.parametrize("x,p,N,residue", [
    (Fraction(1, 4), 3, 1, 1),
    (Fraction(11, 6), 5, 2, 6),
    (Fraction(0), 2, 4, 0),
    (Fraction(-1), 5, 3, 124),
])
def test_reduce(x, p, N, residue):
    b = reduce(x, p, N)
    assert (b.residue, b.precision) == (residue, N)


def test_reduce_rejects_non_integral():
    with pytest.raises(NotIntegralError):
        reduce(Fraction(1, 3), 3, 2)


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-7") == Fraction(-7)
    assert parse_rational(" 6/8 ") == Fraction(3, 4)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("x")


def test_ball_combine_examples():
    assert ball_combine("add", PadicBall(5, 1, 2), PadicBall(5, 3, 2)) == PadicBall(5, 4, 2)
    q = ball_combine("div", PadicBall(5, 10, 3), PadicBall(5, 5, 3))
    assert (q.residue, q.precision) == (2, 2)
    x = PadicBall(7, 123, 3)
    assert ball_combine("mul", x, PadicBall(7, 0, 3)) == PadicBall(7, 0, 3)


def test_ball_precision_min_rule():
    z = PadicBall(3, 4, 5) + PadicBall(3, 1, 2)
    assert z.precision == 2 and z.residue == 5 % 9


def test_div_by_zero_ball():
    with pytest.raises(PrecisionError, match="insufficient precision"):
        ball_combine("div", PadicBall(5, 1, 3), PadicBall(5, 125, 3))


def test_prime_mismatch():
    with pytest.raises(PadicError):
        ball_combine("add", PadicBall(3, 1, 2), PadicBall(5, 1, 2))


def test_digits_little_endian():
    assert PadicBall(5, 6, 3).digits() == [1, 1, 0]


@pytest.mark.parametrize("a,p,l,q,lp,e", [
    (Fraction(1, 3), 5, 3, 5, 3, 3),
    (Fraction(1, 3), 2, 1, 4, 1, 1),
    (Fraction(1), 7, 6, 7, 6, 6),
    (Fraction(2), 2, 0, 4, 2, 1),
])
def test_branch_constants(a, p, l, q, lp, e):
    bc = branch_constants(a, p)
    assert (bc.l, bc.q, bc.l_prime, bc.e) == (l, q, lp, e)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), p_integral(p))))
def test_branch_constants_invariants(pa):
    p, a = pa
    bc = branch_constants(a, p)
    assert (a + bc.l).numerator % p == 0
    assert (a + bc.l_prime).numerator % bc.q == 0
    assert bc.e == bc.l_prime - bc.l_prime // p
    if p > 2:
        assert bc.e == bc.l


def test_branch_constants_e_equals_l_for_odd_p():
    import random
    rng = random.Random(1)
    for _ in range(1000):
        p = rng.choice([3, 5, 7, 11, 13])
        den = rng.choice([d for d in range(1, 60) if d % p])
        a = Fraction(rng.randrange(-1000, 1000), den)
        bc = branch_constants(a, p)
        assert bc.e == bc.l


@pytest.mark.parametrize("c,alpha,p,N,expected", [
    (1, Fraction(2, 7), 5, 3, 1),
    (6, Fraction(1, 2), 5, 2, 16),
    (6, 1, 5, 2, 6),
])
def test_pow_binomial_examples(c, alpha, p, N, expected):
    assert pow_binomial(c, alpha, p, N).residue == expected


def test_pow_binomial_square_root():
    r = pow_binomial(6, Fraction(1, 2), 5, 2).residue
    assert r * r % 25 == 6


def test_pow_binomial_invalid_constant():
    with pytest.raises(FrobeniusConstantError):
        pow_binomial(3, Fraction(1, 2), 5, 2)
    with pytest.raises(FrobeniusConstantError):
        pow_binomial(3, 1, 2, 3)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]).flatmap(
    lambda p: st.tuples(st.just(p), p_integral(p), p_integral(p), st.integers(1, 4))))
def test_pow_binomial_exponent_law(args):
    p, alpha, beta, k = args
    q = 4 if p == 2 else p
    c = 1 + k * q
    N = 6
    lhs = pow_binomial(c, alpha, p, N) * pow_binomial(c, beta, p, N)
    assert lhs.residue == pow_binomial(c, alpha + beta, p, N).residue


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]).flatmap(
    lambda p: st.tuples(st.just(p), p_integral(p), st.integers(1, 6))))
def test_pow_binomial_matches_integer_power(args):
    # c^alpha = c^m whenever m = alpha mod p^N (independent route)
    p, alpha, k = args
    c = 1 + k * (4 if p == 2 else p)
    N = 5
    m = integer_exponent(alpha, p, N)
    assert pow_binomial(c, alpha, p, N).residue == pow(c, m, p ** N)


@pytest.mark.parametrize("m", [0, 1, 2, 7, 11])
def test_pow_binomial_integer_exponent(m):
    assert pow_binomial(Fraction(16, 11), m, 5, 6).residue == reduce(Fraction(16, 11) ** m, 5, 6).residue


def test_log_examples():
    assert iwasawa_log_unit(1, 5, 3).residue == 0
    b = iwasawa_log_unit(6, 5, 1)
    assert (b.residue, b.precision) == (5, 2)
    # p = 2: partial sum far past valuation 4 as the oracle
    b = iwasawa_log_unit(5, 2, 2)
    assert b.precision == 3
    assert b.residue == mod_pn(log_partial(5, 40), 2, 3)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 30), st.integers(1, 30))
def test_log_multiplicative(p, j, k):
    q = 4 if p == 2 else p
    c, d = 1 + j * q, 1 + k * q
    N = 4
    lhs = iwasawa_log_unit(c * d, p, N)
    rhs = iwasawa_log_unit(c, p, N) + iwasawa_log_unit(d, p, N)
    assert lhs.residue == rhs.residue and lhs.precision == N + 1


def test_log_over_p():
    assert log_over_p(6, 5, 1).residue == 1
    assert log_over_p(1, 5, 2).residue == 0


def test_psi_examples():
    assert psi_gamma(1, 5, 3).residue == 0
    assert psi_gamma(4, 5, 2).residue == 6
    for p in (3, 5, 7):
        for l in range(p):
            assert psi_gamma(1 + l, p, 2).residue == mod_pn(harmonic(l, p), p, 2)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_psi_recurrence(p):
    N = 3
    for m in range(1, 3 * p + 2):
        step = psi_gamma(m + 1, p, N) - psi_gamma(m, p, N)
        expected = 0 if m % p == 0 else mod_pn(Fraction(1, m), p, N)
        assert step.residue == expected


@pytest.mark.parametrize("p", [3, 5, 7])
def test_psi_reflection(p):
    for l in range(p * p):
        assert psi_gamma(-l, p, 2).residue == psi_gamma(1 + l, p, 2).residue


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 7]).flatmap(lambda p: st.tuples(st.just(p), p_integral(p, 20))))
def test_psi_continuity(pa):
    # shifting the argument by p^N leaves Psi unchanged mod p^N
    p, a = pa
    N = 2
    assert psi_gamma(a, p, N).residue == psi_gamma(a + p ** N, p, N).residue
