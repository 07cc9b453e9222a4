"""Core exact-arithmetic layer: derivation, orders, substitutions, factoring."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvitau.exactfield import (
    INF,
    LAMBDA,
    SUB_INV,
    SUB_REFLECT,
    CenterIsZeroError,
    FactoredForm,
    Polynomial,
    RationalFunction,
    ZeroFunctionError,
    bivariate_series_invert,
    delta,
    factor_over_cusps,
    order_at,
    psi,
    substitute,
    t_of_zeta,
)

RF = RationalFunction
ONE = RF.constant(1)
Z = RF.zeta()
T = t_of_zeta()


def rf(num, den=1):
    return RF.from_parts(Polynomial(num), Polynomial(den) if isinstance(den, (list, tuple)) else den)


def random_rf(rng, max_deg=3, span=6):
    while True:
        num = [rng.randrange(-span, span + 1) for _ in range(rng.randrange(1, max_deg + 2))]
        den = [rng.randrange(-span, span + 1) for _ in range(rng.randrange(1, max_deg + 2))]
        if any(num) and any(den):
            return rf(num, den)


class TestPolynomial:
    def test_trailing_zeros_trimmed(self):
        assert Polynomial([1, 2, 0, 0]).coeffs == (1, 2)
        assert Polynomial([0, 0]).degree == -1

    def test_divmod(self):
        p = Polynomial([1, 2, 1])  # (1+z)^2
        q, r = divmod(p, Polynomial([1, 1]))
        assert q == Polynomial([1, 1]) and not r
        q, r = divmod(p, Polynomial([0, 1]))
        assert q == Polynomial([2, 1]) and r == Polynomial([1])

    def test_fraction_coeffs_normalize(self):
        p = Polynomial([F(2, 2), F(1, 3)])
        assert p.coeffs == (1, F(1, 3))
        prim, cont = p.primitive()
        assert prim.coeffs == (3, 1) and cont == F(1, 3)

    def test_compose_linear(self):
        p = Polynomial([0, 0, 1])  # z^2
        assert p.compose_linear(-1, -1) == Polynomial([1, 2, 1])


class TestDelta:
    def test_delta_zeta_is_psi(self):
        # paper's displayed derivation factor
        assert delta(Z) == psi()
        assert psi() == rf([0, -2, -1, 2, 1], [2, 8, 8])

    def test_delta_constant(self):
        assert not delta(ONE)

    def test_delta_hauptmodul(self):
        # delta = t(t-1) d/dt forces delta(t) = t(t-1)
        assert delta(T) == T * (T - 1)

    def test_leibniz_randomized(self):
        rng = random.Random(20260810)
        for _ in range(1000):
            f = random_rf(rng, max_deg=2, span=4)
            g = random_rf(rng, max_deg=2, span=4)
            assert delta(f * g) == delta(f) * g + f * delta(g)


class TestOrderAt:
    def test_simple(self):
        assert order_at(Z * Z, 0) == 2

    def test_one_minus_t(self):
        one_minus_t = ONE - T
        # 1 - t = -(z+1)(z-1)^3/(2z+1)^3
        assert one_minus_t == RF.cusp_monomial(-1, (0, 3, 1, 0, -3))
        assert order_at(one_minus_t, -1) == 1

    def test_t_at_infinity(self):
        assert order_at(T, INF) == -1

    def test_zero_raises(self):
        with pytest.raises(ZeroFunctionError):
            order_at(RF.constant(0), 0)

    def test_non_lambda_point(self):
        f = rf([9, 0, 1])  # z^2 + 9 has no rational roots
        assert order_at(f, 3) == 0
        g = rf([-3, 1]) ** 2 * rf([1, 1], [1, 7])
        assert order_at(g, 3) == 2
        assert order_at(g, F(-1, 7)) == -1

    def test_multiplicative(self):
        rng = random.Random(7)
        pts = list(LAMBDA) + [INF]
        for _ in range(200):
            f = random_rf(rng)
            g = random_rf(rng)
            for a in pts:
                assert order_at(f * g, a) == order_at(f, a) + order_at(g, a)


class TestSubstitute:
    def test_t_inversion(self):
        assert substitute(T, SUB_INV) == 1 / T

    def test_t_reflection(self):
        assert substitute(T, SUB_REFLECT) == ONE - T

    def test_zeta_reflection(self):
        assert substitute(Z, SUB_REFLECT) == -Z - 1

    def test_involutions(self):
        rng = random.Random(11)
        for _ in range(100):
            f = random_rf(rng)
            assert substitute(substitute(f, SUB_INV), SUB_INV) == f
            assert substitute(substitute(f, SUB_REFLECT), SUB_REFLECT) == f


class TestFactorOverCusps:
    def test_initial_value_shape(self):
        # -2 z^2 (z-1) (z+1)^2 (2z+1) / (z+2)^2
        v = rf([0, 0, -2]) * rf([-1, 1]) * rf([1, 1]) ** 2 * rf([1, 2]) / rf([2, 1]) ** 2
        ff = factor_over_cusps(v)
        assert ff.lead == -2
        assert ff.exponents == {F(0): 2, F(1): 1, F(-1): 2, F(-2): -2, F(-1, 2): 1}
        assert ff.remainder == Polynomial([1])

    def test_trivial(self):
        ff = factor_over_cusps(ONE)
        assert ff.lead == 1 and all(e == 0 for e in ff.exponents.values())
        assert ff.remainder == Polynomial([1])

    def test_remainder_keeps_non_cusp_part(self):
        f = rf([1, 1, 1]) ** 2 / rf([1, 2]) ** 3
        ff = factor_over_cusps(f)
        assert ff.exponents[F(-1, 2)] == -3
        assert ff.remainder == Polynomial([1, 1, 1]) ** 2

    def test_reassembles(self):
        rng = random.Random(13)
        for _ in range(100):
            f = random_rf(rng)
            try:
                ff = factor_over_cusps(f)
            except (ZeroFunctionError, ValueError):
                continue
            assert ff.reassemble() == f

    def test_zero_raises(self):
        with pytest.raises(ZeroFunctionError):
            factor_over_cusps(RF.constant(0))

    def test_degree_bookkeeping(self):
        rng = random.Random(17)
        for _ in range(100):
            f = random_rf(rng)
            assert f.numerator.degree - f.denominator.degree == -order_at(f, INF)


class TestBivariateSeries:
    def test_constant(self):
        h = bivariate_series_invert({(0, 0): RF.constant(5)}, (ONE, ONE), 3)
        assert h[(0, 0)] == RF.constant(F(1, 5))
        assert all(not h[(i, j)] for i in range(4) for j in range(4) if (i, j) != (0, 0))

    def test_geometric(self):
        # G = 1 + (x - a): series of 1/G is 1, -1, 1, ... along (i, 0)
        a = RF.constant(3)
        g = {(0, 0): ONE - a, (1, 0): ONE}
        h = bivariate_series_invert(g, (a, RF.constant(0)), 2)
        assert [h[(i, 0)] for i in range(3)] == [ONE, -ONE, ONE]
        assert not h[(1, 1)]

    def test_product_is_one(self):
        # multiply the series back against the shifted polynomial
        g = {
            (0, 0): T,
            (1, 0): Z + 2,
            (0, 1): RF.constant(-1),
            (1, 1): Z,
            (2, 0): ONE,
        }
        a, b = Z + 1, RF.constant(2)
        n = 3
        h = bivariate_series_invert(g, (a, b), n)
        import math

        shifted = {}
        for (i, j), c in g.items():
            for p in range(i + 1):
                for q in range(j + 1):
                    key = (p, q)
                    term = c * (math.comb(i, p) * a ** (i - p)) * (math.comb(j, q) * b ** (j - q))
                    shifted[key] = shifted.get(key, RF.constant(0)) + term
        for i in range(n + 1):
            for j in range(n + 1):
                acc = RF.constant(0)
                for (p, q), c in shifted.items():
                    if p <= i and q <= j:
                        acc = acc + c * h[(i - p, j - q)]
                assert acc == (ONE if (i, j) == (0, 0) else RF.constant(0))

    def test_center_zero_raises(self):
        g = {(1, 0): ONE}
        with pytest.raises(CenterIsZeroError):
            bivariate_series_invert(g, (RF.constant(0), RF.constant(0)), 1)


coeffs_st = st.lists(st.integers(-5, 5), min_size=1, max_size=4)


@settings(max_examples=150, deadline=None)
@given(coeffs_st, coeffs_st, coeffs_st, coeffs_st)
def test_field_axioms(a, b, c, d):
    if not any(a) or not any(b) or not any(c) or not any(d):
        return
    f = rf(a, b)
    g = rf(c, d)
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) - g == f
    if g:
        assert (f / g) * g == f


@settings(max_examples=100, deadline=None)
@given(coeffs_st, coeffs_st)
def test_canonical_form_invariants(a, b):
    if not any(a) or not any(b):
        return
    f = rf(a, b)
    if not f:
        return
    # primitive integer parts, positive leading coefficients, coprime, Lambda-free
    assert f.num[-1] > 0 and f.den[-1] > 0
    from pvitau.exactfield import _pgcd

    assert _pgcd(f.num, f.den) == (1,)
    for pt in LAMBDA:
        num_at = sum(cc * pt**k for k, cc in enumerate(f.num))
        den_at = sum(cc * pt**k for k, cc in enumerate(f.den))
        assert num_at != 0 and den_at != 0
