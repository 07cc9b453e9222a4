"""Cusp-monomial algebra: seed generator images, prefactor, log-derivatives."""

import itertools
from fractions import Fraction as F

import pytest

from pvitau.cuspalg import (
    MONOMIAL_ONE,
    CuspMonomial,
    NotRationalError,
    PhiMonomial,
    UnitConst,
    dpn,
    generator_phi,
    l0_of,
    log_delta,
    phi_to_cusp,
    pph_exponents,
    prefactor,
    seed_p,
    seed_q,
    sh_table,
    x_image,
)
from pvitau.exactfield import RationalFunction, delta, t_of_zeta

RF = RationalFunction
ONE = RF.constant(1)

PMF_EXPONENTS = {
    "u": (F(-1, 6), F(1, 3), F(1), F(-1, 2), F(-1, 2)),
    "v": (F(1, 3), F(-1, 6), F(-1, 2), F(1), F(-1, 2)),
    "tau0": (F(1, 6), F(1, 6), F(-1, 6), F(-1, 6), F(-1, 6)),
    "tau1": (F(-1, 12), F(-1, 12), F(1, 12), F(1, 12), F(-1, 6)),
    "tau2": (F(-1, 3), F(-1, 3), F(-1, 3), F(-1, 3), F(2, 3)),
    "tau3": (F(-1, 12), F(1, 6), F(-1, 6), F(1, 12), F(1, 12)),
    "tau4": (F(1, 6), F(-1, 12), F(1, 12), F(-1, 6), F(1, 12)),
}


def small_l_grid(radius):
    rng = range(-radius, radius + 1)
    return itertools.product(rng, rng, rng, rng)


class TestUnitConst:
    def test_phase_normalization(self):
        assert UnitConst(F(9, 4)).r == F(1, 4)
        assert UnitConst(-F(1, 2)).r == F(3, 2)

    def test_rationality(self):
        assert UnitConst(1, 3, -2).is_rational()
        assert UnitConst(1, 3, -2).as_fraction() == -F(8, 9)
        assert not UnitConst(F(1, 2)).is_rational()
        with pytest.raises(NotRationalError):
            UnitConst(0, F(1, 3), 0).as_fraction()

    def test_group_law(self):
        a = UnitConst(F(3, 4), F(1, 3), 1)
        assert a * a.inverse() == UnitConst()
        assert a**12 == UnitConst(9, 4, 12)


class TestPhiToCusp:
    def test_first_relation_rearranged(self):
        # phi1 phi2^2 phi5^3/(phi3 phi4^2) = -z/2
        m = PhiMonomial(UnitConst(), (1, 2, -1, -2, 3))
        c = phi_to_cusp(m)
        assert c.exps == (1, 0, 0, 0, 0)
        assert c.unit == UnitConst(1, -1, 0)

    def test_empty(self):
        c = phi_to_cusp(PhiMonomial(UnitConst(), (0, 0, 0, 0, 0)))
        assert c == MONOMIAL_ONE

    def test_phi5_power(self):
        # phi5^6 = (z-1)(z+2)(2z+1) / (27 z (z+1))
        c = phi_to_cusp(PhiMonomial(UnitConst(), (0, 0, 0, 0, -6)))
        assert c.exps == (1, 1, -1, -1, -1)
        assert c.unit.as_fraction() == 27
        got = c.to_rational_function()
        assert got == RF.cusp_monomial(27, (1, -1, 1, -1, -1))

    def test_phi_twelfth_powers(self):
        # the five printed power relations, as exact rational functions
        cases = {
            # phi1^12 = 2^4 (z-1)^2 (z+1)^6 / (z^3 (z+2)(2z+1))
            (12, 0, 0, 0, 0): RF.cusp_monomial(16, (-3, 2, 6, -1, -1)),
            # phi2^12 = -z^6 (z+2)^2 / (2^8 (z+1)^3 (z-1)(2z+1))
            (0, 12, 0, 0, 0): RF.cusp_monomial(-F(1, 256), (6, -1, -3, 2, -1)),
            # phi3^12 = (z-1)^4 (z+2)(2z+1) / (3^6 z (z+1)^4)
            (0, 0, 12, 0, 0): RF.cusp_monomial(F(1, 729), (-1, 4, -4, 1, 1)),
            # phi4^12 = -(z-1)(z+2)^4 (2z+1) / (3^6 z^4 (z+1))
            (0, 0, 0, 12, 0): RF.cusp_monomial(-F(1, 729), (-4, 1, -1, 4, 1)),
        }
        for exps, expect in cases.items():
            got = phi_to_cusp(PhiMonomial(UnitConst(), exps)).to_rational_function()
            assert got == expect, exps


class TestXImage:
    def test_pmf_exponents(self):
        for g, expect in PMF_EXPONENTS.items():
            assert x_image(g).exps == expect, g
            assert all((12 * e).denominator == 1 for e in x_image(g).exps)

    def test_uvd_contract(self):
        t = t_of_zeta()
        u, v = x_image("u"), x_image("v")
        assert (u**2 * v**4).to_rational_function() == t
        assert (u**4 * v**2).to_rational_function() == ONE - t

    def test_xti_unit_combinations(self):
        u, v = x_image("u"), x_image("v")
        t0, t1_, t2_, t3_, t4_ = (x_image(f"tau{j}") for j in range(5))
        # i (2z+1)^3 / (3 z(z+1)(z-1)(z+2)) * X(u^2 v^2 tau0^2 / tau2) = 1
        combo = CuspMonomial(UnitConst(F(1, 2), 0, -1), (-1, -1, -1, -1, 3))
        assert combo * (u**2 * v**2 * t0**2 / t2_) == MONOMIAL_ONE
        # -i X(tau1^2/(u v tau2)) = 1
        combo = CuspMonomial(UnitConst(F(3, 2), 0, 0), (0, 0, 0, 0, 0))
        assert combo * (t1_**2 / (u * v * t2_)) == MONOMIAL_ONE
        # (2z+1)/((z+1)(1-z)) X(u tau3^2/tau2) = 1
        combo = CuspMonomial(UnitConst(1, 0, 0), (0, -1, -1, 0, 1))
        assert combo * (u * t3_**2 / t2_) == MONOMIAL_ONE
        # (2z+1)/(z(z+2)) X(v tau4^2/tau2) = 1
        combo = CuspMonomial(UnitConst(0, 0, 0), (-1, 0, 0, -1, 1))
        assert combo * (v * t4_**2 / t2_) == MONOMIAL_ONE

    def test_seed_solution_values(self):
        assert seed_q() == RF.cusp_monomial(1, (1, 0, 0, 1, -1))
        assert seed_p() == RF.cusp_monomial(-F(1, 2), (0, -1, 0, -1, 1))


class TestShTable:
    def test_log_delta_of_images_matches_table(self):
        table = sh_table()
        for g in PMF_EXPONENTS:
            assert log_delta(x_image(g)) == table[g], g

    def test_tau0_entry_value(self):
        # -(z^2+z+1)^2 / (6 (2z+1)^3)
        from pvitau.exactfield import Polynomial

        qq = RF.from_parts(Polynomial([1, 1, 1]))
        expect = -(qq**2) / (6 * RF.cusp_monomial(1, (0, 0, 0, 0, 3)))
        assert log_delta(x_image("tau0")) == expect

    def test_twelfth_power_log_derivative(self):
        # delta(X(g))/X(g) computed through X(g)^12, which is rational
        for g in PMF_EXPONENTS:
            twelfth = (x_image(g) ** 12).to_rational_function()
            assert log_delta(x_image(g)) == delta(twelfth) / (12 * twelfth), g


class TestPrefactor:
    def test_zero_index_is_tau0_image(self):
        assert prefactor((0, 0, 0, 0)) == x_image("tau0")
        assert prefactor((0, 0, 0, 0)).unit == UnitConst(0, 0, F(1, 2))

    def test_exponents_match_closed_form(self):
        for l in small_l_grid(2):
            assert prefactor(l).exps == pph_exponents(l), l

    def test_log_delta_matches_dpn(self):
        for l in small_l_grid(2):
            assert log_delta(prefactor(l)) == dpn(l), l

    def test_log_delta_multiplicative(self):
        a = prefactor((1, 0, -2, 1))
        b = prefactor((0, 2, 1, -1))
        assert log_delta(a * b) == log_delta(a) + log_delta(b)
        assert not log_delta(CuspMonomial(UnitConst(F(1, 3), 2, -1), (0, 0, 0, 0, 0)))


class TestRecursionPrefactorRatios:
    """The two monomial ratios that normalize the corner recursions."""

    def _ratio(self, l, down_shift, up_shift):
        l1, l2, l3, l4 = l
        a = prefactor((l1 + down_shift[0], l2 + down_shift[1], l3 + down_shift[2], l4 + down_shift[3]))
        b = prefactor((l1 + up_shift[0], l2 + up_shift[1], l3 + up_shift[2], l4 + up_shift[3]))
        return a * b

    def test_kma_ratio(self):
        # X(u^2 v^2 phi_{l2-1,l3+1} phi_{l1+1,l3-1,l4+1} / (phi_l phi_{l1+1,l2-1,l4+1}))
        # = -(z+2)/(16 z (2z+1)^4)
        expect = RF.cusp_monomial(-F(1, 16), (-1, 0, 0, 1, -4))
        u, v = x_image("u"), x_image("v")
        for l in [(0, 0, 0, 0), (1, 0, 0, 0), (-1, 2, 1, -2), (2, -1, 0, 1)]:
            l1, l2, l3, l4 = l
            num = prefactor((l1, l2 - 1, l3 + 1, l4)) * prefactor((l1 + 1, l2, l3 - 1, l4 + 1))
            den = prefactor((l1, l2, l3, l4)) * prefactor((l1 + 1, l2 - 1, l3, l4 + 1))
            got = (u**2 * v**2 * num / den).to_rational_function()
            assert got == expect, l

    def test_kmb_ratio(self):
        # the mirror ratio evaluates to -z^3/(16 (z+2)(2z+1)^4)
        expect = RF.cusp_monomial(-F(1, 16), (3, 0, 0, -1, -4))
        u, v = x_image("u"), x_image("v")
        for l in [(0, 0, 0, 0), (1, 0, 0, 0), (-1, 2, 1, -2), (2, -1, 0, 1)]:
            l1, l2, l3, l4 = l
            num = prefactor((l1 + 1, l2, l3 - 1, l4 + 1)) * prefactor((l1 - 1, l2 + 1, l3, l4 - 1))
            den = prefactor((l1, l2, l3, l4)) * prefactor((l1, l2 + 1, l3 - 1, l4))
            got = (u**2 * v**2 * num / den).to_rational_function()
            assert got == expect, l

    def test_nbr_ratio(self):
        # X(u phi_{l2+1,l3-1} phi_{l2-1,l3+1} / phi_l^2) = (-1)^(l3+l4) i / (16 z^2 (2z+1)^2)
        u = x_image("u")
        for l in [(0, 0, 0, 0), (1, 0, 0, 0), (-1, 2, 1, -2), (2, -1, 0, 1), (0, 1, 1, 0)]:
            l1, l2, l3, l4 = l
            num = prefactor((l1, l2 + 1, l3 - 1, l4)) * prefactor((l1, l2 - 1, l3 + 1, l4))
            den = prefactor(l) ** 2
            got = u * num / den
            expect = CuspMonomial(
                UnitConst(F(1, 2) + (l3 + l4) % 2, -4, 0), (-2, 0, 0, 0, -2)
            )
            assert got == expect, l
