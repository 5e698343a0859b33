from fractions import Fraction

import pytest

from nctorus.symbols import (CRat, HbarSeries, PolySymbol,
                             associativity_defect, half_moyal, moyal_coeff,
                             moyal_star, poisson_bracket, series_to_obj,
                             star_commutator, symbol_from_obj, symbol_to_obj)

X1 = PolySymbol.variable(0, 2)
X2 = PolySymbol.variable(1, 2)
I = CRat.of(0, 1)
ONE = CRat.of(1, 0)


class TestCRat:
    def test_field_operations(self):
        a = CRat.of(Fraction(1, 3), 2)
        b = CRat.of(1, Fraction(-1, 2))
        assert (a + b) - b == a
        # (1/3 + 2i)(1 - i/2) = 1/3 + 1 + i(2 - 1/6)
        prod = a * b
        assert prod.re == Fraction(4, 3)
        assert prod.im == Fraction(11, 6)

    def test_i_squared(self):
        assert (I * I + ONE).is_zero()

    def test_exactness_survives_many_products(self):
        third = CRat.of(Fraction(1, 3), 0)
        acc = ONE
        for _ in range(30):
            acc = acc * third
        assert acc.re == Fraction(1, 3 ** 30)


class TestPolySymbol:
    def test_variables_commute(self):
        assert (X1 * X2 - X2 * X1).is_zero()

    def test_diff(self):
        p = X1 * X1 * X2  # x1^2 x2
        assert (p.diff(0) - X1.scaled(CRat.of(2)) * X2).is_zero()
        assert (p.diff(1) - X1 * X1).is_zero()
        assert p.diff(0).diff(0).diff(0).is_zero()

    def test_evaluate(self):
        p = X1 * X1 + X2.scaled(I)
        assert p.evaluate((2.0, 3.0)) == pytest.approx(4.0 + 3.0j)

    def test_degree(self):
        assert (X1 * X2 * X2).degree() == 3
        assert PolySymbol.constant(ONE, 2).degree() == 0
        assert PolySymbol.zero(2).degree() == 0

    def test_mixed_arity_rejected(self):
        with pytest.raises(ValueError):
            X1 * PolySymbol.variable(0, 3)

    def test_serialization_round_trip(self):
        # wire format carries floats, so dyadic coefficients survive exactly
        p = X1 * X2.scaled(CRat.of(Fraction(3, 8), -1)) + PolySymbol.constant(I, 2)
        assert (symbol_from_obj(symbol_to_obj(p)) - p).is_zero()


class TestMoyalStar:
    def test_canonical_commutator(self):
        # x1 * x2 - x2 * x1 = i hbar and nothing else
        series = star_commutator(X1, X2, 2)
        assert series.coeffs[0].is_zero()
        assert (series.coeffs[1] - PolySymbol.constant(I, 2)).is_zero()
        assert series.coeffs[2].is_zero()

    def test_order_zero_is_product(self):
        f = X1 * X1 + X2
        g = X2 * X2
        assert (moyal_star(f, g, 0).coeffs[0] - f * g).is_zero()

    def test_first_order_commutator_is_poisson(self):
        # [f,g] = -i hbar {f,g} + O(hbar^2) in the d_p f d_q g - d_q f d_p g
        # bracket convention
        f = X1 * X1 * X2
        g = X1 * X2 + X2 * X2
        comm = star_commutator(f, g, 1)
        want = poisson_bracket(f, g).scaled(CRat.of(0, -1))
        assert (comm.coeffs[1] - want).is_zero()

    def test_poisson_bracket_value(self):
        got = poisson_bracket(X1 * X1, X2)
        assert (got - X1.scaled(CRat.of(-2))).is_zero()

    def test_star_is_degree_filtered(self):
        # coefficient k differentiates k times in each slot, so it dies
        # once k exceeds either total degree
        f = X1 * X1
        g = X2
        assert moyal_coeff(f, g, 2).is_zero()
        assert not moyal_coeff(f, g, 1).is_zero()

    def test_associativity_defect_vanishes(self):
        f = X1 * X1 * X2
        g = X2 * X2 + X1
        h = X1 * X2
        assert associativity_defect(f, g, h, 4).is_zero()

    def test_symmetric_part_has_no_first_order(self):
        f = X1 * X2
        g = X1 + X2
        fg = moyal_star(f, g, 1)
        gf = moyal_star(g, f, 1)
        total = HbarSeries(tuple(a + b for a, b in zip(fg.coeffs, gf.coeffs)))
        assert total.coeffs[1].is_zero()


class TestHalfMoyal:
    def test_reorders_one_pair(self):
        # x2 then x1 in operator order picks up the full -i hbar correction
        series = half_moyal(X2, X1, 1)
        assert (series.coeffs[0] - X2 * X1).is_zero()
        assert (series.coeffs[1] - PolySymbol.constant(CRat.of(0, -1), 2)).is_zero()

    def test_k_term_shape(self):
        # (-i)^k/k! d2^k f d1^k g
        f = X2 * X2
        g = X1 * X1
        series = half_moyal(f, g, 2)
        assert (series.coeffs[2]
                - PolySymbol.constant(CRat.of(-2, 0), 2)).is_zero()

    def test_orders_match_between_expansions(self):
        # the two expansions differ by ordering but share the commutator
        f, g = X1, X2
        half = half_moyal(f, g, 1)
        half_rev = half_moyal(g, f, 1)
        diff = HbarSeries(tuple(a - b for a, b in zip(half.coeffs,
                                                      half_rev.coeffs)))
        full = star_commutator(f, g, 1)
        assert (diff.coeffs[1] - full.coeffs[1]).is_zero()

    def test_wrong_arity_rejected(self):
        with pytest.raises(ValueError):
            half_moyal(PolySymbol.variable(0, 3), PolySymbol.variable(1, 3), 1)
        with pytest.raises(ValueError):
            half_moyal(X1, X2, -1)


class TestSeries:
    def test_subtraction_aligns_orders(self):
        a = moyal_star(X1, X2, 2)
        with pytest.raises(ValueError):
            a - moyal_star(X1, X2, 1)
        assert (a - a).is_zero()

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            HbarSeries(())

    def test_series_serialization(self):
        obj = series_to_obj(moyal_star(X1 * X2, X2, 3))
        assert isinstance(obj, dict)
        assert len(obj["coeffs"]) == 4
