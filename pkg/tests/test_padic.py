"""p-adic arithmetic layer: valuations, square roots, splitting types."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwadec.padic import (Indeterminate, InsufficientPrecision, IwasawaPoly,
                          NoRoot, PadicElem, base_field, hensel_roots,
                          splitting_from_roots, splitting_type, sqrt_unit,
                          unramified_field, vp)


F3 = base_field(3)


def ramified_field_for(theta_sq):
    from iwadec.padic import ExtField
    return ExtField(3, "ramified", theta_sq)


class TestValuation:
    def test_exact(self):
        assert PadicElem(F3, 6, 189).valuation() == 3

    def test_zero_is_indeterminate(self):
        v = PadicElem(F3, 5, 0).valuation()
        assert isinstance(v, Indeterminate)
        assert v.at_least == 5

    def test_ramified_odd_valuation(self):
        # 7344 = 2^4 * 27 * 17; as a theta-coordinate it contributes
        # 2*v_3 + 1 = 7, but the 3-coordinate 0 contributes nothing
        fld = ramified_field_for(3)
        x = PadicElem(fld, 12, 0, 7344 // 3)
        assert x.valuation() == 2 * vp(7344 // 3, 3) + 1 == 5

    def test_unramified_min_of_coords(self):
        fld = unramified_field(3)
        assert PadicElem(fld, 5, 18, 3).valuation() == 1
        assert PadicElem(fld, 5, 27, 0).valuation() == 3

    @given(st.integers(min_value=1, max_value=10 ** 9),
           st.integers(min_value=1, max_value=10 ** 9))
    @settings(max_examples=200)
    def test_vp_additive(self, a, b):
        assert vp(a * b, 3) == vp(a, 3) + vp(b, 3)

    @given(st.integers(min_value=1, max_value=10 ** 6),
           st.integers(min_value=1, max_value=10 ** 6))
    @settings(max_examples=200)
    def test_ultrametric(self, a, b):
        prec = 12
        x, y = PadicElem(F3, prec, a), PadicElem(F3, prec, b)
        vs = (x + y).valuation()
        vm = min(vp(a, 3), vp(b, 3))
        if isinstance(vs, Indeterminate):
            assert vs.at_least >= vm
        else:
            assert vs >= vm
            if vp(a, 3) != vp(b, 3):
                assert vs == vm


class TestSqrtUnit:
    def test_example(self):
        assert sqrt_unit(7, 3, 4) in (13, 3 ** 4 - 13)

    def test_nonresidue(self):
        with pytest.raises(NoRoot):
            sqrt_unit(2, 3, 4)

    @given(st.integers(min_value=1, max_value=3 ** 6 - 1))
    @settings(max_examples=100)
    def test_square_roundtrip(self, u):
        if u % 3 == 0:
            return
        sq = u * u % 3 ** 6
        r = sqrt_unit(sq, 3, 6)
        assert r * r % 3 ** 6 == sq


class TestSplittingType:
    def test_ramified_examples(self):
        for c1, c0 in [(90, 189), (63, 135)]:
            sd = splitting_type(IwasawaPoly(3, 5, c1, c0))
            assert sd.kind == "ramified"
            assert sd.ord_diff == 3
            assert (sd.ord_alpha, sd.ord_beta) == (3, 3)

    def test_unramified_example(self):
        sd = splitting_type(IwasawaPoly(3, 3, 9, 9))
        assert sd.kind == "unramified"
        assert sd.ord_diff == 1
        assert (sd.ord_alpha, sd.ord_beta) == (1, 1)

    def test_split_example(self):
        sd = splitting_type(IwasawaPoly(3, 5, -12, 27))
        assert sd.kind == "split"
        assert sorted((sd.ord_alpha, sd.ord_beta)) == [1, 2]
        assert sd.ord_diff == 1

    def test_split_roots_satisfy_poly(self):
        f = IwasawaPoly(3, 5, -12, 27)
        for root in hensel_roots(f):
            mod = 3 ** root.prec
            assert (root.a * root.a - 12 * root.a + 27) % mod == 0

    def test_insufficient_precision(self):
        with pytest.raises(InsufficientPrecision):
            splitting_type(IwasawaPoly(3, 5, 63, 81))
        with pytest.raises(InsufficientPrecision):
            splitting_type(IwasawaPoly(3, 6, 573, 252))

    def test_valuation_at_disc_edge_is_accepted(self):
        # v_3(disc) = N - 1 still determines the splitting: the unit part
        # is known mod p, which settles the residue test
        f = IwasawaPoly(3, 4, 63, 135)  # disc = 3429 = 3^3 * 127, N = 4
        sd = splitting_type(f)
        assert sd.kind == "ramified"

    def test_sum_of_root_valuations(self):
        for c1, c0, prec in [(63, 27, 5), (318, 657, 6), (9, 18, 5)]:
            sd = splitting_type(IwasawaPoly(3, prec, c1, c0))
            assert sd.ord_alpha + sd.ord_beta == sd.e * vp(c0, 3)


class TestArithmetic:
    def test_inverse_of_unit(self):
        x = PadicElem(F3, 6, 5)
        assert (x * x.inverse() - PadicElem(F3, 6, 1)).valuation() \
            == Indeterminate(at_least=6) or (x * x.inverse()).a == 1

    def test_division_by_nonunit_fails(self):
        with pytest.raises(Exception):
            PadicElem(F3, 6, 3).inverse()

    def test_shift_down(self):
        x = PadicElem(F3, 6, 54)
        y = x.shift_down(2)
        assert y.a % 3 ** y.prec == 6

    def test_splitting_from_roots_orders_by_valuation(self):
        sd = splitting_from_roots(PadicElem(F3, 8, 9), PadicElem(F3, 8, 3))
        assert sd.ord_alpha <= sd.ord_beta
        assert sd.ord_diff == 1
