"""Module classification: Fitting ideals, S-action matrices, the Koike
partner, class-group structure, and inference of k from finite levels."""

import pytest

from iwadec.modclass import (FiniteLevelData, GeneratorFrame, ModuleClass,
                             class_group_structure_from_k, fitting_ideals_Mk,
                             infer_k, koike_partner, s_action_matrix,
                             synthesize_finite_level)
from iwadec.padic import (Indeterminate, IwasawaPoly, PadicElem, base_field,
                          splitting_from_roots, splitting_type)

F3 = base_field(3)


def split_sd(a, b, prec=8):
    return splitting_from_roots(PadicElem(F3, prec, a), PadicElem(F3, prec, b))


class TestClosedForms:
    def test_fitting_generators(self):
        sd = split_sd(3, 30)
        fitt0, fitt1 = fitting_ideals_Mk(ModuleClass(1, sd))
        (quad,) = fitt0.generators
        assert quad[0].a % 3 ** 5 == 90        # alpha * beta
        assert (-quad[1]).a % 3 ** 5 == 33     # alpha + beta
        assert quad[2].a == 1
        lin, (g,) = fitt1.generators
        assert g.valuation() == sd.ord_diff - 1

    def test_koike_partner(self):
        sd = split_sd(3, 30)
        lat = koike_partner(ModuleClass(1, sd))
        assert lat.x == sd.ord_diff - 1
        assert lat.c1.a % 3 ** lat.c1.prec == (-33) % 3 ** lat.c1.prec

    def test_class_group_structure(self):
        sd = split_sd(3, 18)  # ords 1, 2; ord_diff 1
        assert class_group_structure_from_k(ModuleClass(0, sd)) == (1, 2)
        # ord_diff - k below m: the small factor is ord_diff - k
        assert class_group_structure_from_k(ModuleClass(1, sd)) == (0, 3)
        sd2 = split_sd(9, 36)  # ords 2, 2; ord_diff 3
        assert class_group_structure_from_k(ModuleClass(2, sd2)) == (1, 3)

    def test_action_matrix_unit_frame_k0(self):
        one = PadicElem(F3, 8, 1)
        zero = PadicElem(F3, 8, 0)
        sd = split_sd(3, 12)
        mat = s_action_matrix(GeneratorFrame(((one, zero), (zero, one)), 0), sd)
        assert mat[0][0].same_residue(sd.alpha)
        assert mat[1][1].same_residue(sd.beta)
        assert mat[0][1].valuation() == Indeterminate(at_least=mat[0][1].prec) \
            or mat[0][1].a % 3 ** mat[0][1].prec == 0


class TestInferK:
    @pytest.mark.parametrize("a,b", [(3, 12), (3, 30), (9, 36)])
    def test_roundtrip_split(self, a, b):
        sd = split_sd(a, b)
        for k in range(sd.ord_diff + 1):
            fl = synthesize_finite_level(sd, k, max(1, sd.ord_diff))
            got = infer_k(fl, sd)
            assert isinstance(got, ModuleClass) and got.k == k

    @pytest.mark.parametrize("c1,c0,prec", [(9, 9, 6), (63, 135, 7)])
    def test_roundtrip_nonsplit(self, c1, c0, prec):
        sd = splitting_type(IwasawaPoly(3, prec, c1, c0))
        e = sd.e
        for k in range(sd.ord_diff % e, sd.ord_diff + 1, e):
            n = max(1, -(-sd.ord_diff // e))
            fl = synthesize_finite_level(sd, k, n, c1=c1, c0=c0)
            got = infer_k(fl, sd)
            assert isinstance(got, ModuleClass) and got.k == k

    def test_level_one_diagonal_data_leaves_two_candidates(self):
        # diag(3, 3) action on (Z/9)^2 at level 1 cannot separate k = 0
        # from k = 1 when ord_diff = 3: both lattices present identically
        # at this depth
        sd = splitting_type(IwasawaPoly(3, 8, 573, 79713))
        fl = FiniteLevelData(1, (2, 2), ("b1", "b2"), ((3, 0), (0, 3)))
        got = infer_k(fl, sd)
        assert isinstance(got, Indeterminate)
        assert sorted(got.candidates) == [0, 1]

    def test_ord_diff_zero_is_immediate(self):
        sd = split_sd(3, 4)  # beta - alpha = 1, ord_diff = 0
        fl = FiniteLevelData(1, (1, 1), ("b1", "b2"), ((0, 0), (0, 0)))
        got = infer_k(fl, sd)
        assert isinstance(got, ModuleClass) and got.k == 0


class TestSynthesize:
    def test_growth_formula(self):
        sd = split_sd(3, 30)  # ords (1, 1), ord_diff 3
        for n in (1, 2):
            fl = synthesize_finite_level(sd, 1, n)
            assert sorted(fl.class_group) == [1 + n, 1 + n]

    def test_nonsplit_parity_guard(self):
        sd = splitting_type(IwasawaPoly(3, 7, 63, 135))  # ramified, e = 2
        with pytest.raises(ValueError):
            synthesize_finite_level(sd, sd.ord_diff - 1, 1, c1=63, c0=135)
