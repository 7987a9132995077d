"""Independent verifiers: lightweight self-checks and negative controls.

The heavy, criterion-sized runs live in the acceptance suite; these keep
each oracle honest on small inputs so failures localize."""

import pytest

from iwadec import oracle
from iwadec.modclass import GeneratorFrame, ModuleClass, s_action_matrix
from iwadec.padic import (IwasawaPoly, PadicElem, SplittingData, base_field,
                          splitting_from_roots, splitting_type,
                          unramified_field)

F3 = base_field(3)


def split_sd(a, b, prec=8):
    return splitting_from_roots(PadicElem(F3, prec, a), PadicElem(F3, prec, b))


class TestCanonSpan:
    def test_unit_multiple_ideals_agree(self):
        p, M = 3, 4
        rows = [[3, 7, 0], [0, 9, 6]]
        scaled = [[5 * x % 81 for x in r] for r in rows]
        assert oracle._canon_span(rows, p, M) \
            == oracle._canon_span(scaled, p, M)

    def test_order_independent(self):
        p, M = 3, 3
        rows = [[1, 4], [3, 9]]
        assert oracle._canon_span(rows, p, M) \
            == oracle._canon_span(list(reversed(rows)), p, M)


class TestEnumerateClasses:
    def test_counts_match_ord_diff(self):
        for a, b in [(3, 4), (3, 6), (3, 12), (3, 30)]:
            alpha = PadicElem(F3, 8, a)
            beta = PadicElem(F3, 8, b)
            d = (beta - alpha).valuation()
            assert oracle.enumerate_classes(alpha, beta, d + 2) == d + 1

    def test_precision_guard(self):
        alpha, beta = PadicElem(F3, 8, 3), PadicElem(F3, 8, 30)
        with pytest.raises(ValueError):
            oracle.enumerate_classes(alpha, beta, 3)  # ord_diff 3 needs N >= 5

    def test_budget(self):
        alpha, beta = PadicElem(F3, 8, 3), PadicElem(F3, 8, 30)
        with pytest.raises(oracle.ResourceLimit):
            oracle.enumerate_classes(alpha, beta, 5, budget=10)


class TestVerifyFitting:
    def test_passes(self):
        assert oracle.verify_fitting(ModuleClass(1, split_sd(3, 30)),
                                     trials=10, seed=3)

    def test_corrupt_control_fails(self):
        with pytest.raises(oracle.OracleFailure):
            oracle.verify_fitting(ModuleClass(1, split_sd(3, 30)),
                                  trials=10, seed=3, corrupt=True)


class TestVerifyKoike:
    def test_split_all_k(self):
        sd = split_sd(3, 30)  # ord_diff 3
        for k in range(sd.ord_diff + 1):
            assert oracle.verify_koike_iso(ModuleClass(k, sd))

    def test_wrong_partner_fails(self):
        sd = split_sd(3, 30)
        assert not oracle.verify_koike_iso(ModuleClass(1, sd), x=0)

    def test_ramified(self):
        sd = splitting_type(IwasawaPoly(3, 5, 63, 135))  # e = 2, ord_diff 3
        assert oracle.verify_koike_iso(ModuleClass(3, sd))
        assert not oracle.verify_koike_iso(ModuleClass(3, sd), x=2)

    def test_unramified_small(self):
        sd = splitting_type(IwasawaPoly(3, 3, 9, 9))  # ord_diff 1
        for k in range(sd.ord_diff + 1):
            assert oracle.verify_koike_iso(ModuleClass(k, sd))


def _closed_form_for(field):
    def closed_form(lam, alpha, beta, k):
        sd = SplittingData("split" if field.kind == "base" else field.kind,
                           field, alpha, beta,
                           alpha.valuation(), beta.valuation(),
                           (beta - alpha).valuation())
        return s_action_matrix(GeneratorFrame(lam, k), sd)
    return closed_form


class TestMainLem:
    def test_base_field(self):
        assert oracle.verify_main_lem(_closed_form_for(F3), F3,
                                      trials=20, seed=1)

    def test_unramified(self):
        fld = unramified_field(3)
        assert oracle.verify_main_lem(_closed_form_for(fld), fld,
                                      trials=10, seed=1)

    def test_detects_broken_formula(self):
        def broken(lam, alpha, beta, k):
            good = _closed_form_for(F3)(lam, alpha, beta, k)
            return [[good[0][0] + PadicElem(F3, good[0][0].prec, 1),
                     good[0][1]], list(good[1])]
        with pytest.raises(oracle.OracleFailure):
            oracle.verify_main_lem(broken, F3, trials=5, seed=1)
