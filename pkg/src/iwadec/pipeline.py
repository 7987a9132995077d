"""End-to-end analysis of a case file and regeneration of the bundled
verdict tables.

The pipeline derives the field-tower facts (ray-class decomposition,
auxiliary class number criterion), decides the generator count when
that already settles the question, and otherwise runs the full
lambda = 2 machinery: splitting type, the invariant k, the action
coefficient valuations, and the four-case cyclicity test.
"""

import json
import os
from dataclasses import dataclass

from . import casefile
from .decision import (CYCLIC, NONCYCLIC, UNDETERMINED, FujiiResult,
                       MuValuations, NotApplicable, PreconditionViolated,
                       TowerData, Verdict, decide_cyclic_thm512,
                       decide_generators_thm11, fujii_layer, minardi_subset,
                       ord_mu_from_action, prop_test_sufficient)
from .modclass import ModuleClass, class_group_structure_from_k, infer_k
from .padic import Indeterminate, InsufficientPrecision, splitting_type
from .casefile import NonInvertibleBasis, derive_action_coefficients


class InternalInconsistency(Exception):
    """Two independent decision paths disagree on a bundled case."""


@dataclass
class Report:
    case: object
    verdict: Verdict
    table_row: dict
    warnings: tuple
    trace: tuple

    def to_dict(self):
        return {
            "p": self.case.p,
            "d": self.case.d,
            "verdict": {
                "generator_count": self.verdict.generator_count,
                "cyclic": self.verdict.cyclic,
                "fired_case": self.verdict.fired_case,
                "trace": list(self.verdict.trace),
                "needed": list(self.verdict.needed),
            },
            "table_row": self.table_row,
            "warnings": list(self.warnings),
            "trace": list(self.trace),
        }

    def render(self):
        lines = [f"Q(sqrt(-{self.case.d})) at p = {self.case.p}:"]
        lines += [f"  {t}" for t in self.trace]
        lines += [f"  {t}" for t in self.verdict.trace]
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        v = self.verdict
        count = "?" if v.generator_count is None else v.generator_count
        lines.append(f"  verdict: {v.cyclic} (generators: {count}, "
                     f"case {v.fired_case})")
        for n in v.needed:
            lines.append(f"  needed: {n}")
        return "\n".join(lines)


def resolve_tower(case, trace):
    """Fill in n1, n2, L_K ⊂ Ktilde, and the direct-summand flag from
    the optional ray-class / auxiliary-class-number blocks."""
    tower = dict(case.tower)
    exps = case.class_group_K
    vak = sum(exps)
    lk = tower.get("lk_in_ktilde")
    n1, n2 = tower.get("n1"), tower.get("n2")

    if lk == "derive":
        lk = None
        if case.minardi is not None:
            got = minardi_subset(case.p, case.d,
                                 case.minardi["h_aux_div_by_3"])
            if isinstance(got, NotApplicable):
                trace.append(f"auxiliary class number criterion: {got.reason}")
            else:
                lk = got
                trace.append(f"L_K ⊂ Ktilde = {lk} from the auxiliary "
                             "class number criterion")
    if n1 == "derive" or n2 == "derive":
        derived = None
        if case.ray_class is not None:
            got = fujii_layer(case.ray_class["factor_exponents"],
                              case.ray_class["n"], exps)
            if isinstance(got, FujiiResult):
                derived = got
                trace.append(f"ray-class decomposition gives n1 = {got.n1}, "
                             f"n2 = {got.n2}")
            else:
                trace.append(f"ray-class criterion: {got.reason}")
        if derived is None and lk is True:
            derived = FujiiResult(vak, 0, ())
            trace.append(f"L_K ⊂ Ktilde gives n1 = {vak}, n2 = 0")
        if derived is not None:
            if n1 == "derive":
                n1 = derived.n1
            if n2 == "derive":
                n2 = derived.n2
        else:
            n1 = None if n1 == "derive" else n1
            n2 = None if n2 == "derive" else n2
    if lk is None and n2 == 0:
        lk = True
        trace.append("n2 = 0 means L_K ⊂ Ktilde")

    ds = tower.get("direct_summand")
    if ds == "derive":
        if n1 is not None and n2 is not None:
            ds = sorted(exps) == sorted(x for x in (n1, n2) if x) \
                if 0 in (n1, n2) else sorted(exps) == sorted((n1, n2))
            trace.append(f"direct summand = {ds}: A_K exponents "
                         f"{tuple(sorted(exps))} vs (n1, n2) = ({n1}, {n2})")
        else:
            ds = None
    return TowerData(dim_AK_mod_p=len(exps), lambda_c=case.lambda_c,
                     n1=n1, n2=n2, lk_in_ktilde=lk, direct_summand=ds)


def _undetermined(trace, needed):
    return Verdict(None, UNDETERMINED, None, trace=tuple(trace),
                   needed=tuple(needed))


def _pick_poly(case, precision_override, trace):
    tagged = case.iwasawa_poly_extended or case.iwasawa_poly
    if tagged is None:
        return None
    poly = tagged.poly
    if precision_override is not None:
        poly = poly.truncate(precision_override)
        trace.append(f"precision override: using f mod p^{precision_override}")
    trace.append(f"f = S^2 + {poly.c1} S + {poly.c0} mod "
                 f"{poly.p}^{poly.precision} (sigma tag {tagged.sigma_tag!r})")
    return poly


def analyze(case, precision_override=None):
    """Run the full decision pipeline on a validated case."""
    trace = []
    warnings = []
    td = resolve_tower(case, trace)

    if td.dim_AK_mod_p == 1 or td.n1 == 0:
        verdict = decide_generators_thm11(td)
        return Report(case, verdict, None, tuple(warnings), tuple(trace))

    # lambda = 2 territory
    poly = _pick_poly(case, precision_override, trace)
    if poly is None:
        return Report(case, _undetermined(
            trace, ["Iwasawa polynomial mod p^N for the cyclotomic line"]),
            None, tuple(warnings), tuple(trace))
    try:
        sd = splitting_type(poly)
    except InsufficientPrecision as exc:
        trace.append(f"splitting type: {exc}")
        return Report(case, _undetermined(
            trace, [f"supply f at higher precision ({exc})"]),
            None, tuple(warnings), tuple(trace))
    kind_label = {"split": f"E=Q{case.p}", "unramified": "unramified",
                  "ramified": "ramified"}[sd.kind]
    trace.append(f"splitting: {kind_label}, ord_diff = {sd.ord_diff}, "
                 f"ord(alpha) = {sd.ord_alpha}, ord(beta) = {sd.ord_beta}")

    k = case.k_override
    if k is not None:
        trace.append(f"k = {k} (bundled)")
    elif case.finite_level is not None:
        got = infer_k(case.finite_level, sd)
        if isinstance(got, ModuleClass):
            k = got.k
            trace.append(f"k = {k} inferred from level-{case.finite_level.n} data")
        else:
            k = got
            trace.append(f"k not separated: candidates {sorted(got.candidates)}")

    mu = MuValuations()
    ac = case.action_coefficients
    if ac is None and case.action_forms is not None:
        try:
            ac = derive_action_coefficients(case.action_forms, case.p)
            trace.append(f"action coefficients A = {ac.A}, B = {ac.B} mod "
                         f"p^{ac.class_order_exponent}")
        except NonInvertibleBasis as exc:
            warnings.append(str(exc))
    if ac is not None and not isinstance(k, (Indeterminate, type(None))):
        try:
            mu = ord_mu_from_action(ac, sd, k)
            trace.append(f"ord(mu21) = {mu.mu21}, ord(mu22) = {mu.mu22} "
                         "from the action coefficient")
        except InsufficientPrecision as exc:
            warnings.append(f"action coefficient unusable: {exc}")

    pt = prop_test_sufficient(sd, case.class_group_K, td.n1)

    if k is None:
        if isinstance(pt, Verdict):
            trace.append("k unavailable; sufficient condition applies")
            return Report(case, pt, _table_row(case, sd, k, kind_label, pt),
                          tuple(warnings), tuple(trace))
        return Report(case, _undetermined(
            trace, ["finite-level class-group data or a k override"]),
            _table_row(case, sd, None, kind_label, None),
            tuple(warnings), tuple(trace))

    try:
        verdict = decide_cyclic_thm512(td, sd, k, mu)
    except PreconditionViolated as exc:
        trace.append(f"four-case test not applicable: {exc}")
        if isinstance(pt, Verdict):
            return Report(case, pt, _table_row(case, sd, k, kind_label, pt),
                          tuple(warnings), tuple(trace))
        return Report(case, _undetermined(trace, [str(exc)]),
                      _table_row(case, sd, k, kind_label, None),
                      tuple(warnings), tuple(trace))

    if isinstance(k, int):
        predicted = class_group_structure_from_k(ModuleClass(k, sd))
        observed = sorted(sd.e * e for e in case.class_group_K)
        if sorted(predicted) != observed:
            warnings.append(
                f"k = {k} predicts O_E-factor valuations {sorted(predicted)} "
                f"but A_K gives {observed}")
    if isinstance(pt, Verdict) and verdict.cyclic == NONCYCLIC:
        raise InternalInconsistency(
            f"d = {case.d}: sufficient condition says Cyclic, "
            "four-case test says NonCyclic")
    if isinstance(pt, Verdict) and verdict.cyclic == UNDETERMINED:
        trace.append("sufficient condition settles the open cases")
        verdict = Verdict(1, CYCLIC, "PropTest",
                          trace=verdict.trace + pt.trace,
                          needed=())
    return Report(case, verdict, _table_row(case, sd, k, kind_label, verdict),
                  tuple(warnings), tuple(trace))


def _table_row(case, sd, k, kind_label, verdict):
    tower_trace = []
    td = resolve_tower(case, tower_trace)
    exps = sorted(case.class_group_K, reverse=True)
    a0 = "(" + ",".join(str(case.p ** e) for e in exps) + ")"
    layer = "K" if td.n1 == 0 else (f"K{td.n1}^an" if td.n1 is not None else "?")
    if isinstance(k, Indeterminate):
        k_label = "{" + ",".join(str(x) for x in sorted(k.candidates)) + "}"
    else:
        k_label = "?" if k is None else str(k)
    verdict_label = "?"
    if verdict is not None:
        verdict_label = {CYCLIC: "cyclic", NONCYCLIC: "non-cyclic",
                         UNDETERMINED: "undetermined"}[verdict.cyclic]
    return {"d": case.d, "ord_diff": sd.ord_diff, "k": k_label,
            "m": sd.m, "layer": layer, "kind": kind_label, "a0": a0,
            "verdict": verdict_label}


def load_corpus(directory):
    cases = []
    for name in sorted(os.listdir(directory)):
        if not name.endswith(".json") or name == "expected_tables.json":
            continue
        cases.append(casefile.load(os.path.join(directory, name)))
    return cases


def regenerate_tables(directory):
    """Recompute every bundled table row and compare with the stored
    expectations; returns (report lines, ok flag)."""
    with open(os.path.join(directory, "expected_tables.json"),
              encoding="utf-8") as fh:
        expected = json.load(fh)
    by_d = {c.d: c for c in load_corpus(directory)}
    lines = []
    ok = True
    for table in sorted(expected["tables"], key=int):
        lines.append(f"Table {table}:")
        rows = expected["tables"][table]
        for d_str in sorted(rows, key=int):
            want = dict(rows[d_str])
            errata = want.pop("errata", {})
            case = by_d[int(d_str)]
            report = analyze(case)
            got = report.table_row or {}
            mismatches = []
            for field_name, published in want.items():
                accepted = published
                note = ""
                if field_name in errata:
                    accepted = errata[field_name]["accepted"]
                    note = (f" [published {published!r}; "
                            f"{errata[field_name]['note']}]")
                value = got.get(field_name, report.verdict.cyclic.lower()
                                if field_name == "verdict" else "?")
                if str(value) != str(accepted):
                    ok = False
                    mismatches.append(f"{field_name}: computed {value!r}, "
                                      f"expected {accepted!r}{note}")
                elif note:
                    lines.append(f"  d={d_str} {field_name}{note}")
            if mismatches:
                lines.append(f"  d={d_str}: MISMATCH " + "; ".join(mismatches))
            else:
                lines.append(
                    f"  d={d_str}: ({got.get('ord_diff')}, {got.get('k')}, "
                    f"{got.get('m')}, {got.get('layer')}, {got.get('kind')}, "
                    f"{got.get('a0')}, {got.get('verdict')}) OK")
    if "inputs" in expected:
        lines.append("Input tables (echoed):")
        for table, rows in sorted(expected["inputs"].items()):
            lines.append(f"  Table {table}:")
            for d_str in sorted(rows, key=int):
                lines.append(f"    d={d_str}: {rows[d_str]}")
    return lines, ok
