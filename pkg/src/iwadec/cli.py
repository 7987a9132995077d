"""Command-line surface.

Verbs: analyze (full verdict for one case file), classify (the invariant
k only), tables (regenerate the bundled verdict tables), oracle (run an
independent verifier).  Exit codes: 0 determinate verdict, 2
undetermined, 3 validation failure, 4 internal inconsistency.
"""

import argparse
import json
import sys

from . import casefile, oracle, pipeline
from .decision import UNDETERMINED
from .modclass import GeneratorFrame, ModuleClass, infer_k, s_action_matrix
from .padic import (InsufficientPrecision, PadicElem, SplittingData,
                    base_field, splitting_from_roots, splitting_type,
                    unramified_field)

EXIT_OK = 0
EXIT_UNDETERMINED = 2
EXIT_VALIDATION = 3
EXIT_INTERNAL = 4


def _load(path):
    try:
        return casefile.load(path)
    except (casefile.ValidationError, json.JSONDecodeError, OSError) as exc:
        if isinstance(exc, casefile.ValidationError):
            for field_path, reason in exc.violations:
                print(f"validation: {field_path}: {reason}", file=sys.stderr)
        else:
            print(f"cannot read {path}: {exc}", file=sys.stderr)
        sys.exit(EXIT_VALIDATION)


def _cmd_analyze(args):
    case = _load(args.file)
    try:
        report = pipeline.analyze(case, precision_override=args.precision_override)
    except pipeline.InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except InsufficientPrecision as exc:
        print(f"insufficient precision: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    if args.json_report:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(report.render())
    return (EXIT_UNDETERMINED if report.verdict.cyclic == UNDETERMINED
            else EXIT_OK)


def _cmd_classify(args):
    case = _load(args.file)
    trace = []
    poly = pipeline._pick_poly(case, args.precision_override, trace)
    if poly is None:
        print("no Iwasawa polynomial in the case file", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        sd = splitting_type(poly)
    except InsufficientPrecision as exc:
        print(f"insufficient precision: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    if case.k_override is not None:
        result = {"k": case.k_override, "source": "bundled"}
    elif case.finite_level is not None:
        got = infer_k(case.finite_level, sd)
        if isinstance(got, ModuleClass):
            result = {"k": got.k, "source": f"level-{case.finite_level.n} data"}
        else:
            result = {"k": sorted(got.candidates), "source": "undetermined"}
    else:
        print("no finite-level data and no k override", file=sys.stderr)
        return EXIT_UNDETERMINED
    result["ord_diff"] = sd.ord_diff
    if args.json_report:
        print(json.dumps(result, sort_keys=True))
    else:
        print(f"k = {result['k']} ({result['source']}), "
              f"ord_diff = {sd.ord_diff}")
    return EXIT_UNDETERMINED if result["source"] == "undetermined" else EXIT_OK


def _cmd_tables(args):
    try:
        lines, ok = pipeline.regenerate_tables(args.dir)
    except pipeline.InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.json_report:
        print(json.dumps({"lines": lines, "ok": ok}, indent=2))
    else:
        print("\n".join(lines))
    return EXIT_OK if ok else EXIT_INTERNAL


def _base_elem(p, value, precision):
    return PadicElem(base_field(p), precision, value)


def _cmd_oracle(args):
    p, N = args.p, args.precision
    try:
        if args.oracle_cmd == "classes":
            alpha = _base_elem(p, args.alpha, N + 2)
            beta = _base_elem(p, args.beta, N + 2)
            count = oracle.enumerate_classes(alpha, beta, N, budget=args.budget)
            diff = (beta - alpha).valuation()
            print(f"classes: {count} (ord(beta-alpha) + 1 = {diff + 1})")
            return EXIT_OK if count == diff + 1 else EXIT_INTERNAL
        if args.oracle_cmd == "fitting":
            sd = splitting_from_roots(_base_elem(p, args.alpha, N),
                                      _base_elem(p, args.beta, N))
            oracle.verify_fitting(ModuleClass(args.k, sd),
                                  trials=args.trials, seed=args.seed)
            print("fitting: pass")
            return EXIT_OK
        if args.oracle_cmd == "koike":
            sd = splitting_from_roots(_base_elem(p, args.alpha, N),
                                      _base_elem(p, args.beta, N))
            found = oracle.verify_koike_iso(ModuleClass(args.k, sd),
                                            x=args.x, budget=args.budget)
            print(f"koike: {'pass' if found else 'FAIL (no isomorphism)'}")
            return EXIT_OK if found else EXIT_INTERNAL
        if args.oracle_cmd == "mainlem":
            field = {"base": base_field(p),
                     "unramified": unramified_field(p)}[args.kind]

            def closed_form(lam, alpha, beta, k):
                sd = SplittingData(
                    "split" if field.kind == "base" else field.kind,
                    field, alpha, beta,
                    alpha.valuation(), beta.valuation(),
                    (beta - alpha).valuation())
                return s_action_matrix(GeneratorFrame(lam, k), sd)

            oracle.verify_main_lem(closed_form, field, trials=args.trials,
                                   seed=args.seed, prec=N)
            print("mainlem: pass")
            return EXIT_OK
    except oracle.OracleFailure as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except oracle.ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    raise AssertionError("unreachable")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="iwadec",
        description="Cyclicity of the unramified Iwasawa module over the "
                    "two-variable Iwasawa algebra")
    parser.add_argument("--precision-override", type=int, default=None,
                        help="truncate the Iwasawa polynomial to this "
                             "p-adic precision")
    parser.add_argument("--json-report", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="full verdict for a case file")
    p_analyze.add_argument("file")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_classify = sub.add_parser("classify", help="the invariant k only")
    p_classify.add_argument("file")
    p_classify.set_defaults(func=_cmd_classify)

    p_tables = sub.add_parser("tables", help="regenerate the bundled tables")
    p_tables.add_argument("dir")
    p_tables.set_defaults(func=_cmd_tables)

    p_oracle = sub.add_parser("oracle", help="independent verifiers")
    o_sub = p_oracle.add_subparsers(dest="oracle_cmd", required=True)
    for name in ("classes", "fitting", "koike", "mainlem"):
        o = o_sub.add_parser(name)
        o.add_argument("--p", type=int, default=3)
        o.add_argument("--precision", type=int, default=5)
        o.add_argument("--budget", type=int, default=500_000)
        o.add_argument("--seed", type=int, default=0)
        o.add_argument("--trials", type=int, default=50)
        if name in ("classes", "fitting", "koike"):
            o.add_argument("--alpha", type=int, required=True)
            o.add_argument("--beta", type=int, required=True)
        if name in ("fitting", "koike"):
            o.add_argument("--k", type=int, default=0)
        if name == "koike":
            o.add_argument("--x", type=int, default=None)
        if name == "mainlem":
            o.add_argument("--kind", choices=("base", "unramified"),
                           default="base")
        o.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    sys.exit(args.func(args))


if __name__ == "__main__":
    main()
