"""Command line: export one case file per invocation.

    pari-export export --p 3 --d 2437 --level 1 --out case.json

The default backend is a live `gp` subprocess; `--backend fixtures`
replays a recorded session (the bundled recordings cover p = 3,
d in {2437, 12394})."""

import argparse
import sys

from .export import ExportError, ExportJob, export_case
from .session import (CasFailure, CasUnavailable, FixtureSession, GpSession,
                      bundled_fixture_dir)

EXIT_OK = 0
EXIT_REFUSED = 3
EXIT_CAS = 4


def build_parser():
    parser = argparse.ArgumentParser(prog="pari-export")
    sub = parser.add_subparsers(dest="command", required=True)
    p_exp = sub.add_parser("export", help="compute and emit one case file")
    p_exp.add_argument("--p", type=int, required=True)
    p_exp.add_argument("--d", type=int, required=True)
    p_exp.add_argument("--level", type=int, default=1)
    p_exp.add_argument("--out", required=True)
    p_exp.add_argument("--aux-prime-bound", type=int, default=1000)
    p_exp.add_argument("--defining-poly", default=None)
    p_exp.add_argument("--backend", choices=("gp", "fixtures"), default="gp")
    p_exp.add_argument("--fixtures", default=None,
                       help="recorded-session file or directory "
                            "(default: the bundled recordings)")
    p_exp.add_argument("--gp-bin", default="gp")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    job = ExportJob(p=args.p, d=args.d, level=args.level,
                    aux_prime_bound=args.aux_prime_bound,
                    defining_poly=args.defining_poly, out=args.out)
    try:
        if args.backend == "fixtures":
            session = FixtureSession(args.fixtures or bundled_fixture_dir())
        else:
            session = GpSession(args.gp_bin)
        export_case(job, session)
    except ExportError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        sys.exit(EXIT_REFUSED)
    except (CasUnavailable, CasFailure) as exc:
        print(f"CAS error: {exc}", file=sys.stderr)
        sys.exit(EXIT_CAS)
    print(f"wrote {args.out}")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
