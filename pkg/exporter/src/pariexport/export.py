"""Build a validated case file from CAS query results.

`export_case` issues a fixed set of named queries to a session (live GP
or recorded), parses their printed output, assembles the raw case
dictionary, and self-checks it against the consumer's schema before
anything is written.
"""

import json
from dataclasses import dataclass, field

from iwadec.casefile import ValidationError, validate

from .session import CasUnavailable

# Anticyclotomic defining polynomials for the bundled discriminants;
# jobs may pass their own through ExportJob.defining_poly instead.
ANTICYCLO_POLYS = {
    2437: "x^6 - 20*x^4 + 100*x^2 + 38992",
    3886: "x^6 - 66*x^4 + 1089*x^2 + 62176",
    4027: "x^6 - 44*x^4 + 484*x^2 + 4027",
    7977: "x^6 - 2*x^5 - 53*x^4 + 126*x^3 + 8634*x^2 - 1944*x + 1296",
}


class ExportError(Exception):
    """The job is outside the standing hypotheses or the CAS data is
    unusable."""


@dataclass(frozen=True)
class ExportJob:
    p: int
    d: int
    level: int = 1
    aux_prime_bound: int = 1000
    defining_poly: str = None
    out: str = None


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _check_hypotheses(job):
    p, d = job.p, job.d
    if p < 3 or any(p % q == 0 for q in range(2, p) if q * q <= p) \
            or p % 2 == 0:
        raise ExportError(f"p = {p} is not an odd prime")
    if d < 1 or any(d % (q * q) == 0 for q in range(2, int(d ** 0.5) + 1)):
        raise ExportError(f"d = {d} is not squarefree and positive")
    if d % p != 0 and pow(-d % p, (p - 1) // 2, p) == 1:
        raise ExportError(f"p = {p} splits in Q(sqrt(-{d})); the standing "
                          "hypothesis excludes this case")


def _parse(name, out):
    try:
        return json.loads(out)
    except json.JSONDecodeError as exc:
        raise ExportError(f"query {name}: unparsable CAS output "
                          f"{out!r}") from exc


def _query(session, name, args, script):
    return _parse(name, session.run(name, args, script))


def _class_group(session, job):
    script = (f"K = bnfinit(x^2 + {job.d}, 1);\n"
              "print(K.clgp.cyc)\n")
    cyc = _query(session, "class_group", {"p": job.p, "d": job.d}, script)
    exps = sorted((_vp(c, job.p) for c in cyc), reverse=True)
    exps = [e for e in exps if e > 0]
    if not exps:
        raise ExportError(f"class group {cyc} has trivial {job.p}-part")
    return exps


def _iwasawa_poly(session, job):
    script = ("read(\"iwapoly.gp\");\n"
              f"[N, f] = iwapoly({job.p}, {job.d});\n"
              "print([N, Vec(lift(f))])\n")
    prec, coeffs = _query(session, "iwasawa_poly",
                          {"p": job.p, "d": job.d}, script)
    if coeffs[0] != 1:
        raise ExportError(f"iwasawa_poly: non-monic coefficients {coeffs}")
    return prec, coeffs[1:]


def _ray_class(session, job):
    script = (f"K = bnfinit(x^2 + {job.d}, 1);\n"
              f"R = bnrinit(K, {job.p}^8, 1);\n"
              f"[n, e] = rayfactors(R, {job.p});\n"
              "print([n, e])\n")
    n, exps = _query(session, "ray_class", {"p": job.p, "d": job.d}, script)
    return {"n": n, "factor_exponents": exps}


def _invariant_k(session, job):
    script = ("read(\"latinv.gp\");\n"
              f"print(latk({job.p}, {job.d}, {job.level}))\n")
    return _query(session, "invariant_k",
                  {"p": job.p, "d": job.d, "n": job.level}, script)


def _action_forms(session, job):
    script = ("read(\"splitforms.gp\");\n"
              f"print(splitforms({job.p}, {job.d}, {job.level}, "
              f"{job.aux_prime_bound}))\n")
    got = _query(session, "action_forms",
                 {"p": job.p, "d": job.d, "n": job.level,
                  "bound": job.aux_prime_bound}, script)
    orders, q1, l1, sq1, sl1, mults, co = got
    return {"n": job.level, "basis_orders": orders, "Q1": q1, "L1": l1,
            "sigma_Q1": sq1, "sigma_L1": sl1,
            "s": mults[0], "t": mults[1], "u": mults[2], "v": mults[3],
            "class_order_exponent": co}


def export_case(job, session):
    """Run every query for the job, assemble and self-validate the case
    dictionary, and (when job.out is set) write it.  Returns the raw
    dictionary."""
    _check_hypotheses(job)
    exps = _class_group(session, job)
    prec, (c1, c0) = _iwasawa_poly(session, job)
    raw = {
        "schema_version": "1",
        "p": job.p,
        "d": job.d,
        "class_group_K": exps,
        "lambda_c": 2,
        "iwasawa_poly": {"precision": prec, "c1": c1, "c0": c0,
                         "sigma_tag": ""},
        "k_override": _invariant_k(session, job),
        "ray_class": _ray_class(session, job),
        "tower": {"n1": "derive", "n2": "derive",
                  "direct_summand": "derive"},
    }
    try:
        raw["action_forms"] = _action_forms(session, job)
    except CasUnavailable:
        pass  # linear forms are optional; verdicts may not need them
    poly = job.defining_poly or ANTICYCLO_POLYS.get(job.d)
    prov = ("exported from a GP session (class group GRH-conditional); "
            "split primes scanned in increasing order up to "
            f"{job.aux_prime_bound}")
    if poly:
        prov += f"; anticyclotomic layer defined by {poly}"
    raw["provenance"] = prov

    try:
        validate(raw)
    except ValidationError as exc:
        detail = "; ".join(f"{p_}: {r}" for p_, r in exc.violations)
        raise ExportError(f"emitted file fails schema self-check: {detail}")
    if job.out:
        with open(job.out, "w", encoding="utf-8") as fh:
            json.dump(raw, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return raw
