"""Case-file schema: parsing, validation, serialization, and the exact
residue arithmetic that turns published ideal-class linear forms into
action coefficients.

A case file is UTF-8 JSON carrying the arithmetic dossier of one field
K = Q(sqrt(-d)) at one odd prime p.  Integers may be written as decimal
strings (required beyond 53-bit safety); rational coefficients appear
as {"num": ..., "den": ...} with unit denominators and are cleared to
residues on input.
"""

import json
from dataclasses import dataclass, field

from .decision import ActionCoefficients
from .modclass import FiniteLevelData
from .padic import IwasawaPoly, vp
from .residues import solve_2x2

SCHEMA_VERSION = "1"


class ValidationError(Exception):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{p}: {r}" for p, r in self.violations))


class NonInvertibleBasis(Exception):
    """The change of basis between the published ideal classes and the
    class-group basis is singular modulo the p-part."""


def _as_int(value, path, violations):
    if isinstance(value, bool):
        violations.append((path, "expected an integer"))
        return 0
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            violations.append((path, f"not a decimal integer: {value!r}"))
            return 0
    violations.append((path, f"expected integer or string, got {type(value).__name__}"))
    return 0


def _as_residue(value, p, modulus_exp, path, violations):
    """Integer or {num, den} rational with unit denominator, as a residue."""
    if isinstance(value, dict):
        num = _as_int(value.get("num"), path + ".num", violations)
        den = _as_int(value.get("den"), path + ".den", violations)
        if den % p == 0:
            violations.append((path + ".den", "denominator is not a p-adic unit"))
            return 0
        mod = p ** modulus_exp
        return num * pow(den, -1, mod) % mod
    return _as_int(value, path, violations) % p ** modulus_exp


def _encode_int(n):
    return n if abs(n) < 2 ** 53 else str(n)


@dataclass(frozen=True)
class TaggedPoly:
    poly: IwasawaPoly
    sigma_tag: str


@dataclass(frozen=True)
class ActionForms:
    """Example-4.3-style published data: ideal classes [Q1], [L1] and
    the sigma-action on them, as linear forms in a class-group basis."""
    n: int
    basis_orders: tuple
    Q1: tuple
    L1: tuple
    sigma_Q1: tuple
    sigma_L1: tuple
    s: int
    t: int
    u: int
    v: int
    class_order_exponent: int


@dataclass(frozen=True)
class CaseInput:
    p: int
    d: int
    class_group_K: tuple      # p-exponents of the cyclic factors of A_K
    lambda_c: int             # None when unknown and unused
    iwasawa_poly: TaggedPoly = None
    iwasawa_poly_extended: TaggedPoly = None
    iwasawa_poly_variants: tuple = ()
    finite_level: FiniteLevelData = None
    k_override: int = None
    ray_class: dict = None    # {"n": int, "factor_exponents": tuple}
    minardi: dict = None      # {"h_aux_div_by_3": bool}
    tower: dict = field(default_factory=dict)
    action_forms: ActionForms = None
    action_coefficients: ActionCoefficients = None
    provenance: str = ""


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _is_squarefree(n):
    i = 2
    while i * i <= n:
        if n % (i * i) == 0:
            return False
        i += 1
    return True


def _parse_poly(raw, p, path, violations):
    prec = _as_int(raw.get("precision"), path + ".precision", violations)
    c1 = _as_int(raw.get("c1"), path + ".c1", violations)
    c0 = _as_int(raw.get("c0"), path + ".c0", violations)
    tag = raw.get("sigma_tag", "")
    try:
        return TaggedPoly(IwasawaPoly(p, prec, c1, c0), tag)
    except ValueError as exc:
        violations.append((path, str(exc)))
        return None


def _parse_action_forms(raw, p, violations):
    path = "action_forms"
    orders = tuple(_as_int(x, path + ".basis_orders", violations)
                   for x in raw.get("basis_orders", ()))
    co = _as_int(raw.get("class_order_exponent"), path + ".class_order_exponent",
                 violations)
    forms = {}
    for name in ("Q1", "L1", "sigma_Q1", "sigma_L1"):
        forms[name] = tuple(_as_int(x, f"{path}.{name}", violations)
                            for x in raw.get(name, ()))
        if len(forms[name]) != len(orders):
            violations.append((f"{path}.{name}", "length mismatch with basis"))
    mults = {name: _as_int(raw.get(name), f"{path}.{name}", violations)
             for name in ("s", "t", "u", "v")}
    if mults["s"] and mults["u"] % mults["s"]:
        violations.append((path, "s must divide u"))
    if mults["t"] and mults["v"] % mults["t"]:
        violations.append((path, "t must divide v"))
    if any(vp(o, p) < co for o in orders if o):
        violations.append((path + ".basis_orders",
                           f"p-part below class_order_exponent {co}"))
    return ActionForms(n=_as_int(raw.get("n"), path + ".n", violations),
                       basis_orders=orders, Q1=forms["Q1"], L1=forms["L1"],
                       sigma_Q1=forms["sigma_Q1"], sigma_L1=forms["sigma_L1"],
                       class_order_exponent=co, **mults)


def _parse_action_coefficients(raw, p, violations):
    path = "action_coefficients"
    co = _as_int(raw.get("class_order_exponent"),
                 path + ".class_order_exponent", violations)
    A = _as_residue(raw.get("A"), p, co or 1, path + ".A", violations)
    B = _as_residue(raw.get("B"), p, co or 1, path + ".B", violations)
    mults = {name: _as_int(raw.get(name), f"{path}.{name}", violations)
             for name in ("s", "t", "u", "v")}
    try:
        return ActionCoefficients(A=A, B=B, class_order_exponent=co, **mults)
    except ValueError as exc:
        violations.append((path, str(exc)))
        return None


_TOWER_KEYS = ("lk_in_ktilde", "direct_summand", "n1", "n2")


def validate(raw):
    """Parse and cross-check a raw case dict; returns CaseInput or raises
    ValidationError with a list of (field path, reason) pairs."""
    violations = []
    if raw.get("schema_version") != SCHEMA_VERSION:
        violations.append(("schema_version",
                           f"expected {SCHEMA_VERSION!r}, got "
                           f"{raw.get('schema_version')!r}"))
    p = _as_int(raw.get("p"), "p", violations)
    d = _as_int(raw.get("d"), "d", violations)
    if not _is_prime(p) or p == 2:
        violations.append(("p", f"{p} is not an odd prime"))
    if d <= 0 or not _is_squarefree(d):
        violations.append(("d", f"{d} is not a positive square-free integer"))
    if p > 2 and d > 0 and d % p != 0:
        if pow(-d % p, (p - 1) // 2, p) == 1:
            violations.append(("d", f"p = {p} splits in Q(sqrt(-{d}))"))

    exps = tuple(_as_int(x, "class_group_K", violations)
                 for x in raw.get("class_group_K", ()))
    if not exps or any(e < 1 for e in exps):
        violations.append(("class_group_K", "need cyclic p-exponents >= 1"))
    lambda_c = raw.get("lambda_c")
    if lambda_c is not None:
        lambda_c = _as_int(lambda_c, "lambda_c", violations)
        if lambda_c < 1:
            violations.append(("lambda_c", "must be >= 1"))

    polys = {}
    for key in ("iwasawa_poly", "iwasawa_poly_extended"):
        polys[key] = (_parse_poly(raw[key], p, key, violations)
                      if key in raw else None)
    variants = tuple(_parse_poly(v, p, f"iwasawa_poly_variants[{i}]", violations)
                     for i, v in enumerate(raw.get("iwasawa_poly_variants", ())))
    if polys["iwasawa_poly"] and lambda_c not in (None, 2):
        violations.append(("lambda_c",
                           "quadratic Iwasawa polynomial encodes lambda_c = 2"))

    finite_level = None
    if "finite_level" in raw:
        fl = raw["finite_level"]
        cg = tuple(_as_int(x, "finite_level.class_group", violations)
                   for x in fl.get("class_group", ()))
        act = tuple(tuple(_as_int(x, "finite_level.s_action", violations)
                          for x in row) for row in fl.get("s_action", ()))
        if len(cg) != 2 or len(act) != 2 or any(len(r) != 2 for r in act):
            violations.append(("finite_level", "need 2 factors and a 2x2 action"))
        else:
            finite_level = FiniteLevelData(
                n=_as_int(fl.get("n"), "finite_level.n", violations),
                class_group=cg,
                basis_labels=tuple(fl.get("basis_labels", ("b1", "b2"))),
                s_action=act)

    tower = dict(raw.get("tower", {}))
    for key in tower:
        if key not in _TOWER_KEYS:
            violations.append((f"tower.{key}", "unknown tower field"))
    for key in ("n1", "n2"):
        val = tower.get(key)
        if val is not None and val != "derive":
            tower[key] = _as_int(val, f"tower.{key}", violations)

    ray = None
    if "ray_class" in raw:
        rc = raw["ray_class"]
        ray = {"n": _as_int(rc.get("n"), "ray_class.n", violations),
               "factor_exponents": tuple(
                   _as_int(x, "ray_class.factor_exponents", violations)
                   for x in rc.get("factor_exponents", ()))}
    minardi = None
    if "minardi" in raw:
        minardi = {"h_aux_div_by_3": bool(raw["minardi"].get("h_aux_div_by_3"))}

    # derivability of every "derive" field
    derivable = {
        "n1": ray is not None or minardi is not None,
        "n2": ray is not None or minardi is not None,
        "lk_in_ktilde": minardi is not None or tower.get("n2") == 0,
        "direct_summand": True,  # from n1, n2 and class_group_K
    }
    for key in _TOWER_KEYS:
        if tower.get(key) == "derive" and not derivable[key]:
            violations.append((f"tower.{key}",
                               "marked derive but no ray_class/minardi block "
                               "supplies it"))

    # growth formula cross-check: A_{K_n^c} exponents = (n1 + n, n2 + n)
    if finite_level and len(exps) == 2:
        predicted = sorted(e + finite_level.n for e in exps)
        if sorted(finite_level.class_group) != predicted:
            violations.append(("finite_level.class_group",
                               f"growth formula predicts {predicted}, "
                               f"got {sorted(finite_level.class_group)}"))

    k_override = (None if "k_override" not in raw
                  else _as_int(raw["k_override"], "k_override", violations))
    action_forms = (_parse_action_forms(raw["action_forms"], p, violations)
                    if "action_forms" in raw else None)
    action_coefficients = (
        _parse_action_coefficients(raw["action_coefficients"], p, violations)
        if "action_coefficients" in raw else None)

    if violations:
        raise ValidationError(violations)
    return CaseInput(p=p, d=d, class_group_K=exps, lambda_c=lambda_c,
                     iwasawa_poly=polys["iwasawa_poly"],
                     iwasawa_poly_extended=polys["iwasawa_poly_extended"],
                     iwasawa_poly_variants=variants,
                     finite_level=finite_level, k_override=k_override,
                     ray_class=ray, minardi=minardi, tower=tower,
                     action_forms=action_forms,
                     action_coefficients=action_coefficients,
                     provenance=raw.get("provenance", ""))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return validate(json.load(fh))


def serialize(case):
    """Canonical raw dict for a CaseInput; validate(serialize(c)) == c."""
    raw = {"schema_version": SCHEMA_VERSION, "p": case.p, "d": case.d,
           "class_group_K": list(case.class_group_K)}
    if case.lambda_c is not None:
        raw["lambda_c"] = case.lambda_c

    def poly_dict(tagged):
        return {"precision": tagged.poly.precision,
                "c1": _encode_int(tagged.poly.c1),
                "c0": _encode_int(tagged.poly.c0),
                "sigma_tag": tagged.sigma_tag}

    if case.iwasawa_poly:
        raw["iwasawa_poly"] = poly_dict(case.iwasawa_poly)
    if case.iwasawa_poly_extended:
        raw["iwasawa_poly_extended"] = poly_dict(case.iwasawa_poly_extended)
    if case.iwasawa_poly_variants:
        raw["iwasawa_poly_variants"] = [poly_dict(v)
                                        for v in case.iwasawa_poly_variants]
    if case.finite_level:
        fl = case.finite_level
        raw["finite_level"] = {"n": fl.n, "class_group": list(fl.class_group),
                               "basis_labels": list(fl.basis_labels),
                               "s_action": [list(r) for r in fl.s_action]}
    if case.k_override is not None:
        raw["k_override"] = case.k_override
    if case.ray_class:
        raw["ray_class"] = {"n": case.ray_class["n"],
                            "factor_exponents":
                                list(case.ray_class["factor_exponents"])}
    if case.minardi:
        raw["minardi"] = dict(case.minardi)
    if case.tower:
        raw["tower"] = dict(case.tower)
    if case.action_forms:
        af = case.action_forms
        raw["action_forms"] = {
            "n": af.n, "basis_orders": [_encode_int(o) for o in af.basis_orders],
            "Q1": [_encode_int(x) for x in af.Q1],
            "L1": [_encode_int(x) for x in af.L1],
            "sigma_Q1": [_encode_int(x) for x in af.sigma_Q1],
            "sigma_L1": [_encode_int(x) for x in af.sigma_L1],
            "s": af.s, "t": af.t, "u": af.u, "v": af.v,
            "class_order_exponent": af.class_order_exponent}
    if case.action_coefficients:
        ac = case.action_coefficients
        raw["action_coefficients"] = {
            "A": _encode_int(ac.A), "B": _encode_int(ac.B),
            "s": ac.s, "t": ac.t, "u": ac.u, "v": ac.v,
            "class_order_exponent": ac.class_order_exponent}
    if case.provenance:
        raw["provenance"] = case.provenance
    return raw


def derive_action_coefficients(forms, p):
    """Solve S([uQ1 + vL1]) = A[sQ1] + B[uQ1 + vL1] over the p-part.

    All linear forms are reduced to the p-part of the factor orders;
    any rational presentations in the source record were cleared by the
    parser.  Requires the (x1, x2) coordinate matrix to be invertible
    mod p, else NonInvertibleBasis.
    """
    co = forms.class_order_exponent
    mod = p ** co
    exps = [vp(o, p) for o in forms.basis_orders]
    if any(e < co for e in exps):
        raise ValueError("basis order p-part below the class order exponent")

    def reduce(form):
        return [x % mod for x in form]

    q1, l1 = reduce(forms.Q1), reduce(forms.L1)
    sq = [(a - b) % mod for a, b in zip(reduce(forms.sigma_Q1), q1)]
    sl = [(a - b) % mod for a, b in zip(reduce(forms.sigma_L1), l1)]
    x1 = [forms.s * c % mod for c in q1]
    x2 = [(forms.u * a + forms.v * b) % mod for a, b in zip(q1, l1)]
    rhs = [(forms.u * a + forms.v * b) % mod for a, b in zip(sq, sl)]

    sol = solve_2x2([[x1[0], x2[0]], [x1[1], x2[1]]], rhs, p, co)
    if sol is None:
        raise NonInvertibleBasis(
            "determinant of ([sQ1], [uQ1+vL1]) coordinates is divisible by p")
    A, B = sol
    return ActionCoefficients(A=A, B=B, s=forms.s, t=forms.t, u=forms.u,
                              v=forms.v, class_order_exponent=co)
