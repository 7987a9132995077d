"""Theorem-level decision procedures.

Generator counts of X_Ktilde over Z_p[[Gal(Ktilde/K)]], the four-case
cyclicity criterion in the lambda = 2 regime, the valuation reading of
the action coefficients that certifies ord(mu21) / ord(mu22), the
sufficient cyclicity condition, and the two field-tower criteria
(ray-class decomposition and the p = 3 auxiliary class number test).
"""

from dataclasses import dataclass

from .padic import Indeterminate, InsufficientPrecision, vp_bounded

CYCLIC = "Cyclic"
NONCYCLIC = "NonCyclic"
UNDETERMINED = "Undetermined"


class InconsistentInput(Exception):
    pass


class PreconditionViolated(Exception):
    pass


class AmbiguousDecomposition(Exception):
    pass


@dataclass(frozen=True)
class NotApplicable:
    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class TowerData:
    """Field-tower facts about K, L_K (Hilbert p-class field) and Ktilde."""
    dim_AK_mod_p: int
    lambda_c: int
    n1: int = None          # p^n1 = #Gal(L_K ∩ Ktilde / K)
    n2: int = None          # p^n2 = #Gal(L_K / L_K ∩ Ktilde)
    lk_in_ktilde: bool = None
    direct_summand: bool = None


@dataclass(frozen=True)
class ActionCoefficients:
    """Coefficients of S([uQ1 + vL1]) = A[sQ1] + B[uQ1 + vL1], reduced
    mod p^class_order_exponent (the order exponent of [sQ1])."""
    A: int
    B: int
    s: int
    t: int
    u: int
    v: int
    class_order_exponent: int

    def __post_init__(self):
        if self.s and self.u % self.s:
            raise ValueError("s must divide u")
        if self.t and self.v % self.t:
            raise ValueError("t must divide v")


@dataclass(frozen=True)
class MuValuations:
    """What is known of ord_E(mu21), ord_E(mu22): 0 or None (unknown)."""
    mu21: int = None
    mu22: int = None


@dataclass(frozen=True)
class Verdict:
    generator_count: int  # or None when unknown
    cyclic: str           # CYCLIC | NONCYCLIC | UNDETERMINED
    fired_case: str
    trace: tuple = ()
    needed: tuple = ()    # data that would settle an Undetermined verdict


def _t_and(*vals):
    if any(v is False for v in vals):
        return False
    if any(v is None for v in vals):
        return None
    return True


def _t_or(*vals):
    if any(v is True for v in vals):
        return True
    if any(v is None for v in vals):
        return None
    return False


def decide_generators_thm11(td):
    """Minimal generator count of X_Ktilde from tower data alone.

    Case (i): L_K ∩ Ktilde = K forces the count to equal dim A_K/pA_K.
    Case (ii), for dim = 1: lambda = 1 gives 1; lambda >= 2 gives 1
    exactly when L_K ⊂ Ktilde.
    """
    dim = td.dim_AK_mod_p
    if td.n1 == 0:
        if td.lk_in_ktilde and dim >= 1:
            raise InconsistentInput(
                "L_K ⊂ Ktilde with nontrivial A_K forces n1 > 0")
        cyc = CYCLIC if dim == 1 else NONCYCLIC
        return Verdict(dim, cyc, "T11-i",
                       trace=(f"n1 = 0, count = dim A_K/pA_K = {dim}",))
    if dim == 1:
        if td.lambda_c == 1:
            return Verdict(1, CYCLIC, "T11-iia",
                           trace=("dim = 1, lambda_c = 1",))
        if td.lk_in_ktilde is None:
            return Verdict(None, UNDETERMINED, "T11-iib",
                           trace=("dim = 1, lambda_c >= 2",),
                           needed=("whether L_K ⊂ Ktilde",))
        count = 1 if td.lk_in_ktilde else 2
        return Verdict(count, CYCLIC if count == 1 else NONCYCLIC, "T11-iib",
                       trace=(f"dim = 1, lambda_c = {td.lambda_c}, "
                              f"L_K ⊂ Ktilde: {td.lk_in_ktilde}",))
    return Verdict(None, UNDETERMINED, None,
                   trace=(f"dim = {dim} with n1 > 0: outside the "
                          "generator-count theorem",),
                   needed=("lambda = 2 cyclicity analysis",))


def _case_results(k, sd, td, mu):
    """Three-valued evaluation of the four cyclicity cases for a fixed k."""
    d, m = sd.ord_diff, sd.m
    mu21_zero = True if mu.mu21 == 0 else None

    case_i = k > 0 and d - k < m
    case_ii = mu21_zero if (k > 0 and d - k == m) else False
    case_iii = False
    case_iv = False
    if k == 0 and d == m:
        if td.n1 is None or td.n2 is None:
            case_iii = case_iv = None
        elif td.n1 < td.n2:
            case_iii = mu21_zero
        else:
            # try both root labelings for ord(mu22) = ord(beta) - ord(alpha);
            # mu22 is known (when it is) for the canonical labeling only
            targets = [(sd.ord_beta - sd.ord_alpha, True),
                       (sd.ord_alpha - sd.ord_beta, False)]
            labelings = []
            for target, canonical in targets:
                if target < 0:
                    labelings.append(False)
                elif canonical and mu.mu22 == 0:
                    labelings.append(target == 0)
                elif mu.mu22 == 0 and target == 0:
                    # equal valuations: the labelings coincide
                    labelings.append(True)
                else:
                    labelings.append(None)
            case_iv = _t_and(mu21_zero, _t_or(*labelings))
    return {"T512-i": case_i, "T512-ii": case_ii,
            "T512-iii": case_iii, "T512-iv": case_iv}


def decide_cyclic_thm512(td, sd, k, mu=MuValuations()):
    """Cyclicity of X_Ktilde in the settled lambda = 2 regime.

    k may be an integer or an Indeterminate candidate set; every
    candidate is evaluated and a verdict is returned only when they
    agree.  mu valuations may be unknown, in which case cases that
    depend on them stay open and the verdict can be Undetermined.
    """
    if td.dim_AK_mod_p != 2:
        raise PreconditionViolated("requires dim A_K/pA_K = 2")
    if not td.direct_summand:
        raise PreconditionViolated(
            "requires Gal(L_K ∩ Ktilde/K) to be a direct summand")
    if td.lambda_c != 2:
        raise PreconditionViolated("requires lambda_c = 2")
    if isinstance(sd.ord_diff, Indeterminate):
        raise PreconditionViolated("requires alpha != beta (ord_diff known)")

    ks = sorted(k.candidates) if isinstance(k, Indeterminate) else [k]
    per_k = []
    trace = [f"ord_diff = {sd.ord_diff}, m = {sd.m}, "
             f"ord(alpha) = {sd.ord_alpha}, ord(beta) = {sd.ord_beta}, "
             f"n1 = {td.n1}, n2 = {td.n2}"]
    for kk in ks:
        cases = _case_results(kk, sd, td, mu)
        fired = next((lbl for lbl, v in cases.items() if v is True), None)
        verdict = _t_or(*cases.values())
        per_k.append((kk, verdict, fired, cases))
        trace.append(f"k = {kk}: " + ", ".join(
            f"{lbl}={'open' if v is None else v}" for lbl, v in cases.items()))

    verdicts = {v for _, v, _, _ in per_k}
    needed = ()
    if None in verdicts or len(verdicts - {None}) > 1:
        open_cases = sorted({lbl for _, _, _, cases in per_k
                             for lbl, v in cases.items() if v is None})
        if open_cases:
            needed = (f"ord(mu21)/ord(mu22) to settle {', '.join(open_cases)}",)
        if len(ks) > 1:
            needed += ("finite-level data separating k candidates",)
        return Verdict(None, UNDETERMINED, "T512-none",
                       trace=tuple(trace), needed=needed)
    if verdicts == {True}:
        fired = per_k[0][2]
        if any(f != fired for _, _, f, _ in per_k):
            trace.append("candidates fire different cases but agree on the verdict")
        return Verdict(1, CYCLIC, fired, trace=tuple(trace))
    return Verdict(None, NONCYCLIC, "T512-none", trace=tuple(trace))


def ord_mu_from_action(ac, sd, k):
    """Read ord_E(mu21), ord_E(mu22) off the action coefficient A.

    Case (a): k = 0 and ord_E(A) = ord_diff below the order of [sQ1]
    gives ord(mu21) = ord(mu22) = 0.  Case (b): k > 0 and
    ord_diff - k = ord_E(A) below the order gives ord(mu21) = 0.
    """
    p, e = sd.field.p, sd.e
    co = ac.class_order_exponent
    av = vp_bounded(ac.A, p, co)
    if av is None:
        raise InsufficientPrecision(
            f"A ≡ 0 mod p^{co}: ord_E(A) not below the class order")
    ord_a = e * av
    order_val = e * co
    if k == 0 and ord_a == sd.ord_diff and ord_a < order_val:
        return MuValuations(0, 0)
    if k > 0 and sd.ord_diff - k == ord_a and ord_a < order_val:
        return MuValuations(0, None)
    return MuValuations(None, None)


def prop_test_sufficient(sd, ak_exponents, anticyclo_layer):
    """Sufficient condition: equal root valuations, A_K ≅ Z/p^m1 ⊕ Z/p^m2
    with m1 < m2, and L_K ∩ Ktilde the m2-th anticyclotomic layer."""
    if sd.ord_alpha != sd.ord_beta:
        return NotApplicable("ord(alpha) != ord(beta)")
    exps = sorted(ak_exponents)
    if len(exps) != 2 or exps[0] >= exps[1]:
        return NotApplicable("A_K is not Z/p^m1 + Z/p^m2 with m1 < m2")
    if anticyclo_layer != exps[1]:
        return NotApplicable(
            f"L_K ∩ Ktilde is layer {anticyclo_layer}, not {exps[1]}")
    return Verdict(1, CYCLIC, "PropTest",
                   trace=(f"ord(alpha) = ord(beta) = {sd.ord_alpha}, "
                          f"A_K exponents {tuple(exps)}, "
                          f"L_K ∩ Ktilde = K_{exps[1]}^an",))


@dataclass(frozen=True)
class FujiiResult:
    n1: int
    n2: int
    tor_exponents: tuple


def fujii_layer(ray_exponents, nk, ak_exponents,
                assume_trivial_local_torsion=True):
    """Locate L_K ∩ Ktilde from a ray-class decomposition.

    If (I_K(p)/S_K(p^nk)) ⊗ Z_p ≅ A ⊕ Z/p^N1 ⊕ Z/p^N2 with
    N = v_p(p · exp(A_K)) satisfying N + 2 <= nk and N < N1, N < N2,
    then Tor 𝔛_K ≅ A; with trivial local torsion this is
    Gal(L_K / L_K ∩ Ktilde), so n2 = v_p(#A) and n1 = v_p(#A_K) - n2.
    """
    N = 1 + max(ak_exponents)
    if N + 2 > nk:
        return NotApplicable(f"modulus level {nk} < N + 2 = {N + 2}")
    exps = sorted(ray_exponents, reverse=True)
    big = [x for x in exps if x > N]
    if len(big) < 2:
        return NotApplicable("fewer than two ray factors exceed N")
    if len(big) > 2:
        raise AmbiguousDecomposition(
            f"{len(big)} ray factors exceed N = {N}; cannot split off two")
    tor = tuple(sorted(x for x in exps if x <= N))
    if not assume_trivial_local_torsion:
        return FujiiResult(None, None, tor)
    n2 = sum(tor)
    n1 = sum(ak_exponents) - n2
    return FujiiResult(n1, n2, tor)


def minardi_subset(p, d, h_aux_div_by_3):
    """For p = 3 and d not ≡ 3 mod 9: L_K ⊂ Ktilde iff 3 does not divide
    the class number of Q(sqrt(3d))."""
    if p != 3:
        return NotApplicable("criterion is specific to p = 3")
    if d % 9 == 3:
        return NotApplicable("d ≡ 3 mod 9 is outside the criterion")
    return not h_aux_div_by_3
