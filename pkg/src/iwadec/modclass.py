"""Classification of rank-2 O_E-free torsion Lambda_E-modules.

The isomorphism class of X ⊗ O_E is one of the lattices
M(k) = <(1,1), (0, pi_E^k)> for 0 <= k <= ord_E(beta - alpha), and is
pinned down by the first Fitting ideal Fitt_1 = (S - alpha,
(beta - alpha) pi_E^{-k}).  This module computes those ideals, the
change-of-basis S-action matrices, the Koike-lattice partner N_x, and
infers k from a finite-level class group with its S-action.
"""

from dataclasses import dataclass
from math import comb

from .padic import (ExtField, Indeterminate, InsufficientPrecision, PadicElem,
                    vp)
from .residues import howell_form, smith_2x2


class NoMatch(Exception):
    """No candidate k reproduces the observed Fitting ideal."""


class NonUnitDeterminant(Exception):
    """The generator frame's change of basis is not invertible over O_E."""


@dataclass(frozen=True)
class ModuleClass:
    k: int
    splitting: object  # SplittingData

    def __post_init__(self):
        if not 0 <= self.k <= self.splitting.ord_diff:
            raise ValueError(
                f"k={self.k} outside [0, {self.splitting.ord_diff}]")


@dataclass(frozen=True)
class KoikeLattice:
    """N_x = <S + c1/2, pi_E^x> inside Lambda_E/(f(S))."""
    x: int
    c1: int
    c0: int


@dataclass(frozen=True)
class GeneratorFrame:
    """Change of basis (x1; x2) = L (e1; e2) between module generators
    and the eigen-basis, with the standard basis used when k = 0."""
    lambda_matrix: tuple  # ((l11, l12), (l21, l22)) of PadicElem
    k: int

    @property
    def standard_basis(self):
        return self.k == 0


@dataclass(frozen=True)
class FiniteLevelData:
    """A_{K_n^c} with its S = sigma - 1 action on a chosen basis.

    class_group lists the p-exponents of the two cyclic factors in
    basis order; s_action[i][j] is the coefficient of basis element i
    in S(basis element j), an integer mod the order of factor i.
    """
    n: int
    class_group: tuple
    basis_labels: tuple
    s_action: tuple


@dataclass(frozen=True)
class IdealDescriptor:
    """Ideal of Lambda_E given by generators; each generator is a tuple
    of PadicElem coefficients of S^0, S^1, ..."""
    generators: tuple


def fitting_ideals_Mk(mc):
    """Closed-form Fitting ideals of M(k):
    Fitt_0 = ((S-alpha)(S-beta)), Fitt_1 = (S-alpha, (beta-alpha) pi^{-k})."""
    sd = mc.splitting
    alpha, beta = sd.alpha, sd.beta
    one = PadicElem(sd.field, alpha.prec, 1)
    fitt0 = IdealDescriptor(((alpha * beta, -(alpha + beta), one),))
    g = (beta - alpha).shift_down(mc.k)
    fitt1 = IdealDescriptor(((-alpha, one), (g,)))
    return fitt0, fitt1


def s_action_matrix(frame, sd):
    """The matrix of S on (x1, x2): row i gives S x_i = a_i1 x1 + a_i2 x2.

    Equals L U L^{-1} for U upper triangular with diagonal (alpha, beta)
    and corner gamma = (alpha-beta) pi^{-k} (absent when k = 0).
    """
    (l11, l12), (l21, l22) = frame.lambda_matrix
    alpha, beta = sd.alpha, sd.beta
    det = l11 * l22 - l12 * l21
    if not det.is_unit():
        raise NonUnitDeterminant("lambda matrix determinant is not a unit")
    dinv = det.inverse()
    if frame.k == 0:
        a11 = (alpha * l11 * l22 - beta * l12 * l21) * dinv
        a12 = (beta - alpha) * l11 * l12 * dinv
        a21 = (alpha - beta) * l21 * l22 * dinv
        a22 = (beta * l11 * l22 - alpha * l12 * l21) * dinv
    else:
        if sd.ord_diff < frame.k:
            raise ValueError("gamma = (alpha-beta) pi^{-k} needs ord_diff >= k")
        gamma = (alpha - beta).shift_down(frame.k)
        a11 = (alpha * l11 * l22 - beta * l12 * l21 - l11 * l21 * gamma) * dinv
        a12 = ((beta - alpha) * l11 * l12 + l11 * l11 * gamma) * dinv
        a21 = ((alpha - beta) * l21 * l22 - l21 * l21 * gamma) * dinv
        a22 = (beta * l11 * l22 - alpha * l12 * l21 + l11 * l21 * gamma) * dinv
    return ((a11, a12), (a21, a22))


def koike_partner(mc):
    """M(k) ≅ N_{ord_diff - k} inside Lambda_E/(f)."""
    sd = mc.splitting
    c1 = -(sd.alpha + sd.beta)
    c0 = sd.alpha * sd.beta
    return KoikeLattice(sd.ord_diff - mc.k, c1, c0)


def class_group_structure_from_k(mc):
    """O_E-cyclic factor valuations of the coinvariants M(k)/S M(k)."""
    sd = mc.splitting
    if sd.ord_diff - mc.k >= sd.m:
        return (sd.ord_alpha, sd.ord_beta)
    small = sd.ord_diff - mc.k
    return (small, sd.ord_alpha + sd.ord_beta - small)


# -- finite quotient ring Lambda_{O_E} / (omega_n, p^M) ------------------

class QuotientRing:
    """O_E[S]/(omega_n(S), p^M), elements as flat coordinate vectors.

    A polynomial sum c_j S^j (j < p^n) with c_j = a_j + b_j theta is the
    vector (a_0, b_0, a_1, b_1, ...) over Z/p^M (theta coordinates are
    dropped for the base field).
    """

    def __init__(self, field, n, M):
        self.field = field
        self.p = field.p
        self.n = n
        self.M = M
        self.deg = field.p ** n
        self.w = 1 if field.kind == "base" else 2
        self.ncols = self.deg * self.w
        mod = self.p ** M
        # omega_n(S) = (1+S)^{p^n} - 1 is monic of degree p^n, so
        # S^{p^n} = -sum_{j<p^n} C(p^n, j) S^j  (constant term is zero)
        self.sred = [0] + [(-comb(self.deg, j)) % mod
                           for j in range(1, self.deg)]

    def zero(self):
        return [0] * self.ncols

    def from_coeffs(self, coeffs):
        """coeffs: list of (a, b) pairs or ints, ascending powers of S."""
        vec = self.zero()
        mod = self.p ** self.M
        for j, c in enumerate(coeffs):
            a, b = c if isinstance(c, tuple) else (c, 0)
            vec[j * self.w] = a % mod
            if self.w == 2:
                vec[j * self.w + 1] = b % mod
        return vec

    def from_elem(self, x):
        """Embed a PadicElem constant; requires pi-precision >= e*M."""
        if x.prec < x.field.e * self.M:
            raise InsufficientPrecision(
                f"need pi-precision {x.field.e * self.M}, have {x.prec}")
        a, b = x.residue_pair(x.field.e * self.M)
        return self.from_coeffs([(a, b)])

    def mul_S(self, vec):
        mod = self.p ** self.M
        out = self.zero()
        out[self.w:] = vec[:-self.w]
        top = vec[-self.w:]
        for j in range(self.deg):
            if self.sred[j]:
                for c in range(self.w):
                    out[j * self.w + c] = (out[j * self.w + c]
                                           + self.sred[j] * top[c]) % mod
        return out

    def mul_theta(self, vec):
        mod = self.p ** self.M
        t = self.field.theta_sq
        out = self.zero()
        for j in range(self.deg):
            a, b = vec[2 * j], vec[2 * j + 1]
            out[2 * j] = t * b % mod
            out[2 * j + 1] = a
        return out

    def ideal_span(self, gens):
        """Canonical form of the ideal generated by gens (O_E[S]-span)."""
        rows = []
        for g in gens:
            seeds = [g, self.mul_theta(g)] if self.w == 2 else [g]
            for s in seeds:
                v = s
                for _ in range(self.deg):
                    rows.append(v)
                    v = self.mul_S(v)
        return howell_form(rows, self.p, self.M, self.ncols)


def _pi_power(field, j, prec):
    """pi_E^j as a PadicElem at the stated pi-precision."""
    if field.kind != "ramified":
        return PadicElem(field, prec, field.p ** j)
    return PadicElem(field, prec, field.theta_sq ** (j // 2) if j % 2 == 0
                     else 0,
                     0 if j % 2 == 0 else field.theta_sq ** (j // 2))


def _sigma_power_root(alpha, a):
    """(1 + alpha)^a - 1: the root of f rewritten for the generator sigma^a."""
    one = PadicElem(alpha.field, alpha.prec, 1)
    acc = one
    base = one + alpha
    while a:
        if a & 1:
            acc = acc * base
        base = base * base
        a >>= 1
    return acc - one


def infer_k(fld, sd, sigma_search=True):
    """Infer the Sumida-Koike invariant from finite-level data.

    Builds Fitt_1 of the presented module A_{K_n^c} inside the ring
    Lambda_{O_E}/(omega_n, p^M) and compares it with the candidate
    ideals (S - alpha_a, pi^{ord_diff - k}), where alpha_a ranges over
    the rewritings of alpha for the possible generator choices sigma^a.
    """
    if sd.ord_diff == 0:
        return ModuleClass(0, sd)
    exps = list(fld.class_group)
    if len(exps) != 2:
        raise ValueError("need exactly two cyclic factors")
    amax = max(exps)
    avail = sd.alpha.prec // sd.field.e
    M = min(amax + 2, avail)
    if M < amax + 1:
        raise InsufficientPrecision(
            f"roots known mod pi^{sd.alpha.prec}; need p-precision {amax + 1}")
    ring = QuotientRing(sd.field, fld.n, M)

    T = fld.s_action
    entries = [
        ring.from_coeffs([-T[0][0], 1]),
        ring.from_coeffs([-T[1][0]]),
        ring.from_coeffs([-T[0][1]]),
        ring.from_coeffs([-T[1][1], 1]),
        ring.from_coeffs([sd.field.p ** exps[0]]),
        ring.from_coeffs([sd.field.p ** exps[1]]),
    ]
    observed = ring.ideal_span(entries)

    exponents = [1]
    if sigma_search:
        exponents = [a for a in range(1, sd.field.p ** M) if a % sd.field.p]
    roots, seen = [], set()
    for a in exponents:
        root = _sigma_power_root(sd.alpha, a)
        key = root.residue_pair(sd.field.e * M)
        if key not in seen:
            seen.add(key)
            roots.append(root)

    matches = set()
    for k in range(sd.ord_diff + 1):
        g2 = ring.from_elem(_pi_power(sd.field, sd.ord_diff - k,
                                      sd.field.e * M))
        for root in roots:
            g1_const = ring.from_elem(-root)
            g1 = [x for x in g1_const]
            g1[ring.w] = (g1[ring.w] + 1) % sd.field.p ** M  # + S
            if ring.ideal_span([g1, g2]) == observed:
                matches.add(k)
                break
    if not matches:
        raise NoMatch("no candidate k matches the observed Fitting ideal")
    if len(matches) == 1:
        return ModuleClass(matches.pop(), sd)
    return Indeterminate(candidates=frozenset(matches))


# -- synthetic finite-level data (for round-trip testing) ----------------

def synthesize_finite_level(sd, k, n, c1=None, c0=None):
    """Finite-level class-group data of a module in the class M(k).

    For a split f the lattice M(k) itself is used; otherwise the
    Z_p-lattice <S + c1/2, p^y> in Lambda/(f) whose O_E-extension is
    N_{e*y} = M(ord_diff - e*y), so k must satisfy k ≡ ord_diff (mod e).
    Exact integer representatives of the inputs are required.
    """
    p = sd.field.p
    if sd.kind == "split":
        cap = p ** sd.field.coord_exp(sd.alpha.prec)
        alpha = sd.alpha.a or cap
        beta = sd.beta.a or cap
        gamma = (beta - alpha) // p ** k
        U = [[alpha, 0], [gamma, beta]]
    else:
        if c1 is None or c0 is None:
            raise ValueError("non-split synthesis needs exact c1, c0")
        if (sd.ord_diff - k) % sd.e:
            raise ValueError(
                f"k ≡ ord_diff (mod {sd.e}) required for a base-lattice model")
        y = (sd.ord_diff - k) // sd.e
        disc = c1 * c1 - 4 * c0
        # generous working modulus: enough digits to settle both invariant
        # factors of omega_n(U) and the action entries
        big = p ** (2 * n + sd.ord_alpha + sd.ord_beta + sd.ord_diff + 6)
        inv2 = pow(2, -1, big)
        U = [[-c1 * inv2 % big, p ** y],
             [disc // p ** y * inv2 * inv2 % big, -c1 * inv2 % big]]

    W = _mat_sub(_mat_pow_plus_one(U, p ** n), [[1, 0], [0, 1]])
    P, (d1, d2) = smith_2x2(W)
    b1, b2 = vp(d1, p), vp(d2, p)
    Pinv = _unimodular_inverse(P)
    T = _mat_mul(_mat_mul(P, U), Pinv)
    orders = (p ** b1, p ** b2)
    T = tuple(tuple(T[i][j] % orders[i] for j in range(2)) for i in range(2))
    return FiniteLevelData(n=n, class_group=(b1, b2),
                           basis_labels=("g1", "g2"), s_action=T)


def _mat_mul(A, B):
    return [[sum(A[i][t] * B[t][j] for t in range(2)) for j in range(2)]
            for i in range(2)]


def _mat_sub(A, B):
    return [[A[i][j] - B[i][j] for j in range(2)] for i in range(2)]


def _mat_pow_plus_one(U, expo):
    """(I + U)^expo by binary powering over the integers."""
    acc = [[1, 0], [0, 1]]
    base = [[U[0][0] + 1, U[0][1]], [U[1][0], U[1][1] + 1]]
    while expo:
        if expo & 1:
            acc = _mat_mul(acc, base)
        base = _mat_mul(base, base)
        expo >>= 1
    return acc


def _unimodular_inverse(P):
    det = P[0][0] * P[1][1] - P[0][1] * P[1][0]
    assert det in (1, -1)
    return [[P[1][1] * det, -P[0][1] * det],
            [-P[1][0] * det, P[0][0] * det]]
