"""Independent brute-force verifiers over finite quotients.

Each verifier recomputes the algebraic fact it certifies from scratch
(lattice enumeration, minor extraction, matrix conjugation, span
canonicalization) so that no code path is shared with the modules
under test beyond the p-adic domain types.
"""

import random

from .padic import PadicElem


class ResourceLimit(Exception):
    """Enumeration exceeded the configured budget."""


class OracleFailure(Exception):
    """A verifier found a counterexample; the dump is the message."""


def _vp_int(n, p):
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


# -- canonical span form over Z/p^M (independent implementation) ---------

def _canon_span(rows, p, M):
    """Canonical generating set of the subgroup of (Z/p^M)^n spanned by
    rows, closed under Z-multiples; spans are equal iff forms are equal."""
    mod = p ** M
    pivots = {}
    queue = [[x % mod for x in r] for r in rows]
    while queue:
        r = queue.pop()
        if not any(r):
            continue
        col = next(i for i, x in enumerate(r) if x)
        v = _vp_int(r[col], p)
        r = [(x * pow(r[col] // p ** v, -1, mod)) % mod for x in r]
        if col not in pivots:
            pivots[col] = r
            queue.append([(x * p ** (M - v)) % mod for x in r])
            continue
        q = pivots[col]
        qv = _vp_int(q[col], p)
        if v < qv:
            pivots[col] = r
            queue.append([(x * p ** (M - v)) % mod for x in r])
            queue.append([(a - p ** (qv - v) * b) % mod
                          for a, b in zip(q, r)])
        else:
            queue.append([(a - (r[col] // p ** qv) * b) % mod
                          for a, b in zip(r, q)])
    # back-reduce in ascending pivot order: a pivot row is zero left of
    # its pivot, so later passes cannot disturb already-reduced columns
    cols = sorted(pivots)
    for c in cols:
        v = _vp_int(pivots[c][c], p)
        for c2 in cols:
            if c2 == c:
                continue
            x = pivots[c2][c]
            q = x // p ** v
            if q:
                pivots[c2] = [(a - q * b) % mod
                              for a, b in zip(pivots[c2], pivots[c])]
    return tuple(tuple(pivots[c]) for c in cols)


# -- Sumida class enumeration --------------------------------------------

def enumerate_classes(alpha, beta, N, budget=500_000):
    """Count isomorphism classes of S-stable full-rank lattices in
    (Z/p^N)^2 under diag(alpha, beta), grouped by exhaustive search over
    equivariant diagonal maps.  Must equal ord(beta - alpha) + 1."""
    p = alpha.field.p
    cap = p ** N
    a = alpha.residue_pair(min(alpha.prec, N))[0] % cap
    b = beta.residue_pair(min(beta.prec, N))[0] % cap
    diff = (b - a) % cap
    d = _vp_int(diff, p) if diff else N
    if d + 2 > N:
        raise ValueError("need ord(beta - alpha) + 2 <= N")

    signatures = set()
    work = 0
    for i in range(N - 1):
        for j in range(N - 1 - i):
            for c in range(p ** j):
                work += 1
                if work > budget:
                    raise ResourceLimit(f"budget {budget} exceeded")
                # stability: (beta - alpha) * c must land in (0, p^j)
                vc = _vp_int(c, p) if c else j
                if d + vc < j:
                    continue
                # normalize away coordinate contents (an equivariant
                # isomorphism onto the image)
                m2 = min(vc, j)
                c_n, j_n = c // p ** m2, j - m2
                mod_n = p ** j_n
                c_n %= mod_n
                # canonical orbit representative under diag(1, unit)
                best = c_n
                for s in range(1, mod_n):
                    if s % p == 0:
                        continue
                    work += 1
                    if work > budget:
                        raise ResourceLimit(f"budget {budget} exceeded")
                    best = min(best, s * c_n % mod_n)
                signatures.add((j_n, best))
    return len(signatures)


# -- truncated polynomial ring helpers (Lambda_E / (S^D, p^M)) -----------

class _PolyCtx:
    def __init__(self, field, M, D):
        self.p = field.p
        self.M = M
        self.D = D
        self.w = 1 if field.kind == "base" else 2
        self.tsq = field.theta_sq or 0
        self.mod = field.p ** M
        self.field = field

    def zero(self):
        return [(0, 0)] * self.D

    def const(self, x):
        """Embed a PadicElem (or int) as a constant polynomial."""
        if isinstance(x, int):
            pair = (x % self.mod, 0)
        else:
            pair = x.residue_pair(self.field.e * self.M)
        out = self.zero()
        out[0] = (pair[0] % self.mod, pair[1] % self.mod)
        return out

    def s_poly(self, x):
        """S - x as a ring element."""
        out = self.const(x)
        out[0] = ((-out[0][0]) % self.mod, (-out[0][1]) % self.mod)
        out[1] = (1, 0)
        return out

    def cmul(self, a, b):
        return ((a[0] * b[0] + self.tsq * a[1] * b[1]) % self.mod,
                (a[0] * b[1] + a[1] * b[0]) % self.mod)

    def mul(self, f, g):
        out = self.zero()
        for i, ci in enumerate(f):
            if ci == (0, 0):
                continue
            for j, cj in enumerate(g):
                if i + j >= self.D or cj == (0, 0):
                    continue
                prod = self.cmul(ci, cj)
                cur = out[i + j]
                out[i + j] = ((cur[0] + prod[0]) % self.mod,
                              (cur[1] + prod[1]) % self.mod)
        return out

    def add(self, f, g):
        return [((a[0] + b[0]) % self.mod, (a[1] + b[1]) % self.mod)
                for a, b in zip(f, g)]

    def sub(self, f, g):
        return [((a[0] - b[0]) % self.mod, (a[1] - b[1]) % self.mod)
                for a, b in zip(f, g)]

    def theta_mul(self, f):
        return [(self.tsq * c[1] % self.mod, c[0]) for c in f]

    def shift_s(self, f):
        return [(0, 0)] + f[:-1]

    def is_unit(self, f):
        a, b = f[0]
        if self.w == 1 or self.field.kind == "ramified":
            return a % self.p != 0
        return a % self.p != 0 or b % self.p != 0

    def flat(self, f):
        out = []
        for c in f:
            out.append(c[0])
            if self.w == 2:
                out.append(c[1])
        return out

    def ideal_canon(self, gens):
        rows = []
        for g in gens:
            seeds = [g] if self.w == 1 else [g, self.theta_mul(g)]
            for s in seeds:
                v = s
                for _ in range(self.D):
                    rows.append(self.flat(v))
                    v = self.shift_s(v)
        return _canon_span(rows, self.p, self.M)

    def random_elem(self, rng):
        return [(rng.randrange(self.mod),
                 rng.randrange(self.mod) if self.w == 2 else 0)
                for _ in range(self.D)]

    def random_unit_matrix(self, rng):
        while True:
            g = [[self.random_elem(rng) for _ in range(2)] for _ in range(2)]
            det = self.sub(self.mul(g[0][0], g[1][1]),
                           self.mul(g[0][1], g[1][0]))
            if self.is_unit(det):
                return g

    def mat_mul(self, A, B):
        return [[self.add(self.mul(A[i][0], B[0][j]),
                          self.mul(A[i][1], B[1][j]))
                 for j in range(2)] for i in range(2)]


def verify_fitting(mc, trials=50, seed=0, corrupt=False):
    """Check the closed-form Fitting ideals of M(k) against randomly
    unit-transformed presentations over Lambda_E/(S^D, p^M)."""
    sd = mc.splitting
    ctx = _PolyCtx(sd.field, M=sd.ord_diff + 3, D=sd.ord_diff + 3)
    gamma = (sd.beta - sd.alpha).shift_down(mc.k)
    pres = [[ctx.s_poly(sd.alpha),
             ctx.sub(ctx.zero(), ctx.const(gamma))],
            [ctx.zero(), ctx.s_poly(sd.beta)]]
    fitt1_expected = ctx.ideal_canon([ctx.s_poly(sd.alpha), ctx.const(gamma)])
    fitt0_expected = ctx.ideal_canon(
        [ctx.mul(ctx.s_poly(sd.alpha), ctx.s_poly(sd.beta))])

    rng = random.Random(seed)
    for trial in range(trials):
        g1 = ctx.random_unit_matrix(rng)
        g2 = ctx.random_unit_matrix(rng)
        b = ctx.mat_mul(ctx.mat_mul(g1, pres), g2)
        if corrupt:
            b[1][0] = ctx.add(b[1][0], ctx.const(1))
        entries = [b[0][0], b[0][1], b[1][0], b[1][1]]
        det = ctx.sub(ctx.mul(b[0][0], b[1][1]), ctx.mul(b[0][1], b[1][0]))
        if ctx.ideal_canon(entries) != fitt1_expected:
            raise OracleFailure(
                f"Fitt1 mismatch at trial {trial}: entries {entries}")
        if ctx.ideal_canon([det]) != fitt0_expected:
            raise OracleFailure(
                f"Fitt0 mismatch at trial {trial}: det {det}")
    return True


# -- Koike lattice isomorphism -------------------------------------------

def _lattice_canon(gens, prec, scale_second=None):
    """Canonical O_E-span of ambient pairs of PadicElems at pi-precision
    prec; optionally the second coordinate is scaled by a unit first."""
    field = gens[0][0].field
    p = field.p
    M = field.coord_exp(prec)

    def flat(vec):
        x, y = vec
        if scale_second is not None:
            y = y * scale_second
        return list(x.residue_pair(prec)[:2 if field.kind != "base" else 1]) \
            + list(y.residue_pair(prec)[:2 if field.kind != "base" else 1])

    rows = []
    theta = None
    if field.kind != "base":
        theta = PadicElem(field, prec, 0, 1)
    for g in gens:
        rows.append(flat(g))
        if theta is not None:
            rows.append(flat((g[0] * theta, g[1] * theta)))
    return _canon_span(rows, p, M)


def _units(field, prec):
    p = field.p
    M = field.coord_exp(prec)
    for a in range(p ** M):
        if field.kind == "base":
            if a % p:
                yield PadicElem(field, prec, a)
            continue
        for b in range(p ** M):
            if field.kind == "ramified":
                unit = a % p != 0
            else:
                unit = a % p != 0 or b % p != 0
            if unit:
                yield PadicElem(field, prec, a, b)


def verify_koike_iso(mc, x=None, budget=500_000):
    """Search exhaustively for an equivariant isomorphism between M(k)
    and the Koike lattice N_x (default x = ord_diff - k) inside the
    eigen-coordinate ambient E^2; pass iff one exists.

    An equivariant map commuting with diag(alpha, beta) (alpha != beta)
    is diagonal; up to a unit scalar (which fixes every lattice) it is
    pi^j diag(1, s) with s a unit, so that is the search space.
    """
    sd = mc.splitting
    if x is None:
        x = sd.ord_diff - mc.k
    field = sd.field
    # pi-precision ord_diff + 2 distinguishes adjacent lattices while
    # keeping the unit search space desk-scale
    prec = min(sd.alpha.prec, sd.ord_diff + 2)
    one = PadicElem(field, prec, 1)
    zero_ = PadicElem(field, prec, 0)
    inv2 = PadicElem(field, prec, pow(2, -1, field.p ** field.coord_exp(prec)))
    pi = (PadicElem(field, prec, 0, 1) if field.kind == "ramified"
          else PadicElem(field, prec, field.p))

    def pi_pow(j):
        acc = one
        for _ in range(j):
            acc = acc * pi
        return acc

    mk = [(one, one), (zero_, pi_pow(mc.k))]
    half_diff = (sd.alpha - sd.beta) * inv2
    nx = [(half_diff, -half_diff), (pi_pow(x), pi_pow(x))]

    target = _lattice_canon(nx, prec)
    tried = 0
    for j in range(sd.ord_diff + 1):
        pj = pi_pow(j)
        scaled = [(g0 * pj, g1 * pj) for g0, g1 in mk]
        for s in _units(field, prec):
            tried += 1
            if tried > budget:
                raise ResourceLimit(f"budget {budget} exceeded")
            if _lattice_canon(scaled, prec, scale_second=s) == target:
                return True
    return False


# -- change-of-basis conjugation -----------------------------------------

def _mat2_inv(L):
    """Inverse of a unit-determinant 2x2 matrix of PadicElems."""
    det = L[0][0] * L[1][1] - L[0][1] * L[1][0]
    dinv = det.inverse()
    return [[L[1][1] * dinv, -L[0][1] * dinv],
            [-L[1][0] * dinv, L[0][0] * dinv]]


def _mat2_mul(A, B):
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)]
            for i in range(2)]


def conjugated_action(lam, alpha, beta, k):
    """L U L^{-1} computed by direct matrix arithmetic, U upper
    triangular with diagonal (alpha, beta) and corner (alpha-beta)/pi^k
    when k > 0."""
    zero_ = alpha * 0
    corner = zero_ if k == 0 else (alpha - beta).shift_down(k)
    U = [[alpha, corner], [zero_, beta]]
    return _mat2_mul(_mat2_mul([list(r) for r in lam], U), _mat2_inv(lam))


def random_frame_inputs(field, rng, prec, d_max=3):
    """Random alpha, beta with positive valuations and a random
    unit-determinant lambda matrix for conjugation trials."""
    p = field.p
    cap = p ** field.coord_exp(prec)
    while True:
        alpha = PadicElem(field, prec, p * rng.randrange(cap // p),
                          0 if field.kind == "base"
                          else p * rng.randrange(cap // p))
        beta = PadicElem(field, prec, p * rng.randrange(cap // p),
                         0 if field.kind == "base"
                         else p * rng.randrange(cap // p))
        diff_v = (beta - alpha).valuation()
        if isinstance(diff_v, int) and field.e <= diff_v <= d_max:
            break
    while True:
        lam = tuple(tuple(PadicElem(field, prec, rng.randrange(cap),
                                    0 if field.kind == "base"
                                    else rng.randrange(cap))
                          for _ in range(2)) for _ in range(2))
        det = lam[0][0] * lam[1][1] - lam[0][1] * lam[1][0]
        if det.is_unit():
            return alpha, beta, diff_v, lam


def verify_main_lem(closed_form, field, trials=100, seed=0, prec=10):
    """Check a closed-form S-action formula (the function under test)
    against direct conjugation on random unit frames.

    closed_form(lam, alpha, beta, k) must return the 2x2 action matrix.
    """
    rng = random.Random(seed)
    for trial in range(trials):
        alpha, beta, d, lam = random_frame_inputs(field, rng, prec)
        for k in range(d + 1):
            got = closed_form(lam, alpha, beta, k)
            want = conjugated_action(lam, alpha, beta, k)
            for i in range(2):
                for j in range(2):
                    if not got[i][j].same_residue(want[i][j]):
                        raise OracleFailure(
                            f"entry ({i},{j}) mismatch at trial {trial}, "
                            f"k={k}: {got[i][j]} vs {want[i][j]}")
    return True
