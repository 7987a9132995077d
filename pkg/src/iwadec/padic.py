"""Truncated exact arithmetic in Z_p and its quadratic extensions.

Elements live in O_E = Z_p[theta] for E one of: the base field Q_p,
the unramified quadratic extension (theta^2 = r, a non-residue unit),
or a ramified quadratic extension (theta^2 = D with v_p(D) = 1).
Every element carries an explicit precision, counted in units of the
normalized valuation ord_E (so ord_E(pi_E) = 1 and ord_E(p) = e).
Anything the known digits cannot settle is reported as Indeterminate
or raised as InsufficientPrecision -- never guessed.
"""

from dataclasses import dataclass


class InsufficientPrecision(Exception):
    """The stored digits cannot settle the requested quantity."""


class NoRoot(Exception):
    """The unit has no square root in Z_p."""


@dataclass(frozen=True)
class Indeterminate:
    """A valuation (or k-value set) the data cannot pin down.

    For valuations, `at_least` is the precision bound: all known digits
    are zero, so ord >= at_least.  For k-inference, `candidates` lists
    the surviving values.
    """
    at_least: int = None
    candidates: frozenset = None

    def __repr__(self):
        if self.candidates is not None:
            return f"Indeterminate({sorted(self.candidates)})"
        return f"Indeterminate(>={self.at_least})"


def vp(n, p):
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("vp(0) is undefined; handle zero before calling")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_bounded(n, p, bound):
    """v_p(n) if determinate below `bound`, else None (n ≡ 0 mod p^bound)."""
    n %= p ** bound
    if n == 0:
        return None
    return vp(n, p)


@dataclass(frozen=True)
class ExtField:
    """Descriptor of E: the base field or a quadratic extension of Q_p.

    theta_sq is None for the base field; the fixed non-residue unit r
    for the unramified extension; an integer D with v_p(D) = 1 for a
    ramified extension (theta^2 = D).
    """
    p: int
    kind: str  # 'base' | 'unramified' | 'ramified'
    theta_sq: int = None

    def __post_init__(self):
        if self.kind not in ("base", "unramified", "ramified"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "base" and self.theta_sq is not None:
            raise ValueError("base field carries no theta")
        if self.kind == "unramified" and self.theta_sq % self.p == 0:
            raise ValueError("unramified theta^2 must be a unit")
        if self.kind == "ramified" and vp(self.theta_sq, self.p) != 1:
            raise ValueError("ramified theta^2 must have v_p = 1")

    @property
    def e(self):
        return 2 if self.kind == "ramified" else 1

    def coord_exp(self, prec):
        """p-power modulus exponent for stored coordinates at pi-precision prec."""
        if self.kind == "ramified":
            return (prec + 1) // 2
        return prec

    def elem(self, a, b=0, prec=None):
        return PadicElem(self, prec, a, b)

    def __repr__(self):
        if self.kind == "base":
            return f"Q_{self.p}"
        return f"{self.kind}(p={self.p}, theta^2={self.theta_sq})"


def base_field(p):
    return ExtField(p, "base")


def unramified_field(p):
    """Unramified quadratic extension with the smallest non-residue unit."""
    for r in range(2, p):
        if pow(r, (p - 1) // 2, p) == p - 1:
            return ExtField(p, "unramified", r)
    raise ValueError("no non-residue found; p must be an odd prime")


class PadicElem:
    """a + b*theta in O_E, known modulo pi_E^prec (prec in ord_E units)."""

    __slots__ = ("field", "prec", "a", "b")

    def __init__(self, field, prec, a, b=0):
        if prec is None or prec < 1:
            raise ValueError("precision must be a positive integer")
        if field.kind == "base" and b != 0:
            raise ValueError("base-field element with theta coordinate")
        mod = field.p ** field.coord_exp(prec)
        self.field = field
        self.prec = prec
        self.a = a % mod
        self.b = b % mod

    # -- basics --------------------------------------------------------

    def _vlow(self):
        """Valuation if determinate, else precision (a lower bound)."""
        v = self.valuation()
        return self.prec if isinstance(v, Indeterminate) else v

    def valuation(self):
        return valuation(self)

    def is_unit(self):
        return self._vlow() == 0

    def residue_pair(self, prec):
        """Coordinates reduced at pi-precision prec <= self.prec."""
        if prec > self.prec:
            raise InsufficientPrecision(
                f"element known mod pi^{self.prec}, asked mod pi^{prec}")
        mod = self.field.p ** self.field.coord_exp(prec)
        return (self.a % mod, self.b % mod)

    def same_residue(self, other, prec=None):
        if self.field != other.field:
            return False
        if prec is None:
            prec = min(self.prec, other.prec)
        return self.residue_pair(prec) == other.residue_pair(prec)

    # -- ring operations ------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, int):
            return PadicElem(self.field, self.prec, other)
        if not isinstance(other, PadicElem) or other.field != self.field:
            raise TypeError("operands live in different fields")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        prec = min(self.prec, other.prec)
        return PadicElem(self.field, prec, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return PadicElem(self.field, self.prec, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        # the factor of smaller valuation limits how many product digits
        # are trustworthy: prec(xy) = min(prec(x)+vlow(y), prec(y)+vlow(x))
        prec = min(self.prec + other._vlow(), other.prec + self._vlow())
        t = self.field.theta_sq or 0
        a = self.a * other.a + t * self.b * other.b
        b = self.a * other.b + self.b * other.a
        return PadicElem(self.field, prec, a, b)

    __rmul__ = __mul__

    def inverse(self):
        """Inverse of a unit (division by non-units is disallowed)."""
        if not self.is_unit():
            raise ValueError("division restricted to units")
        p, prec = self.field.p, self.prec
        mod = p ** self.field.coord_exp(prec)
        t = self.field.theta_sq or 0
        norm = (self.a * self.a - t * self.b * self.b) % mod
        ninv = pow(norm, -1, mod)
        return PadicElem(self.field, prec, self.a * ninv, -self.b * ninv)

    def divide_unit(self, other):
        return self * self._coerce(other).inverse()

    def shift_down(self, k):
        """Exact division by pi_E^k; requires valuation >= k."""
        if k == 0:
            return self
        if k < 0:
            raise ValueError("shift_down expects k >= 0")
        if self._vlow() < k:
            raise ValueError(f"cannot divide by pi^{k}: valuation below {k}")
        p = self.field.p
        if self.field.kind != "ramified":
            q = p ** k
            return PadicElem(self.field, self.prec - k, self.a // q, self.b // q)
        x = self
        for _ in range(k):  # one theta-division at a time: (a+b th)/th = b + (a/D) th
            D = x.field.theta_sq
            cap = p ** x.field.coord_exp(x.prec)
            a_over_D = ((x.a % cap) // p) * pow(D // p, -1, cap)
            x = PadicElem(x.field, x.prec - 1, x.b, a_over_D)
        return x

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicElem(self.field, self.prec, other)
        if not isinstance(other, PadicElem):
            return NotImplemented
        return self.same_residue(other)

    def __hash__(self):
        raise TypeError("PadicElem is precision-fuzzy; not hashable")

    def __repr__(self):
        body = str(self.a) if self.b == 0 else f"{self.a}+{self.b}*theta"
        return f"({body} + O(pi^{self.prec}))_{self.field.p}"

    def digit_string(self):
        """Base-p digits of the a-coordinate, most significant last."""
        p, n = self.field.p, self.a
        digits = []
        for _ in range(self.field.coord_exp(self.prec)):
            n, r = divmod(n, p)
            digits.append(str(r))
        return " ".join(digits) + f" +O(p^{self.field.coord_exp(self.prec)})"


def valuation(x):
    """ord_E(x), or Indeterminate(>=prec) when every known digit is zero."""
    p = x.field.p
    cap = x.field.coord_exp(x.prec)
    va = vp_bounded(x.a, p, cap)
    vb = vp_bounded(x.b, p, cap)
    if x.field.kind == "ramified":
        cands = []
        if va is not None and 2 * va < x.prec:
            cands.append(2 * va)
        if vb is not None and 2 * vb + 1 < x.prec:
            cands.append(2 * vb + 1)
    else:
        cands = [v for v in (va, vb) if v is not None and v < x.prec]
    if not cands:
        return Indeterminate(at_least=x.prec)
    return min(cands)


def sqrt_unit(u, p, N):
    """Square root of a unit u mod p^N by Hensel lifting, or NoRoot."""
    if u % p == 0:
        raise ValueError("sqrt_unit expects a unit")
    if pow(u % p, (p - 1) // 2, p) != 1:
        raise NoRoot(f"{u} is a quadratic non-residue mod {p}")
    x = next(r for r in range(1, p) if (r * r - u) % p == 0)
    k = 1
    while k < N:
        k = min(2 * k, N)
        mod = p ** k
        x = (x - (x * x - u) * pow(2 * x, -1, mod)) % mod
    return x % p ** N


@dataclass(frozen=True)
class IwasawaPoly:
    """Distinguished quadratic S^2 + c1*S + c0 known mod p^precision."""
    p: int
    precision: int
    c1: int
    c0: int

    def __post_init__(self):
        if self.precision < 2:
            raise ValueError("need at least two p-adic digits")
        object.__setattr__(self, "c1", self.c1 % self.p ** self.precision)
        object.__setattr__(self, "c0", self.c0 % self.p ** self.precision)
        if self.c1 % self.p or self.c0 % self.p:
            raise ValueError("polynomial is not distinguished")

    def disc(self):
        return (self.c1 * self.c1 - 4 * self.c0) % self.p ** self.precision

    def truncate(self, precision):
        if precision > self.precision:
            raise InsufficientPrecision(
                f"coefficients known mod p^{self.precision}")
        return IwasawaPoly(self.p, precision, self.c1, self.c0)

    def eval_at(self, x):
        """f(x) for a PadicElem x over any E containing the coefficients."""
        c1 = PadicElem(x.field, x.field.e * self.precision, self.c1)
        c0 = PadicElem(x.field, x.field.e * self.precision, self.c0)
        return x * x + c1 * x + c0


@dataclass(frozen=True)
class SplittingData:
    """Splitting-field type of f and the root valuations that drive Theorem-level decisions."""
    kind: str  # 'split' | 'unramified' | 'ramified'
    field: ExtField
    alpha: PadicElem
    beta: PadicElem
    ord_alpha: int
    ord_beta: int
    ord_diff: int

    @property
    def e(self):
        return self.field.e

    @property
    def m(self):
        return min(self.ord_alpha, self.ord_beta)

    def swapped(self):
        return SplittingData(self.kind, self.field, self.beta, self.alpha,
                             self.ord_beta, self.ord_alpha, self.ord_diff)


def splitting_from_roots(alpha, beta, kind=None):
    """Build SplittingData from explicit roots (used by tests and oracles)."""
    va, vb, vd = alpha.valuation(), (beta.valuation()), (beta - alpha).valuation()
    for v in (va, vb, vd):
        if isinstance(v, Indeterminate):
            raise InsufficientPrecision("root valuations not determinate")
    if kind is None:
        kind = {"base": "split", "unramified": "unramified",
                "ramified": "ramified"}[alpha.field.kind]
    if va > vb:
        alpha, beta, va, vb = beta, alpha, vb, va
    return SplittingData(kind, alpha.field, alpha, beta, va, vb, vd)


def _newton_slopes(v0, v1, e):
    """Root valuations from the polygon on (0,v0), (1,v1), (2,0), scaled by e.

    v1 = None means the middle coefficient vanishes at working precision.
    """
    if v1 is not None and 2 * v1 < v0:
        lo, hi = e * v1, e * (v0 - v1)
    else:
        if e == 1 and v0 % 2:
            raise InsufficientPrecision(
                "odd-valuation constant term needs a ramified extension")
        lo = hi = e * v0 // 2
    return lo, hi


def splitting_type(f):
    """Classify the splitting field of f and materialize its roots.

    Ramified iff v_p(disc) is odd; for even v_p(disc) the unit part of
    the discriminant decides split (square mod p) vs. unramified.
    """
    p, N = f.p, f.precision
    disc = f.disc()
    w = vp_bounded(disc, p, N)
    if w is None:
        raise InsufficientPrecision(
            f"disc f ≡ 0 mod p^{N}; supply more digits or an override")
    v0 = vp_bounded(f.c0, p, N)
    if v0 is None:
        raise InsufficientPrecision(f"constant term ≡ 0 mod p^{N}")
    v1 = vp_bounded(f.c1, p, N)
    unit = (disc // p ** w) % p ** (N - w)
    inv2 = pow(2, -1, p ** N)

    if w % 2 == 1:
        # theta^2 = disc/p^(w-1), an element of valuation 1
        D = (disc // p ** (w - 1)) % p ** (N - w + 1)
        fld = ExtField(p, "ramified", D)
        prec = 2 * N - w + 1
        half = (w - 1) // 2
        alpha = PadicElem(fld, prec, -f.c1 * inv2, -(p ** half) * inv2)
        beta = PadicElem(fld, prec, -f.c1 * inv2, (p ** half) * inv2)
        lo, hi = _newton_slopes(v0, v1, 2)
        sd = SplittingData("ramified", fld, alpha, beta, lo, hi, w)
    elif pow(unit % p, (p - 1) // 2, p) == 1:
        fld = base_field(p)
        sq = p ** (w // 2) * sqrt_unit(unit, p, N - w)
        prec = N - w // 2
        alpha = PadicElem(fld, prec, (-f.c1 + sq) * inv2)
        beta = PadicElem(fld, prec, (-f.c1 - sq) * inv2)
        lo, hi = _newton_slopes(v0, v1, 1)
        sd = SplittingData("split", fld, alpha, beta, lo, hi, w // 2)
    else:
        fld = unramified_field(p)
        t = sqrt_unit(unit * pow(fld.theta_sq, -1, p ** (N - w)), p, N - w)
        prec = N - w // 2
        alpha = PadicElem(fld, prec, -f.c1 * inv2, -(p ** (w // 2)) * t * inv2)
        beta = PadicElem(fld, prec, -f.c1 * inv2, (p ** (w // 2)) * t * inv2)
        lo, hi = _newton_slopes(v0, v1, 1)
        sd = SplittingData("unramified", fld, alpha, beta, lo, hi, w // 2)

    if sd.ord_alpha > sd.ord_beta:
        sd = sd.swapped()
    if sd.kind == "split" and sd.ord_alpha == sd.ord_beta and sd.alpha.a > sd.beta.a:
        sd = sd.swapped()
    assert sd.ord_alpha + sd.ord_beta == sd.e * v0
    assert sd.ord_diff == (sd.e * w) // 2
    return sd


def hensel_roots(f):
    """The two Z_p-roots of a split f, smaller valuation (then residue) first."""
    sd = splitting_type(f)
    if sd.kind != "split":
        raise ValueError(f"f does not split over Q_{f.p} (kind={sd.kind})")
    return sd.alpha, sd.beta
