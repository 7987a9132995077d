"""Exact linear algebra over the residue rings Z/p^M.

Provides the Howell normal form, which is the canonical form for row
spans of matrices over Z/p^M: two generating sets span the same
submodule of (Z/p^M)^n iff their Howell forms coincide.  This is what
lets ideal equality in finite quotient rings be decided by comparing
canonical generator matrices instead of searching for multipliers.
"""

from .padic import vp


def howell_form(rows, p, M, ncols):
    """Canonical generating set for the span of `rows` in (Z/p^M)^ncols.

    Returns a tuple of row tuples; pivot of each row is p^v with zeros
    to its left, pivot columns strictly increasing, and entries of
    earlier rows reduced below later pivots.  Spans are equal iff the
    forms are equal, and the form supports fast membership reduction.
    """
    mod = p ** M
    active = [[x % mod for x in r] for r in rows]
    active = [r for r in active if any(r)]
    placed = []  # (pivot_col, pivot_val, row)

    for col in range(ncols):
        best = None
        for r in active:
            if r[col]:
                v = vp(r[col], p)
                if best is None or v < best_v:
                    best, best_v = r, v
        if best is None:
            continue
        active.remove(best)
        unit_inv = pow(best[col] // p ** best_v, -1, mod)
        best = [(x * unit_inv) % mod for x in best]  # pivot becomes p^best_v
        nxt = []
        for r in active:
            if r[col]:
                q = r[col] // p ** best_v
                r = [(x - q * y) % mod for x, y in zip(r, best)]
            if any(r):
                nxt.append(r)
        # Howell step: the annihilator multiple stays in the span and may
        # contribute pivots in later columns
        ann = [(x * p ** (M - best_v)) % mod for x in best]
        if any(ann):
            nxt.append(ann)
        active = nxt
        placed.append((col, best_v, best))

    # back-reduce in ascending pivot order: a pivot row is zero left of
    # its pivot, so later passes cannot disturb already-reduced columns
    for j in range(len(placed)):
        col_j, v_j, row_j = placed[j]
        for i in range(j):
            col_i, v_i, row_i = placed[i]
            q = row_i[col_j] // p ** v_j
            if q:
                placed[i] = (col_i, v_i,
                             [(x - q * y) % mod for x, y in zip(row_i, row_j)])
    return tuple(tuple(r) for _, _, r in placed)


def in_span(vec, form, p, M):
    """Membership of vec in a span given by its Howell form."""
    mod = p ** M
    vec = [x % mod for x in vec]
    for row in form:
        col = next(i for i, x in enumerate(row) if x)
        v = vp(row[col], p)
        if vec[col]:
            if vp(vec[col], p) < v:
                return False
            q = vec[col] // p ** v
            vec = [(x - q * y) % mod for x, y in zip(vec, row)]
    return not any(vec)


def solve_2x2(mat, rhs, p, M):
    """Solve mat @ (x, y) = rhs over Z/p^M for a unit-determinant mat."""
    mod = p ** M
    (a, b), (c, d) = mat
    det = (a * d - b * c) % mod
    if det % p == 0:
        return None
    dinv = pow(det, -1, mod)
    x = (d * rhs[0] - b * rhs[1]) * dinv % mod
    y = (a * rhs[1] - c * rhs[0]) * dinv % mod
    return x, y


def smith_2x2(mat):
    """Smith form of an integer 2x2 matrix with the left transform.

    Returns (P, (d1, d2)) with P unimodular, P @ mat @ Q = diag(d1, d2)
    for some unimodular Q, and d1 | d2.  Only the row transform P is
    tracked (column operations do not change the column span).
    """
    a = [[int(x) for x in row] for row in mat]
    P = [[1, 0], [0, 1]]

    def swap_rows():
        a[0], a[1] = a[1], a[0]
        P[0], P[1] = P[1], P[0]

    def swap_cols():
        for r in a:
            r[0], r[1] = r[1], r[0]

    while True:
        if a[1][0]:
            if a[0][0] == 0 or abs(a[1][0]) < abs(a[0][0]):
                swap_rows()
            if a[1][0]:
                q = a[1][0] // a[0][0]
                a[1] = [x - q * y for x, y in zip(a[1], a[0])]
                P[1] = [x - q * y for x, y in zip(P[1], P[0])]
            continue
        if a[0][1]:
            if a[0][0] == 0 or abs(a[0][1]) < abs(a[0][0]):
                swap_cols()
            if a[0][1]:
                q = a[0][1] // a[0][0]
                for r in a:
                    r[1] -= q * r[0]
            continue
        if a[0][0] == 0 and a[1][1]:
            swap_rows()
            swap_cols()
            continue
        if a[0][0] and a[1][1] % (a[0][0] or 1):
            for r in a:  # fold d2 back into the working corner
                r[0] += r[1]
            continue
        return P, (abs(a[0][0]), abs(a[1][1]))
