"""Independent reference computations used only by the tests.

None of these touch the package's elimination code: determinants are
computed by fraction-free Bareiss elimination on dense lists, and subspace
questions over GF(2) by enumerating every vector.
"""
from fractions import Fraction
from itertools import combinations, product
from math import gcd


def det(rows):
    """Exact integer determinant (Bareiss)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def invariant_factors_by_minors(m):
    """d_k = D_k / D_{k-1} where D_k is the gcd of all k x k minors."""
    rows, cols = len(m), len(m[0]) if m else 0
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, det([[m[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def dense_rank(m, p=None):
    """Rank by textbook Gaussian elimination over Q (or GF(p))."""
    a = [[Fraction(x) if p is None else x % p for x in row] for row in m]
    r = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c] if p is None else pow(a[r][c], -1, p)
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c] * inv
                a[i] = [(x - f * y) if p is None else (x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def gf2_span(vectors, n):
    """Every element of the GF(2) span, as a set of tuples."""
    span = {tuple([0] * n)}
    for v in vectors:
        v = tuple(x % 2 for x in v)
        span |= {tuple((a + b) % 2 for a, b in zip(s, v)) for s in span}
    return span


def gf2_dim(vector_set):
    return len(vector_set).bit_length() - 1


def all_gf2_vectors(n):
    return [tuple(v) for v in product((0, 1), repeat=n)]
