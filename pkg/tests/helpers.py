"""Independent oracles for the test suite.

These deliberately avoid the package's echelon machinery: ranks come
from determinant expansion over minors, dimension counts from raw
enumeration.  Slow, but exact and independent of the code under test.
"""

from fractions import Fraction as QQ
from itertools import combinations


def det_expansion(rows):
    """Determinant by Laplace expansion along the first row."""
    n = len(rows)
    if n == 0:
        return QQ(1)
    if n == 1:
        return QQ(rows[0][0])
    total = QQ(0)
    for j, head in enumerate(rows[0]):
        if not head:
            continue
        minor = [[r[c] for c in range(n) if c != j] for r in rows[1:]]
        sign = -1 if j % 2 else 1
        total += sign * QQ(head) * det_expansion(minor)
    return total


def rank_by_minors(rows):
    """Rank as the size of the largest nonvanishing square minor."""
    if not rows or not rows[0]:
        return 0
    nr, nc = len(rows), len(rows[0])
    for size in range(min(nr, nc), 0, -1):
        for rsel in combinations(range(nr), size):
            for csel in combinations(range(nc), size):
                minor = [[rows[i][j] for j in csel] for i in rsel]
                if det_expansion(minor):
                    return size
    return 0


def matrix_rows(m):
    return [list(m.row(i)) for i in range(m.rows)]


def betti_by_minors(dims, diff_rows):
    """Cohomology dims of a complex from minor-ranks of its differentials.

    dims: list of dimensions per degree; diff_rows: list of row-lists, one
    per adjacent pair (entries may be anything QQ() accepts).
    """
    ranks = [rank_by_minors(m) for m in diff_rows]
    out = []
    for k, d in enumerate(dims):
        r_out = ranks[k] if k < len(ranks) else 0
        r_in = ranks[k - 1] if k >= 1 else 0
        out.append(d - r_out - r_in)
    return out


def count_monomials(weights, w):
    """Monomials of the given total weight, by raw box enumeration."""
    if w < 0:
        return 0
    if not weights:
        return 1 if w == 0 else 0
    total = 0
    for e in range(w // weights[0] + 1):
        total += count_monomials(weights[1:], w - e * weights[0])
    return total


def line_bundle_dims_by_counting(d):
    """(h0, h1) for the degree-d line bundle by Laurent exponent bookkeeping:
    chart-0 sections cover exponents 0,1,2,... and chart-1 sections cover
    d, d-1, d-2, ...; matched exponents give sections, missed ones classes."""
    matched = [e for e in range(0, d + 1)] if d >= 0 else []
    missed = [e for e in range(d + 1, 0)]
    return len(matched), len(missed)
