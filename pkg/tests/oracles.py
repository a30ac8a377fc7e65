"""Reference computations kept deliberately independent of the library code."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb


def faddeev_leverrier(a: list[list[int]]) -> list[int]:
    """Characteristic polynomial det(xI - A), descending coefficients, integer only."""
    n = len(a)
    coeffs = [1]
    m = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[-1]
        # M_k = A M_{k-1} + c_{k-1} I
        m = [
            [sum(a[i][t] * m[t][j] for t in range(n)) + (c_prev if i == j else 0) for j in range(n)]
            for i in range(n)
        ]
        am = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        tr = sum(am[i][i] for i in range(n))
        assert tr % k == 0
        coeffs.append(-tr // k)
    return coeffs


def rank_q(rows: list[list[Fraction]]) -> int:
    rows = [list(map(Fraction, r)) for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _compositions(total: int, parts: int):
    if total < 0:
        return
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for c in cut + (total + parts - 1,):
            out.append(c - prev - 1)
            prev = c
        yield tuple(out)


def coordinate_ring_dim(weights, lambdas, l: int, p) -> int:
    """dim of the degree (l c + sum p_i x_i) part of
    k[X_1..X_r] / (X_i^{a_i} - X_2^{a_2} + lambda_i X_1^{a_1}, i >= 3),
    by linear algebra on the monomial basis (a Macaulay matrix)."""
    r = len(weights)
    if l < 0:
        return 0

    def monomials(level):
        return [tuple(pi + a * k for pi, a, k in zip(p, weights, ks)) for ks in _compositions(level, r)]

    basis = monomials(l)
    index = {m: i for i, m in enumerate(basis)}
    assert len(basis) == comb(l + r - 1, r - 1)
    rows = []
    for m in monomials(l - 1):
        for i in range(2, r):
            row = [Fraction(0)] * len(basis)
            for coeff, var in ((1, i), (-1, 1), (lambdas[i], 0)):
                mono = list(m)
                mono[var] += weights[var]
                row[index[tuple(mono)]] += coeff
            rows.append(row)
    return len(basis) - rank_q(rows)
