"""Exact LP feasibility in rational arithmetic.

A phase-one simplex with Bland's rule over Fractions. sympy 1.14's simplex returns
points violating the constraints on some of our small systems, so it is not used here.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def nonnegative_solution(a_eq: Sequence[Sequence], b_eq: Sequence) -> list[Fraction] | None:
    """A rational x >= 0 with a_eq x = b_eq, or None."""
    m = len(a_eq)
    k = len(a_eq[0]) if m else 0
    rows = [[Fraction(c) for c in r] for r in a_eq]
    rhs = [Fraction(c) for c in b_eq]
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-c for c in rows[i]]
            rhs[i] = -rhs[i]
    # tableau columns: x (k), artificials (m), rhs
    tab = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [k + i for i in range(m)]
    width = k + m
    # reduced costs of "minimize sum of artificials"
    cost = [Fraction(0)] * k + [Fraction(1)] * m + [Fraction(0)]
    for i in range(m):
        cost = [c - t for c, t in zip(cost, tab[i])]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded cannot happen for a phase-one objective bounded below
            raise ArithmeticError("phase-one problem reported unbounded")
        r = best[1]
        piv = tab[r][enter]
        tab[r] = [c / piv for c in tab[r]]
        for i in range(m):
            if i != r and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [c - f * t for c, t in zip(tab[i], tab[r])]
        f = cost[enter]
        cost = [c - f * t for c, t in zip(cost, tab[r])]
        basis[r] = enter
    if cost[-1] != 0:
        return None
    x = [Fraction(0)] * width
    for i, j in enumerate(basis):
        x[j] = tab[i][-1]
    sol = x[:k]
    assert all(v >= 0 for v in sol)
    assert all(sum(Fraction(c) * v for c, v in zip(row, sol)) == Fraction(t) for row, t in zip(a_eq, b_eq))
    return sol


def free_inequality_point(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """A rational y with a y <= b (y unrestricted in sign), or None."""
    if not a:
        return []
    k, m = len(a[0]), len(a)
    # y = y+ - y-, plus one slack per row
    eq = [list(row) + [-c for c in row] + [int(i == j) for j in range(m)] for i, row in enumerate(a)]
    sol = nonnegative_solution(eq, b)
    if sol is None:
        return None
    return [sol[q] - sol[k + q] for q in range(k)]
