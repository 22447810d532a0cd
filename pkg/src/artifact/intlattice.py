"""Integer lattices: row Hermite normal form, kernels, membership and Hilbert bases."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import floor, gcd
from typing import Sequence

from sympy import Matrix

Row = list[int]


def _hnf_with_transform(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[Row], list[Row]]:
    """Row-reduce over Z on the first ``ncols`` columns, tracking the unimodular transform."""
    a = [list(r) for r in rows]
    m = len(a)
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    piv_row = 0
    for col in range(ncols):
        if piv_row >= m:
            break
        while True:
            nz = [r for r in range(piv_row, m) if a[r][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda r: abs(a[r][col]))
            a[piv_row], a[best] = a[best], a[piv_row]
            u[piv_row], u[best] = u[best], u[piv_row]
            done = True
            for r in range(piv_row + 1, m):
                if a[r][col]:
                    q = a[r][col] // a[piv_row][col]
                    a[r] = [x - q * y for x, y in zip(a[r], a[piv_row])]
                    u[r] = [x - q * y for x, y in zip(u[r], u[piv_row])]
                    if a[r][col]:
                        done = False
            if done:
                break
        if piv_row < m and a[piv_row][col] != 0:
            if a[piv_row][col] < 0:
                a[piv_row] = [-x for x in a[piv_row]]
                u[piv_row] = [-x for x in u[piv_row]]
            p = a[piv_row][col]
            for r in range(piv_row):
                q = a[r][col] // p
                if q:
                    a[r] = [x - q * y for x, y in zip(a[r], a[piv_row])]
                    u[r] = [x - q * y for x, y in zip(u[r], u[piv_row])]
            piv_row += 1
    return a, u


def hnf(rows: Sequence[Sequence[int]]) -> list[Row]:
    """Canonical basis (row HNF) of the lattice spanned by ``rows``."""
    if not rows:
        return []
    ncols = len(rows[0])
    a, _ = _hnf_with_transform(rows, ncols)
    return [r for r in a if any(r)]


def kernel_basis(weights: Sequence[Sequence[int]]) -> list[Row]:
    """Integer basis (in HNF) of {e : sum_c e_c * weights[c] = 0}."""
    n = len(weights)
    if n == 0:
        return []
    d = len(weights[0])
    a, u = _hnf_with_transform(weights, d)
    ker = [u[i] for i in range(n) if not any(a[i])]
    return hnf(ker)


def pivots(basis: Sequence[Sequence[int]]) -> list[int]:
    return [next(i for i, x in enumerate(r) if x) for r in basis]


def reduce_mod(basis: Sequence[Sequence[int]], v: Sequence[int]) -> Row:
    """Canonical representative of v modulo the lattice with HNF ``basis``."""
    out = list(v)
    for r, p in zip(basis, pivots(basis)):
        q = out[p] // r[p]
        if q:
            out = [x - q * y for x, y in zip(out, r)]
    return out


def solve(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
    """Integer coefficients c with sum c_i basis_i = v, for an HNF basis; None if v is not in the lattice."""
    out = list(v)
    coeffs = []
    for r, p in zip(basis, pivots(basis)):
        if out[p] % r[p]:
            return None
        q = out[p] // r[p]
        coeffs.append(q)
        out = [x - q * y for x, y in zip(out, r)]
    return coeffs if not any(out) else None


def contains(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    return solve(basis, v) is not None


# -- pointed monoids Lambda ∩ N^p -----------------------------------------------

def _primitive(v: Sequence) -> Row:
    """Scale a rational vector to a primitive integer vector with the same direction."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


def _nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[Row]:
    """Integer basis of {y in Q^ncols : rows * y = 0} (not saturated)."""
    if not rows:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    return [_primitive(list(v)) for v in Matrix(rows).nullspace()]


def extreme_rays(basis: Sequence[Sequence[int]], support: Sequence[int], max_support: int = 14) -> list[Row]:
    """Primitive lattice generators of the extreme rays of span(basis) ∩ R^p_{>=0}.

    The rays are the nonnegative vectors of minimal support; every coordinate outside
    ``support`` is known to vanish on the cone.
    """
    if len(support) > max_support:
        raise ValueError(f"cone with {len(support)} supported coordinates is beyond the exact ray search")
    if not basis:
        return []
    p = len(basis[0])
    k = len(basis)
    hb = hnf(basis)
    rays: list[Row] = []
    for size in range(1, len(support) + 1):
        for t in combinations(support, size):
            zero = [c for c in range(p) if c not in t]
            ys = _nullspace([[basis[r][c] for r in range(k)] for c in zero], k)
            if len(ys) != 1:
                continue
            v = [sum(ys[0][r] * basis[r][c] for r in range(k)) for c in range(p)]
            if {c for c in range(p) if v[c]} != set(t):
                continue
            if all(x <= 0 for x in v):
                v = [-x for x in v]
            if any(x < 0 for x in v):
                continue
            r0 = _primitive(v)
            m = 1
            while not contains(hb, [m * x for x in r0]):
                m += 1
            rays.append([m * x for x in r0])
    return rays


def _rank(rows: Sequence[Sequence[int]]) -> int:
    return Matrix(rows).rank() if rows else 0


def hilbert_basis(basis: Sequence[Sequence[int]], support: Sequence[int]) -> list[Row]:
    """Hilbert basis of the pointed monoid span_Z(basis) ∩ N^p.

    Every irreducible element lies in the half-open parallelepiped of some linearly
    independent set of extreme rays (or is a ray), so those points form a complete
    candidate set; the irreducible candidates are the ones with no other candidate below.
    """
    rays = extreme_rays(basis, support)
    if not rays:
        return []
    p = len(rays[0])
    d = _rank(rays)
    # lattice points of the cone's linear span
    perp = _nullspace(rays, p)
    if perp:
        coeffs = kernel_basis([[sum(b[c] * n[c] for c in range(p)) for n in perp] for b in basis])
        sub = [[sum(e[r] * basis[r][c] for r in range(len(basis))) for c in range(p)] for e in coeffs]
    else:
        sub = [list(b) for b in basis]
    bw = hnf(sub)
    assert len(bw) == d
    candidates = {tuple(r) for r in rays}
    for simplex in combinations(rays, d):
        if _rank(list(simplex)) < d:
            continue
        rb = [solve(bw, r) for r in simplex]
        h = hnf(rb)
        inv = Matrix(rb).inv()
        for y in product(*(range(h[i][i]) for i in range(d))):
            if not any(y):
                continue
            lam = Matrix([list(y)]) * inv
            frac = [Fraction(int(x.p), int(x.q)) for x in lam]
            frac = [x - floor(x) for x in frac]
            pt = [sum(f * r[c] for f, r in zip(frac, simplex)) for c in range(p)]
            assert all(x.denominator == 1 for x in pt)
            pt = tuple(int(x) for x in pt)
            if any(pt):
                candidates.add(pt)
    cands = sorted(candidates, key=lambda v: (sum(v), v))
    return [
        list(v) for v in cands
        if not any(g != v and all(a <= b for a, b in zip(g, v)) for g in cands)
    ]
