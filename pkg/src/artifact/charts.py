"""Coordinate charts on Schubert cells, the monodromy condition and torus weights.

A chart holds one Laurent matrix template per embedding j = 0..f-1.  The point it
parametrizes is z*_j T_j s_j v^{omega_j}; the monodromy condition on that point
is imposed on T_j directly, and the torus acts on T_j by shifted conjugation.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .laurent import Coeff, CoeffRing, LaurentMatrix, LaurentPoly, mat_inverse, mat_mul, monodromy_operator, natural_key
from .loop import ValuationBounds, check_bounds, conjugated_upper_iwahori, monomial_matrix
from .weyl import (
    AffineWeylElement,
    Perm,
    length,
    perm_act,
    perm_identity,
    perm_inverse,
    perm_mul,
    perm_w0,
    star,
    w0_element,
)


# -- characters ----------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    """Integer f x n matrix in the basis E_{j,i}."""

    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def zero(cls, f: int, n: int) -> "Character":
        return cls(tuple((0,) * n for _ in range(f)))

    @classmethod
    def basis(cls, f: int, n: int, j: int, i: int) -> "Character":
        """E_{j,i} with i 1-based and j taken mod f."""
        rows = [[0] * n for _ in range(f)]
        rows[j % f][i - 1] = 1
        return cls(tuple(tuple(r) for r in rows))

    @property
    def f(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __add__(self, other: "Character") -> "Character":
        return Character(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> "Character":
        return Character(tuple(tuple(-a for a in r) for r in self.rows))

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def __mul__(self, k: int) -> "Character":
        return Character(tuple(tuple(k * a for a in r) for r in self.rows))

    __rmul__ = __mul__

    def flat(self) -> tuple[int, ...]:
        return tuple(a for r in self.rows for a in r)

    def is_zero(self) -> bool:
        return not any(self.flat())

    def pair(self, cochar: Sequence[Sequence[int]]) -> int:
        return sum(a * b for r, s in zip(self.rows, cochar) for a, b in zip(r, s))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def chi(f: int, n: int, j: int, k: int, l: int) -> Character:
    """chi_{j,k,l} = E_{j,k} - E_{j-1,l}."""
    return Character.basis(f, n, j, k) - Character.basis(f, n, j - 1, l)


# -- charts --------------------------------------------------------------------

@dataclass(frozen=True)
class Coordinate:
    name: str
    unit: bool
    j: int
    row: int  # 1-based template position
    col: int
    m: int  # v-exponent

    def to_json(self) -> dict:
        return {"name": self.name, "unit": self.unit, "j": self.j, "row": self.row, "col": self.col, "m": self.m}


@dataclass
class SymbolicChart:
    kind: str
    n: int
    f: int
    ring: CoeffRing
    coordinates: tuple[Coordinate, ...]
    templates: tuple[LaurentMatrix, ...]
    bounds: tuple[ValuationBounds, ...]  # Ad_{z^{-*}}(I) per embedding
    relations: tuple[Coeff, ...] = ()
    weight_map: dict[str, Character] = field(default_factory=dict)
    eliminated: tuple[tuple[str, Coeff], ...] = ()
    metadata: dict = field(default_factory=dict)

    def replace(self, **kw) -> "SymbolicChart":
        return dataclasses.replace(self, **kw)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.coordinates]

    @property
    def units(self) -> list[str]:
        return [c.name for c in self.coordinates if c.unit]

    @property
    def nonunits(self) -> list[str]:
        return [c.name for c in self.coordinates if not c.unit]

    def coordinate(self, name: str) -> Coordinate:
        for c in self.coordinates:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        ring = self.ring
        return {
            "kind": self.kind,
            "n": self.n,
            "f": self.f,
            "coordinates": [
                dict(c.to_json(), weight=self.weight_map[c.name].to_json() if c.name in self.weight_map else None)
                for c in self.coordinates
            ],
            "templates": [[[str(e) for e in row] for row in t.rows] for t in self.templates],
            "relations": [ring.fmt(r) for r in self.relations],
            "eliminated": [{"name": name, "value": ring.fmt(expr)} for name, expr in self.eliminated],
            "metadata": self.metadata,
        }


def _ring_for(coords: Iterable[Coordinate], modulus: int | None) -> CoeffRing:
    coords = list(coords)
    return CoeffRing([c.name for c in coords], [c.name for c in coords if c.unit], modulus)


def _check_reduced_factorization(zs: AffineWeylElement) -> None:
    w0 = w0_element(zs.n)
    wt_star = zs * w0
    if length(zs, "main") != length(wt_star, "main") + length(w0, "main"):
        raise ValueError(f"z* = {zs} does not factor reducedly as w~* w0")


def upper_windows(zs: AffineWeylElement) -> tuple[ValuationBounds, ValuationBounds]:
    """(bounds of Ad_{z^{-*}}(I), coordinate windows of the quotient of I by it)."""
    b = conjugated_upper_iwahori(star(zs))
    n = zs.n

    def window(i: int, j: int):
        lo = b[(i, j)][0]
        if i == j:
            return (0, 0)
        if i > j:
            if lo > 1:
                raise ValueError(f"z* = {zs} is outside the anti-restricted region (entry {i + 1},{j + 1})")
            return None
        return (0, lo - 1) if lo >= 1 else None

    return b, ValuationBounds.build(n, window)


def chart_A(z_star: Sequence[AffineWeylElement], modulus: int | None = None, unipotent: bool = False) -> SymbolicChart:
    """Upper triangular coordinates on the cells I_1 \\ I_1 z*_j I.

    With ``unipotent`` the diagonal is fixed to 1 (coordinates on I \\ I z* I).
    """
    f = len(z_star)
    n = z_star[0].n
    coords: list[Coordinate] = []
    all_bounds, all_windows = [], []
    for j, zs in enumerate(z_star):
        if zs.n != n:
            raise ValueError("rank mismatch between embeddings")
        _check_reduced_factorization(zs)
        b, win = upper_windows(zs)
        all_bounds.append(b)
        all_windows.append(win)
        for k in range(n):
            if not unipotent:
                coords.append(Coordinate(f"c_{j}_{k + 1}", True, j, k + 1, k + 1, 0))
            for l in range(k + 1, n):
                w = win[(k, l)]
                if w is None:
                    continue
                for m in range(w[0], w[1] + 1):
                    coords.append(Coordinate(f"a_{j}_{k + 1}_{l + 1}_{m}", False, j, k + 1, l + 1, m))
    ring = _ring_for(coords, modulus)
    templates = []
    for j in range(f):
        t = LaurentMatrix.zeros(ring, n)
        for k in range(n):
            t.rows[k][k] = LaurentPoly.const(ring, 1)
        for c in coords:
            if c.j == j:
                e = t.rows[c.row - 1][c.col - 1]
                if c.row == c.col:
                    e = LaurentPoly(ring)
                t.rows[c.row - 1][c.col - 1] = e + LaurentPoly(ring, {c.m: ring.gen(c.name)})
        templates.append(t)
    meta = {
        "z_star": [x.to_json() for x in z_star],
        "windows": [w.to_text() for w in all_windows],
        "conjugated_iwahori": [b.to_text() for b in all_bounds],
        "unipotent": unipotent,
    }
    return SymbolicChart("A", n, f, ring, tuple(coords), tuple(templates), tuple(all_bounds), metadata=meta)


def translate_chart(chart: SymbolicChart, t: Sequence[Perm]) -> SymbolicChart:
    """Right translate each template by the permutation matrix of t_j (no signs)."""
    templates, coords = [], []
    for j, tmpl in enumerate(chart.templates):
        p = monomial_matrix(chart.ring, AffineWeylElement.permutation(t[j]))
        templates.append(mat_mul(tmpl, p))
    tinv = [perm_inverse(x) for x in t]
    for c in chart.coordinates:
        coords.append(dataclasses.replace(c, col=tinv[c.j][c.col - 1]))
    meta = dict(chart.metadata, translation=[list(x) for x in t])
    return chart.replace(kind=chart.kind + "t", coordinates=tuple(coords), templates=tuple(templates), metadata=meta)


def band_bounds(n: int) -> ValuationBounds:
    """The part of Ad_{z^{-*}}(I) common to every restricted w~: the band |i - j| <= 1."""

    def entry(i: int, j: int):
        if i == j:
            return (0, None)
        if j == i + 1:
            return (1, None)
        if i == j + 1:
            return (0, None)
        return None

    return ValuationBounds.build(n, entry)


def chart_B_k(k: int, f: int, n: int, modulus: int | None = None) -> SymbolicChart:
    """The auxiliary chart: a torus with the k, k+1 block replaced by [[a, d_k], [d_{k+1}, 0]]."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"k = {k} out of range 1..{n - 1}")
    coords = []
    for j in range(f):
        for i in range(1, n + 1):
            if i == k:
                pos = (k, k + 1)
            elif i == k + 1:
                pos = (k + 1, k)
            else:
                pos = (i, i)
            coords.append(Coordinate(f"d_{j}_{i}", True, j, pos[0], pos[1], 0))
        coords.append(Coordinate(f"a_{j}", False, j, k, k, 0))
    ring = _ring_for(coords, modulus)
    templates = []
    for j in range(f):
        t = LaurentMatrix.zeros(ring, n)
        for c in coords:
            if c.j == j:
                t.rows[c.row - 1][c.col - 1] = LaurentPoly.const(ring, ring.gen(c.name))
        templates.append(t)
    chart = SymbolicChart(
        f"B_{k}", n, f, ring, tuple(coords), tuple(templates), tuple(band_bounds(n) for _ in range(f)),
        metadata={"k": k},
    )
    checked = impose_monodromy(chart, [perm_identity(n)] * f, None, solve=False)
    chart.metadata["monodromy_violations"] = len(checked.relations)
    if checked.relations:
        raise AssertionError("B_k template violates the monodromy condition")
    return chart


# -- monodromy -------------------------------------------------------------------

def omega_names(f: int, n: int) -> list[str]:
    return [f"om_{j}_{i}" for j in range(f) for i in range(1, n + 1)]


def _omega_ring(chart: SymbolicChart, omega) -> tuple[CoeffRing, list[list[Coeff]]]:
    f, n = chart.f, chart.n
    if omega is None:
        names = omega_names(f, n)
        pairs = [(f"om_{j}_{a}", f"om_{j}_{b}") for j in range(f) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
        base = chart.ring
        ring = CoeffRing(list(base.names) + names, base.units, base.modulus, list(base.generic_pairs) + pairs)
        vals = [[ring.gen(f"om_{j}_{i}") for i in range(1, n + 1)] for j in range(f)]
        return ring, vals
    ring = chart.ring
    return ring, [[ring.const(int(x)) for x in row] for row in omega]


def normalize_relation(ring: CoeffRing, r: Coeff) -> Coeff:
    """Strip unit monomial content and scalar factors: canonical up to units."""
    num = r.numer
    terms = num.terms()
    nvars = len(ring.names)
    content = [min(m[i] for m, _ in terms) if ring.names[i] in ring.units else 0 for i in range(nvars)]
    mono = ring.field.ring.from_dict({tuple(content): ring.field.domain.one})
    num = num.exquo(mono)
    lead = max(num.terms(), key=lambda t: t[0])[1]
    return ring.field(num) / ring.const(lead)


def monodromy_matrix(tmpl: LaurentMatrix, diag: Sequence[Coeff]) -> LaurentMatrix:
    ring = tmpl.ring
    inv = mat_inverse(tmpl)
    d = LaurentMatrix.diagonal(ring, [LaurentPoly.const(ring, x) for x in diag])
    return monodromy_operator(tmpl, inv) + mat_mul(mat_mul(tmpl, d), inv)


def impose_monodromy(
    chart: SymbolicChart, s: Sequence[Perm], omega: Sequence[Sequence[int]] | None = None, solve: bool = True
) -> SymbolicChart:
    """Install v T' T^-1 + T diag(s omega) T^-1 in (1/v) Lie Ad_{z^{-*}}(I) as relations.

    ``omega`` None means generic symbols om_j_i with all differences invertible.
    """
    ring, om = _omega_ring(chart, omega)
    templates = [t.map_coeffs(lambda c: ring.convert(c, chart.ring), ring) for t in chart.templates]
    relations: list[Coeff] = []
    violations: list[list[dict]] = []
    for j, tmpl in enumerate(templates):
        sw = perm_act(s[j], om[j])
        m = monodromy_matrix(tmpl, sw)
        viol = check_bounds(m, chart.bounds[j].shift(-1))
        violations.append([dict(v.to_json(ring), j=j) for v in viol])
        for v in viol:
            rel = normalize_relation(ring, v.coeff)
            if all(rel != r for r in relations):
                relations.append(rel)
    meta = dict(chart.metadata, s=[list(x) for x in s], omega="generic" if omega is None else [list(r) for r in omega])
    meta["violations"] = violations
    eliminated = tuple((name, ring.convert(e, chart.ring)) for name, e in chart.eliminated)
    out = chart.replace(ring=ring, templates=tuple(templates), relations=tuple(relations), metadata=meta, eliminated=eliminated)
    return solve_relations(out) if solve else out


def solve_relations(
    chart: SymbolicChart, name_order: Sequence[str] | None = None, relation_order: Sequence[int] | None = None
) -> SymbolicChart:
    """Eliminate coordinates that occur linearly with a unit coefficient."""
    ring = chart.ring
    rels = list(chart.relations)
    if relation_order is not None:
        rels = [rels[i] for i in relation_order]
    order = list(name_order) if name_order is not None else sorted(chart.nonunits, key=natural_key)
    active = set(chart.names)
    templates = list(chart.templates)
    eliminated = list(chart.eliminated)
    while rels:
        pick = None
        for name in order:
            if name not in active:
                continue
            for idx, r in enumerate(rels):
                split = ring.linear_split(r, name)
                if split is not None and ring.is_unit(split[0]):
                    pick = (name, idx, split)
                    break
            if pick:
                break
        if pick is None:
            break
        name, idx, (a, b) = pick
        value = -b / a
        sub = {name: value}
        rels.pop(idx)
        rels = [normalize_relation(ring, x) for x in (ring.substitute(r, sub) for r in rels) if x]
        templates = [t.map_coeffs(lambda c: ring.substitute(c, sub) if c else c) for t in templates]
        eliminated = [(nm, ring.substitute(e, sub)) for nm, e in eliminated] + [(name, value)]
        active.discard(name)
    coords = tuple(c for c in chart.coordinates if c.name in active)
    weights = {k: v for k, v in chart.weight_map.items() if k in active}
    meta = dict(chart.metadata, residual_relations=len(rels))
    return chart.replace(
        coordinates=coords, templates=tuple(templates), relations=tuple(rels),
        eliminated=tuple(eliminated), weight_map=weights, metadata=meta,
    )


# -- weights ---------------------------------------------------------------------

def coordinate_weights(chart: SymbolicChart, w: Sequence[Perm], s: Sequence[Perm]) -> SymbolicChart:
    """Weights for (D.T)_j = Ad_{w0 w_j}(D_j) T_j Ad_{s_j}(D_{j-1})^-1, after reindexing D_j by w0 w_j."""
    f, n = chart.f, chart.n
    w0 = perm_w0(n)
    u = [perm_mul(w0, w[j]) for j in range(f)]
    weights = {}
    for c in chart.coordinates:
        j = c.j
        sinv = perm_inverse(s[j])
        col = u[(j - 1) % f][sinv[c.col - 1] - 1]
        weights[c.name] = Character.basis(f, n, j, c.row) - Character.basis(f, n, j - 1, col)
    meta = dict(chart.metadata, reindexing=[list(x) for x in u], weight_s=[list(x) for x in s])
    return chart.replace(weight_map=weights, metadata=meta)


def eta_cocharacter(f: int, n: int) -> list[list[int]]:
    """The cocharacter pairing chi_{j,k,l} to l - k."""
    return [[-(i - 1) for i in range(1, n + 1)] for _ in range(f)]


def torus_substitution(chart: SymbolicChart, t: Sequence[Sequence]) -> dict[str, Coeff]:
    """x -> t^{weight(x)} x for a numeric torus point t (f x n)."""
    ring = chart.ring
    out = {}
    for c in chart.coordinates:
        scale = ring.one
        for j, row in enumerate(chart.weight_map[c.name].rows):
            for i, e in enumerate(row):
                if e:
                    scale *= ring.const(t[j][i]) ** e
        out[c.name] = scale * ring.gen(c.name)
    return out


# -- minors ----------------------------------------------------------------------

@dataclass(frozen=True)
class Restriction:
    sign: int
    exponents: tuple[tuple[str, int], ...]

    def as_dict(self) -> dict[str, int]:
        return dict(self.exponents)

    def to_json(self) -> dict:
        return {"sign": self.sign, "exponents": dict(self.exponents)}


def minor_mod_v(tmpl: LaurentMatrix, i: int) -> Coeff:
    ring = tmpl.ring
    const = tmpl.map(lambda e: LaurentPoly(ring, {0: e.coeff(0)}))
    return const.minor(list(range(i)), list(range(i))).coeff(0)


def restrict_x(chart: SymbolicChart, i: int) -> Restriction:
    """x_i = prod_j (upper left i x i minor of T_j mod v), as a signed monomial."""
    if not 1 <= i <= chart.n:
        raise ValueError(f"index {i} out of range 1..{chart.n}")
    ring = chart.ring
    total = ring.one
    for tmpl in chart.templates:
        total *= minor_mod_v(tmpl, i)
    mono = ring.monomial(total)
    if mono is None:
        raise ValueError(f"x_{i} restricts to a non-monomial {ring.fmt(total)}")
    scalar, exps = mono
    s = ring.scalar_str(scalar)
    if s not in ("1", "-1"):
        raise ValueError(f"x_{i} restricts with scalar {s}")
    return Restriction(-1 if s == "-1" else 1, tuple(sorted(exps.items(), key=lambda kv: natural_key(kv[0]))))
