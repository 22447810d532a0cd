"""Torus-invariant monomials of a chart and the extendability filter on minors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import intlattice
from .charts import Character, SymbolicChart, chart_B_k, coordinate_weights, eta_cocharacter, restrict_x
from .laurent import natural_key
from .lp import free_inequality_point
from .weyl import perm_identity, perm_w0


@dataclass(frozen=True)
class ExponentVector:
    """Sparse integer exponents keyed by coordinate name."""

    items: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, exps: Mapping[str, int]) -> "ExponentVector":
        return cls(tuple(sorted(((k, v) for k, v in exps.items() if v), key=lambda kv: natural_key(kv[0]))))

    @classmethod
    def from_dense(cls, names: Sequence[str], vec: Sequence[int]) -> "ExponentVector":
        return cls.of(dict(zip(names, vec)))

    def as_dict(self) -> dict[str, int]:
        return dict(self.items)

    def dense(self, names: Sequence[str]) -> list[int]:
        d = self.as_dict()
        if set(d) - set(names):
            raise ValueError(f"exponents on unknown coordinates {sorted(set(d) - set(names))}")
        return [d.get(x, 0) for x in names]

    def __add__(self, other: "ExponentVector") -> "ExponentVector":
        d = self.as_dict()
        for k, v in other.items:
            d[k] = d.get(k, 0) + v
        return ExponentVector.of(d)

    def __mul__(self, k: int) -> "ExponentVector":
        return ExponentVector.of({a: k * b for a, b in self.items})

    __rmul__ = __mul__

    def __neg__(self) -> "ExponentVector":
        return self * -1

    def __str__(self) -> str:
        if not self.items:
            return "1"
        return "*".join(k if v == 1 else f"{k}^{v}" for k, v in self.items)


def weight_of_monomial(chart: SymbolicChart, e: ExponentVector | Mapping[str, int]) -> Character:
    exps = e.as_dict() if isinstance(e, ExponentVector) else dict(e)
    unknown = set(exps) - set(chart.weight_map)
    if unknown:
        raise ValueError(f"exponent vector does not match the chart: {sorted(unknown, key=natural_key)}")
    total = Character.zero(chart.f, chart.n)
    for name, k in exps.items():
        total = total + chart.weight_map[name] * k
    return total


# -- presentations -----------------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    name: str
    exponents: ExponentVector
    unit: bool
    sign: int = 1

    def display(self) -> str:
        base = f"({self.name})" if " " in self.name else self.name
        return f"{base}^{{±1}}" if self.unit else base

    def to_json(self) -> dict:
        return {"name": self.name, "exponents": self.exponents.as_dict(), "unit": self.unit, "sign": self.sign}


@dataclass
class RingPresentation:
    generators: tuple[Generator, ...]
    certificate: str = "exact"
    witnesses: list[dict] = field(default_factory=list)

    @property
    def ring_string(self) -> str:
        return "F[" + ", ".join(g.display() for g in self.generators) + "]"

    @property
    def units(self) -> list[Generator]:
        return [g for g in self.generators if g.unit]

    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def to_json(self) -> dict:
        out = {
            "generators": [g.to_json() for g in self.generators],
            "ring_string": self.ring_string,
            "certificate": self.certificate,
        }
        if self.witnesses:
            out["witnesses"] = self.witnesses
        return out


# -- the weight-zero monoid ----------------------------------------------------------

@dataclass
class InvariantMonoid:
    """{e : weight(e) = 0, e >= 0 on non-units} as unit lattice + Hilbert basis."""

    names: list[str]  # non-units first, then units
    nonunits: list[str]
    units: list[str]
    unit_lattice: list[list[int]]  # HNF, supported on units
    hilbert: list[list[int]]  # lifts, canonical mod unit_lattice
    supported: list[str]

    def vector(self, v: Sequence[int]) -> ExponentVector:
        return ExponentVector.from_dense(self.names, v)


def _supported(basis: list[list[int]], p: int, idx: int) -> bool:
    """Is there a rational e in span(basis) with e >= 0 on the first p coordinates and e_idx >= 1?"""
    if not basis:
        return False
    k = len(basis)
    a, b = [], []
    for q in range(p):
        a.append([-basis[r][q] for r in range(k)])
        b.append(-1 if q == idx else 0)
    y = free_inequality_point(a, b)
    if y is None:
        return False
    e = [sum(y[r] * basis[r][q] for r in range(k)) for q in range(p)]
    assert all(x >= 0 for x in e) and e[idx] >= 1
    return True


def invariant_monoid(chart: SymbolicChart) -> InvariantMonoid:
    if not chart.weight_map:
        raise ValueError("chart has no weight map; call coordinate_weights first")
    nonunits = sorted(chart.nonunits, key=natural_key)
    units = sorted(chart.units, key=natural_key)
    names = nonunits + units
    p = len(nonunits)
    weights = [list(chart.weight_map[x].flat()) for x in names]
    lat = intlattice.kernel_basis(weights)
    # HNF with non-unit columns first splits L into a part projecting onto pi(L) and the unit lattice.
    lat = intlattice.hnf(lat)
    proj = [r for r in lat if any(r[:p])]
    unit_lattice = [r for r in lat if not any(r[:p])]
    proj_p = [r[:p] for r in proj]

    supported = [i for i in range(p) if _supported(proj, p, i)]
    hilbert: list[list[int]] = []
    for v in intlattice.hilbert_basis(proj_p, supported) if supported else []:
        coeffs = intlattice.solve(proj_p, v)
        assert coeffs is not None
        full = [0] * len(names)
        for c, r in zip(coeffs, proj):
            full = [x + c * y for x, y in zip(full, r)]
        hilbert.append(intlattice.reduce_mod(unit_lattice, full))
    return InvariantMonoid(
        names, nonunits, units, unit_lattice, hilbert,
        [nonunits[i] for i in supported],
    )


# -- naming ------------------------------------------------------------------------

def _parse(name: str) -> tuple[str, list[int]]:
    head, *rest = name.split("_")
    return head, [int(x) for x in rest]


def name_monomial(chart: SymbolicChart, e: ExponentVector) -> str | None:
    """Pretty names for the patterns of the chart families; None if no pattern applies."""
    d = e.as_dict()
    if any(v != 1 for v in d.values()):
        return None
    f = chart.f
    groups: dict[tuple[str, int], set[int]] = {}
    for name in d:
        head, idx = _parse(name)
        if head == "a" and len(idx) == 1:
            groups.setdefault(("a", 0), set()).add(idx[0])
        elif head in ("c", "d") and len(idx) == 2:
            groups.setdefault((head, idx[1]), set()).add(idx[0])
        else:
            return None
    everything = set(range(f))
    if len(groups) == 1:
        (head, i), js = next(iter(groups.items()))
        if js != everything:
            return None
        if head == "a":
            return "a"
        if head == "c":
            return f"c{i}" if f == 1 else f"x{i}"
        return f"d{i}"
    if len(groups) == 2 and all(h == "d" for h, _ in groups):
        (_, k), (_, k1) = sorted(groups)
        a, b = groups[("d", k)], groups[("d", k1)]
        if k1 != k + 1:
            return None
        if a == everything and b == everything:
            return f"d{k} d{k1}"
        even = {j for j in everything if j % 2 == 0}
        odd = everything - even
        if f % 2 == 0 and a == even and b == odd:
            return f"d{k}^e d{k1}^o"
        if f % 2 == 0 and a == odd and b == even:
            return f"d{k}^o d{k1}^e"
    return None


def _named_unit_basis(chart: SymbolicChart, mono: InvariantMonoid) -> list[list[int]] | None:
    """A basis of the unit lattice made of pattern-named monomials, when one exists."""
    units = mono.units
    p = len(mono.nonunits)
    by_i: dict[tuple[str, int], list[str]] = {}
    for u in units:
        head, idx = _parse(u)
        if len(idx) == 2:
            by_i.setdefault((head, idx[1]), []).append(u)
    pattern_vecs = []

    def vec(names: Iterable[str]) -> list[int]:
        s = set(names)
        return [1 if x in s else 0 for x in mono.names]

    for key in sorted(by_i):
        pattern_vecs.append(vec(by_i[key]))
    keys = sorted(by_i)
    for (h, k), (h1, k1) in zip(keys, keys[1:]):
        if h == h1 == "d" and k1 == k + 1:
            for par in (0, 1):
                pattern_vecs.append(vec([u for u in by_i[(h, k)] if _parse(u)[1][0] % 2 == par]
                                        + [u for u in by_i[(h1, k1)] if _parse(u)[1][0] % 2 != par]))
            pattern_vecs.append(vec(by_i[(h, k)] + by_i[(h1, k1)]))
    target = intlattice.hnf(mono.unit_lattice) if mono.unit_lattice else []
    weights = [list(chart.weight_map[x].flat()) for x in mono.names]
    chosen: list[list[int]] = []
    for v in pattern_vecs:
        if any(v[:p]):
            continue
        if not intlattice.contains(target, v):
            continue
        if any(sum(a * w[c] for a, w in zip(v, weights)) for c in range(len(weights[0]))):
            continue
        if len(intlattice.hnf(chosen + [v])) > len(chosen):
            chosen.append(v)
    if chosen and intlattice.hnf(chosen) == target:
        return chosen
    return None


def invariant_generators(chart: SymbolicChart) -> RingPresentation:
    mono = invariant_monoid(chart)
    gens = []
    basis = _named_unit_basis(chart, mono) or mono.unit_lattice
    for r in basis:
        e = mono.vector(r)
        gens.append(Generator(name_monomial(chart, e) or str(e), e, True))
    for r in mono.hilbert:
        e = mono.vector(r)
        gens.append(Generator(name_monomial(chart, e) or str(e), e, False))
    gens.sort(key=lambda g: natural_key(g.name.replace("^e", "").replace("^o", "")))
    return RingPresentation(tuple(gens))


# -- box oracle ----------------------------------------------------------------------

def _greedy_order(names: list[str], ws: list[list[int]]) -> list[int]:
    """Order coordinates so that each one shares as many constraints as possible with earlier ones."""
    order: list[int] = []
    seen: set[int] = set()
    left = list(range(len(names)))
    while left:
        best = max(left, key=lambda i: (sum(1 for c, x in enumerate(ws[i]) if x and c in seen), -left.index(i)))
        left.remove(best)
        order.append(best)
        seen |= {c for c, x in enumerate(ws[best]) if x}
    return order


def box_weight_zero(chart: SymbolicChart, radius: int = 4) -> list[ExponentVector]:
    """All weight-zero e in [-radius, radius]^dim with e >= 0 on non-units, by pruned backtracking.

    Constraints are the weight components plus the eta pairing; each coordinate's range is cut
    down by interval propagation against what the later coordinates can still contribute.
    """
    nonunits = sorted(chart.nonunits, key=natural_key)
    units = sorted(chart.units, key=natural_key)
    eta = eta_cocharacter(chart.f, chart.n)

    def row(x: str) -> list[int]:
        w = chart.weight_map[x]
        return list(w.flat()) + [w.pair(eta)]

    nu = [row(x) for x in nonunits]
    un = [row(x) for x in units]
    order = [nonunits[i] for i in _greedy_order(nonunits, nu)] + [units[i] for i in _greedy_order(units, un)]
    ws = [row(x) for x in order]
    lows = [0 if x in set(nonunits) else -radius for x in order]
    dim, m = len(order), (len(ws[0]) if ws else 0)
    rem = [[(0, 0)] * m for _ in range(dim + 1)]
    for i in range(dim - 1, -1, -1):
        rem[i] = [
            (lo + min(lows[i] * ws[i][c], radius * ws[i][c]), hi + max(lows[i] * ws[i][c], radius * ws[i][c]))
            for c, (lo, hi) in enumerate(rem[i + 1])
        ]
    out: list[ExponentVector] = []
    cur = [0] * dim

    def rec(i: int, partial: list[int]) -> None:
        if i == dim:
            if not any(partial):
                out.append(ExponentVector.from_dense(order, cur))
            return
        lo_k, hi_k = lows[i], radius
        for c in range(m):
            w = ws[i][c]
            lo, hi = rem[i + 1][c]
            # need lo <= -partial[c] - k*w <= hi
            a, b = -partial[c] - hi, -partial[c] - lo
            if w == 0:
                if a > 0 or b < 0:
                    return
                continue
            if w > 0:
                lo_k, hi_k = max(lo_k, -(-a // w)), min(hi_k, b // w)
            else:
                lo_k, hi_k = max(lo_k, -(-b // w)), min(hi_k, a // w)
            if lo_k > hi_k:
                return
        for k in range(lo_k, hi_k + 1):
            cur[i] = k
            rec(i + 1, [x + k * y for x, y in zip(partial, ws[i])])
        cur[i] = 0

    rec(0, [0] * m)
    return out


def oracle_check(chart: SymbolicChart, pres: RingPresentation, radius: int = 4) -> list[ExponentVector]:
    """Weight-zero box vectors not generated by ``pres``; empty means agreement."""
    mono = invariant_monoid(chart)
    names = mono.names
    p = len(mono.nonunits)
    gens_p = tuple(tuple(g.exponents.dense(names)[:p]) for g in pres.generators if not g.unit)
    units = [g.exponents.dense(names) for g in pres.generators if g.unit]
    unit_hnf = intlattice.hnf(units) if units else []
    lifts = {tuple(g.exponents.dense(names)[:p]): g.exponents.dense(names) for g in pres.generators if not g.unit}
    missing = []
    for e in box_weight_zero(chart, radius):
        v = e.dense(names)
        combo = _find_combo(tuple(v[:p]), gens_p, {})
        if combo is None:
            missing.append(e)
            continue
        rest = list(v)
        for g, k in combo.items():
            rest = [a - k * b for a, b in zip(rest, lifts[g])]
        if not intlattice.contains(unit_hnf, rest):
            missing.append(e)
    return missing


def _find_combo(v: tuple[int, ...], gens: tuple[tuple[int, ...], ...], memo: dict) -> dict | None:
    if not any(v):
        return {}
    if v in memo:
        return memo[v]
    res = None
    for g in gens:
        rest = tuple(a - b for a, b in zip(v, g))
        if all(x >= 0 for x in rest):
            sub = _find_combo(rest, gens, memo)
            if sub is not None:
                res = dict(sub)
                res[g] = res.get(g, 0) + 1
                break
    memo[v] = res
    return res


# -- standard charts and the extendability filter ------------------------------------

def standard_B_k(k: int, f: int, n: int) -> SymbolicChart:
    """B_k with weights for s = s_w, where every entry (r, c) has weight E_{j,r} - E_{j-1,c}."""
    ch = chart_B_k(k, f, n)
    w0 = perm_w0(n)
    ident = [perm_identity(n)] * f
    # w_j = w0 makes the reindexing trivial; s_j = w0 w_{j-1} = id matches it.
    return coordinate_weights(ch, [w0] * f, ident)


def standard_U(n: int, f: int) -> SymbolicChart:
    """The diagonal part of the upper triangular chart with weights for s = s_w."""
    from .charts import Coordinate, SymbolicChart as SC, band_bounds
    from .laurent import CoeffRing, LaurentMatrix, LaurentPoly

    coords = [Coordinate(f"c_{j}_{i}", True, j, i, i, 0) for j in range(f) for i in range(1, n + 1)]
    ring = CoeffRing([c.name for c in coords], [c.name for c in coords])
    templates = []
    for j in range(f):
        templates.append(LaurentMatrix.diagonal(ring, [LaurentPoly.const(ring, ring.gen(f"c_{j}_{i}")) for i in range(1, n + 1)]))
    ch = SC("U", n, f, ring, tuple(coords), tuple(templates), tuple(band_bounds(n) for _ in range(f)))
    w0 = perm_w0(n)
    return coordinate_weights(ch, [w0] * f, [perm_identity(n)] * f)


def x_restrictions(chart: SymbolicChart) -> list[tuple[int, ExponentVector]]:
    out = []
    for i in range(1, chart.n + 1):
        r = restrict_x(chart, i)
        out.append((r.sign, ExponentVector.of(r.as_dict())))
    return out


def restrict_monomial(chart: SymbolicChart, x_exps: Sequence[int]) -> tuple[int, ExponentVector]:
    """Pull back prod x_i^{e_i} to the chart."""
    sign, total = 1, ExponentVector(())
    for (s, vec), k in zip(x_restrictions(chart), x_exps):
        if k:
            sign *= s ** (k % 2)
            total = total + vec * k
    return sign, total


def extends_on(chart: SymbolicChart, x_exps: Sequence[int]) -> tuple[bool, ExponentVector]:
    _, e = restrict_monomial(chart, x_exps)
    nonunits = set(chart.nonunits)
    return all(v >= 0 for k, v in e.items if k in nonunits), e


def monomial_extends(n: int, f: int, x_exps: Sequence[int], charts: Sequence[SymbolicChart] | None = None) -> tuple[bool, dict | None]:
    charts = charts or [standard_B_k(k, f, n) for k in range(1, n)]
    for ch in charts:
        ok, e = extends_on(ch, x_exps)
        if not ok:
            return False, {"chart": ch.kind, "x_exponents": list(x_exps), "restriction": e.as_dict()}
    return True, None


def extendable_subring(n: int, f: int) -> RingPresentation:
    """Laurent monomials in x_1..x_n whose restriction to every B_k has no negative non-unit exponent."""
    charts = [standard_B_k(k, f, n) for k in range(1, n)]
    u = standard_U(n, f)
    xs = x_restrictions(u)
    gens, witnesses = [], []
    for i in range(1, n + 1):
        unit_vec = [0] * n
        unit_vec[i - 1] = -1
        ok, wit = monomial_extends(n, f, unit_vec, charts)
        if not ok:
            witnesses.append(dict(wit, rejected=f"x{i}^-1"))
        gens.append(Generator(f"x{i}", xs[i - 1][1], ok, xs[i - 1][0]))
    return RingPresentation(tuple(gens), "exact", witnesses)
