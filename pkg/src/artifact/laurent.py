"""Exact Laurent polynomials in v with rational-function coefficients.

Coefficients live in a sympy fraction field over QQ or GF(p).  Matrices are
finite Laurent polynomial matrices; inversion goes through the adjugate and is
only allowed when the determinant is a single v-power times a unit.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from sympy import GF, QQ
from sympy.polys.fields import FracElement, field

Coeff = FracElement


def natural_key(name: str) -> tuple:
    parts = re.split(r"(\d+)", name)
    return tuple(int(p) if p.isdigit() else p for p in parts)


class CoeffRing:
    """Fraction field in named indeterminates, with unit bookkeeping.

    ``units`` are variables declared invertible.  ``generic_pairs`` lists pairs
    of variables whose difference is declared invertible (generic omega).
    """

    def __init__(
        self,
        names: Iterable[str],
        units: Iterable[str] = (),
        modulus: int | None = None,
        generic_pairs: Iterable[tuple[str, str]] = (),
    ) -> None:
        self.names: tuple[str, ...] = tuple(sorted(set(names), key=natural_key))
        self.modulus = modulus
        domain = QQ if modulus is None else GF(modulus)
        if self.names:
            self.field, *gens = field(",".join(self.names), domain)
        else:
            self.field, *gens = field("v_dummy_", domain)
            gens = []
        self._gens = dict(zip(self.names, gens))
        self.units = frozenset(units)
        missing = self.units - set(self.names)
        if missing:
            raise ValueError(f"unit flags for unknown variables: {sorted(missing)}")
        self.generic_pairs = tuple(sorted({tuple(sorted(p, key=natural_key)) for p in generic_pairs}))
        self._generic_polys = [(self._gens[a] - self._gens[b]).numer for a, b in self.generic_pairs]
        self.zero = self.field.zero
        self.one = self.field.one

    # construction
    def gen(self, name: str) -> Coeff:
        return self._gens[name]

    def const(self, x) -> Coeff:
        return self.field(x)

    def __contains__(self, name: str) -> bool:
        return name in self._gens

    def with_variables(self, names: Iterable[str], units: Iterable[str] = ()) -> "CoeffRing":
        return CoeffRing(
            set(self.names) | set(names), set(self.units) | set(units), self.modulus, self.generic_pairs
        )

    def convert(self, c: Coeff, source: "CoeffRing") -> Coeff:
        """Move an element of another ring (whose variables all exist here)."""
        return self.substitute_from(c, source, {})

    # structure
    def _poly_is_unit(self, poly) -> bool:
        terms = poly.terms()
        if not terms:
            return False
        if len(terms) == 1:
            monom, _ = terms[0]
            return all(e == 0 or self.names[i] in self.units for i, e in enumerate(monom))
        # strip monomial content, then peel off declared-invertible linear forms
        content = tuple(min(m[i] for m, _ in terms) for i in range(len(self.names)))
        if any(e and self.names[i] not in self.units for i, e in enumerate(content)):
            return False
        rest = poly
        if any(content):
            mono = self.field.ring.from_dict({content: self.field.domain.one})
            rest = rest.exquo(mono)
        changed = True
        while changed and len(rest.terms()) > 1:
            changed = False
            for d in self._generic_polys:
                q, r = rest.div(d)
                if not r:
                    rest = q
                    changed = True
                    break
        return len(rest.terms()) == 1 and self._poly_is_unit(rest)

    def is_unit(self, c: Coeff) -> bool:
        if not c:
            return False
        return self._poly_is_unit(c.numer) and self._poly_is_unit(c.denom)

    def variables_of(self, c: Coeff) -> set[str]:
        out = set()
        for poly in (c.numer, c.denom):
            for monom, _ in poly.terms():
                out.update(self.names[i] for i, e in enumerate(monom) if e)
        return out

    def degree_in(self, c: Coeff, name: str) -> tuple[int, int]:
        """(degree in numerator, degree in denominator) for one variable."""
        i = self.names.index(name)
        dn = max((m[i] for m, _ in c.numer.terms()), default=0)
        dd = max((m[i] for m, _ in c.denom.terms()), default=0)
        return dn, dd

    def linear_split(self, c: Coeff, name: str) -> tuple[Coeff, Coeff] | None:
        """Write c = A*x + B with A, B free of x, when c is linear in x."""
        if self.degree_in(c, name)[1] > 0 or self.degree_in(c, name)[0] != 1:
            return None
        i = self.names.index(name)
        ring = self.field.ring
        a_terms, b_terms = {}, {}
        for monom, coef in c.numer.terms():
            if monom[i] == 1:
                m = list(monom)
                m[i] = 0
                a_terms[tuple(m)] = coef
            else:
                b_terms[monom] = coef
        den = self.field(c.denom)
        return self.field(ring.from_dict(a_terms)) / den, self.field(ring.from_dict(b_terms)) / den

    def monomial(self, c: Coeff) -> tuple[object, dict[str, int]] | None:
        """(scalar, exponents) if c is a scalar times a Laurent monomial."""
        nt, dt = c.numer.terms(), c.denom.terms()
        if len(nt) != 1 or len(dt) != 1:
            return None
        (mn, cn), (md, cd) = nt[0], dt[0]
        exps = {self.names[i]: a - b for i, (a, b) in enumerate(zip(mn, md)) if a != b}
        return self.field.domain.quo(cn, cd), exps

    def from_monomial(self, scalar, exps: Mapping[str, int]) -> Coeff:
        out = self.field(scalar)
        for name, e in exps.items():
            out *= self._gens[name] ** e
        return out

    def substitute(self, c: Coeff, mapping: Mapping[str, Coeff]) -> Coeff:
        return self.substitute_from(c, self, mapping)

    def substitute_from(self, c: Coeff, source: "CoeffRing", mapping: Mapping[str, Coeff]) -> Coeff:
        def ev(poly) -> Coeff:
            total = self.zero
            for monom, coef in poly.terms():
                term = self.field(self.field.domain.convert(coef, source.field.domain))
                for i, e in enumerate(monom):
                    if e:
                        name = source.names[i]
                        base = mapping[name] if name in mapping else self._gens[name]
                        term *= base ** e
                total += term
            return total

        return ev(c.numer) / ev(c.denom)

    # printing
    def scalar_str(self, x) -> str:
        if self.modulus is None:
            return str(self.field.domain.to_sympy(x))
        return str(int(self.field.domain.to_sympy(x)))

    def _monom_str(self, monom: Sequence[int]) -> str:
        parts = []
        for i, e in enumerate(monom):
            if e == 1:
                parts.append(self.names[i])
            elif e:
                parts.append(f"{self.names[i]}^{e}")
        return "*".join(parts)

    def _terms_str(self, terms: list[tuple[tuple[int, ...], object]]) -> str:
        out = []
        for monom, coef in sorted(terms, key=lambda t: t[0], reverse=True):
            s = self.scalar_str(coef)
            neg = s.startswith("-")
            mag = s[1:] if neg else s
            body = self._monom_str(monom)
            if body:
                text = body if mag == "1" else f"{mag}*{body}"
            else:
                text = mag
            if not out:
                out.append(("-" if neg else "") + text)
            else:
                out.append((" - " if neg else " + ") + text)
        return "".join(out) if out else "0"

    def fmt(self, c: Coeff) -> str:
        """Canonical string: sorted variables, lex-descending monomials."""
        if not c:
            return "0"
        dom = self.field.domain
        dt = c.denom.terms()
        if len(dt) == 1:
            dmon, dcoef = dt[0]
            terms = [
                (tuple(a - b for a, b in zip(m, dmon)), dom.quo(coef, dcoef)) for m, coef in c.numer.terms()
            ]
            return self._terms_str(terms)
        lc = c.denom.LC
        num = [(m, dom.quo(coef, lc)) for m, coef in c.numer.terms()]
        den = [(m, dom.quo(coef, lc)) for m, coef in dt]
        return f"({self._terms_str(num)})/({self._terms_str(den)})"


# -- Laurent polynomials -------------------------------------------------------

class LaurentPoly:
    """Finite sum of coef * v^k; zero coefficients are never stored."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoeffRing, terms: Mapping[int, Coeff] | None = None) -> None:
        self.ring = ring
        self.terms: dict[int, Coeff] = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, ring: CoeffRing, c, k: int = 0) -> "LaurentPoly":
        c = c if isinstance(c, FracElement) else ring.const(c)
        return cls(ring, {k: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, self.ring.zero) + c
        return LaurentPoly(self.ring, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return LaurentPoly(self.ring, {k: c * other for k, c in self.terms.items()})
        out: dict[int, Coeff] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[k1 + k2] = out.get(k1 + k2, self.ring.zero) + c1 * c2
        return LaurentPoly(self.ring, out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly(self.ring, {a + k: c for a, c in self.terms.items()})

    def v_derivative(self) -> "LaurentPoly":
        """v * d/dv."""
        return LaurentPoly(self.ring, {k: c * k for k, c in self.terms.items()})

    def valuation(self) -> int | None:
        return min(self.terms) if self.terms else None

    def top_degree(self) -> int | None:
        return max(self.terms) if self.terms else None

    def coeff(self, k: int) -> Coeff:
        return self.terms.get(k, self.ring.zero)

    def map_coeffs(self, fn: Callable[[Coeff], Coeff], ring: CoeffRing | None = None) -> "LaurentPoly":
        return LaurentPoly(ring or self.ring, {k: fn(c) for k, c in self.terms.items()})

    def unit_inverse(self) -> "LaurentPoly":
        if len(self.terms) != 1:
            raise ValueError("only single-term Laurent polynomials are inverted")
        ((k, c),) = self.terms.items()
        if not self.ring.is_unit(c):
            raise ValueError(f"coefficient {self.ring.fmt(c)} is not a unit")
        return LaurentPoly(self.ring, {-k: 1 / c})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            parts.append(f"({self.ring.fmt(self.terms[k])})*v^{k}")
        return " + ".join(parts)

    __repr__ = __str__


# -- matrices ------------------------------------------------------------------

@dataclass
class LaurentMatrix:
    ring: CoeffRing
    rows: list[list[LaurentPoly]]

    def __post_init__(self) -> None:
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("LaurentMatrix must be square")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> LaurentPoly:
        i, j = ij
        return self.rows[i][j]

    @classmethod
    def zeros(cls, ring: CoeffRing, n: int) -> "LaurentMatrix":
        return cls(ring, [[LaurentPoly(ring) for _ in range(n)] for _ in range(n)])

    @classmethod
    def identity(cls, ring: CoeffRing, n: int) -> "LaurentMatrix":
        return cls.diagonal(ring, [LaurentPoly.const(ring, 1)] * n)

    @classmethod
    def diagonal(cls, ring: CoeffRing, entries: Sequence[LaurentPoly]) -> "LaurentMatrix":
        n = len(entries)
        m = cls.zeros(ring, n)
        for i, e in enumerate(entries):
            m.rows[i][i] = e
        return m

    @classmethod
    def from_entries(cls, ring: CoeffRing, entries: Mapping[tuple[int, int], LaurentPoly], n: int) -> "LaurentMatrix":
        m = cls.zeros(ring, n)
        for (i, j), e in entries.items():
            m.rows[i][j] = e
        return m

    def copy(self) -> "LaurentMatrix":
        return LaurentMatrix(self.ring, [list(r) for r in self.rows])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentMatrix) and self.rows == other.rows

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        _check_size(self, other)
        return LaurentMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        _check_size(self, other)
        return LaurentMatrix(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __mul__(self, other) -> "LaurentMatrix":
        if isinstance(other, LaurentMatrix):
            return mat_mul(self, other)
        return LaurentMatrix(self.ring, [[a * other for a in r] for r in self.rows])

    def transpose(self) -> "LaurentMatrix":
        n = self.n
        return LaurentMatrix(self.ring, [[self.rows[j][i] for j in range(n)] for i in range(n)])

    def map(self, fn: Callable[[LaurentPoly], LaurentPoly], ring: CoeffRing | None = None) -> "LaurentMatrix":
        return LaurentMatrix(ring or self.ring, [[fn(a) for a in r] for r in self.rows])

    def map_coeffs(self, fn: Callable[[Coeff], Coeff], ring: CoeffRing | None = None) -> "LaurentMatrix":
        return self.map(lambda a: a.map_coeffs(fn, ring), ring)

    def v_derivative(self) -> "LaurentMatrix":
        return self.map(LaurentPoly.v_derivative)

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> LaurentPoly:
        sub = LaurentMatrix(self.ring, [[self.rows[i][j] for j in cols] for i in rows])
        return det(sub)

    def to_text(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.rows]

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.rows)


def _check_size(a: LaurentMatrix, b: LaurentMatrix) -> None:
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")


def mat_mul(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    _check_size(a, b)
    n = a.n
    out = LaurentMatrix.zeros(a.ring, n)
    for i in range(n):
        for j in range(n):
            acc = LaurentPoly(a.ring)
            for k in range(n):
                if a.rows[i][k] and b.rows[k][j]:
                    acc = acc + a.rows[i][k] * b.rows[k][j]
            out.rows[i][j] = acc
    return out


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det(a: LaurentMatrix) -> LaurentPoly:
    """Leibniz expansion; fine at desk scale (n <= 5)."""
    n = a.n
    total = LaurentPoly(a.ring)
    if n == 0:
        return LaurentPoly.const(a.ring, 1)
    for p in itertools.permutations(range(n)):
        term = LaurentPoly.const(a.ring, _perm_sign(p))
        for i in range(n):
            e = a.rows[i][p[i]]
            if not e:
                break
            term = term * e
        else:
            total = total + term
    return total


def adjugate(a: LaurentMatrix) -> LaurentMatrix:
    n = a.n
    out = LaurentMatrix.zeros(a.ring, n)
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != j]
            cols = [c for c in range(n) if c != i]
            m = a.minor(rows, cols)
            out.rows[i][j] = m if (i + j) % 2 == 0 else -m
    return out


def mat_inverse(a: LaurentMatrix) -> LaurentMatrix:
    d = det(a)
    if len(d.terms) != 1:
        raise ValueError(f"determinant {d} is not a single v-power; refusing series inversion")
    inv = d.unit_inverse()
    return adjugate(a).map(lambda e: e * inv)


def monodromy_operator(a: LaurentMatrix, a_inv: LaurentMatrix | None = None) -> LaurentMatrix:
    """v (dA/dv) A^{-1}."""
    return mat_mul(a.v_derivative(), a_inv if a_inv is not None else mat_inverse(a))
