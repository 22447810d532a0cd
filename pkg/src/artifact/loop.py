"""Valuation bounds, Iwahori conjugation, generator lifts and the SL2 canary."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .laurent import Coeff, CoeffRing, LaurentMatrix, LaurentPoly, mat_inverse, mat_mul
from .weyl import (
    DEFAULT_ALCOVE,
    AffineWeylElement,
    ReducedWord,
    alcove_bounds,
    bar_alpha_covector,
    length_zero_generator,
    root_group_position,
)

Interval = tuple[int, int | None] | None  # (lo, hi) with hi None for infinity; None is the empty window


def interval_str(b: Interval) -> str:
    if b is None:
        return "empty"
    lo, hi = b
    return f"[{lo},{'inf' if hi is None else hi}]"


@dataclass(frozen=True)
class ValuationBounds:
    """Per-entry windows on v-adic support (0-based storage)."""

    entries: tuple[tuple[Interval, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Interval:
        return self.entries[ij[0]][ij[1]]

    @classmethod
    def build(cls, n: int, fn) -> "ValuationBounds":
        return cls(tuple(tuple(fn(i, j) for j in range(n)) for i in range(n)))

    def transpose(self) -> "ValuationBounds":
        return ValuationBounds.build(self.n, lambda i, j: self.entries[j][i])

    def shift(self, k: int) -> "ValuationBounds":
        """Bounds of v^k * (this set)."""

        def sh(b: Interval) -> Interval:
            if b is None:
                return None
            lo, hi = b
            return (lo + k, None if hi is None else hi + k)

        return ValuationBounds.build(self.n, lambda i, j: sh(self.entries[i][j]))

    def intersect(self, other: "ValuationBounds") -> "ValuationBounds":
        def meet(a: Interval, b: Interval) -> Interval:
            if a is None or b is None:
                return None
            lo = max(a[0], b[0])
            his = [h for h in (a[1], b[1]) if h is not None]
            hi = min(his) if his else None
            if hi is not None and hi < lo:
                return None
            return (lo, hi)

        return ValuationBounds.build(self.n, lambda i, j: meet(self.entries[i][j], other.entries[i][j]))

    def allows(self, i: int, j: int, k: int) -> bool:
        b = self.entries[i][j]
        if b is None:
            return False
        lo, hi = b
        return k >= lo and (hi is None or k <= hi)

    def to_text(self) -> list[list[str]]:
        return [[interval_str(b) for b in row] for row in self.entries]

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{s:>8}" for s in row) for row in self.to_text())


def bounds_lower_iwahori(n: int) -> ValuationBounds:
    """I-bar: lower triangular mod v."""
    return ValuationBounds.build(n, lambda i, j: (1, None) if i < j else (0, None))


def bounds_upper_iwahori(n: int) -> ValuationBounds:
    """I: upper triangular mod v."""
    return ValuationBounds.build(n, lambda i, j: (1, None) if i > j else (0, None))


def bounds_positive_loop(n: int) -> ValuationBounds:
    return ValuationBounds.build(n, lambda i, j: (0, None))


def iwahori_bounds(t: AffineWeylElement) -> ValuationBounds:
    """Bounds of Ad_t(I-bar) read off from the alcove t(A0)."""
    nb = alcove_bounds(t)

    def entry(i: int, j: int) -> Interval:
        if i == j:
            return (0, None)
        if i < j:
            return (nb[(i + 1, j + 1)] + 1, None)
        return (-nb[(j + 1, i + 1)], None)

    return ValuationBounds.build(t.n, entry)


def conjugated_upper_iwahori(z: AffineWeylElement) -> ValuationBounds:
    """Ad_{z^{-*}}(I) as the transpose of Ad_z(I-bar)."""
    return iwahori_bounds(z).transpose()


@dataclass(frozen=True)
class Violation:
    row: int  # 1-based
    col: int
    exponent: int
    coeff: Coeff

    def to_json(self, ring: CoeffRing) -> dict:
        return {"row": self.row, "col": self.col, "exponent": self.exponent, "coeff": ring.fmt(self.coeff)}


def check_bounds(a: LaurentMatrix, b: ValuationBounds) -> list[Violation]:
    if a.n != b.n:
        raise ValueError("size mismatch")
    out = []
    for i in range(a.n):
        for j in range(a.n):
            for k in sorted(a.rows[i][j].terms):
                if not b.allows(i, j, k):
                    out.append(Violation(i + 1, j + 1, k, a.rows[i][j].terms[k]))
    return out


# -- lifts ---------------------------------------------------------------------

def monomial_matrix(ring: CoeffRing, x: AffineWeylElement) -> LaurentMatrix:
    """Entry (w(i), i) = v^{nu_{w(i)}}; no signs."""
    m = LaurentMatrix.zeros(ring, x.n)
    for i in range(x.n):
        r = x.w[i] - 1
        m.rows[r][i] = LaurentPoly.const(ring, 1, x.nu[r])
    return m


def _appendix_lift(ring: CoeffRing, letter: int, n: int) -> LaurentMatrix:
    m = LaurentMatrix.identity(ring, n)
    if letter == 0:
        m.rows[0][0] = LaurentPoly(ring)
        m.rows[n - 1][n - 1] = LaurentPoly(ring)
        m.rows[0][n - 1] = LaurentPoly.const(ring, 1, 1)
        m.rows[n - 1][0] = LaurentPoly.const(ring, -1, -1)
    else:
        i = letter - 1
        m.rows[i][i] = LaurentPoly(ring)
        m.rows[i + 1][i + 1] = LaurentPoly(ring)
        m.rows[i][i + 1] = LaurentPoly.const(ring, -1)
        m.rows[i + 1][i] = LaurentPoly.const(ring, 1)
    return m


def lift_generator(ring: CoeffRing, letter: int, n: int, alcove: str = DEFAULT_ALCOVE) -> LaurentMatrix:
    """The fixed lifts; main-convention letters use the transposed matrices."""
    if not 0 <= letter < n:
        raise ValueError(f"letter {letter} out of range for n={n}")
    m = _appendix_lift(ring, letter, n)
    return m if alcove == "appendix" else m.transpose()


def lift_word(
    word: ReducedWord, v_shift: Sequence[int] | None = None, ring: CoeffRing | None = None
) -> LaurentMatrix:
    """Product of generator lifts, then the rho tail, then v^{v_shift}."""
    ring = ring or CoeffRing([])
    n = word.n
    out = LaurentMatrix.identity(ring, n)
    for a in word.letters:
        out = mat_mul(out, lift_generator(ring, a, n, word.alcove))
    if word.omega:
        out = mat_mul(out, monomial_matrix(ring, length_zero_generator(n, word.alcove) ** word.omega))
    if v_shift is not None and any(v_shift):
        out = mat_mul(out, monomial_matrix(ring, AffineWeylElement.translation(v_shift)))
    return out


def support_element(m: LaurentMatrix) -> AffineWeylElement | None:
    """The (nu, w) realized by a monomial matrix, or None."""
    n = m.n
    w = [0] * n
    nu = [0] * n
    for i in range(n):
        hits = [r for r in range(n) if m.rows[r][i]]
        if len(hits) != 1 or len(m.rows[hits[0]][i].terms) != 1:
            return None
        r = hits[0]
        w[i] = r + 1
        nu[r] = m.rows[r][i].valuation()
    try:
        return AffineWeylElement(tuple(nu), tuple(w))
    except ValueError:
        return None


# -- SL2 canary ----------------------------------------------------------------

def root_group_element(ring: CoeffRing, letter: int, n: int, a: Coeff) -> LaurentMatrix:
    row, col, k = root_group_position(letter, n)
    m = LaurentMatrix.identity(ring, n)
    m.rows[row - 1][col - 1] = LaurentPoly.const(ring, a, k)
    return m


@dataclass
class SL2Check:
    letter: int
    n: int
    ok: bool
    residual: LaurentMatrix | None


def sl2_identity_check(letter: int, n: int) -> SL2Check:
    """u_s(a) s u_s(1/a) s u_s(a) s == a^{bar alpha_s^vee} with the fixed lifts."""
    ring = CoeffRing(["a"], units=["a"])
    a = ring.gen("a")
    s = lift_generator(ring, letter, n, "appendix")
    prod = root_group_element(ring, letter, n, a)
    for m in (s, root_group_element(ring, letter, n, 1 / a), s, root_group_element(ring, letter, n, a), s):
        prod = mat_mul(prod, m)
    cov = bar_alpha_covector(letter, n)
    expected = LaurentMatrix.diagonal(ring, [LaurentPoly.const(ring, a ** e) for e in cov])
    residual = prod - expected
    ok = residual.is_zero()
    return SL2Check(letter, n, ok, None if ok else residual)


# -- truncated conjugation oracle ----------------------------------------------

def conjugation_oracle(t: AffineWeylElement, truncation: int = 6) -> ValuationBounds:
    """Conjugate a generic truncated element of I-bar by a lift of t; read minimal valuations."""
    n = t.n
    base = bounds_lower_iwahori(n)
    names = []
    for i in range(n):
        for j in range(n):
            lo = base[(i, j)][0]
            names += [f"x_{i}_{j}_{m}" for m in range(lo, lo + truncation + 1)]
    ring = CoeffRing(names, units=[f"x_{i}_{i}_0" for i in range(n)])
    entries = {}
    for i in range(n):
        for j in range(n):
            lo = base[(i, j)][0]
            entries[(i, j)] = LaurentPoly(ring, {m: ring.gen(f"x_{i}_{j}_{m}") for m in range(lo, lo + truncation + 1)})
    x = LaurentMatrix.from_entries(ring, entries, n)
    lift = monomial_matrix(ring, t)
    y = mat_mul(mat_mul(lift, x), mat_inverse(lift))

    def entry(i: int, j: int) -> Interval:
        val = y.rows[i][j].valuation()
        return None if val is None else (val, None)

    return ValuationBounds.build(n, entry)


def diagonal_torus(ring: CoeffRing, values: Iterable[Coeff]) -> LaurentMatrix:
    return LaurentMatrix.diagonal(ring, [LaurentPoly.const(ring, c) for c in values])
