"""Extension of minor functions across intermediate Demazure resolutions, at word level.

Everything here lives in the appendix convention: the dominant base alcove A0, the
lower Iwahori, and words whose affine letter is t_{alpha_1n} s_{alpha_1n}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import Matrix

from .laurent import CoeffRing, LaurentMatrix, LaurentPoly, mat_inverse, mat_mul
from .lp import nonnegative_solution
from .loop import bounds_lower_iwahori, check_bounds, lift_generator, monomial_matrix, root_group_element
from .weyl import (
    AffineWeylElement,
    ReducedWord,
    bar_alpha_covector,
    evaluate_letters,
    fundamental_weight,
    generator,
    is_antidominant,
    length,
    length_zero_generator,
    perm_act,
    perm_inverse,
    positive_roots,
    reduced_word,
    root_group_position,
    root_vector,
    star,
)

ALCOVE = "appendix"
CONVENTIONS = ("linear", "affine")
# Chosen by agreement with the matrix oracle on every word of length <= 4 for n = 2, 3.
PINNED_CONVENTION = "linear"

__all__ = [
    "AffineRootGroupDescriptor",
    "ExtensionReport",
    "PINNED_CONVENTION",
    "affine_root_group",
    "bar_alpha_covector",
    "check_minor_extension",
    "cone_membership",
    "cone_membership_lp",
    "extension_exponent",
    "extension_exponent_oracle",
    "minor_character",
    "vertex_of_wall",
]


@dataclass(frozen=True)
class AffineRootGroupDescriptor:
    letter: int
    row: int
    col: int
    v_exponent: int
    bar_alpha: tuple[int, ...]
    bar_alpha_covector: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "letter": self.letter,
            "position": [self.row, self.col],
            "v_exponent": self.v_exponent,
            "bar_alpha": list(self.bar_alpha),
            "bar_alpha_covector": list(self.bar_alpha_covector),
        }


def affine_root_group(letter: int, n: int) -> AffineRootGroupDescriptor:
    row, col, k = root_group_position(letter, n)
    alpha = tuple(1 if m == row - 1 else -1 if m == col - 1 else 0 for m in range(n))
    return AffineRootGroupDescriptor(letter, row, col, k, alpha, bar_alpha_covector(letter, n))


def _wall(letter: int, n: int) -> tuple[list[int], int]:
    """(normal, offset) with the wall of the letter equal to {<normal, y> = offset}."""
    if letter == 0:
        return list(root_vector(n, (1, n))), 1
    return list(root_vector(n, (letter, letter + 1))), 0


def vertex_of_wall(letter: int, n: int) -> tuple[Fraction, ...]:
    """The vertex of A0 off the wall of ``letter``, normalized to last entry 0."""
    if not 0 <= letter < n:
        raise ValueError(f"letter {letter} out of range for n={n}")
    rows, rhs = [], []
    for other in range(n):
        if other != letter:
            normal, off = _wall(other, n)
            rows.append(normal)
            rhs.append(off)
    rows.append([0] * (n - 1) + [1])
    rhs.append(0)
    sol = Matrix(rows).LUsolve(Matrix(rhs))
    return tuple(Fraction(int(x.p), int(x.q)) for x in sol)


# -- exponents ------------------------------------------------------------------

def _check_word(word: ReducedWord, i: int) -> None:
    if word.alcove != ALCOVE:
        raise ValueError("extension exponents are defined for words in the appendix convention")
    if not word.is_reduced():
        raise ValueError(f"word {word.letters} is not reduced")
    if not 1 <= i <= len(word.letters):
        raise ValueError(f"deletion index {i} out of range 1..{len(word.letters)}")


def moved_covector(word: ReducedWord, i: int, convention: str) -> tuple:
    """s_k^-1 ... s_{i+1}^-1 (bar alpha_i^vee), computed as x^-1 s_1...s_i (rho tail included)."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    n = word.n
    g = word.evaluate().inverse() * evaluate_letters(word.letters[:i], n, ALCOVE)
    cov = bar_alpha_covector(word.letters[i - 1], n)
    return g.linear(cov) if convention == "linear" else g.apply(cov)


def extension_exponent(word: ReducedWord, i: int, beta: Sequence[int], convention: str = PINNED_CONVENTION) -> int:
    _check_word(word, i)
    if len(beta) != word.n:
        raise ValueError("beta has the wrong rank")
    return int(sum(b * c for b, c in zip(beta, moved_covector(word, i, convention))))


@dataclass
class OracleRun:
    covector: tuple[int, ...]  # exponents of a_i in the trailing torus
    product_verified: bool
    slots_in_iwahori_cells: bool


def oracle_torus(word: ReducedWord, i: int, max_length: int = 5, max_rank: int = 3) -> OracleRun:
    """Rewrite the psi-chart product into phi-form with matrices and read off the trailing torus."""
    _check_word(word, i)
    n, letters = word.n, word.letters
    k = len(letters)
    if k > max_length or n > max_rank:
        raise ValueError(f"oracle limited to words of length <= {max_length} and n <= {max_rank}")
    a_names = [f"a{j}" for j in range(1, k + 1)]
    t_names = [f"t{m}" for m in range(1, n + 1)]
    ring = CoeffRing(a_names + t_names, a_names + t_names)
    a = [ring.gen(x) for x in a_names]
    lifts = [lift_generator(ring, s, n, ALCOVE) for s in letters]
    slots = []
    for j in range(k):
        u = root_group_element(ring, letters[j], n, a[j])
        slots.append(mat_mul(mat_mul(lifts[j], u), lifts[j]) if j == i - 1 else mat_mul(u, lifts[j]))
    tail = monomial_matrix(ring, length_zero_generator(n, ALCOVE) ** word.omega)
    torus = LaurentMatrix.diagonal(ring, [LaurentPoly.const(ring, ring.gen(x)) for x in t_names])

    def prod(ms):
        out = LaurentMatrix.identity(ring, n)
        for m in ms:
            out = mat_mul(out, m)
        return out

    original = prod(slots + [tail, torus])

    s_i, ai = letters[i - 1], a[i - 1]
    left = mat_mul(root_group_element(ring, s_i, n, -1 / ai), lifts[i - 1])
    x = mat_mul(mat_inverse(left), slots[i - 1])
    diag = [x.rows[m][m] for m in range(n)]
    d = LaurentMatrix.diagonal(ring, diag)
    right_u = mat_mul(x, mat_inverse(d))
    if right_u != root_group_element(ring, s_i, n, -ai):
        raise AssertionError("the rank one rewriting does not hold for these lifts")
    new_slots = slots[: i - 1] + [mat_mul(left, right_u)]
    cell_ok = True
    iwahori1 = bounds_lower_iwahori(n)
    for m in (root_group_element(ring, s_i, n, -1 / ai), right_u):
        cell_ok &= not check_bounds(m - LaurentMatrix.identity(ring, n), iwahori1.intersect(_pro_unipotent(n)))
    for j in range(i, k):
        row, col, _ = root_group_position(letters[j], n)
        factor = d.rows[row - 1][row - 1].coeff(0) / d.rows[col - 1][col - 1].coeff(0)
        new_slots.append(mat_mul(root_group_element(ring, letters[j], n, factor * a[j]), lifts[j]))
        d = mat_mul(mat_mul(mat_inverse(lifts[j]), d), lifts[j])
    d = mat_mul(mat_mul(mat_inverse(tail), d), tail)
    for r in range(n):
        for c in range(n):
            if r != c and d.rows[r][c]:
                raise AssertionError("torus did not stay diagonal")
    verified = prod(new_slots + [tail, d, torus]) == original
    cov = []
    for m in range(n):
        e = d.rows[m][m]
        if e.valuation() != 0 or len(e.terms) != 1:
            raise AssertionError("trailing torus entry carries a power of v")
        mono = ring.monomial(e.coeff(0))
        if mono is None or set(mono[1]) - {a_names[i - 1]}:
            raise AssertionError("trailing torus depends on more than a_i")
        cov.append(mono[1].get(a_names[i - 1], 0))
    return OracleRun(tuple(cov), verified, cell_ok)


def _pro_unipotent(n: int):
    from .loop import ValuationBounds

    return ValuationBounds.build(n, lambda r, c: (1, None) if r == c else (0, None))


def extension_exponent_oracle(word: ReducedWord, i: int, beta: Sequence[int]) -> int:
    run = oracle_torus(word, i)
    if not run.product_verified:
        raise AssertionError("rewritten product differs from the original")
    return int(sum(b * c for b, c in zip(beta, run.covector)))


def resolve_convention(word: ReducedWord, i: int, beta: Sequence[int]) -> dict:
    """Both readings next to the oracle for one instance."""
    values = {c: extension_exponent(word, i, beta, c) for c in CONVENTIONS}
    oracle = extension_exponent_oracle(word, i, beta)
    return {
        "exponents": values,
        "oracle": oracle,
        "agreeing": [c for c in CONVENTIONS if values[c] == oracle],
        "pinned": PINNED_CONVENTION,
    }


# -- cones and minors -----------------------------------------------------------

def minor_character(x: AffineWeylElement, j: int) -> tuple[int, ...]:
    """x0^-1 omega_j for x = t_eta x0."""
    if not 1 <= j <= x.n:
        raise ValueError(f"j = {j} out of range 1..{x.n}")
    return perm_act(perm_inverse(x.w), fundamental_weight(x.n, j))


def cone_membership(v: Sequence) -> bool:
    """v in the nonnegative span of positive coroots: zero sum and nonnegative leading partial sums."""
    total = 0
    for x in v[:-1]:
        total += x
        if total < 0:
            return False
    return total + v[-1] == 0


def cone_membership_lp(v: Sequence) -> bool:
    """The same question as an exact LP over the positive coroots."""
    n = len(v)
    roots = [root_vector(n, a) for a in positive_roots(n)]
    a_eq = [[r[m] for r in roots] for m in range(n)]
    return nonnegative_solution(a_eq, list(v)) is not None


def is_positive_coroot(v: Sequence) -> bool:
    nz = [(m, x) for m, x in enumerate(v) if x]
    return len(nz) == 2 and nz[0][1] == 1 and nz[1][1] == -1


def is_dominant(v: Sequence) -> bool:
    return all(v[m] >= v[m + 1] for m in range(len(v) - 1))


def _frac_list(v: Sequence) -> list[str]:
    return [str(Fraction(x)) for x in v]


@dataclass
class DeletionRecord:
    i: int
    letter: int
    cone_vector: tuple
    cone_ok: bool
    positive_part: tuple
    positive_part_ok: bool
    offset_part: tuple
    offset_part_ok: bool  # in the positive coroot cone
    offset_dominant: bool  # literally non-increasing; fails on some antidominant x
    exponents: dict[int, dict[str, int]] = field(default_factory=dict)  # j -> convention/oracle -> value

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "letter": self.letter,
            "cone_vector": _frac_list(self.cone_vector),
            "cone_ok": self.cone_ok,
            "decomposition": {
                "positive_coroot": _frac_list(self.positive_part),
                "positive_coroot_ok": self.positive_part_ok,
                "offset": _frac_list(self.offset_part),
                "offset_in_cone": self.offset_part_ok,
                "offset_dominant": self.offset_dominant,
            },
            "exponents": {str(j): v for j, v in sorted(self.exponents.items())},
        }

    def verdicts(self, convention: str) -> dict[int, str]:
        return {j: "extends" if e[convention] >= 0 else "does not extend" for j, e in sorted(self.exponents.items())}


@dataclass
class ExtensionReport:
    element: AffineWeylElement
    word: ReducedWord
    antidominant: bool
    convention: str
    records: list[DeletionRecord]
    warnings: list[str] = field(default_factory=list)
    oracle_used: bool = False

    @property
    def all_extend(self) -> bool:
        return all(r.exponents[j][self.convention] >= 0 for r in self.records for j in r.exponents)

    @property
    def cone_ok(self) -> bool:
        return all(r.cone_ok for r in self.records)

    @property
    def oracle_agrees(self) -> bool:
        return all(
            e.get("oracle", e[self.convention]) == e[self.convention] for r in self.records for e in r.exponents.values()
        )

    def failing(self) -> list[dict]:
        out = []
        for r in self.records:
            for j, e in sorted(r.exponents.items()):
                if e[self.convention] < 0:
                    out.append({"i": r.i, "j": j, "exponent": e[self.convention]})
        return out

    @property
    def verdict(self) -> str:
        return "all minors extend" if self.all_extend else "some minor does not extend"

    def to_json(self) -> dict:
        return {
            "element": self.element.to_json(),
            "word": self.word.to_json(),
            "antidominant": self.antidominant,
            "convention": self.convention,
            "verdict": self.verdict,
            "cone_condition": self.cone_ok,
            "oracle_used": self.oracle_used,
            "oracle_agrees": self.oracle_agrees,
            "main_convention_element": star(self.element).to_json(),
            "records": [dict(r.to_json(), verdicts={str(j): v for j, v in r.verdicts(self.convention).items()}) for r in self.records],
            "failing": self.failing(),
            "warnings": self.warnings,
        }


def check_minor_extension(
    x: AffineWeylElement, convention: str = PINNED_CONVENTION, oracle: bool | None = None
) -> ExtensionReport:
    """Cone test, its two-summand decomposition and the minor exponents for every deletion index."""
    n = x.n
    word = reduced_word(x, ALCOVE)
    k = len(word.letters)
    anti = is_antidominant(x)
    warnings = [] if anti else [f"{x} is not in the antidominant region; the extension criterion is not guaranteed"]
    if oracle is None:
        oracle = n <= 3 and k <= 5
    # eta of the length-zero-free part x rho^-omega, so that eta = s_1...s_k(0)
    eta = evaluate_letters(word.letters, n, ALCOVE).apply((0,) * n)
    records = []
    for i in range(1, k + 1):
        letter = word.letters[i - 1]
        pre = evaluate_letters(word.letters[: i - 1], n, ALCOVE)
        cur = pre * generator(letter, n, ALCOVE)
        point = cur.apply(bar_alpha_covector(letter, n))
        cone_vec = tuple(Fraction(p) - e for p, e in zip(point, eta))
        v = vertex_of_wall(letter, n)
        first = tuple(a - b for a, b in zip(pre.apply(v), cur.apply(v)))
        second = tuple(Fraction(a) - b for a, b in zip(cur.apply((0,) * n), eta))
        assert all(p + q == c for p, q, c in zip(first, second, cone_vec))
        rec = DeletionRecord(
            i, letter, cone_vec, cone_membership(cone_vec),
            first, is_positive_coroot(first), second, cone_membership(second), is_dominant(second),
        )
        run = oracle_torus(word, i) if oracle else None
        for j in range(1, n + 1):
            beta = minor_character(x, j)
            ex = {c: extension_exponent(word, i, beta, c) for c in CONVENTIONS}
            if run is not None:
                ex["oracle"] = int(sum(b * c for b, c in zip(beta, run.covector)))
            rec.exponents[j] = ex
        records.append(rec)
    return ExtensionReport(x, word, anti, convention, records, warnings, bool(oracle))


# -- enumeration and plot data --------------------------------------------------

def affine_elements_up_to(n: int, max_length: int) -> list[AffineWeylElement]:
    """Elements of the affine Weyl group of length <= max_length, by breadth-first search."""
    seen = {AffineWeylElement.identity(n)}
    frontier = list(seen)
    for _ in range(max_length):
        nxt = []
        for e in frontier:
            for s in range(n):
                f = e * generator(s, n, ALCOVE)
                if f not in seen and length(f, ALCOVE) == length(e, ALCOVE) + 1:
                    seen.add(f)
                    nxt.append(f)
        frontier = nxt
    return sorted(seen, key=lambda e: (length(e, ALCOVE), e))


def find_counterexample(n: int = 3, max_length: int = 4) -> ExtensionReport | None:
    """The first non-antidominant element whose cone condition fails."""
    for e in affine_elements_up_to(n, max_length):
        if is_antidominant(e) or length(e, ALCOVE) == 0:
            continue
        rep = check_minor_extension(e, oracle=False)
        if not rep.cone_ok:
            return rep
    return None


def alcove_walk(word: ReducedWord) -> list[dict]:
    """Vertices of s_1...s_j(A0) for j = 0..k, in root coordinates (<alpha_12, y>, <alpha_23, y>, ...)."""
    n = word.n
    verts = [vertex_of_wall(s, n) for s in range(n)]
    out = []
    for j in range(len(word.letters) + 1):
        g = evaluate_letters(word.letters[:j], n, ALCOVE)
        pts = []
        for v in verts:
            y = g.apply(v)
            pts.append([str(Fraction(y[m]) - Fraction(y[m + 1])) for m in range(n - 1)])
        out.append({"step": j, "letter": word.letters[j - 1] if j else None, "vertices": pts})
    return out
