"""Extended affine Weyl group of GL_n, alcoves, p-dot action and presentations.

Elements are pairs (nu, w) standing for t_nu * w.  Permutations are stored in
one-line notation with 1-based values, so ``w[i - 1] == w(i)``.  A permutation
acts on vectors by moving the entry in slot i to slot w(i).

Two base alcoves are in use.  The "appendix" convention takes the dominant base
alcove A0 with Coxeter generators s_1..s_{n-1} and s_a = t_{a_1n} s_{a_1n}.  The
"main" convention takes w0*A0, whose affine generator is s_a^* = t_{-a_1n} s_{a_1n}.
The anti-involution ``star`` swaps the two, so every main-convention statement
is computed as the appendix statement about ``star(x)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Iterable, Sequence

Perm = tuple[int, ...]
Vec = tuple[int, ...]

ALCOVES = ("main", "appendix")
DEFAULT_ALCOVE = "main"


# -- permutations -----------------------------------------------------------

def perm_identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def perm_w0(n: int) -> Perm:
    return tuple(range(n, 0, -1))


def perm_mul(w: Perm, u: Perm) -> Perm:
    """(w u)(i) = w(u(i))."""
    if len(w) != len(u):
        raise ValueError("rank mismatch")
    return tuple(w[u[i] - 1] for i in range(len(u)))


def perm_inverse(w: Perm) -> Perm:
    inv = [0] * len(w)
    for i, wi in enumerate(w, 1):
        inv[wi - 1] = i
    return tuple(inv)


def perm_transposition(n: int, i: int, j: int) -> Perm:
    w = list(range(1, n + 1))
    w[i - 1], w[j - 1] = j, i
    return tuple(w)


def perm_act(w: Perm, x: Sequence) -> tuple:
    """(w.x)_{w(i)} = x_i."""
    out = [None] * len(x)
    for i, wi in enumerate(w):
        out[wi - 1] = x[i]
    return tuple(out)


def check_perm(w: Sequence[int]) -> Perm:
    w = tuple(int(a) for a in w)
    if sorted(w) != list(range(1, len(w) + 1)):
        raise ValueError(f"not a permutation in one-line notation: {w}")
    return w


def parse_perm(text: str, n: int | None = None) -> Perm:
    """Parse 'id', 'w0', one-line '3,2,1' or cycle notation '(13)(2 4)'."""
    text = text.strip()
    if text in ("id", "e", "1") and n is not None:
        return perm_identity(n)
    if text == "w0" and n is not None:
        return perm_w0(n)
    if text.startswith("("):
        if n is None:
            raise ValueError("cycle notation needs n")
        w = list(range(1, n + 1))
        for cyc in text.strip("()").split(")("):
            parts = cyc.replace(",", " ").split()
            if len(parts) == 1 and len(parts[0]) > 1:
                parts = list(parts[0])
            idx = [int(p) for p in parts]
            for a, b in zip(idx, idx[1:] + idx[:1]):
                w[a - 1] = b
        return check_perm(w)
    w = check_perm(int(t) for t in text.replace(" ", "").split(",") if t)
    if n is not None and len(w) != n:
        raise ValueError(f"permutation {w} has wrong size for n={n}")
    return w


# -- root datum -------------------------------------------------------------

@dataclass(frozen=True)
class RootDatumGL:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def positive_roots(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i in range(1, self.n + 1) for j in range(i + 1, self.n + 1))

    @property
    def simple_roots(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, i + 1) for i in range(1, self.n))

    @property
    def highest_root(self) -> tuple[int, int]:
        return (1, self.n)

    @property
    def eta(self) -> Vec:
        return eta(self.n)

    def root_vector(self, alpha: tuple[int, int]) -> Vec:
        return root_vector(self.n, alpha)


def eta(n: int) -> Vec:
    return tuple(range(n - 1, -1, -1))


def positive_roots(n: int) -> tuple[tuple[int, int], ...]:
    return RootDatumGL(n).positive_roots


def root_vector(n: int, alpha: tuple[int, int]) -> Vec:
    i, j = alpha
    v = [0] * n
    v[i - 1] += 1
    v[j - 1] -= 1
    return tuple(v)


def pair(alpha: tuple[int, int], x: Sequence) -> Fraction | int:
    """<alpha, x> for alpha = e_i - e_j (self-dual pairing on Z^n)."""
    i, j = alpha
    return x[i - 1] - x[j - 1]


def fundamental_weight(n: int, j: int) -> Vec:
    return tuple([1] * j + [0] * (n - j))


# -- affine Weyl group elements ----------------------------------------------

@dataclass(frozen=True, order=True)
class AffineWeylElement:
    """t_nu * w."""

    nu: Vec
    w: Perm

    def __post_init__(self) -> None:
        object.__setattr__(self, "nu", tuple(int(a) for a in self.nu))
        object.__setattr__(self, "w", check_perm(self.w))
        if len(self.nu) != len(self.w):
            raise ValueError("translation and permutation sizes differ")

    @property
    def n(self) -> int:
        return len(self.w)

    @classmethod
    def identity(cls, n: int) -> "AffineWeylElement":
        return cls((0,) * n, perm_identity(n))

    @classmethod
    def translation(cls, nu: Sequence[int]) -> "AffineWeylElement":
        return cls(tuple(nu), perm_identity(len(nu)))

    @classmethod
    def permutation(cls, w: Sequence[int]) -> "AffineWeylElement":
        return cls((0,) * len(w), tuple(w))

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        return compose(self, other)

    def inverse(self) -> "AffineWeylElement":
        winv = perm_inverse(self.w)
        return AffineWeylElement(tuple(-a for a in perm_act(winv, self.nu)), winv)

    def star(self) -> "AffineWeylElement":
        return star(self)

    def __pow__(self, k: int) -> "AffineWeylElement":
        base = self if k >= 0 else self.inverse()
        out = AffineWeylElement.identity(self.n)
        for _ in range(abs(k)):
            out = out * base
        return out

    def in_affine_subgroup(self) -> bool:
        return sum(self.nu) == 0

    @property
    def omega_degree(self) -> int:
        """Image in the length-zero group, which is Z via the sum of nu."""
        return sum(self.nu)

    def linear(self, x: Sequence) -> tuple:
        return perm_act(self.w, x)

    def apply(self, y: Sequence) -> tuple:
        """Affine action on the apartment: y -> w(y) + nu."""
        wy = perm_act(self.w, y)
        return tuple(a + b for a, b in zip(wy, self.nu))

    def to_json(self) -> dict:
        return {"nu": list(self.nu), "w": list(self.w)}

    @classmethod
    def from_json(cls, data: dict) -> "AffineWeylElement":
        return cls(tuple(data["nu"]), tuple(data["w"]))

    def __str__(self) -> str:
        nu = ",".join(str(a) for a in self.nu)
        w = ",".join(str(a) for a in self.w)
        return f"t({nu})*[{w}]"


def compose(a: AffineWeylElement, b: AffineWeylElement) -> AffineWeylElement:
    if a.n != b.n:
        raise ValueError(f"rank mismatch: {a.n} vs {b.n}")
    wb = perm_act(a.w, b.nu)
    return AffineWeylElement(tuple(x + y for x, y in zip(a.nu, wb)), perm_mul(a.w, b.w))


def star(a: AffineWeylElement) -> AffineWeylElement:
    """t_nu w -> t_{w^-1 nu} w^-1, an anti-automorphism."""
    winv = perm_inverse(a.w)
    return AffineWeylElement(perm_act(winv, a.nu), winv)


def w0_element(n: int) -> AffineWeylElement:
    return AffineWeylElement.permutation(perm_w0(n))


# -- generators and length ---------------------------------------------------

def _check_alcove(alcove: str) -> None:
    if alcove not in ALCOVES:
        raise ValueError(f"unknown alcove convention {alcove!r}; use one of {ALCOVES}")


def generator(letter: int, n: int, alcove: str = DEFAULT_ALCOVE) -> AffineWeylElement:
    """Letter 0 is the affine reflection, letter i the simple reflection s_i."""
    _check_alcove(alcove)
    if not 0 <= letter < n or n < 2:
        raise ValueError(f"letter {letter} out of range for n={n}")
    if letter == 0:
        s = perm_transposition(n, 1, n)
        a = root_vector(n, (1, n))
        sign = 1 if alcove == "appendix" else -1
        return AffineWeylElement(tuple(sign * x for x in a), s)
    return AffineWeylElement.permutation(perm_transposition(n, letter, letter + 1))


def _im_length(x: AffineWeylElement) -> int:
    # Iwahori-Matsumoto formula for the dominant base alcove.
    winv = perm_inverse(x.w)
    total = 0
    for i, j in positive_roots(x.n):
        k = x.nu[i - 1] - x.nu[j - 1]
        if winv[i - 1] < winv[j - 1]:
            total += abs(k)
        else:
            total += abs(k - 1)
    return total


def length(x: AffineWeylElement, alcove: str = DEFAULT_ALCOVE) -> int:
    """Coxeter length of the affine part of x for the chosen base alcove."""
    _check_alcove(alcove)
    return _im_length(star(x) if alcove == "main" else x)


def length_by_hyperplanes(x: AffineWeylElement, alcove: str = DEFAULT_ALCOVE) -> int:
    """Number of walls separating the base alcove from its image (independent check)."""
    _check_alcove(alcove)
    y = star(x) if alcove == "main" else x
    return sum(abs(v) for v in alcove_bounds(y).n_alpha.values())


@lru_cache(maxsize=None)
def length_zero_generator(n: int, alcove: str = DEFAULT_ALCOVE) -> AffineWeylElement:
    """The generator rho of the length-zero subgroup with sum(nu) = 1."""
    _check_alcove(alcove)
    for i in range(1, n + 1):
        nu = tuple(1 if k == i else 0 for k in range(1, n + 1))
        for w in itertools.permutations(range(1, n + 1)):
            x = AffineWeylElement(nu, w)
            if length(x, alcove) == 0:
                return x
    raise AssertionError("no length-zero generator found")


def omega_part(x: AffineWeylElement, alcove: str = DEFAULT_ALCOVE) -> AffineWeylElement:
    return length_zero_generator(x.n, alcove) ** x.omega_degree


def affine_part(x: AffineWeylElement, alcove: str = DEFAULT_ALCOVE) -> AffineWeylElement:
    """x_a with x = x_a * rho^d."""
    return x * omega_part(x, alcove).inverse()


# -- words -------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedWord:
    """letters s_{l_1}...s_{l_k}, followed by rho^omega (rho the length-zero generator)."""

    n: int
    letters: tuple[int, ...]
    omega: int = 0
    alcove: str = DEFAULT_ALCOVE

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(int(a) for a in self.letters))
        _check_alcove(self.alcove)
        for a in self.letters:
            if not 0 <= a < self.n:
                raise ValueError(f"letter {a} out of range for n={self.n}")

    def __len__(self) -> int:
        return len(self.letters)

    def evaluate(self) -> AffineWeylElement:
        return evaluate_letters(self.letters, self.n, self.alcove) * (
            length_zero_generator(self.n, self.alcove) ** self.omega
        )

    def is_reduced(self) -> bool:
        return length(self.evaluate(), self.alcove) == len(self.letters)

    def delete(self, i: int) -> "ReducedWord":
        """Drop the i-th letter (1-based); the result need not be reduced."""
        return ReducedWord(self.n, self.letters[: i - 1] + self.letters[i:], self.omega, self.alcove)

    def to_json(self) -> dict:
        return {"letters": list(self.letters), "omega": self.omega, "alcove": self.alcove}


def evaluate_letters(letters: Iterable[int], n: int, alcove: str = DEFAULT_ALCOVE) -> AffineWeylElement:
    out = AffineWeylElement.identity(n)
    for a in letters:
        out = out * generator(a, n, alcove)
    return out


def left_descents(x: AffineWeylElement, alcove: str = DEFAULT_ALCOVE) -> list[int]:
    lx = length(x, alcove)
    return [s for s in range(x.n) if length(generator(s, x.n, alcove) * x, alcove) < lx]


def reduced_word(x: AffineWeylElement, alcove: str = DEFAULT_ALCOVE) -> ReducedWord:
    """Lexicographically smallest reduced word of the affine part, plus the rho tail."""
    n = x.n
    letters: list[int] = []
    cur = x
    while length(cur, alcove) > 0:
        s = left_descents(cur, alcove)[0]
        letters.append(s)
        cur = generator(s, n, alcove) * cur
    word = ReducedWord(n, tuple(letters), cur.omega_degree, alcove)
    if cur != length_zero_generator(n, alcove) ** cur.omega_degree:
        raise AssertionError("length-zero remainder is not a power of rho")
    return word


def all_reduced_words(x: AffineWeylElement, alcove: str = DEFAULT_ALCOVE) -> list[ReducedWord]:
    """Every reduced word of x (exponential; for tests at small length)."""
    n = x.n
    out: list[ReducedWord] = []

    def rec(cur: AffineWeylElement, prefix: tuple[int, ...]) -> None:
        if length(cur, alcove) == 0:
            out.append(ReducedWord(n, prefix, cur.omega_degree, alcove))
            return
        for s in left_descents(cur, alcove):
            rec(generator(s, n, alcove) * cur, prefix + (s,))

    rec(x, ())
    return out


# -- Bruhat order ---------------------------------------------------------------

def bruhat_leq(a: AffineWeylElement, b: AffineWeylElement, alcove: str = DEFAULT_ALCOVE) -> bool:
    """Bruhat order, via the lifting property with a per-call memo."""
    if a.n != b.n:
        raise ValueError("rank mismatch")
    if a.omega_degree != b.omega_degree:
        return False
    memo: dict[tuple[AffineWeylElement, AffineWeylElement], bool] = {}
    n = a.n

    def leq(x: AffineWeylElement, y: AffineWeylElement) -> bool:
        key = (x, y)
        if key in memo:
            return memo[key]
        lx, ly = length(x, alcove), length(y, alcove)
        if x == y:
            res = True
        elif lx >= ly:
            res = False
        else:
            s = generator(left_descents(y, alcove)[0], n, alcove)
            sx = s * x
            res = leq(sx if length(sx, alcove) < lx else x, s * y)
        memo[key] = res
        return res

    return leq(a, b)


def bruhat_leq_subword(a: AffineWeylElement, word: ReducedWord) -> bool:
    """Subword criterion by exhaustive enumeration (oracle)."""
    if a.omega_degree != word.omega:
        return False
    tail = length_zero_generator(word.n, word.alcove) ** word.omega
    k = len(word.letters)
    for mask in range(1 << k):
        sub = [word.letters[i] for i in range(k) if mask >> i & 1]
        if evaluate_letters(sub, word.n, word.alcove) * tail == a:
            return True
    return False


@dataclass(frozen=True)
class Codim1Element:
    element: AffineWeylElement
    deletions: tuple[int, ...]


def codim1_lower(word: ReducedWord) -> list[Codim1Element]:
    """Elements obtained by deleting one letter and dropping length by exactly one.

    ``deletions`` lists the 1-based positions J(x') producing each element.
    """
    if not word.is_reduced():
        raise ValueError(f"word {word.letters} is not reduced")
    k = len(word.letters)
    found: dict[AffineWeylElement, list[int]] = {}
    for i in range(1, k + 1):
        e = word.delete(i).evaluate()
        if length(e, word.alcove) == k - 1:
            found.setdefault(e, []).append(i)
    return [Codim1Element(e, tuple(js)) for e, js in sorted(found.items())]


# -- alcoves -----------------------------------------------------------------

def base_barycenter(n: int) -> tuple[Fraction, ...]:
    """Barycenter of the dominant base alcove, normalized so the last entry is 0."""
    return tuple(Fraction(n - i, n) for i in range(1, n + 1))


@dataclass(frozen=True)
class AlcoveBounds:
    """x(A0) = { n_a < <a, y> < n_a + 1 } for every positive root a."""

    n: int
    n_alpha: dict = field(hash=False)

    def __getitem__(self, alpha: tuple[int, int]) -> int:
        return self.n_alpha[alpha]

    def contains(self, y: Sequence) -> bool:
        return all(k < pair(a, y) < k + 1 for a, k in self.n_alpha.items())

    def is_antidominant(self) -> bool:
        return all(k <= -1 for k in self.n_alpha.values())

    def to_json(self) -> dict:
        return {f"{i},{j}": k for (i, j), k in sorted(self.n_alpha.items())}


def alcove_bounds(a: AffineWeylElement) -> AlcoveBounds:
    """Integers n_a describing a(A0), read off at the image of the barycenter."""
    y = a.apply(base_barycenter(a.n))
    bounds = {alpha: floor(pair(alpha, y)) for alpha in positive_roots(a.n)}
    out = AlcoveBounds(a.n, bounds)
    assert out.contains(y)
    return out


def is_antidominant(x: AffineWeylElement) -> bool:
    return alcove_bounds(x).is_antidominant()


# -- p-dot action, depth, presentations ---------------------------------------

def p_dot(a: AffineWeylElement, lam: Sequence, p: int) -> tuple:
    """a . lam = w(lam + eta) + p nu - eta."""
    n = a.n
    if len(lam) != n:
        raise ValueError("rank mismatch")
    e = eta(n)
    moved = perm_act(a.w, [x + y for x, y in zip(lam, e)])
    return tuple(m + p * v - h for m, v, h in zip(moved, a.nu, e))


def depth(lam: Sequence, p: int) -> Fraction | int:
    """min over positive roots of the distance from <lam + eta, a> to pZ."""
    n = len(lam)
    y = [x + h for x, h in zip(lam, eta(n))]
    best = None
    for alpha in positive_roots(n):
        r = pair(alpha, y) % p
        d = min(r, p - r)
        best = d if best is None else min(best, d)
    return p if best is None else best


def is_p_restricted(lam: Sequence, p: int) -> bool:
    return all(0 <= lam[i] - lam[i + 1] <= p - 1 for i in range(len(lam) - 1))


@dataclass(frozen=True)
class SerreWeightPresentation:
    """Lowest alcove presentation: mu_j = w_tilde[j-1] . (omega_j - eta)."""

    p: int
    f: int
    n: int
    w_tilde: tuple[AffineWeylElement, ...]
    omega: tuple[Vec, ...]

    def mu(self) -> tuple[Vec, ...]:
        e = eta(self.n)
        rows = []
        for j in range(self.f):
            lam = tuple(a - b for a, b in zip(self.omega[j], e))
            rows.append(p_dot(self.w_tilde[(j - 1) % self.f], lam, self.p))
        return tuple(rows)

    def validate(self) -> None:
        for j in range(self.f):
            om = self.omega[j]
            for alpha in positive_roots(self.n):
                if not 0 < pair(alpha, om) < self.p:
                    raise ValueError(f"omega_{j} - eta is not in the base p-alcove")
            if not self.w_tilde[j].in_affine_subgroup():
                raise ValueError(f"w_tilde_{j} is not in the affine Weyl group")

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "f": self.f,
            "n": self.n,
            "w_tilde": [x.to_json() for x in self.w_tilde],
            "omega": [list(r) for r in self.omega],
        }


def _present_one(mu: Sequence[int], p: int) -> tuple[AffineWeylElement, Vec]:
    n = len(mu)
    y = [m + h for m, h in zip(mu, eta(n))]
    r = [a % p for a in y]
    if len(set(r)) != n:
        raise ValueError(f"mu = {tuple(mu)} is not 0-deep at p = {p}")
    # z = y - p nu must have distinct entries in a window of width < p and sum(nu) = 0.
    excess, rem = divmod(sum(y) - sum(r), p)
    assert rem == 0
    m = excess % n
    k = (excess - m) // n
    order = sorted(range(n), key=lambda i: r[i])
    z = list(r)
    for i in order[:m]:
        z[i] += p
    z = [a + k * p for a in z]
    nu = tuple((a - b) // p for a, b in zip(y, z))
    om = tuple(sorted(z, reverse=True))
    w = tuple(z.index(om[i]) + 1 for i in range(n))
    u = AffineWeylElement(nu, w)
    assert u.in_affine_subgroup() and om[0] - om[-1] < p
    return u, om


def lowest_alcove_presentation(mu: Sequence[Sequence[int]], p: int) -> SerreWeightPresentation:
    rows = [tuple(int(a) for a in r) for r in mu]
    if not rows:
        raise ValueError("mu needs at least one row")
    n = len(rows[0])
    f = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("ragged mu")
    w_tilde: list[AffineWeylElement | None] = [None] * f
    omega: list[Vec] = []
    for j, row in enumerate(rows):
        if not is_p_restricted(row, p):
            raise ValueError(f"mu_{j} = {row} is not p-restricted")
        u, om = _present_one(row, p)
        w_tilde[(j - 1) % f] = u
        omega.append(om)
    pres = SerreWeightPresentation(p, f, n, tuple(w_tilde), tuple(omega))  # type: ignore[arg-type]
    pres.validate()
    assert pres.mu() == tuple(rows)
    return pres


def s_w_of(pres: SerreWeightPresentation) -> tuple[Perm, ...]:
    """(s_w)_j = w0 w_{j-1}."""
    w0 = perm_w0(pres.n)
    return tuple(perm_mul(w0, pres.w_tilde[(j - 1) % pres.f].w) for j in range(pres.f))


def z_tilde(w_tilde: AffineWeylElement) -> AffineWeylElement:
    return w0_element(w_tilde.n) * w_tilde


def z_star(w_tilde: AffineWeylElement) -> AffineWeylElement:
    return star(z_tilde(w_tilde))


# -- affine root groups attached to the Coxeter generators (dominant A0) -------

def bar_alpha_covector(letter: int, n: int) -> Vec:
    """-a_i^vee for the spherical s_i, a_1n^vee for the affine reflection."""
    if not 0 <= letter < n:
        raise ValueError(f"letter {letter} out of range for n={n}")
    if letter == 0:
        return root_vector(n, (1, n))
    return tuple(-x for x in root_vector(n, (letter, letter + 1)))


def root_group_position(letter: int, n: int) -> tuple[int, int, int]:
    """(row, col, v-exponent) of the one-parameter root group U_s, 1-based."""
    if not 0 <= letter < n:
        raise ValueError(f"letter {letter} out of range for n={n}")
    if letter == 0:
        return (1, n, 1)
    return (letter + 1, letter, 0)
