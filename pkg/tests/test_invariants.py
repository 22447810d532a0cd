from __future__ import annotations

import random

import pytest

from artifact.charts import Character, Coordinate, SymbolicChart, chart_A, coordinate_weights, impose_monodromy
from artifact.invariants import (
    ExponentVector,
    box_weight_zero,
    extendable_subring,
    invariant_generators,
    invariant_monoid,
    monomial_extends,
    oracle_check,
    restrict_monomial,
    standard_B_k,
    standard_U,
    weight_of_monomial,
)
from artifact.laurent import CoeffRing
from artifact.weyl import AffineWeylElement as E, perm_identity, perm_w0, s_w_of, star, z_star

from test_charts import random_presentation


def toy_chart():
    ch = impose_monodromy(chart_A([star(E.translation((0, 1, 2)))]), [perm_identity(3)])
    return coordinate_weights(ch, [perm_w0(3)], [perm_identity(3)])


def usw_chart(rng, n, f):
    pres = random_presentation(rng, n, f)
    s = s_w_of(pres)
    ch = impose_monodromy(chart_A([z_star(x) for x in pres.w_tilde]), s)
    return coordinate_weights(ch, [x.w for x in pres.w_tilde], s)


def synthetic_chart(weights: dict[str, tuple[int, ...]], units: set[str]) -> SymbolicChart:
    names = list(weights)
    n = len(next(iter(weights.values())))
    coords = tuple(Coordinate(x, x in units, 0, 1, 1, 0) for x in names)
    ring = CoeffRing(names, units)
    wm = {x: Character((tuple(w),)) for x, w in weights.items()}
    return SymbolicChart("synthetic", n, 1, ring, coords, (), (), weight_map=wm)


def test_weight_of_monomial_examples():
    ch = standard_U(3, 2)
    assert weight_of_monomial(ch, ExponentVector(())).is_zero()
    for i in range(1, 4):
        x = ExponentVector.of({f"c_{j}_{m}": 1 for j in range(2) for m in range(1, i + 1)})
        assert weight_of_monomial(ch, x).is_zero()
    assert not weight_of_monomial(ch, {"c_0_1": 1}).is_zero()
    one = standard_U(3, 1)
    assert weight_of_monomial(one, {"c_0_1": 3, "c_0_3": -2}).is_zero()
    with pytest.raises(ValueError):
        weight_of_monomial(ch, {"zz": 1})


def test_weight_is_linear():
    ch = toy_chart()
    rng = random.Random(31)
    names = ch.names
    for _ in range(20):
        e1 = ExponentVector.from_dense(names, [rng.randrange(-3, 4) for _ in names])
        e2 = ExponentVector.from_dense(names, [rng.randrange(-3, 4) for _ in names])
        assert weight_of_monomial(ch, e1 + e2) == weight_of_monomial(ch, e1) + weight_of_monomial(ch, e2)


def test_toy_invariants():
    pres = invariant_generators(toy_chart())
    assert pres.ring_string == "F[c1^{±1}, c2^{±1}, c3^{±1}]"
    assert [g.exponents.as_dict() for g in pres.generators] == [{"c_0_1": 1}, {"c_0_2": 1}, {"c_0_3": 1}]


@pytest.mark.parametrize("n,f", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_usw_invariants_are_x(n, f):
    rng = random.Random(32 + n * 10 + f)
    ch = usw_chart(rng, n, f)
    pres = invariant_generators(ch)
    assert pres.names() == [f"x{i}" for i in range(1, n + 1)]
    assert all(g.unit for g in pres.generators)
    for g in pres.generators:
        i = int(g.name[1:])
        assert g.exponents.as_dict() == {f"c_{j}_{i}": 1 for j in range(f)}
    assert oracle_check(ch, pres) == []


def test_f1_specialization_is_diagonal():
    rng = random.Random(33)
    for n in (2, 3, 4):
        pres = invariant_generators(usw_chart(rng, n, 1))
        assert pres.names() == [f"c{i}" for i in range(1, n + 1)]


@pytest.mark.parametrize("n,k", [(3, 1), (3, 2), (4, 2), (4, 3)])
def test_B_k_f1(n, k):
    pres = invariant_generators(standard_B_k(k, 1, n))
    expected = [f"d{i}^{{±1}}" for i in range(1, k)] + ["a", f"(d{k} d{k + 1})^{{±1}}"]
    expected += [f"d{i}^{{±1}}" for i in range(k + 2, n + 1)]
    assert sorted(g.display() for g in pres.generators) == sorted(expected)


@pytest.mark.parametrize("n,k", [(3, 1), (4, 2)])
def test_B_k_f2_parity_split(n, k):
    ch = standard_B_k(k, 2, n)
    pres = invariant_generators(ch)
    names = set(pres.names())
    assert {f"d{k}^e d{k + 1}^o", f"d{k}^o d{k + 1}^e", "a"} <= names
    assert f"d{k} d{k + 1}" not in names
    assert len(pres.units) == n
    assert oracle_check(ch, pres) == []


def test_B_k_odd_f_units_merge():
    ch = standard_B_k(1, 3, 3)
    pres = invariant_generators(ch)
    assert {g.name for g in pres.units} == {"d1 d2", "d3"}
    assert oracle_check(ch, pres) == []


def test_B_k_f3_has_single_a_j_invariants():
    # a_0 d_{1,2} d_{2,1} has weight zero, so the a_j are not forced to appear together
    ch = standard_B_k(1, 3, 3)
    e = {"a_0": 1, "d_1_2": 1, "d_2_1": 1}
    assert weight_of_monomial(ch, e).is_zero()
    mono = invariant_monoid(ch)
    assert len(mono.hilbert) == 3
    assert e in [ExponentVector.from_dense(mono.names, h).as_dict() for h in mono.hilbert] or any(
        ExponentVector.from_dense(mono.names, h).as_dict().get("a_0") == 1 for h in mono.hilbert
    )


def test_B_k_f4_a_monoid():
    mono = invariant_monoid(standard_B_k(1, 4, 3))
    a_parts = sorted(tuple(h[:4]) for h in mono.hilbert)
    # n_0 + n_2 = n_1 + n_3
    assert a_parts == [(0, 0, 1, 1), (0, 1, 1, 0), (1, 0, 0, 1), (1, 1, 0, 0)]


def test_generators_have_weight_zero_and_minimal():
    rng = random.Random(34)
    for _ in range(25):
        dim = rng.randrange(2, 9)
        m = rng.randrange(1, 3)
        weights = {f"y{i}": tuple(rng.randrange(-2, 3) for _ in range(m)) for i in range(dim)}
        units = {f"y{i}" for i in range(dim) if rng.random() < 0.3}
        ch = synthetic_chart(weights, units)
        pres = invariant_generators(ch)
        for g in pres.generators:
            assert weight_of_monomial(ch, g.exponents).is_zero()
        assert pres.certificate == "exact"
        assert oracle_check(ch, pres, radius=4) == []
        mono = invariant_monoid(ch)
        p = len(mono.nonunits)
        gens = [tuple(h[:p]) for h in mono.hilbert]
        for g in gens:
            others = [h for h in gens if h != g]
            assert not any(all(a <= b for a, b in zip(h, g)) for h in others)


def test_box_oracle_small():
    ch = synthetic_chart({"p": (1,), "q": (-1,), "r": (2,)}, set())
    found = {tuple(sorted(e.as_dict().items())) for e in box_weight_zero(ch, 2)}
    assert (("p", 1), ("q", 1)) in found
    assert (("q", 2), ("r", 1)) in found
    assert len(found) == 4  # 1, pq, p2q2, q2r; pq3r leaves the box


@pytest.mark.parametrize("n,f", [(2, 1), (3, 1), (3, 2), (4, 3)])
def test_extendable_subring(n, f):
    pres = extendable_subring(n, f)
    assert pres.names() == [f"x{i}" for i in range(1, n + 1)]
    assert [g.unit for g in pres.generators] == [False] * (n - 1) + [True]
    assert pres.ring_string == "F[" + ", ".join([f"x{i}" for i in range(1, n)] + [f"x{n}^{{±1}}"]) + "]"
    assert [w["chart"] for w in pres.witnesses] == [f"B_{k}" for k in range(1, n)]
    for k, w in enumerate(pres.witnesses, start=1):
        assert all(w["restriction"][f"a_{j}"] == -1 for j in range(f))


def test_extendable_filter_closed_under_products():
    rng = random.Random(35)
    n, f = 3, 2
    for _ in range(30):
        a = [rng.randrange(-2, 3) for _ in range(n)]
        b = [rng.randrange(-2, 3) for _ in range(n)]
        ok_a, _ = monomial_extends(n, f, a)
        ok_b, _ = monomial_extends(n, f, b)
        assert ok_a == all(x >= 0 for x in a[:-1])
        if ok_a and ok_b:
            assert monomial_extends(n, f, [x + y for x, y in zip(a, b)])[0]


def test_restriction_sign():
    ch = standard_B_k(1, 1, 3)
    sign, e = restrict_monomial(ch, [0, 1, 0])
    assert sign == -1 and e.as_dict() == {"d_0_1": 1, "d_0_2": 1}
    sign, _ = restrict_monomial(ch, [0, 2, 0])
    assert sign == 1
