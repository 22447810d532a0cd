"""Acceptance suite: one PASS/FAIL line per criterion, printed past pytest's capture."""

from __future__ import annotations

import itertools
import random
import time

import pytest

from artifact.charts import chart_A, impose_monodromy
from artifact.demazure import (
    CONVENTIONS,
    PINNED_CONVENTION,
    affine_elements_up_to,
    check_minor_extension,
    extension_exponent,
    find_counterexample,
    oracle_torus,
)
from artifact.invariants import (
    ExponentVector,
    extendable_subring,
    invariant_generators,
    oracle_check,
    standard_B_k,
    weight_of_monomial,
)
from artifact.loop import (
    bounds_upper_iwahori,
    conjugated_upper_iwahori,
    conjugation_oracle,
    iwahori_bounds,
    sl2_identity_check,
)
from artifact.pipeline import golden_configs, usw_chart, verify
from artifact.weyl import (
    AffineWeylElement as E,
    ReducedWord,
    evaluate_letters,
    fundamental_weight,
    is_antidominant,
    length,
    lowest_alcove_presentation,
    perm_identity,
)

TOY_Z = E.translation((-1, 0, 1))  # Diag(1, v, v^2) up to the centre


@pytest.fixture
def report(capsys):
    def emit(num: int, ok: bool, msg: str, seconds: float) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {num:2d}: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {msg}", flush=True)
        assert ok, msg

    return emit


def deep_presentation(n: int, f: int, p: int, rng: random.Random):
    while True:
        rows = []
        for _ in range(f):
            c = [rng.randrange(p) for _ in range(n - 1)]
            row = [0] * n
            for i in range(n - 2, -1, -1):
                row[i] = row[i + 1] + c[i]
            rows.append(row)
        try:
            return lowest_alcove_presentation(rows, p)
        except ValueError:
            continue


def test_criterion_01_toy_relation(report):
    t = time.perf_counter()
    ch = impose_monodromy(chart_A([TOY_Z], unipotent=True), [perm_identity(3)], solve=False)
    g = ch.ring.gen
    a0, b0, d0 = g("a_0_1_2_0"), g("a_0_2_3_0"), g("a_0_1_3_0")
    w1, w2, w3 = g("om_0_1"), g("om_0_2"), g("om_0_3")
    expected = d0 * (w3 - w1) - a0 * b0 * (w2 - w1)
    ok = len(ch.relations) == 1 and ch.ring.is_unit(ch.relations[0] / expected)
    dt = time.perf_counter() - t
    report(1, ok and dt < 1, f"relation {ch.ring.fmt(ch.relations[0]) if ch.relations else None}", dt)


def test_criterion_02_toy_invariants(report):
    t = time.perf_counter()
    pres = lowest_alcove_presentation([[22, 7, -8]], 23)
    ring = invariant_generators(usw_chart(pres)).ring_string
    dt = time.perf_counter() - t
    report(2, ring == "F[c1^{±1}, c2^{±1}, c3^{±1}]" and dt < 1, ring, dt)


def test_criterion_03_usw_laurent(report):
    t = time.perf_counter()
    bad = []
    for n, f in itertools.product((2, 3, 4), (1, 2, 3)):
        ch = usw_chart(deep_presentation(n, f, 29, random.Random(100 * n + f)))
        pres = invariant_generators(ch)
        want = sorted(sorted({f"c_{j}_{i}": 1 for j in range(f)}.items()) for i in range(1, n + 1))
        got = sorted(sorted(g.exponents.as_dict().items()) for g in pres.generators)
        if got != want or not all(g.unit for g in pres.generators) or pres.certificate != "exact":
            bad.append((n, f, pres.ring_string))
        if oracle_check(ch, pres, 4):
            bad.append((n, f, "box oracle"))
    dt = time.perf_counter() - t
    report(3, not bad and dt < 60, f"9 (n, f) pairs, failures {bad}", dt)


def paper_B_k_list(k: int, f: int, n: int) -> list[str]:
    out = [f"d{i}^{{±1}}" for i in range(1, n + 1) if i not in (k, k + 1)]
    out.append("a")
    if f % 2:
        out.append(f"(d{k} d{k + 1})^{{±1}}")
    else:
        out += [f"(d{k}^e d{k + 1}^o)^{{±1}}", f"(d{k}^o d{k + 1}^e)^{{±1}}"]
    return sorted(out)


def test_criterion_04_B_k_parity(report):
    t = time.perf_counter()
    mismatches = []
    for n in (3, 4):
        for k in range(1, n):
            for f in (1, 2, 3):
                pres = invariant_generators(standard_B_k(k, f, n))
                got = sorted(g.display() for g in pres.generators)
                if got != paper_B_k_list(k, f, n):
                    mismatches.append((n, k, f, pres.ring_string))
    # the witness behind the f = 3 mismatches: weight zero, but its a-exponents are not all equal
    w = weight_of_monomial(standard_B_k(1, 3, 3), ExponentVector.of({"a_0": 1, "d_1_2": 1, "d_2_1": 1}))
    dt = time.perf_counter() - t
    msg = f"mismatches {mismatches}"
    if mismatches:
        msg += f"; a_0*d_1_2*d_2_1 has weight zero: {w.is_zero()}"
    report(4, not mismatches and dt < 30, msg, dt)


def test_criterion_05_filter(report):
    t = time.perf_counter()
    bad = []
    for n, f in itertools.product((2, 3, 4), (1, 2, 3)):
        sub = extendable_subring(n, f)
        units = [g.name for g in sub.units]
        wit = {w["rejected"]: w["chart"] for w in sub.witnesses}
        ok = sub.names() == [f"x{i}" for i in range(1, n + 1)] and units == [f"x{n}"]
        ok &= wit == {f"x{k}^-1": f"B_{k}" for k in range(1, n)}
        if not ok:
            bad.append((n, f, sub.ring_string, wit))
    dt = time.perf_counter() - t
    report(5, not bad and dt < 5, f"(n, f) in 2..4 x 1..3, failures {bad}", dt)


def test_criterion_06_sl2(report):
    t = time.perf_counter()
    bad = [(n, s) for n in (2, 3, 4) for s in range(n) if not sl2_identity_check(s, n).ok]
    dt = time.perf_counter() - t
    report(6, not bad and dt < 5, f"every generator for n <= 4, failures {bad}", dt)


def test_criterion_07_convention(report):
    t = time.perf_counter()
    losses = dict.fromkeys(CONVENTIONS, 0)
    total = 0
    for n in (2, 3):
        for k in range(1, 5):
            for letters in itertools.product(range(n), repeat=k):
                word = ReducedWord(n, letters, 0, "appendix")
                if not word.is_reduced():
                    continue
                for i in range(1, k + 1):
                    cov = oracle_torus(word, i).covector
                    for j in range(1, n + 1):
                        beta = fundamental_weight(n, j)
                        o = sum(b * c for b, c in zip(beta, cov))
                        total += 1
                        for c in CONVENTIONS:
                            losses[c] += extension_exponent(word, i, beta, c) != o
    dt = time.perf_counter() - t
    ok = losses[PINNED_CONVENTION] == 0 and dt < 120
    report(7, ok, f"pinned {PINNED_CONVENTION}; disagreements {losses} over {total} instances", dt)


def test_criterion_08_cone(report):
    t = time.perf_counter()
    anti = [x for x in affine_elements_up_to(3, 6) if is_antidominant(x)]
    bad, literal = [], 0
    for x in anti:
        rep = check_minor_extension(x)
        for r in rep.records:
            if not (r.cone_ok and r.positive_part_ok and r.offset_part_ok):
                bad.append((str(x), r.i))
            literal += not r.offset_dominant
        if not rep.all_extend:
            bad.append((str(x), "exponent"))
    cex = find_counterexample(3, 4)
    dt = time.perf_counter() - t
    ok = not bad and cex is not None and dt < 60
    msg = (
        f"{len(anti)} antidominant elements of length <= 6, failures {bad}; "
        f"offset summand outside the literal dominant chamber in {literal} records (in the coroot cone in all); "
        f"counterexample {cex.element if cex else None} word {list(cex.word.letters) if cex else None}"
    )
    report(8, ok, msg, dt)


def test_criterion_09_iwahori(report):
    t = time.perf_counter()
    rng = random.Random(9)
    bad = []
    count = 0
    while count < 20:
        n = rng.choice((2, 3, 4))
        x = evaluate_letters([rng.randrange(n) for _ in range(rng.randint(0, 5))], n, "appendix")
        if length(x, "appendix") > 5:
            continue
        count += 1
        if conjugation_oracle(x) != iwahori_bounds(x):
            bad.append(str(x))
    toy = conjugated_upper_iwahori(E.translation((0, 1, 2))).intersect(bounds_upper_iwahori(3)).to_text()
    expected = [
        ["[0,inf]", "[1,inf]", "[2,inf]"],
        ["[1,inf]", "[0,inf]", "[1,inf]"],
        ["[1,inf]", "[1,inf]", "[0,inf]"],
    ]
    dt = time.perf_counter() - t
    report(9, not bad and toy == expected and dt < 30, f"20 random elements, failures {bad}; toy matrix {toy}", dt)


def test_criterion_10_end_to_end(report):
    t = time.perf_counter()
    results = []
    for name, cfg in golden_configs().items():
        a, b = verify(cfg), verify(dict(cfg))
        n = a.input.n
        want = "F[" + ", ".join([f"x{i}" for i in range(1, n)] + [f"x{n}^{{±1}}"]) + "]"
        results.append((name, a.status, a.final_ring, a.status == "verified" and a.final_ring == want and a.dumps() == b.dumps()))
    dt = time.perf_counter() - t
    report(10, all(r[-1] for r in results) and dt < 120, f"{[r[:3] for r in results]}", dt)
