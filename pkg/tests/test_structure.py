import dataclasses
import functools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from symdyn import (
    at_most_one_one,
    beta_shift,
    bounded_density,
    enumerate_language,
    full_shift,
    golden_mean,
    product_shift,
    sft,
)
from symdyn.structure import (
    build_gluing,
    check_closure_conditions,
    check_gluing_identity,
    classify_word,
    measure_center_approx,
    obstruction_entropies,
)
from symdyn.words import ConstructionError, hamming

TERNARY = ("012", ["00", "121", "2202"])

SHIFTS = {
    "full": lambda: full_shift(2),
    "golden": golden_mean,
    "beta": lambda: beta_shift((), (1, 0)),
    "beta110": lambda: beta_shift((), (1, 1, 0)),
    "ternary": lambda: sft(*TERNARY),
    "golden2": lambda: product_shift(golden_mean(), golden_mean()),
    "no111_0101": lambda: sft("01", ["111", "0101"]),
}


@functools.lru_cache(maxsize=None)
def glue(name, horizon=6):
    return build_gluing(SHIFTS[name](), horizon)


def fmt(s, w):
    return "".join(s.alphabet.format((a,)) for a in w)


@pytest.mark.parametrize("name", ["full", "golden", "beta"])
def test_gluing_stabilizes(name):
    s = SHIFTS[name]()
    g = build_gluing(s, 6)
    assert g.stabilized and g.status == "holds" and g.nested
    assert g.D and g.y_prime in g.D


def test_golden_gluing_words():
    g = build_gluing(golden_mean(), 6)
    # 1 is the worst left word; replacing it by 0 glues to anything
    assert (g.i, g.u, g.u_prime, g.v) == (1, (1,), (0,), (1,))


@pytest.mark.parametrize("name", sorted(SHIFTS))
def test_gluing_invariants(name):
    s = SHIFTS[name]()
    g = build_gluing(s, 4)
    assert g.nested
    k = len(g.y)
    assert g.u[: len(g.u) - k] == g.u_prime[: len(g.u) - k]
    assert hamming(g.y, g.y_prime) <= g.i
    for w, v, D in g.chain:
        assert all(s.contains(w + yp + v).name == "IN" for yp in D)


def test_ternary_chain_refines():
    g = glue("ternary", 4)
    assert len(g.chain) == 3
    sizes = [len(d) for _, _, d in g.chain]
    assert sizes == sorted(sizes, reverse=True) and sizes[0] > sizes[-1] > 0


@pytest.mark.parametrize("name, letters, forbidden", [("golden", "01", ["11"]), ("ternary", *TERNARY)])
def test_uu_prime_identity_brute_force(name, letters, forbidden):
    s = sft(letters, forbidden)
    g = glue(name, 4 if name == "ternary" else 6)
    u, up, v = fmt(s, g.u), fmt(s, g.u_prime), fmt(s, g.v)
    member = functools.lru_cache(maxsize=None)(lambda w: oracles.sft_member(letters, forbidden, w))
    short = [w for n in range(7) for w in oracles.all_words(letters, n)]
    xs = [x for x in short if member(x + u)]
    zs = [z for z in short if z.startswith(v) and member(z)]
    assert xs and zs
    assert all(member(x + up + z) for x in xs for z in zs)
    assert check_gluing_identity(s, g, 6).holds


def test_identity_failure_is_reported():
    s = golden_mean()
    g = dataclasses.replace(build_gluing(s, 6), y_prime=(1,))
    verdict = check_gluing_identity(s, g, 3)
    assert verdict.status == "fails" and verdict.witness is not None


@pytest.mark.parametrize("name, top", [("golden", 10), ("beta110", 10), ("ternary", 8)])
def test_partition_matches_cut_search(name, top):
    s = SHIFTS[name]()
    g = glue(name, 4 if name == "ternary" else 6)
    u, v = fmt(s, g.u), fmt(s, g.v)
    rows = obstruction_entropies(s, g, top).rows
    # membership itself is checked against the oracles in test_zoo
    in_lang = functools.lru_cache(maxsize=None)(lambda w: s.contains(s.alphabet.parse(w)).name == "IN")
    for n in range(top + 1):
        words = enumerate_language(s, n).words
        b = 0
        for w in words:
            d = classify_word(s, g, w)
            sw = fmt(s, w)
            assert d.in_b == (not oracles.in_cp_g_cs(sw, u, v, in_lang))
            assert d.prefix + d.core + d.suffix == w or d.in_b
            b += d.in_b
        assert rows[n]["B"] == b and rows[n]["L"] == len(words)


@pytest.mark.parametrize("n", range(0, 11))
def test_golden_memberships_by_definition(n):
    s = golden_mean()
    g = build_gluing(s, 6)
    u, v = fmt(s, g.u), fmt(s, g.v)
    lang = set(oracles.golden_language(n + len(u)))
    for sw in oracles.golden_language(n):
        d = classify_word(s, g, s.alphabet.parse(sw) if sw else ())
        assert d.in_cp == (v not in sw)
        assert d.in_cs == (sw.startswith(u) and oracles.occurrences(sw, u) == 1)
        assert d.in_g == (sw.startswith(v) and sw + u in lang)


def test_classification_examples():
    s = golden_mean()
    g = build_gluing(s, 6)
    assert classify_word(s, g, "10").kind == "G"
    d = classify_word(s, g, "0000")
    assert d.in_cp and d.prefix == (0, 0, 0, 0) and d.kind == "B"
    d = classify_word(s, g, g.u)
    assert d.in_cs
    d = classify_word(s, g, "0101001")
    assert d.kind == "CpGCs" and (d.prefix, d.core, d.suffix) == ((0,), (1, 0, 1, 0, 0), (1,))


@pytest.mark.parametrize("name, n_max", [("full", 12), ("golden", 12), ("beta", 12), ("beta110", 12), ("ternary", 10)])
def test_bbound(name, n_max):
    s = SHIFTS[name]()
    rep = obstruction_entropies(s, glue(name, 4 if name == "ternary" else 6), n_max)
    assert rep.bbound_ok
    for r in rep.rows:
        assert r["B"] <= r["C"] <= r["L"]


def test_full_shift_prefix_collection_grows_slower():
    s = full_shift(2)
    rep = obstruction_entropies(s, build_gluing(s, 6), 12)
    assert rep.estimate("Cp", 12) < math.log(2)


def test_golden_obstructions_have_smaller_entropy():
    s = golden_mean()
    rep = obstruction_entropies(s, build_gluing(s, 6), 20)
    assert rep.estimate("C", 20) < rep.entropy_estimate


def test_synthetic_glue_guard():
    s = golden_mean()
    bad = dataclasses.replace(build_gluing(s, 6), v=(1, 1))
    with pytest.raises(ConstructionError):
        obstruction_entropies(s, bad, 4)


class TestClosure:
    def test_full_shift(self):
        s = full_shift(2)
        rep = check_closure_conditions(s, build_gluing(s, 6), samples=500)
        assert rep.holds

    def test_golden_ten_thousand(self):
        s = golden_mean()
        rep = check_closure_conditions(s, build_gluing(s, 6), samples=10_000, n=12)
        assert rep.holds
        assert rep.verdicts["I"].details["instances"] == 10_000
        assert rep.verdicts["IIIa"].details["instances"] >= 10_000
        assert rep.gcd == 1

    def test_gcd_brute_force(self):
        s = golden_mean()
        g = build_gluing(s, 6)
        u, v = fmt(s, g.u), fmt(s, g.v)
        lens = [len(w) + len(u) for n in range(13) for w in oracles.golden_language(n)
                if w.startswith(v) and "11" not in w + u]
        assert math.gcd(*lens) == 1

    def test_seeded_determinism(self):
        s = sft(*TERNARY)
        g = build_gluing(s, 4)
        a = check_closure_conditions(s, g, samples=300, seed=7, n=6)
        b = check_closure_conditions(s, g, samples=300, seed=7, n=6)
        assert {k: v.to_dict() for k, v in a.verdicts.items()} == {k: v.to_dict() for k, v in b.verdicts.items()}

    def test_broken_glue_fails(self):
        s = golden_mean()
        bad = dataclasses.replace(build_gluing(s, 6), y_prime=(1,))
        rep = check_closure_conditions(s, bad, samples=200)
        assert rep.verdicts["I"].status == "fails"


class TestMeasureCenter:
    def test_at_most_one_one(self):
        mc = measure_center_approx(at_most_one_one(), 1, 24, 12)
        assert all(mc.kept[n] == ((0,) * n,) for n in range(1, 13))
        assert mc.direction == "under"

    def test_bounded_density_flags_one(self):
        mc = measure_center_approx(bounded_density("sqrt"), "sqrt", 20, 3)
        assert mc.flagged[1] == ((1,),)
        assert all(mc.kept[n] == ((0,) * n,) for n in range(1, 4))

    def test_full_shift_keeps_everything(self):
        mc = measure_center_approx(full_shift(2), 2, 12, 4)
        assert all(len(mc.kept[n]) == 2**n and not mc.flagged[n] for n in mc.kept)

    def test_witnesses_certify(self):
        s = sft(*TERNARY)
        mc = measure_center_approx(s, 1, 12, 3)
        for u, w in mc.witnesses.items():
            assert s.contains(w).name == "IN"
            assert oracles.disjoint_count(fmt(s, w), fmt(s, u)) >= 2

    @settings(max_examples=10)
    @given(st.sampled_from(["golden", "ternary", "amo"]), st.integers(0, 2))
    def test_kept_sets_are_factorial(self, name, m):
        s = {"golden": golden_mean, "ternary": lambda: sft(*TERNARY), "amo": at_most_one_one}[name]()
        mc = measure_center_approx(s, m, 12, 4)
        for n in range(2, 5):
            for w in mc.kept[n]:
                assert w[1:] in mc.kept[n - 1] and w[:-1] in mc.kept[n - 1]
