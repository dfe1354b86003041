import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symdyn import (
    Alphabet,
    MistakeFunction,
    at_most_one_one,
    beta_shift,
    bounded_density,
    build_spanning_set,
    check_almost_spec,
    check_as,
    check_irreducible,
    check_las,
    check_ras,
    check_specification,
    coded_shift,
    enumerate_language,
    estimate_i,
    factor_shift,
    full_shift,
    golden_mean,
    hamming,
    hamming_ball,
    min_mistakes_left,
    product_shift,
    reflect,
    sft,
    sgap_shift,
    sum_map,
)
from symdyn.properties import FAILS, HOLDS
from symdyn.words import InputError, Membership

IN = Membership.IN

SHIFTS = {
    "full": lambda: full_shift(2),
    "golden": golden_mean,
    "beta": lambda: beta_shift((), (1, 0)),
    "beta110": lambda: beta_shift((), (1, 1, 0)),
    "amo": at_most_one_one,
    "bd": lambda: bounded_density("sqrt"),
    "sgap": lambda: sgap_shift([0, 2, 4], 6),
    "sgap13": lambda: sgap_shift([1, 3]),
    "even": lambda: coded_shift("01", ["0", "11"]),
    "ternary": lambda: sft("012", ["00", "121", "2202"]),
}


def words_upto(s, n):
    return [w for k in range(1, n + 1) for w in enumerate_language(s, k).words]


def _in(s, w):
    return s.contains(w) is IN


def bf_las(s, g, h):
    """Direct quantifier loop: every pair has a changed left word that precedes the right word."""
    for w1 in words_upto(s, h[0]):
        ball = [x for x in enumerate_language(s, len(w1)).words if hamming(x, w1) <= g(len(w1))]
        for w2 in words_upto(s, h[1]):
            if not any(_in(s, x + w2) for x in ball):
                return FAILS
    return HOLDS


def bf_ras(s, g, h):
    for w1 in words_upto(s, h[0]):
        for w2 in words_upto(s, h[1]):
            ball = [x for x in enumerate_language(s, len(w2)).words if hamming(x, w2) <= g(len(w2))]
            if not any(_in(s, w1 + x) for x in ball):
                return FAILS
    return HOLDS


def bf_spec(s, tau, h):
    conn = list(s.alphabet.all_words(tau))
    for v in words_upto(s, h[0]):
        for w in words_upto(s, h[1]):
            if not any(_in(s, v + u + w) for u in conn):
                return FAILS
    return HOLDS


def bf_as3(s, g, h):
    """Three segments, each changed within its own budget."""
    L = words_upto(s, h)

    def ball(w):
        return [x for x in enumerate_language(s, len(w)).words if hamming(x, w) <= g(len(w))]

    for a in L:
        for b in L:
            pre = [x + y for x in ball(a) for y in ball(b) if _in(s, x + y)]
            for c in L:
                if not any(_in(s, p + z) for p in pre for z in ball(c)):
                    return FAILS
    return HOLDS


class TestHammingBalls:
    def test_examples(self):
        assert set(hamming_ball(full_shift(2), (0, 0, 0), 1)) == {(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)}
        assert hamming_ball(golden_mean(), (0, 1, 0), 1) == ((0, 0, 0), (0, 1, 0))

    @pytest.mark.parametrize("name", ["golden", "amo", "ternary", "bd"])
    @given(data=st.data())
    def test_matches_filter(self, name, data):
        s = SHIFTS[name]()
        n = data.draw(st.integers(1, 6))
        w = data.draw(st.sampled_from(enumerate_language(s, n).words))
        m = data.draw(st.integers(0, n))
        want = tuple(x for x in enumerate_language(s, n).words if hamming(x, w) <= m)
        assert hamming_ball(s, w, m) == want
        assert w in want

    def test_radius_at_least_length_is_everything(self):
        s = golden_mean()
        assert hamming_ball(s, (0, 1, 0, 1), 4) == enumerate_language(s, 4).words


class TestSpecification:
    def test_examples(self):
        assert check_specification(full_shift(2), 0, (4, 4)).holds
        assert check_specification(golden_mean(), 1, (6, 6)).holds
        v = check_specification(at_most_one_one(), 1, (3, 3))
        assert v.fails and v.witness == {"v": "1", "w": "1"} and v.horizon == (3, 3)

    @pytest.mark.parametrize("name", sorted(SHIFTS))
    @pytest.mark.parametrize("tau", [0, 1, 2])
    def test_against_brute_force(self, name, tau):
        s = SHIFTS[name]()
        assert check_specification(s, tau, (4, 4)).status == bf_spec(s, tau, (4, 4))

    def test_negative_gap(self):
        with pytest.raises(InputError):
            check_specification(golden_mean(), -1, (2, 2))


class TestMinMistakes:
    def test_examples(self):
        assert min_mistakes_left(full_shift(2), "0110", "11") == (0, (0, 1, 1, 0))
        assert min_mistakes_left(golden_mean(), "01", "10") == (1, (0, 0))
        assert min_mistakes_left(at_most_one_one(), "01", "10") == (1, (0, 0))

    def test_right_word_must_be_legal(self):
        with pytest.raises(InputError):
            min_mistakes_left(golden_mean(), "0", "11")

    @pytest.mark.parametrize("name", ["golden", "amo", "ternary", "sgap13", "bd"])
    @given(data=st.data())
    def test_against_brute_force(self, name, data):
        s = SHIFTS[name]()
        q = s.alphabet.size
        w1 = data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=5).map(tuple))
        w2 = data.draw(st.sampled_from(words_upto(s, 4)))
        dists = [hamming(x, w1) for x in enumerate_language(s, len(w1)).words if _in(s, x + w2)]
        j, v = min_mistakes_left(s, w1, w2)
        if not dists:
            assert v is None
        else:
            assert j == min(dists) and hamming(v, w1) == j and _in(s, v + w2)
            # canonical witness: the first optimal word
            first = min(x for x in enumerate_language(s, len(w1)).words if _in(s, x + w2) and hamming(x, w1) == j)
            assert v == first


class TestEstimateI:
    def test_examples(self):
        assert estimate_i(full_shift(2), (3, 3))[0] == 0
        assert estimate_i(golden_mean(), (5, 5)) == (1, ((1,), (1,)))
        assert estimate_i(beta_shift((), (1, 0)), (6, 6))[0] == 1

    @pytest.mark.parametrize("name", ["full", "golden", "beta110", "amo", "bd", "sgap"])
    def test_bounded_by_las_constant(self, name):
        s = SHIFTS[name]()
        i, _ = estimate_i(s, (5, 5))
        for m in range(3):
            if check_las(s, m, (5, 5)).holds:
                assert i <= m


class TestAlmostSpecification:
    @pytest.mark.parametrize("name", sorted(set(SHIFTS) - {"even"}))
    @pytest.mark.parametrize("g", ["0", "1", "2", "sqrt"])
    def test_las_against_brute_force(self, name, g):
        s, gf = SHIFTS[name](), MistakeFunction.parse(g)
        assert check_las(s, gf, (4, 4)).status == bf_las(s, gf, (4, 4))

    @pytest.mark.parametrize("name", sorted(set(SHIFTS) - {"even"}))
    @pytest.mark.parametrize("g", ["0", "1", "sqrt"])
    def test_ras_against_brute_force(self, name, g):
        s, gf = SHIFTS[name](), MistakeFunction.parse(g)
        assert check_ras(s, gf, (4, 4)).status == bf_ras(s, gf, (4, 4))

    @pytest.mark.parametrize("name", ["full", "golden", "amo", "bd", "sgap13"])
    @pytest.mark.parametrize("g", ["0", "1"])
    def test_as_against_brute_force(self, name, g):
        s, gf = SHIFTS[name](), MistakeFunction.parse(g)
        assert check_as(s, gf, (3, 3, 3)).status == bf_as3(s, gf, 3)

    @pytest.mark.parametrize("name", sorted(set(SHIFTS) - {"even"}))
    @pytest.mark.parametrize("g", [0, 1, 2])
    def test_ras_is_las_of_the_mirror(self, name, g):
        s = SHIFTS[name]()
        assert check_ras(s, g, (5, 5)).status == check_las(reflect(s), g, (5, 5)).status

    def test_coded_even_shift_small_horizon(self):
        s = SHIFTS["even"]()
        assert check_las(s, 1, (3, 3)).status == bf_las(s, MistakeFunction.const(1), (3, 3)) == HOLDS
        assert check_ras(s, 0, (3, 3)).fails

    def test_paper_examples(self):
        assert check_las(beta_shift((), (1, 0)), 1, (8, 8)).holds
        sq = MistakeFunction.sqrt()
        assert check_las(bounded_density(sq), sq, (6, 6)).holds
        g2 = product_shift(golden_mean(), golden_mean())
        assert check_las(g2, 2, (5, 5)).holds

    def test_failure_witness_refails(self):
        for s, g in [(golden_mean(), 0), (bounded_density("sqrt"), 1), (sft("012", ["00", "121", "2202"]), 1)]:
            v = check_las(s, g, (5, 5))
            assert v.fails
            w1, w2 = (s.alphabet.parse(v.witness[k]) for k in ("w1", "w2"))
            assert min_mistakes_left(s, w1, w2)[0] > g
            r = check_ras(s, g, (5, 5))
            w1, w2 = (s.alphabet.parse(r.witness[k]) for k in ("w1", "w2"))
            ball = [x for x in enumerate_language(s, len(w2)).words if hamming(x, w2) <= g]
            assert not any(_in(s, w1 + x) for x in ball)

    def test_golden_ras_canonical_witness(self):
        v = check_ras(golden_mean(), 0, (4, 4))
        assert v.witness == {"w1": "1", "w2": "1"}

    @pytest.mark.parametrize("name", ["golden", "beta110", "amo", "bd", "sgap"])
    def test_monotone_in_g(self, name):
        s = SHIFTS[name]()
        statuses = [check_las(s, m, (5, 5)).status for m in range(4)]
        first = statuses.index(HOLDS) if HOLDS in statuses else 4
        assert all(x == HOLDS for x in statuses[first:])

    @pytest.mark.parametrize("name", sorted(set(SHIFTS) - {"even"}))
    def test_specification_implies_las(self, name):
        s = SHIFTS[name]()
        for tau in range(3):
            if check_specification(s, tau, (5, 5)).holds:
                assert check_las(s, tau, (5, 5)).holds

    @pytest.mark.parametrize("name", sorted(set(SHIFTS) - {"even"}))
    def test_las_implies_as(self, name):
        # the proof feeds the glued right part back into LAS, so the right horizon doubles
        s = SHIFTS[name]()
        for m in range(3):
            if check_las(s, m, (5, 10)).holds:
                assert check_almost_spec(s, m, "AS", (5, 5), k=3, perturb_last=False).holds

    def test_las_at_equal_horizons_does_not_give_as(self):
        s = bounded_density("sqrt")
        assert check_las(s, 2, (5, 5)).holds
        assert check_las(s, 2, (5, 10)).witness == {"w1": "10011", "w2": "1000010011"}
        v = check_almost_spec(s, 2, "AS", (5, 5), k=3, perturb_last=False)
        assert v.witness == {"w1": "10011", "w2": "10011", "w3": "10011"}

    def test_unknown_mode(self):
        with pytest.raises(InputError):
            check_almost_spec(golden_mean(), 1, "XAS")


class TestIrreducible:
    def test_at_most_one_one_fails_with_11(self):
        v = check_irreducible(at_most_one_one(), 4, 4)
        assert v.fails and v.witness == {"u": "1", "v": "1"}

    def test_golden_mean(self):
        v = check_irreducible(golden_mean(), 5, 2)
        assert v.holds and v.details["max_gap"] == 1

    def test_bounded_density_needs_a_long_zero_block(self):
        s = bounded_density("sqrt")
        # 10011 0^k 10011 first fits at k = 16
        assert check_irreducible(s, 5, 15).witness == {"u": "10011", "v": "10011"}
        v = check_irreducible(s, 5, 16)
        assert v.holds and v.details["all_witnesses_zero_blocks"] and v.details["max_gap"] == 16


class TestSpanningSets:
    @pytest.mark.parametrize("n, q, m", [(2, 2, 2), (4, 2, 2), (4, 2, 1), (5, 3, 1), (6, 4, 2)])
    def test_cover_is_exhaustively_verified(self, n, q, m):
        U = build_spanning_set(Alphabet.range(q), n, m)
        words = list(U.words())
        assert len(words) == U.size and U.covering_radius <= m
        for w in itertools.product(range(q), repeat=n):
            assert min(hamming(w, u) for u in words) <= m

    def test_sizes(self):
        assert build_spanning_set(Alphabet.range(2), 2, 2).size == 1
        # no single word covers 2^4 at radius 2 (a ball holds 11 words), two do
        assert build_spanning_set(Alphabet.range(2), 4, 2).size == 2
        U = build_spanning_set(Alphabet.range(4), 6, 2)
        assert U.size <= U.bound


def test_factor_of_betas_has_las_one():
    b = beta_shift((), (1, 0))
    f = factor_shift(product_shift(b, b), 0, sum_map)
    assert check_las(f, 1, (4, 4)).holds
