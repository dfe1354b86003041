import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from symdyn import audit_counterexample, build_counterexample, check_ras_loglog, language_counts, make_shift
from symdyn.counterexample import ROOM_NOTE, CounterexampleSpec, coded_reference, loglog_radius
from symdyn.words import ConstructionError, InputError, Membership, hamming

N = 4


@pytest.fixture(scope="module")
def shift():
    return build_counterexample(N, 8)


def language_oracle(shift, n):
    """Words w = s t_1 ... t_k p: s one-signed (any such word is a generator suffix), t_i in T, p a generator prefix."""
    N = shift.N
    gens = set()
    for k in range(1, n + 1):
        for m in oracles.t_plus(shift, k):
            gens.add(tuple((1, x) for x in m))
            gens.add(tuple((-1, x) for x in m))
    letters = [(s, x) for s in (-1, 1) for x in range(N)]
    out = 0
    for w in itertools.product(letters, repeat=n):
        starts = {0}
        j = 0
        while j < n and w[j][0] == w[0][0]:
            j += 1
            starts.add(j)
        reach = set(starts)
        ok = n in reach
        for i in range(n + 1):
            if ok:
                break
            if i not in reach:
                continue
            for k in range(i + 1, n + 1):
                if w[i:k] in gens:
                    reach.add(k)
                    ok = ok or k == n
        out += ok
    return out


def test_generator_counts(shift):
    want = [1, 4, 16, 4, 16, 64, 256, 1024]
    assert [shift.t_count(n) for n in range(1, 9)] == want
    assert [len(oracles.t_plus(shift, n)) for n in range(1, 9)] == want
    # with U_2 a singleton only position 2 is free at n = 4
    assert shift.U(2).size == 1 and shift.t_count(4) == N


@pytest.mark.parametrize("n", range(1, 9))
def test_generators_match_definition(shift, n):
    for sign in (1, -1):
        got = sorted(tuple(shift.mag(a) for a in w) for w in shift.generators(n, sign))
        assert got == oracles.t_plus(shift, n)
        assert all(all(shift.sign(a) == sign for a in w) for w in shift.generators(n, sign))


def test_t_plus_is_prefix_closed(shift):
    T8 = oracles.t_plus(shift, 8)
    shorter = {k: set(oracles.t_plus(shift, k)) for k in range(1, 8)}
    assert all(w[:k] in shorter[k] for w in T8 for k in range(1, 8))


def test_language_counts(shift):
    got = language_counts(shift, 6).counts
    assert got == (1, 8, 40, 200, 1000, 4784, 22624)
    assert [language_oracle(shift, n) for n in range(5)] == list(got[:5])


def test_agrees_with_generic_coded_shift(shift):
    # generators up to length L pin down words up to length L - 4
    ref = coded_reference(shift, 8)
    assert language_counts(ref, 4).counts == language_counts(shift, 4).counts


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_spanning_radius(shift, n):
    """Every one-signed word is within 1 + 2 floor(log2 log2 n) of T_n."""
    worst = oracles.covering_radius(oracles.t_plus(shift, n), N, n)
    assert worst <= loglog_radius(n) == 1 + 2 * math.floor(math.log2(math.log2(n)))


@pytest.fixture(scope="module")
def audit(shift):
    return audit_counterexample(shift, 8)


class TestAudit:
    def test_bound0(self, audit):
        assert audit.bound0_ok
        assert all(r["t_plus"] <= N ** r["n"] // N for r in audit.rows)

    def test_structure(self, audit):
        assert audit.prefix_closed and audit.sign_symmetric
        assert audit.embeddings_ok and audit.spanning_ok

    def test_alpha_is_reported_not_asserted(self, audit):
        want = sum(Fraction(2 * c, N**n) for n, c in enumerate([1, 4, 16, 4, 16, 64, 256, 1024], 1))
        assert audit.alpha_sum == want == Fraction(53, 32)
        assert not audit.alpha_ok
        assert audit.note == ROOM_NOTE and "2^17 + 4" in ROOM_NOTE

    def test_entropy_below_log_2n(self, audit):
        assert all(0 < h <= math.log(2 * N) for _, h in audit.entropy)

    def test_csv_columns(self, audit):
        rows = list(audit.csv_rows())
        assert rows[0] == ("n", "t_plus", "bound", "spanning_radius_achieved", "embed_ok")
        assert len(rows) == 9

    def test_needs_counterexample(self):
        with pytest.raises(InputError):
            audit_counterexample(make_shift({"family": "full", "alphabet": 2}))


def test_sign_class_full_shifts_embed(shift):
    for sign in (1, -1):
        for n in range(1, 6):
            for m in itertools.product(range(N), repeat=n):
                assert shift.contains(tuple(shift.letter(sign, x) for x in m)) is Membership.IN


@st.composite
def _walk(draw, s, max_len):
    """A language word grown through allowed right extensions."""
    n = draw(st.integers(1, max_len))
    w = ()
    while len(w) < n:
        opts = [a for a in range(s.alphabet.size) if s.extends(w + (a,)) is Membership.IN]
        w += (draw(st.sampled_from(opts)),)
    return w


class TestRasMechanism:
    @settings(max_examples=40)
    @given(st.data())
    def test_witness_glues_within_budget(self, data):
        s = build_counterexample(N, 8)
        v = data.draw(_walk(s, 6))
        w = data.draw(_walk(s, 8))
        w2, d = s.ras_witness(v, w)
        assert d == hamming(w, w2) <= loglog_radius(len(w))
        assert s.contains(v + w2) is Membership.IN

    def test_single_sign_pair(self, shift):
        v = tuple(shift.letter(1, m) for m in (1, 2, 3))
        w = tuple(shift.letter(1, m) for m in (2, 2, 2, 2, 2))
        w2, d = shift.ras_witness(v, w)
        assert shift.mag(w2[0]) == 0 and d <= 3
        assert shift.contains(v + w2) is Membership.IN

    def test_nearest_generator_is_in_t(self, shift):
        for m in itertools.product(range(N), repeat=5):
            g = shift.nearest_generator(m)
            assert shift.in_t(g) and hamming(g, m) <= loglog_radius(5)

    def test_short_words_use_budget_one(self, shift):
        w = tuple(shift.letter(-1, m) for m in (3, 3))
        w2, d = shift.ras_witness((shift.letter(1, 0),), w)
        assert d == 1 == loglog_radius(2)


def test_ras_small_n():
    assert check_ras_loglog(build_counterexample(3, 8), (4, 4)).holds


def test_ras_n3_at_six():
    assert check_ras_loglog(build_counterexample(3, 8), (6, 6)).holds


def test_spec_round_trip_and_errors():
    spec = CounterexampleSpec(4, 2, 0)
    assert make_shift(spec.to_doc()).spec == spec
    with pytest.raises(ConstructionError):
        CounterexampleSpec(1)
    with pytest.raises(InputError):
        build_counterexample(4, 3)
