"""The compiled kernels and their pure-Python twins must agree exactly."""
import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from symdyn import _kernels
from symdyn._kernels import python as py
from symdyn.words import hamming

compiled = _kernels.compiled
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
impls = [py] + ([compiled] if compiled is not None else [])

sqrt_tab = [0] + [oracles.ceil_sqrt(k) for k in range(1, 80)]
bits = st.lists(st.integers(0, 1), max_size=30)


def test_backend_choice():
    assert _kernels.BACKEND == (compiled or py).BACKEND


@needs_compiled
@given(bits)
def test_window_checks_agree(w):
    w8 = np.array(w, dtype=np.uint8)
    assert compiled.bd_window_ok(w8, sqrt_tab) == py.bd_window_ok(w, sqrt_tab)
    assert compiled.bd_suffix_ok(w8, sqrt_tab) == py.bd_suffix_ok(w, sqrt_tab)


@given(bits)
def test_window_check_definition(w):
    s = "".join(map(str, w))
    direct = all(s[i:j].count("1") <= sqrt_tab[j - i] for i in range(len(s)) for j in range(i + 1, len(s) + 1))
    assert py.bd_window_ok(w, sqrt_tab) == direct


@pytest.mark.parametrize("impl", impls, ids=lambda m: m.BACKEND)
def test_bd_level_counts(impl):
    assert list(impl.bd_level_counts(sqrt_tab, 12)) == [
        len(oracles.bounded_density_language(oracles.ceil_sqrt, n)) for n in range(13)
    ]


dfas = st.integers(1, 4).flatmap(
    lambda s: st.integers(1, 3).flatmap(
        lambda q: st.lists(st.lists(st.integers(-1, s - 1), min_size=q, max_size=q), min_size=s, max_size=s)
    )
)


@given(dfas, st.lists(st.integers(0, 2), max_size=2), st.integers(0, 7))
def test_dfa_counts_agree(trans, suffix, depth):
    q = len(trans[0])
    suffix = [a % q for a in suffix]
    t = np.array(trans, dtype=np.int32)
    got = [tuple(map(list, impl.dfa_level_counts(t, 0, depth, tuple(suffix)))) for impl in impls]
    assert all(g == got[0] for g in got)
    # brute force: run every word through the table
    counts = [0] * (depth + 1)
    scounts = [0] * (depth + 1)
    for n in range(depth + 1):
        for w in itertools.product(range(q), repeat=n):
            s = 0
            for a in w:
                s = trans[s][a]
                if s < 0:
                    break
            if s >= 0:
                counts[n] += 1
                scounts[n] += len(w) >= len(suffix) and list(w[len(w) - len(suffix):]) == suffix
    assert got[0] == (counts, scounts)


@pytest.mark.parametrize("n, q, m", [(4, 2, 1), (5, 2, 1), (4, 3, 1), (6, 2, 2), (3, 4, 1)])
def test_greedy_cover_agrees_and_covers(n, q, m):
    picks = [list(impl.greedy_cover(n, q, m)) for impl in impls]
    assert all(p == picks[0] for p in picks)
    words = list(itertools.product(range(q), repeat=n))
    # indices are base-q with the first symbol least significant
    code = [tuple((c // q**i) % q for i in range(n)) for c in picks[0]]
    assert all(min(hamming(w, c) for c in code) <= m for w in words)
    for impl in impls:
        assert impl.cover_uncovered(n, q, m, picks[0]) == 0
        assert impl.cover_uncovered(n, q, m, picks[0][:1]) == q**n - sum(
            1 for w in words if hamming(w, code[0]) <= m
        )
