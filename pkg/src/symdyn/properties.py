"""Hamming balls and finite-horizon checks of specification-type properties.

Every check quantifies over all language words up to the stated lengths
and returns a :class:`Verdict`. Pairs and tuples are visited in canonical
order (length, then lexicographic), so a reported failure is always the
first one in that order. Words are grouped by their context keys (see
:mod:`symdyn.zoo`); grouped words have identical extension behaviour, so
the grouping never changes an answer.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .language import enumerate_language
from .mistake import MistakeFunction
from .words import Alphabet, BudgetExceededError, InputError, Membership, Word, hamming
from .zoo import Shift, make_shift, reflect

IN, OUT, UNKNOWN = Membership.IN, Membership.OUT, Membership.UNKNOWN

HOLDS, FAILS, INCONCLUSIVE = "holds", "fails", "inconclusive"
EXIT_CODES = {HOLDS: 0, FAILS: 1, INCONCLUSIVE: 2}


@dataclass
class Verdict:
    prop: str
    status: str
    horizon: tuple
    params: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    reason: str = ""
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_dict(self) -> dict:
        return {
            "property": self.prop,
            "status": self.status,
            "horizon": list(self.horizon),
            "params": self.params,
            "witness": self.witness,
            "reason": self.reason,
            "details": self.details,
        }


def as_mistake(g) -> MistakeFunction:
    if isinstance(g, MistakeFunction):
        return g
    if isinstance(g, int):
        return MistakeFunction.const(g)
    return MistakeFunction.parse(str(g))


def _ok(m: Membership, optimistic: bool) -> bool:
    return m is IN or (optimistic and m is UNKNOWN)


def _words_between(shift: Shift, lo: int, hi: int) -> list:
    out = []
    for n in range(lo, hi + 1):
        out.extend(enumerate_language(shift, n).words)
    return out


def _group(words, keyfn) -> list:
    seen = {}
    for w in words:
        seen.setdefault(keyfn(w), w)
    return list(seen.values())


def _append(shift: Shift, rep: Word, w: Word, optimistic: bool):
    """rep + w if it stays in the language (rep assumed in it), else None."""
    x = rep
    for a in w:
        x = x + (a,)
        if not _ok(shift.extends(x), optimistic):
            return None
    return x


def _layer(shift: Shift, states: dict, w: Word, m: int, optimistic: bool) -> dict:
    """Right-context classes reachable by appending some v in B_m(w) to a state rep."""
    if m <= 0:
        out = {}
        for rep in states.values():
            x = _append(shift, rep, w, optimistic)
            if x is not None:
                out.setdefault(shift.right_context(x), x)
        return out
    q = shift.alphabet.size
    cur = {k: (rep, 0) for k, rep in states.items()}
    for j, b in enumerate(w):
        nxt = {}
        for rep, used in cur.values():
            for a in range(q):
                c = used + (a != b)
                if c > m:
                    continue
                x = rep + (a,)
                if not _ok(shift.extends(x), optimistic):
                    continue
                key = shift.right_context(x)
                old = nxt.get(key)
                if old is None or c < old[1]:
                    nxt[key] = (x, c)
        cur = nxt
    return {k: v[0] for k, v in cur.items()}


def _reach_any(shift: Shift, states: dict, w: Word, m: int, optimistic: bool) -> bool:
    """Does some v in B_m(w) extend some state rep? Depth-first with early exit."""
    q = shift.alphabet.size
    n = len(w)
    dead = set()
    stack = [(rep, 0, 0) for rep in reversed(list(states.values()))]
    while stack:
        x, j, used = stack.pop()
        if j == n:
            return True
        key = (j, used, shift.right_context(x))
        if key in dead:
            continue
        dead.add(key)
        for a in reversed(range(q)):
            c = used + (a != w[j])
            if c <= m:
                y = x + (a,)
                if _ok(shift.extends(y), optimistic):
                    stack.append((y, j + 1, c))
    return False


def _free_layer(shift: Shift, states: dict, tau: int, optimistic: bool) -> dict:
    """Classes reachable by appending any word of length tau."""
    cur = dict(states)
    q = shift.alphabet.size
    for _ in range(tau):
        nxt = {}
        for rep in cur.values():
            for a in range(q):
                x = rep + (a,)
                if _ok(shift.extends(x), optimistic):
                    nxt.setdefault(shift.right_context(x), x)
        cur = nxt
    return cur


def _start(shift: Shift) -> dict:
    return {shift.right_context(()): ()}


def _fmt(shift: Shift, w: Word) -> str:
    return shift.alphabet.format(w)


# ------------------------------------------------------------------ balls

def hamming_ball(shift, w, m: int) -> tuple:
    """B_m(w): language words of length |w| within Hamming distance m, canonical order."""
    shift = make_shift(shift)
    if isinstance(w, str):
        w = shift.alphabet.parse(w)
    w = shift.alphabet.check(w)
    if m < 0:
        raise InputError("radius must be >= 0")
    out = []
    q = shift.alphabet.size
    n = len(w)
    stack = [((), 0)]
    while stack:
        x, used = stack.pop()
        if len(x) == n:
            out.append(x)
            continue
        j = len(x)
        for a in reversed(range(q)):
            c = used + (a != w[j])
            if c <= m:
                y = x + (a,)
                if shift.extends(y) is IN:
                    stack.append((y, c))
    return tuple(out)


def min_mistakes_left(shift, w1, w2):
    """Smallest j such that some v in B_j(w1) has v w2 in L, with the canonical witness.

    Returns (j, v); j is ``math.inf`` and v is None when no v of length |w1| works.
    """
    shift = make_shift(shift)
    w1 = shift.alphabet.parse(w1) if isinstance(w1, str) else shift.alphabet.check(w1)
    w2 = shift.alphabet.parse(w2) if isinstance(w2, str) else shift.alphabet.check(w2)
    if shift.contains(w2) is not IN:
        raise InputError(f"{_fmt(shift, w2)} is not in the language")
    n = len(w1)
    q = shift.alphabet.size
    memo = {}

    def cost(p: Word) -> float:
        i = len(p)
        key = (i, shift.right_context(p))
        if key in memo:
            return memo[key]
        if i == n:
            val = 0 if _append(shift, p, w2, False) is not None else math.inf
        else:
            val = math.inf
            for a in range(q):
                x = p + (a,)
                if shift.extends(x) is IN:
                    val = min(val, (a != w1[i]) + cost(x))
        memo[key] = val
        return val

    best = cost(())
    if best == math.inf:
        return math.inf, None
    p = ()
    for i in range(n):
        for a in range(q):
            x = p + (a,)
            if shift.extends(x) is IN and (a != w1[i]) + cost(x) + hamming(p, w1[:i]) == best:
                p = x
                break
    return best, p


def estimate_i(shift, horizon):
    """Max over pairs (y, v0) in the horizon of min_mistakes_left, first maximizer in canonical order."""
    shift = make_shift(shift)
    n1, n2 = horizon
    ys = _words_between(shift, 1, n1)
    vs = _words_between(shift, 1, n2)
    best, arg = -1, None
    memo = {}
    for y in ys:
        for v in vs:
            key = (y, shift.left_context(v))
            if key not in memo:
                memo[key] = min_mistakes_left(shift, y, v)[0]
            if memo[key] > best:
                best, arg = memo[key], (y, v)
    return best, arg


# ------------------------------------------------------------- LAS / RAS

def _las_pair_fails(shift, w1, w2, g, optimistic) -> bool:
    K = _layer(shift, _start(shift), w1, g(len(w1)), optimistic)
    return not any(_append(shift, rep, w2, optimistic) is not None for rep in K.values())


def check_las(shift, g, horizon) -> Verdict:
    shift = make_shift(shift)
    g = as_mistake(g)
    n1, n2 = horizon
    params = {"g": g.describe()}
    W1 = _words_between(shift, 1, n1)
    top = enumerate_language(shift, n2).words
    W2 = _group(top, shift.left_context) if shift.exact else list(top)
    passed = {}
    checked = 0
    for w1 in W1:
        K = _layer(shift, _start(shift), w1, g(len(w1)), False)
        kk = frozenset(K)
        if kk not in passed:
            bad = None
            for w2 in W2:
                checked += 1
                if not any(_append(shift, rep, w2, False) is not None for rep in K.values()):
                    bad = w2
                    break
            passed[kk] = bad is None
        if passed[kk]:
            continue
        # first failing right word in canonical order, over every length
        for w2 in _words_between(shift, 1, n2):
            if _las_pair_fails(shift, w1, w2, g, False):
                break
        wit = {"w1": _fmt(shift, w1), "w2": _fmt(shift, w2)}
        if not shift.exact and not _las_pair_fails(shift, w1, w2, g, True):
            return Verdict("LAS", INCONCLUSIVE, horizon, params, wit, "membership unknown within the search horizon")
        return Verdict("LAS", FAILS, horizon, params, wit, "no allowed change of w1 can precede w2")
    return Verdict("LAS", HOLDS, horizon, params, details={"left_words": len(W1), "right_classes": len(W2)})


class _Follow:
    """Memoized moves of signatures: frozensets of (right context, changes used)."""

    def __init__(self, shift: Shift, cap: int, optimistic: bool):
        self.shift, self.cap, self.optimistic = shift, cap, optimistic
        self.reps = {}
        self.memo = {}
        self.trans = {}

    def start(self, v: Word) -> frozenset:
        key = self.shift.right_context(v)
        self.reps.setdefault(key, v)
        return frozenset({(key, 0)})

    def moves(self, key) -> tuple:
        """((a, next context), ...) for every letter a that extends the class."""
        hit = self.trans.get(key)
        if hit is not None:
            return hit
        rep = self.reps[key]
        out = []
        for a in range(self.shift.alphabet.size):
            x = rep + (a,)
            if _ok(self.shift.extends(x), self.optimistic):
                k2 = self.shift.right_context(x)
                self.reps.setdefault(k2, x)
                out.append((a, k2))
        self.trans[key] = out = tuple(out)
        return out

    def step(self, sig: frozenset, b: int) -> frozenset:
        hit = self.memo.get((sig, b))
        if hit is not None:
            return hit
        best = {}
        cap = self.cap
        for key, used in sig:
            for a, k2 in self.moves(key):
                c = used if a == b else used + 1
                if c <= cap and c < best.get(k2, cap + 1):
                    best[k2] = c
        out = frozenset(best.items())
        self.memo[(sig, b)] = out
        return out


def _weakest(sigs) -> frozenset:
    """Drop signatures that dominate another: they succeed whenever it does."""
    items = [dict(s) for s in sigs]
    keep = []
    for i, s in enumerate(items):
        dominated_other = any(
            j != i and all(k in s and s[k] <= u for k, u in t.items()) and (s != t or j < i)
            for j, t in enumerate(items)
        )
        if not dominated_other:
            keep.append(sigs[i])
    return frozenset(keep)


def _ras_first_failure(shift: Shift, n1: int, n2: int, g: MistakeFunction, optimistic: bool):
    """First w (canonical order) that some left word of length n1 cannot be followed by within g(|w|)."""
    top = enumerate_language(shift, n1).words
    V = _group(top, shift.right_context) if shift.exact else list(top)
    cap = max(g(n) for n in range(1, n2 + 1))
    fol = _Follow(shift, cap, optimistic)
    root = _weakest(list({fol.start(v) for v in V}))
    memo = {}
    q = shift.alphabet.size
    best = None
    nodes = 0
    stack = [((), root)]
    while stack:
        w, sigs = stack.pop()
        n = len(w)
        if best is not None and n >= len(best):
            continue
        if n:
            nodes += 1
            m = g(n)
            if any(not any(u <= m for _, u in s) for s in sigs):
                if best is None or (n, w) < (len(best), best):
                    best = w
                continue
        if n == n2:
            continue
        for b in reversed(range(q)):
            x = w + (b,)
            if shift.extends(x) is IN:
                t = (sigs, b)
                if t not in memo:
                    memo[t] = _weakest(list({fol.step(s, b) for s in sigs}))
                stack.append((x, memo[t]))
    return best, len(V), nodes


def check_ras(shift, g, horizon) -> Verdict:
    """Right almost specification: v w' in L for some w' in B_g(|w|)(w).

    Left words are taken at length n1 only (suffixes inherit the answer) and
    grouped by right context; right words are walked as a trie.
    """
    shift = make_shift(shift)
    g = as_mistake(g)
    n1, n2 = horizon
    params = {"g": g.describe()}
    bad, nv, nodes = _ras_first_failure(shift, n1, n2, g, False)
    if bad is None:
        return Verdict("RAS", HOLDS, horizon, params, details={"left_classes": nv, "right_words": nodes})
    m = g(len(bad))
    for v in _words_between(shift, 1, n1):
        if not _reach_any(shift, {shift.right_context(v): v}, bad, m, False):
            break
    wit = {"w1": _fmt(shift, v), "w2": _fmt(shift, bad)}
    if not shift.exact and _ras_first_failure(shift, n1, n2, g, True)[0] is None:
        return Verdict("RAS", INCONCLUSIVE, horizon, params, wit, "membership unknown within the search horizon")
    return Verdict("RAS", FAILS, horizon, params, wit, "no allowed change of w2 can follow w1")


def check_as(shift, g, horizon, perturb_last: bool = True) -> Verdict:
    """Almost specification for k = len(horizon) segments, segment i of length <= horizon[i].

    With ``perturb_last=False`` only the first k-1 segments may change.
    """
    shift = make_shift(shift)
    g = as_mistake(g)
    k = len(horizon)
    if k < 2:
        raise InputError("AS needs at least two segments")
    perturb = [True] * (k - 1) + [perturb_last]
    levels = []
    for i, n in enumerate(horizon):
        if not perturb[i] and shift.exact:
            top = enumerate_language(shift, n).words
            levels.append(_group(top, shift.left_context) if i == k - 1 else list(top))
        else:
            levels.append(_words_between(shift, 1, n))
    memo = {}

    def rec(i, K):
        if i == k:
            return None
        key = (i, frozenset(K))
        if key in memo:
            return memo[key]
        res = None
        for w in levels[i]:
            m = g(len(w)) if perturb[i] else 0
            if i == k - 1:
                if not _reach_any(shift, K, w, m, False):
                    res = [w]
                    break
                continue
            K2 = _layer(shift, K, w, m, False)
            if not K2:
                res = [w] + [levels[j][0] for j in range(i + 1, k)]
                break
            sub = rec(i + 1, K2)
            if sub is not None:
                res = [w] + sub
                break
        memo[key] = res
        return res

    params = {"g": g.describe(), "k": k, "perturb_last": perturb_last}
    bad = rec(0, _start(shift))
    if bad is None:
        return Verdict("AS", HOLDS, tuple(horizon), params, details={"states": len(memo)})
    wit = {f"w{i + 1}": _fmt(shift, w) for i, w in enumerate(bad)}
    if not shift.exact:
        return Verdict("AS", INCONCLUSIVE, tuple(horizon), params, wit, "membership unknown within the search horizon")
    return Verdict("AS", FAILS, tuple(horizon), params, wit, "no allowed changes make the concatenation a language word")


def check_almost_spec(shift, g, mode: str = "LAS", horizon=(8, 8), k: int = 3, perturb_last=True) -> Verdict:
    mode = mode.upper()
    if mode == "LAS":
        return check_las(shift, g, horizon)
    if mode == "RAS":
        return check_ras(shift, g, horizon)
    if mode == "AS":
        if len(horizon) == 2 and k != 2:
            horizon = tuple(horizon) + (horizon[-1],) * (k - 2)
        return check_as(shift, g, horizon, perturb_last)
    raise InputError(f"unknown mode {mode!r}; use AS, LAS or RAS")


# ----------------------------------------------------------- specification

def check_specification(shift, tau: int, horizon) -> Verdict:
    shift = make_shift(shift)
    if tau < 0:
        raise InputError("gap must be >= 0")
    n1, n2 = horizon
    params = {"tau": tau}
    memo = {}

    def passes(v, w):
        key = (shift.right_context(v), shift.left_context(w))
        if key not in memo:
            K = _free_layer(shift, {shift.right_context(v): v}, tau, False)
            memo[key] = any(_append(shift, rep, w, False) is not None for rep in K.values())
        return memo[key]

    V = _group(enumerate_language(shift, n1).words, shift.right_context)
    W = _group(enumerate_language(shift, n2).words, shift.left_context)
    if all(passes(v, w) for v in V for w in W):
        return Verdict("specification", HOLDS, tuple(horizon), params)
    for v in _words_between(shift, 1, n1):
        for w in _words_between(shift, 1, n2):
            if not passes(v, w):
                wit = {"v": _fmt(shift, v), "w": _fmt(shift, w)}
                status = FAILS if shift.exact else INCONCLUSIVE
                return Verdict("specification", status, tuple(horizon), params, wit, f"no connector of length {tau}")
    raise AssertionError("maximal-length failure without a canonical witness")


# ----------------------------------------------------------- irreducibility

def _gap_search(shift, u, v, gap_bound, leaf_cap):
    """Shortest-first, canonical search for w with u w v in L. Returns (w or None, capped)."""
    q = shift.alphabet.size
    capped = False
    for ell in range(gap_bound + 1):
        leaves = 0
        dead = set()
        stack = [u]
        hit_cap = False
        while stack:
            x = stack.pop()
            depth = len(x) - len(u)
            if depth == ell:
                leaves += 1
                if _append(shift, x, v, False) is not None:
                    return x[len(u):], capped
                dead.add((depth, shift.right_context(x)))
                if leaves >= leaf_cap:
                    hit_cap = True
                    break
                continue
            key = (depth, shift.right_context(x))
            if key in dead:
                continue
            dead.add(key)
            for a in reversed(range(q)):
                y = x + (a,)
                if shift.extends(y) is IN:
                    stack.append(y)
        capped = capped or hit_cap
    return None, capped


def check_irreducible(shift, horizon: int, gap_bound: int, leaf_cap: int = 256) -> Verdict:
    """Every u, v of length <= horizon admit w, |w| <= gap_bound, with u w v in L."""
    shift = make_shift(shift)
    params = {"gap_bound": gap_bound}
    memo = {}

    def search(u, v):
        key = (shift.right_context(u), shift.left_context(v))
        if key not in memo:
            memo[key] = _gap_search(shift, u, v, gap_bound, leaf_cap)
        return memo[key]

    top = enumerate_language(shift, horizon).words
    U = _group(top, shift.right_context)
    V = _group(top, shift.left_context)
    gaps = []
    failed = False
    unresolved = False
    for u in U:
        for v in V:
            w, capped = search(u, v)
            if w is None:
                failed = failed or not capped
                unresolved = unresolved or capped
            else:
                gaps.append((u, v, w))
    if not failed and not unresolved:
        max_gap = max((len(w) for *_x, w in gaps), default=0)
        zero_only = all(all(a == 0 for a in w) for *_x, w in gaps)
        det = {
            "pairs": len(gaps),
            "max_gap": max_gap,
            "all_witnesses_zero_blocks": zero_only,
            "witnesses": [[_fmt(shift, u), _fmt(shift, v), _fmt(shift, w)] for u, v, w in gaps],
        }
        return Verdict("irreducible", HOLDS, (horizon,), params, details=det)
    words = _words_between(shift, 1, horizon)
    for u in words:
        for v in words:
            w, capped = search(u, v)
            if w is None:
                wit = {"u": _fmt(shift, u), "v": _fmt(shift, v)}
                if capped or not shift.exact:
                    return Verdict(
                        "irreducible", INCONCLUSIVE, (horizon,), params, wit, f"gap search capped at {leaf_cap} leaves per length"
                    )
                return Verdict("irreducible", FAILS, (horizon,), params, wit, f"no connector of length <= {gap_bound}")
    raise AssertionError("maximal-length failure without a canonical witness")


# ------------------------------------------------------------ spanning sets

def _index_to_word(x: int, n: int, q: int) -> tuple:
    return tuple((x // q ** i) % q for i in range(n))


def _word_to_index(w, q: int) -> int:
    return sum(a * q ** i for i, a in enumerate(w))


def _greedy_cost(n, q, m):
    total = q ** n
    ball = sum(math.comb(n, j) * (q - 1) ** j for j in range(min(m, n) + 1))
    return total * (ball + total // ball), total


def _distance_table(n: int, q: int, codes) -> np.ndarray:
    """Distance from every word of [q]^n to the nearest code word (multi-source BFS)."""
    total = q ** n
    dist = np.full(total, -1, dtype=np.int64)
    idx = np.array(sorted(codes), dtype=np.int64)
    dist[idx] = 0
    frontier = idx
    d = 0
    powers = q ** np.arange(n, dtype=np.int64)
    while frontier.size:
        d += 1
        nbrs = []
        for i in range(n):
            digit = (frontier // powers[i]) % q
            base = frontier - digit * powers[i]
            for c in range(q):
                nbrs.append(base + c * powers[i])
        cand = np.unique(np.concatenate(nbrs))
        cand = cand[dist[cand] < 0]
        dist[cand] = d
        frontier = cand
    return dist


@dataclass
class SpanningSet:
    """An m-spanning subset of [q]^n, stored as a product of per-block covers."""

    n: int
    q: int
    radius: int
    blocks: tuple  # (offset, length, radius, frozenset of words)
    verified: str = ""
    covering_radius: int = -1

    @property
    def size(self) -> int:
        return math.prod(len(b[3]) for b in self.blocks)

    @property
    def bound(self) -> float:
        """The reference size (16/n^2) q^n."""
        return 16 / self.n ** 2 * self.q ** self.n

    def __contains__(self, w) -> bool:
        w = tuple(w)
        return len(w) == self.n and all(w[o : o + L] in s for o, L, _r, s in self.blocks)

    def distance(self, w) -> int:
        w = tuple(w)
        return sum(min(hamming(w[o : o + L], c) for c in s) for o, L, _r, s in self.blocks)

    def words(self, limit: int = 1_000_000):
        if self.size > limit:
            raise BudgetExceededError(f"spanning set has {self.size} words, above the listing limit {limit}")
        import itertools

        parts = [sorted(b[3]) for b in self.blocks]
        return [tuple(a for piece in combo for a in piece) for combo in itertools.product(*parts)]


def _greedy_block(L: int, q: int, r: int) -> frozenset:
    if L <= r:
        return frozenset({(0,) * L})
    picks = _kernels.greedy_cover(L, q, r)
    return frozenset(_index_to_word(x, L, q) for x in picks)


def build_spanning_set(alphabet, n: int, m: int, seed: int = 0, max_cost: float = 2e8) -> SpanningSet:
    """An m-spanning set of A^n by greedy covering, split into blocks when A^n is large.

    Splitting [0, n) into blocks with radii summing to m keeps the radius:
    distances add over blocks.
    """
    q = alphabet.size if isinstance(alphabet, Alphabet) else int(alphabet)
    if n < 1 or m < 1:
        raise InputError("spanning sets need n >= 1 and m >= 1")
    if n <= m:
        blocks = ((0, n, m, frozenset({(0,) * n})),)
    else:
        parts = 1
        while True:
            lens = [n // parts + (1 if i < n % parts else 0) for i in range(parts)]
            radii = [m // parts + (1 if i < m % parts else 0) for i in range(parts)]
            if all(_greedy_cost(L, q, r)[0] <= max_cost and L <= 40 for L, r in zip(lens, radii)):
                break
            parts += 1
            if parts > m:
                raise BudgetExceededError(f"cannot build an {m}-spanning set of length {n} over {q} symbols in budget")
        blocks = []
        off = 0
        for L, r in zip(lens, radii):
            blocks.append((off, L, r, _greedy_block(L, q, r)))
            off += L
        blocks = tuple(blocks)
    cover_radius = 0
    for _o, L, r, s in blocks:
        table = _distance_table(L, q, [_word_to_index(w, q) for w in s])
        cover_radius += int(table.max())
    method = "exhaustive"
    if q ** n > 1_000_000:
        rng = random.Random(seed)
        span = SpanningSet(n, q, m, blocks)
        for _ in range(2000):
            w = tuple(rng.randrange(q) for _ in range(n))
            if span.distance(w) > m:
                raise AssertionError("spanning set construction bug: sampled word outside every ball")
        method = "exhaustive per block, sampled overall"
    if cover_radius > m:
        raise AssertionError(f"spanning set construction bug: covering radius {cover_radius} > {m}")
    return SpanningSet(n, q, m, blocks, method, cover_radius)
