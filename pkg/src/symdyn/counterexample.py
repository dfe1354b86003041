"""The double-log coded shift with two measures of maximal entropy.

Alphabet {-N..-1, 1..N}. A positive generator of length n starts with 1 and
carries a spanning-set word on every complete block [2^(2^i), 2^(2^(i+1)))
(0-based). Generators are prefix-closed and every constant-sign word is a
generator suffix, so a word lies in the language exactly when each maximal
constant-sign block after the first factors into generators of its sign.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .language import language_counts
from .mistake import MistakeFunction
from .properties import build_spanning_set, check_ras
from .words import Alphabet, BudgetExceededError, ConstructionError, InputError, Word, hamming
from .zoo import CodedSpec, Shift, ShiftSpec, _int_field, make_shift, register_family

ROOM_NOTE = (
    "entropy conclusion needs N > 2^17 + 4; desk-scale N only exercises the construction "
    "and its counting inequalities"
)


def _blocks_upto(n: int):
    """Complete constrained blocks inside [0, n) as (start, end), 0-based."""
    out = []
    i = 0
    while 2 ** (2 ** (i + 1)) <= n:
        out.append((2 ** (2**i), 2 ** (2 ** (i + 1))))
        i += 1
    return out


def _block_at(pos: int):
    """The constrained block containing 0-based position pos, if any."""
    if pos < 2:
        return None
    i = 0
    while True:
        a, b = 2 ** (2**i), 2 ** (2 ** (i + 1))
        if a <= pos < b:
            return a, b
        i += 1


def loglog_radius(n: int) -> int:
    """1 + 2 floor(log2 log2 n), taken as 1 below n = 4."""
    return MistakeFunction.parse("loglog")(n)


@dataclass(frozen=True)
class CounterexampleSpec(ShiftSpec):
    N: int = 4
    radius: int = 2
    seed: int = 0
    family = "counterexample"

    def __post_init__(self):
        if self.N < 2:
            raise ConstructionError("the counterexample needs N >= 2")
        if self.radius < 1:
            raise ConstructionError("spanning radius must be >= 1")

    def to_doc(self):
        return {"family": self.family, "N": self.N, "radius": self.radius, "seed": self.seed}


def signed_alphabet(N: int) -> Alphabet:
    labels = tuple(range(-N, 0)) + tuple(range(1, N + 1))
    return Alphabet(tuple(str(x) for x in labels), labels)


class CounterexampleShift(Shift):
    def __init__(self, spec: CounterexampleSpec):
        super().__init__(spec, signed_alphabet(spec.N))
        self.N = spec.N
        self._U = {}
        self._roots, self._nodes, self._kids = {}, {}, {}
        self._state = lru_cache(maxsize=1 << 18)(self._state_uncached)

    # letters: index i < N is negative with magnitude N-1-i (0 means -1)
    def sign(self, a: int) -> int:
        return -1 if a < self.N else 1

    def mag(self, a: int) -> int:
        return self.N - 1 - a if a < self.N else a - self.N

    def letter(self, sign: int, mag: int) -> int:
        return self.N - 1 - mag if sign < 0 else self.N + mag

    def U(self, length: int):
        if length not in self._U:
            try:
                self._U[length] = build_spanning_set(self.N, length, self.spec.radius, seed=self.spec.seed)
            except BudgetExceededError as e:
                raise BudgetExceededError(f"no spanning set for block length {length}: {e}") from None
        return self._U[length]

    # ----------------------------------------------------------- generators
    def in_t(self, mags) -> bool:
        """Direct test of the generator definition on a magnitude word."""
        mags = tuple(mags)
        if not mags or mags[0] != 0:
            return False
        return all(mags[a:b] in self.U(b - a) for a, b in _blocks_upto(len(mags)))

    def _sub_root(self, a: int, b: int, k: int):
        """Completion node at the start of sub-block k of the spanning set on [a, b)."""
        key = (b - a, k)
        if key not in self._roots:
            self._roots[key] = self._intern(frozenset(self.U(b - a).blocks[k][3]))
        return self._roots[key]

    def _intern(self, node: frozenset):
        return self._nodes.setdefault(node, node)

    def _child(self, node: frozenset, m: int):
        t = (node, m)
        if t not in self._kids:
            self._kids[t] = self._intern(frozenset(s[1:] for s in node if s[0] == m))
        return self._kids[t]

    def _advance(self, piece, m: int):
        """Piece state after appending magnitude m, or None.

        A piece is (length, cls). Inside a constrained block cls is
        (sub-block index, completions left in it) or "doomed" once the block
        can no longer land in its spanning set; the piece then lives until the
        block closes. Pieces with equal states have equal futures.
        """
        ell, cls = piece
        if ell == 0:
            return (1, None) if m == 0 else None
        blk = _block_at(ell)
        if blk is None:
            return (ell + 1, None)
        a, b = blk
        if ell == a:
            cls = (0, self._sub_root(a, b, 0))
        if cls != "doomed":
            k, node = cls
            node = self._child(node, m)
            if not node:
                cls = "doomed"
            elif () in node:
                blocks = self.U(b - a).blocks
                cls = (k + 1, self._sub_root(a, b, k + 1)) if k + 1 < len(blocks) else None
            else:
                cls = (k, node)
        if ell + 1 == b:
            return None if cls == "doomed" else (ell + 1, None)
        return (ell + 1, cls)

    def _step(self, pieces: frozenset, m: int) -> frozenset:
        nxt = {p2 for p in pieces if (p2 := self._advance(p, m)) is not None}
        if pieces and m == 0:
            nxt.add((1, None))  # cut: the previous piece is itself a generator
        return frozenset(nxt)

    def _fresh(self, m: int) -> frozenset:
        return frozenset({(1, None)}) if m == 0 else frozenset()

    def generators(self, n: int, sign: int = 1) -> list:
        """T^sign_n as letter words, canonical order."""
        out = []
        stack = [((), (0, None))]
        order = range(self.N) if sign > 0 else reversed(range(self.N))
        order = list(order)
        while stack:
            w, piece = stack.pop()
            if len(w) == n:
                out.append(w)
                continue
            for m in reversed(order):
                p2 = self._advance(piece, m)
                if p2 is not None:
                    stack.append((w + (self.letter(sign, m),), p2))
        return out

    def t_count(self, n: int) -> int:
        """|T^+_n| from the block structure."""
        if n == 0:
            return 0
        free = n - 1
        prod = 1
        for a, b in _blocks_upto(n):
            free -= b - a
            prod *= self.U(b - a).size
        return self.N**free * prod

    # ---------------------------------------------------------- language
    def _state_uncached(self, w: Word):
        if not w:
            return ("empty",)
        prev = self._state(w[:-1])
        if prev is None:
            return None
        a = w[-1]
        s, m = self.sign(a), self.mag(a)
        if prev[0] == "empty":
            return ("single", s)
        if prev[1] != s:
            pieces = self._fresh(m)
        elif prev[0] == "single":
            return prev
        else:
            pieces = self._step(prev[2], m)
        return ("multi", s, pieces) if pieces else None

    def _extends(self, w):
        return self._state(w) is not None

    def _accepts(self, w):
        return self._state(w) is not None

    def _first_block_key(self, w: Word):
        s = self.sign(w[0])
        k = 1
        while k < len(w) and self.sign(w[k]) == s:
            k += 1
        mags = tuple(self.mag(a) for a in w[:k])
        # ok[j]: mags[j:] factors into generators (empty allowed)
        ok = [False] * (k + 1)
        ok[k] = True
        for j in range(k - 1, -1, -1):
            if mags[j] != 0:
                continue
            piece = (0, None)
            for e in range(j, k):
                piece = self._advance(piece, mags[e])
                if piece is None:
                    break
                if ok[e + 1]:
                    ok[j] = True
                    break
        return s, frozenset(mags[:j] for j in range(k + 1) if ok[j])

    def _extends_left(self, w):
        return self._accepts(w)

    def right_context(self, w):
        return self._state(w)

    def left_context(self, w):
        if not w:
            return ("empty",)
        return ("L",) + self._first_block_key(w)

    def _blocks(self, w):
        out = []
        for s, grp in itertools.groupby(w, key=self.sign):
            out.append((s, tuple(self.mag(a) for a in grp)))
        return out

    def _factors(self, mags) -> bool:
        pieces = frozenset({(0, None)})
        first = True
        for m in mags:
            pieces = self._fresh(m) if first else self._step(pieces, m)
            first = False
            if not pieces:
                return False
        return True

    def periodic_ok(self, w):
        if not w:
            return False, True
        if len({self.sign(a) for a in w}) == 1:
            return True, True
        k = next(i for i in range(len(w)) if self.sign(w[i]) != self.sign(w[i - 1]))
        rot = w[k:] + w[:k]
        return all(self._factors(m) for _, m in self._blocks(rot)), True

    def describe(self):
        return f"double-log coded shift, N = {self.N}"

    # ----------------------------------------------------- RAS mechanism
    def nearest_generator(self, mags) -> tuple:
        """A generator within the spanning radius: first letter 1, blocks snapped into U."""
        mags = list(mags)
        if not mags:
            return ()
        mags[0] = 0
        for a, b in _blocks_upto(len(mags)):
            blk = tuple(mags[a:b])
            U = self.U(b - a)
            if blk not in U:
                best = min(U.words(), key=lambda c: (hamming(c, blk), c))
                mags[a:b] = best
        return tuple(mags)

    def ras_witness(self, v: Word, w: Word):
        """(w', distance) with v w' in L: the leading sign-block of w becomes a generator."""
        v, w = tuple(v), tuple(w)
        if not w:
            return w, 0
        s, first = self._blocks(w)[0]
        fixed = self.nearest_generator(first)
        w2 = tuple(self.letter(s, m) for m in fixed) + w[len(first) :]
        return w2, hamming(w, w2)


def _ce_from_doc(doc):
    return CounterexampleSpec(
        N=_int_field(doc, "N", 4, minimum=2),
        radius=_int_field(doc, "radius", 2, minimum=1),
        seed=_int_field(doc, "seed", 0),
    )


register_family("counterexample", CounterexampleSpec, CounterexampleShift, _ce_from_doc)


def build_counterexample(N: int = 4, n_max: int = 8, radius: int = 2, seed: int = 0) -> CounterexampleShift:
    """Build the shift and materialize the spanning sets needed up to n_max."""
    if n_max < 4:
        raise InputError("n_max must be >= 4")
    shift = make_shift(CounterexampleSpec(N, radius, seed))
    for a, b in _blocks_upto(n_max):
        shift.U(b - a)
    return shift


def coded_reference(shift: CounterexampleShift, L: int):
    """The generic coded shift generated by T_{<=L}; agrees on words of length <= L - 4."""
    gens = []
    for n in range(1, L + 1):
        for s in (1, -1):
            gens.extend(shift.generators(n, s))
    return make_shift(CodedSpec(shift.alphabet, tuple(gens)))


@dataclass
class CounterexampleAudit:
    N: int
    rows: list  # per-n dicts
    alpha_sum: Fraction
    prefix_closed: bool
    sign_symmetric: bool
    entropy: list  # (n, estimate)
    note: str = ROOM_NOTE

    @property
    def alpha_ok(self) -> bool:
        return self.alpha_sum < 1

    @property
    def embeddings_ok(self) -> bool:
        return all(r["embed_ok"] for r in self.rows)

    @property
    def bound0_ok(self) -> bool:
        return all(r["bound0_ok"] for r in self.rows)

    @property
    def spanning_ok(self) -> bool:
        return all(r["radius_achieved"] <= r["radius_allowed"] for r in self.rows)

    def csv_rows(self):
        yield ("n", "t_plus", "bound", "spanning_radius_achieved", "embed_ok")
        for r in self.rows:
            yield (r["n"], r["t_plus"], r["bound"], r["radius_achieved"], int(r["embed_ok"]))


def _embed_head(shift: CounterexampleShift, n: int) -> tuple:
    """A generator after which any n further magnitudes stay a generator."""
    j = 0
    while 2 ** (2 ** (j + 1)) <= n + 2 ** (2**j):
        j += 1
    head = [0] * 2 ** (2**j)
    for a, b in _blocks_upto(len(head)):
        head[a:b] = min(shift.U(b - a).words())
    return tuple(head)


def audit_counterexample(shift, n_max: int = 8) -> CounterexampleAudit:
    shift = make_shift(shift)
    if not isinstance(shift, CounterexampleShift):
        raise InputError("audit_counterexample needs the counterexample family")
    N = shift.N
    rows = []
    tplus = {}
    for n in range(1, n_max + 1):
        words = shift.generators(n, 1)
        neg = shift.generators(n, -1)
        tplus[n] = {tuple(shift.mag(a) for a in w) for w in words}
        if len(words) != shift.t_count(n):
            raise AssertionError("generator enumeration disagrees with the block count")
        ratio = Fraction(1)
        for a, b in _blocks_upto(n):
            ratio *= Fraction(shift.U(b - a).size, N ** (b - a))
        bound = N ** (n - 1) * ratio
        achieved = 1 + sum(shift.U(b - a).covering_radius for a, b in _blocks_upto(n))
        head = _embed_head(shift, n)
        embed = all(shift.in_t(head + m) for m in itertools.product(range(N), repeat=n))
        for s in (1, -1):
            for m in itertools.product(range(N), repeat=n):
                if tuple(shift.letter(s, x) for x in m) not in shift:
                    embed = False
                    break
        rows.append(
            {
                "n": n,
                "t_plus": len(words),
                "t_minus": len(neg),
                "bound": int(bound) if bound.denominator == 1 else float(bound),
                "bound0": N ** (n - 1),
                "bound0_ok": len(words) <= N ** (n - 1),
                "radius_achieved": achieved,
                "radius_allowed": loglog_radius(n),
                "embed_ok": embed,
            }
        )
    prefix_closed = all(w[:k] in tplus[k] for n in tplus for w in tplus[n] for k in range(1, n))
    sym = all(r["t_plus"] == r["t_minus"] for r in rows)
    alpha = sum(Fraction(r["t_plus"] + r["t_minus"], N ** r["n"]) for r in rows)
    counts = language_counts(shift, n_max).counts
    ent = [(n, math.log(counts[n]) / n) for n in range(1, n_max + 1)]
    return CounterexampleAudit(N, rows, alpha, prefix_closed, sym, ent)


def check_ras_loglog(shift, horizon=(6, 6)):
    """RAS with g(n) = 1 + 2 floor(log2 log2 n) at a finite horizon."""
    shift = make_shift(shift)
    return check_ras(shift, MistakeFunction.parse("loglog"), horizon)
