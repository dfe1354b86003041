"""Subshift families, their descriptions and membership oracles.

A *spec* is an immutable description of a subshift (``FullSpec``,
``SFTSpec``, ...). :func:`make_shift` turns a spec into a :class:`Shift`,
which answers language membership and exposes a few hooks used by the
counting and property-checking code:

* ``extends(w)``: membership of ``w`` given that ``w[:-1]`` is a member.
* ``right_context(w)`` / ``left_context(w)``: hashable keys such that two
  members with equal keys have the same follower (predecessor) sets.
* ``periodic_ok(w)``: whether the periodic point ``w^inf`` lies in the shift.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .mistake import MistakeFunction
from .words import (
    Alphabet,
    BudgetExceededError,
    ConstructionError,
    InputError,
    Membership,
    Word,
)

IN, OUT, UNKNOWN = Membership.IN, Membership.OUT, Membership.UNKNOWN
BINARY = Alphabet(("0", "1"))


def _mem(flag: bool) -> Membership:
    return IN if flag else OUT


# ---------------------------------------------------------------- documents

def alphabet_to_doc(alphabet: Alphabet):
    if alphabet.labels is None:
        return list(alphabet.symbols)
    return {"symbols": list(alphabet.symbols), "labels": list(alphabet.labels)}


def alphabet_from_doc(doc) -> Alphabet:
    if isinstance(doc, dict):
        return Alphabet(tuple(doc["symbols"]), tuple(doc["labels"]) if "labels" in doc else None)
    if isinstance(doc, (list, tuple)):
        return Alphabet(tuple(str(s) for s in doc))
    if isinstance(doc, str) and doc and not doc.isspace():
        return Alphabet(tuple(doc.replace(" ", "")))
    if isinstance(doc, int) and not isinstance(doc, bool):
        return Alphabet.range(doc)
    raise InputError(f"alphabet must be a list of symbols, got {doc!r}")


def _words_from_doc(alphabet: Alphabet, items, what: str) -> tuple:
    if not isinstance(items, (list, tuple)):
        raise InputError(f"{what} must be a list of words")
    return tuple(alphabet.parse(x) for x in items)


def _need(doc: dict, key: str):
    if key not in doc:
        raise InputError(f"missing field {key!r}")
    return doc[key]


def _int_field(doc: dict, key: str, default=None, minimum=None) -> int:
    val = doc.get(key, default)
    if val is None:
        raise InputError(f"missing field {key!r}")
    if isinstance(val, bool) or not isinstance(val, int):
        if isinstance(val, str) and val.strip().lstrip("-").isdigit():
            val = int(val)
        else:
            raise InputError(f"field {key!r} must be an integer, got {val!r}")
    if minimum is not None and val < minimum:
        raise InputError(f"field {key!r} must be >= {minimum}, got {val}")
    return val


# -------------------------------------------------------------------- specs

class ShiftSpec:
    """Base for the family descriptions. Subclasses are frozen dataclasses."""

    family = ""

    def to_doc(self) -> dict:
        raise NotImplementedError

    @property
    def fingerprint(self) -> str:
        text = json.dumps(self.to_doc(), sort_keys=True, separators=(",", ":"), ensure_ascii=True)
        return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class FullSpec(ShiftSpec):
    alphabet: Alphabet
    family = "full"

    def to_doc(self):
        return {"family": self.family, "alphabet": alphabet_to_doc(self.alphabet)}


@dataclass(frozen=True)
class SFTSpec(ShiftSpec):
    alphabet: Alphabet
    forbidden: tuple
    family = "sft"

    def __post_init__(self):
        object.__setattr__(self, "forbidden", tuple(tuple(w) for w in self.forbidden))
        for w in self.forbidden:
            if not w:
                raise ConstructionError("forbidden words must be nonempty")
            self.alphabet.check(w)

    def to_doc(self):
        return {
            "family": self.family,
            "alphabet": alphabet_to_doc(self.alphabet),
            "forbidden": [self.alphabet.format(w) for w in self.forbidden],
        }


@dataclass(frozen=True)
class BetaSpec(ShiftSpec):
    """Beta shift given by an eventually periodic expansion ``pre (period)^inf`` of 1."""

    preperiod: tuple
    period: tuple
    family = "beta"

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(int(x) for x in self.preperiod))
        object.__setattr__(self, "period", tuple(int(x) for x in self.period))

    def to_doc(self):
        return {"family": self.family, "preperiod": list(self.preperiod), "period": list(self.period)}


@dataclass(frozen=True)
class SGapSpec(ShiftSpec):
    """S-gap shift; S is ``gaps`` plus every n >= ``cofinite_from`` when that is set."""

    gaps: tuple
    cofinite_from: int | None = None
    family = "sgap"

    def __post_init__(self):
        object.__setattr__(self, "gaps", tuple(sorted(set(int(x) for x in self.gaps))))

    def to_doc(self):
        return {"family": self.family, "S": list(self.gaps), "cofinite_from": self.cofinite_from}


@dataclass(frozen=True)
class BoundedDensitySpec(ShiftSpec):
    g: MistakeFunction
    family = "bounded-density"

    def to_doc(self):
        return {"family": self.family, "g": self.g.to_doc()}


@dataclass(frozen=True)
class AtMostOneOneSpec(ShiftSpec):
    family = "at-most-one-one"

    def to_doc(self):
        return {"family": self.family}


@dataclass(frozen=True)
class CodedSpec(ShiftSpec):
    """Coded shift generated by an explicit finite word set.

    ``complete`` declares that the list is the whole generator set (then
    membership is exact); otherwise absence of an embedding gives Unknown.
    """

    alphabet: Alphabet
    generators: tuple
    horizon: int | None = None
    complete: bool = True
    family = "coded"

    def __post_init__(self):
        gens = tuple(sorted(set(tuple(w) for w in self.generators), key=lambda w: (len(w), w)))
        object.__setattr__(self, "generators", gens)
        for w in gens:
            if not w:
                raise ConstructionError("generators must be nonempty words")
            self.alphabet.check(w)

    def to_doc(self):
        return {
            "family": self.family,
            "alphabet": alphabet_to_doc(self.alphabet),
            "generators": [self.alphabet.format(w) for w in self.generators],
            "horizon": self.horizon,
            "complete": self.complete,
        }


@dataclass(frozen=True)
class ProductSpec(ShiftSpec):
    left: ShiftSpec
    right: ShiftSpec
    family = "product"

    def to_doc(self):
        return {"family": self.family, "left": self.left.to_doc(), "right": self.right.to_doc()}


@dataclass(frozen=True)
class FactorSpec(ShiftSpec):
    """Sliding block code of radius r applied to ``base``.

    ``table`` is a tuple of (window, target symbol) pairs, windows being
    words of length 2r+1 over the base alphabet.
    """

    base: ShiftSpec
    radius: int
    table: tuple
    budget: int = 200_000
    family = "factor"

    def __post_init__(self):
        if self.radius < 0:
            raise ConstructionError("block map radius must be >= 0")
        rows = tuple(sorted((tuple(k), str(v)) for k, v in dict(self.table).items()))
        object.__setattr__(self, "table", rows)
        for k, _ in rows:
            if len(k) != 2 * self.radius + 1:
                raise ConstructionError(f"block map window {k} does not have length 2r+1")

    def to_doc(self):
        base_alpha = base_alphabet(self.base)
        return {
            "family": self.family,
            "base": self.base.to_doc(),
            "radius": self.radius,
            "table": {base_alpha.format(k): v for k, v in self.table},
            "budget": self.budget,
        }


@dataclass(frozen=True)
class ReflectSpec(ShiftSpec):
    """Mirror image of a shift (words read right to left)."""

    base: ShiftSpec
    family = "reflect"

    def to_doc(self):
        return {"family": self.family, "base": self.base.to_doc()}


_FROM_DOC = {}
_BUILDERS = {}


def register_family(name: str, spec_cls, builder, from_doc):
    """Hook for families defined in other modules (the counterexample)."""
    _BUILDERS[spec_cls] = builder
    _FROM_DOC[name] = from_doc


def spec_from_doc(doc) -> ShiftSpec:
    if not isinstance(doc, dict):
        raise InputError(f"shift description must be a mapping, got {type(doc).__name__}")
    family = doc.get("family")
    if family not in _FROM_DOC:
        known = ", ".join(sorted(_FROM_DOC))
        raise InputError(f"unknown family tag {family!r}; known families: {known}")
    return _FROM_DOC[family](doc)


def _full_from_doc(doc):
    return FullSpec(alphabet_from_doc(_need(doc, "alphabet")))


def _sft_from_doc(doc):
    alpha = alphabet_from_doc(_need(doc, "alphabet"))
    return SFTSpec(alpha, _words_from_doc(alpha, _need(doc, "forbidden"), "forbidden"))


def _digits(doc, key):
    val = doc.get(key, [])
    if isinstance(val, str):
        val = [int(c) for c in val if not c.isspace()]
    if not isinstance(val, (list, tuple)):
        raise InputError(f"field {key!r} must be a list of digits")
    try:
        return tuple(int(x) for x in val)
    except (TypeError, ValueError):
        raise InputError(f"field {key!r} must contain integer digits") from None


def _beta_from_doc(doc):
    return BetaSpec(_digits(doc, "preperiod"), _digits(doc, "period"))


def _sgap_from_doc(doc):
    gaps = _need(doc, "S")
    if not isinstance(gaps, (list, tuple)):
        raise InputError("field 'S' must be a list of gap lengths")
    cof = doc.get("cofinite_from")
    if cof is not None:
        cof = _int_field(doc, "cofinite_from", minimum=0)
    return SGapSpec(tuple(int(x) for x in gaps), cof)


def _bd_from_doc(doc):
    return BoundedDensitySpec(MistakeFunction.from_doc(_need(doc, "g")))


def _coded_from_doc(doc):
    alpha = alphabet_from_doc(_need(doc, "alphabet"))
    gens = _words_from_doc(alpha, _need(doc, "generators"), "generators")
    horizon = doc.get("horizon")
    if horizon is not None:
        horizon = _int_field(doc, "horizon", minimum=0)
    return CodedSpec(alpha, gens, horizon, bool(doc.get("complete", True)))


def _product_from_doc(doc):
    return ProductSpec(spec_from_doc(_need(doc, "left")), spec_from_doc(_need(doc, "right")))


def _factor_from_doc(doc):
    base = spec_from_doc(_need(doc, "base"))
    radius = _int_field(doc, "radius", minimum=0)
    table = _need(doc, "table")
    if not isinstance(table, dict):
        raise InputError("field 'table' must map base windows to target symbols")
    alpha = base_alphabet(base)
    rows = {alpha.parse(k): str(v) for k, v in table.items()}
    budget = _int_field(doc, "budget", default=200_000, minimum=1)
    return FactorSpec(base, radius, tuple(rows.items()), budget)


def _reflect_from_doc(doc):
    return ReflectSpec(spec_from_doc(_need(doc, "base")))


_FROM_DOC.update(
    {
        "full": _full_from_doc,
        "sft": _sft_from_doc,
        "beta": _beta_from_doc,
        "sgap": _sgap_from_doc,
        "bounded-density": _bd_from_doc,
        "at-most-one-one": lambda doc: AtMostOneOneSpec(),
        "coded": _coded_from_doc,
        "product": _product_from_doc,
        "factor": _factor_from_doc,
        "reflect": _reflect_from_doc,
    }
)


def base_alphabet(spec: ShiftSpec) -> Alphabet:
    return make_shift(spec).alphabet


# ------------------------------------------------------------------- shifts

class Shift:
    """A subshift with a membership oracle for its (extendable) language."""

    exact = True
    is_empty = False

    def __init__(self, spec: ShiftSpec, alphabet: Alphabet):
        self.spec = spec
        self.alphabet = alphabet
        self._cached = lru_cache(maxsize=1 << 16)(self._membership)

    @property
    def name(self) -> str:
        return self.spec.family

    @property
    def fingerprint(self) -> str:
        return self.spec.fingerprint

    # subclasses implement _extends and optionally _accepts / _extends_left
    def _extends(self, w: Word) -> bool:
        raise NotImplementedError

    def _accepts(self, w: Word) -> bool:
        return all(self._extends(w[: i + 1]) for i in range(len(w)))

    def _extends_left(self, w: Word) -> bool:
        return self._accepts(w)

    def _membership(self, w: Word) -> Membership:
        if self.is_empty:
            return OUT
        if not w:
            return IN
        return _mem(self._accepts(w))

    def contains(self, w) -> Membership:
        w = self.alphabet.check(w)
        return self._cached(w)

    def __contains__(self, w) -> bool:
        return self.contains(w) is IN

    def extends(self, w: Word) -> Membership:
        """Membership of w, assuming w[:-1] is in the language."""
        if self.is_empty:
            return OUT
        if not w:
            return IN
        return _mem(self._extends(w))

    def extends_left(self, w: Word) -> Membership:
        """Membership of w, assuming w[1:] is in the language."""
        if self.is_empty:
            return OUT
        if not w:
            return IN
        return _mem(self._extends_left(w))

    def right_context(self, w: Word):
        return ("w", w)

    def left_context(self, w: Word):
        return ("w", w)

    def periodic_ok(self, w: Word) -> tuple[bool, bool]:
        """(w^inf in X, answer is exact). Default: finite-depth check, flagged."""
        if not w:
            return False, True
        return self.contains(w * 5) is IN, False

    def as_dfa(self):
        """(transition table, start state) if the language has a small DFA, else None."""
        return None

    def describe(self) -> str:
        return self.name

    def __repr__(self):
        return f"<{type(self).__name__} {self.describe()}>"


class FullShift(Shift):
    def __init__(self, spec: FullSpec):
        super().__init__(spec, spec.alphabet)

    def _extends(self, w):
        return True

    def _accepts(self, w):
        return True

    def right_context(self, w):
        return ()

    def left_context(self, w):
        return ()

    def periodic_ok(self, w):
        return bool(w), True

    def as_dfa(self):
        return np.zeros((1, self.alphabet.size), dtype=np.int32), 0

    def describe(self):
        return f"full shift on {self.alphabet.size} symbols"


class SFT(Shift):
    """Shift of finite type on the pruned de Bruijn graph of order K' = max(K-1, 1)."""

    def __init__(self, spec: SFTSpec):
        super().__init__(spec, spec.alphabet)
        q = self.alphabet.size
        self.max_forbidden = max((len(w) for w in spec.forbidden), default=1)
        K = self.order = max(self.max_forbidden - 1, 1)
        forb = set(spec.forbidden)
        lens = sorted({len(w) for w in forb})

        def clean(word):
            for L in lens:
                for i in range(len(word) - L + 1):
                    if word[i : i + L] in forb:
                        return False
            return True

        cand = [s for s in itertools.product(range(q), repeat=K) if clean(s)]
        idx = {s: i for i, s in enumerate(cand)}
        edges = {}
        for s in cand:
            for a in range(q):
                t = s[1:] + (a,)
                if t in idx and clean(s + (a,)):
                    edges[(idx[s], a)] = idx[t]
        alive = set(range(len(cand)))
        while True:
            outd = {i: 0 for i in alive}
            ind = {i: 0 for i in alive}
            for (i, _a), j in edges.items():
                if i in alive and j in alive:
                    outd[i] += 1
                    ind[j] += 1
            dead = {i for i in alive if outd[i] == 0 or ind[i] == 0}
            if not dead:
                break
            alive -= dead
        self.states = tuple(s for i, s in enumerate(cand) if i in alive)
        self.state_index = {s: i for i, s in enumerate(self.states)}
        ns = len(self.states)
        self.next = np.full((ns, q), -1, dtype=np.int32)
        for (i, a), j in edges.items():
            if i in alive and j in alive:
                self.next[self.state_index[cand[i]], a] = self.state_index[cand[j]]
        self.is_empty = ns == 0
        self.prefixes = [set() for _ in range(K)]
        for s in self.states:
            for L in range(K):
                self.prefixes[L].add(s[:L])

    def adjacency(self) -> np.ndarray:
        ns = len(self.states)
        A = np.zeros((ns, ns), dtype=np.int64)
        for i in range(ns):
            for a in range(self.alphabet.size):
                j = self.next[i, a]
                if j >= 0:
                    A[i, j] += 1
        return A

    def components(self) -> list:
        """Strongly connected components of the pruned graph, as lists of states."""
        from scipy.sparse import csr_matrix
        from scipy.sparse.csgraph import connected_components

        if self.is_empty:
            return []
        n, labels = connected_components(csr_matrix(self.adjacency()), directed=True, connection="strong")
        comps = [[] for _ in range(n)]
        for i, lab in enumerate(labels):
            comps[lab].append(self.states[i])
        return sorted(comps)

    @property
    def irreducible(self) -> bool:
        return len(self.components()) == 1

    def _accepts(self, w):
        n = len(w)
        K = self.order
        if n < K:
            return w in self.prefixes[n]
        s = self.state_index.get(w[:K])
        if s is None:
            return False
        for a in w[K:]:
            s = self.next[s, a]
            if s < 0:
                return False
        return True

    def _extends(self, w):
        n = len(w)
        K = self.order
        if n < K:
            return w in self.prefixes[n]
        if n == K:
            return w in self.state_index
        s = self.state_index.get(w[n - K - 1 : n - 1])
        return s is not None and self.next[s, w[-1]] >= 0

    def _extends_left(self, w):
        n = len(w)
        K = self.order
        if n <= K:
            return self._accepts(w)
        s = self.state_index.get(w[:K])
        return s is not None and self.next[s, w[K]] == self.state_index.get(w[1 : K + 1], -2)

    def right_context(self, w):
        return w[-self.order :] if len(w) >= self.order else ("short", w)

    def left_context(self, w):
        return w[: self.order] if len(w) >= self.order else ("short", w)

    def periodic_ok(self, w):
        if not w or self.is_empty:
            return False, True
        n = len(w)
        reps = -(-(self.order + 1) // n) + 2
        return self._accepts(w * reps), True

    def as_dfa(self):
        q = self.alphabet.size
        K = self.order
        nodes = {}
        for L in range(K):
            for p in sorted(self.prefixes[L]):
                nodes[("p", p)] = len(nodes)
        base = len(nodes)
        rows = [[-1] * q for _ in range(base + len(self.states))]
        for L in range(K):
            for p in self.prefixes[L]:
                for a in range(q):
                    c = p + (a,)
                    if L + 1 < K and c in self.prefixes[L + 1]:
                        rows[nodes[("p", p)]][a] = nodes[("p", c)]
                    elif L + 1 == K and c in self.state_index:
                        rows[nodes[("p", p)]][a] = base + self.state_index[c]
        for i in range(len(self.states)):
            for a in range(q):
                j = int(self.next[i, a])
                if j >= 0:
                    rows[base + i][a] = base + j
        if self.is_empty:
            rows[0] = [-1] * q
        return np.array(rows, dtype=np.int32).reshape(-1, q), nodes[("p", ())]

    def describe(self):
        forb = ", ".join(self.alphabet.format(w) for w in self.spec.forbidden)
        return f"SFT forbidding {{{forb}}}"


class BetaShift(Shift):
    """Words whose every suffix is lexicographically <= the expansion prefix of equal length."""

    def __init__(self, spec: BetaSpec):
        pre, per = spec.preperiod, spec.period
        if not per:
            raise ConstructionError("beta expansion needs a nonempty period")
        if any(x < 0 for x in pre + per):
            raise ConstructionError("beta expansion digits must be >= 0")
        if all(x == 0 for x in per):
            raise ConstructionError("beta expansion must not end in zeros (use the quasi-greedy form)")
        self.pre, self.per = len(pre), len(per)
        self.digits = pre + per
        d0 = self.digits[0]
        if d0 < 1:
            raise ConstructionError("beta expansion must start with a digit >= 1")
        span = self.pre + self.per
        head = [self.d(j) for j in range(span + span)]
        for k in range(1, span):
            tail = [self.d(k + j) for j in range(span + span)]
            if tail > head:
                raise ConstructionError(
                    f"beta expansion is not admissible: its shift by {k} exceeds it lexicographically"
                )
        super().__init__(spec, Alphabet.range(d0 + 1))
        self.nstates = span

    def d(self, j: int) -> int:
        if j < self.pre:
            return self.digits[j]
        return self.digits[self.pre + (j - self.pre) % self.per]

    def canon(self, j: int) -> int:
        return j if j < self.pre else self.pre + (j - self.pre) % self.per

    def expansion_prefix(self, n: int) -> tuple:
        return tuple(self.d(j) for j in range(n))

    def _run(self, w, states=frozenset({0})):
        """Scan w; return the set of matched expansion positions, or None on violation."""
        cur = set(states)
        for a in w:
            nxt = {0}
            for j in cur:
                dj = self.digits[j] if j < len(self.digits) else self.d(j)
                if a > dj:
                    return None
                if a == dj:
                    nxt.add(self.canon(j + 1))
            cur = nxt
        return frozenset(cur)

    def _accepts(self, w):
        return self._run(w) is not None

    def _extends(self, w):
        return self._run(w) is not None

    def right_context(self, w):
        return self._run(w)

    def left_context(self, w):
        n = len(w)
        return frozenset(j for j in range(self.nstates) if w <= tuple(self.d(j + i) for i in range(n)))

    def periodic_ok(self, w):
        if not w:
            return False, True
        n = len(w)
        horizon = self.pre + n * self.per + n
        head = [self.d(i) for i in range(horizon)]
        for j in range(n):
            seq = [w[(j + i) % n] for i in range(horizon)]
            if seq > head:
                return False, True
        return True, True

    def describe(self):
        pre = "".join(map(str, self.spec.preperiod))
        per = "".join(map(str, self.spec.period))
        return f"beta shift with expansion {pre}({per})^inf"


def beta_expansion(beta: Fraction, depth: int) -> tuple:
    """Greedy digits of 1 in base beta (rational beta > 1), truncated at ``depth``.

    Approximate by construction: the caller must supply a period.
    """
    beta = Fraction(beta)
    if beta <= 1:
        raise InputError("beta must exceed 1")
    x = Fraction(1)
    out = []
    for _ in range(depth):
        x *= beta
        dgt = math.floor(x)
        out.append(dgt)
        x -= dgt
        if x == 0:
            break
    return tuple(out)


class SGapShift(Shift):
    def __init__(self, spec: SGapSpec):
        super().__init__(spec, BINARY)
        if not spec.gaps and spec.cofinite_from is None:
            raise ConstructionError("S must be nonempty")
        if any(g < 0 for g in spec.gaps):
            raise ConstructionError("gap lengths must be >= 0")
        self.finite = spec.cofinite_from is None
        self.max_gap = max(spec.gaps) if self.finite else math.inf
        top = max(spec.gaps, default=0)
        self.cap = top + 1 if self.finite else max(top + 1, spec.cofinite_from)

    def in_s(self, g: int) -> bool:
        c = self.spec.cofinite_from
        return g in self.spec.gaps or (c is not None and g >= c)

    def _accepts(self, w):
        ones = [i for i, a in enumerate(w) if a == 1]
        if not ones:
            return len(w) <= self.max_gap
        if ones[0] > self.max_gap or len(w) - 1 - ones[-1] > self.max_gap:
            return False
        return all(self.in_s(b - a - 1) for a, b in zip(ones, ones[1:]))

    def _extends(self, w):
        has_one, run = self._tail(w[:-1])
        if w[-1] == 0:
            return run + 1 <= self.max_gap
        return not has_one or self.in_s(run)

    def _extends_left(self, w):
        rev = w[::-1]
        return self._extends(rev)

    @staticmethod
    def _tail(w):
        run = 0
        for a in reversed(w):
            if a == 1:
                return True, run
            run += 1
        return False, run

    def right_context(self, w):
        has_one, run = self._tail(w)
        return has_one, min(run, self.cap)

    def left_context(self, w):
        has_one, run = self._tail(w[::-1])
        return has_one, min(run, self.cap)

    def periodic_ok(self, w):
        if not w:
            return False, True
        ones = [i for i, a in enumerate(w) if a == 1]
        if not ones:
            return not self.finite, True
        n = len(w)
        cyc = ones + [ones[0] + n]
        return all(self.in_s(b - a - 1) for a, b in zip(cyc, cyc[1:])), True

    def describe(self):
        extra = f" plus all n >= {self.spec.cofinite_from}" if self.spec.cofinite_from is not None else ""
        return f"S-gap shift with S = {set(self.spec.gaps) or '{}'}{extra}"


class BoundedDensityShift(Shift):
    """Every window of length k holds at most g(k) ones."""

    def __init__(self, spec: BoundedDensitySpec):
        super().__init__(spec, BINARY)
        self.g = spec.g
        self._gtab = [0]

    def gtab(self, n: int) -> list:
        if len(self._gtab) <= n:
            self._gtab = [0] + [self.g(k) for k in range(1, max(n, 2 * len(self._gtab)) + 1)]
        return self._gtab

    def _accepts(self, w):
        return _kernels.bd_window_ok(w, self.gtab(len(w)))

    def _extends(self, w):
        return _kernels.bd_suffix_ok(w, self.gtab(len(w)))

    def _extends_left(self, w):
        return _kernels.bd_suffix_ok(w[::-1], self.gtab(len(w)))

    def periodic_ok(self, w):
        # a periodic point with a 1 has positive density of ones, beyond any sublinear g
        return bool(w) and not any(w), True

    def describe(self):
        return f"bounded density shift with g = {self.g.describe()}"


class AtMostOneOneShift(Shift):
    def __init__(self, spec: AtMostOneOneSpec):
        super().__init__(spec, BINARY)

    def _accepts(self, w):
        return sum(w) <= 1

    def _extends(self, w):
        return sum(w) <= 1

    def right_context(self, w):
        return sum(w)

    def left_context(self, w):
        return sum(w)

    def periodic_ok(self, w):
        return bool(w) and not any(w), True

    def as_dfa(self):
        return np.array([[0, 1], [1, -1]], dtype=np.int32), 0

    def describe(self):
        return "at-most-one-1 shift"


class CodedShift(Shift):
    """Closure of bi-infinite concatenations of a finite generator list.

    A word is In when it embeds in a concatenation ``s t1 ... tk p`` where
    ``s`` is a suffix and ``p`` a prefix of generators; the padding is the
    number of generator letters outside the word.
    """

    def __init__(self, spec: CodedSpec):
        super().__init__(spec, spec.alphabet)
        self.exact = spec.complete
        self.gens = spec.generators
        self.genset = set(self.gens)
        self.maxlen = max((len(t) for t in self.gens), default=0)
        self.is_empty = not self.gens
        self.prefix_pad = {}
        self.suffix_pad = {}
        for t in self.gens:
            for i in range(1, len(t) + 1):
                p, s = t[:i], t[len(t) - i :]
                pad = len(t) - i
                if pad < self.prefix_pad.get(p, math.inf):
                    self.prefix_pad[p] = pad
                if pad < self.suffix_pad.get(s, math.inf):
                    self.suffix_pad[s] = pad

    def horizon_for(self, n: int) -> int:
        return 4 * n if self.spec.horizon is None else self.spec.horizon

    def min_padding(self, w: Word) -> float:
        n = len(w)
        if n == 0:
            return 0
        best = math.inf
        for t in self.gens:
            for i in range(len(t) - n + 1):
                if t[i : i + n] == w:
                    best = min(best, len(t) - n)
                    break
        reach = [math.inf] * (n + 1)
        reach[0] = 0
        for i in range(1, n + 1):
            reach[i] = self.suffix_pad.get(w[:i], math.inf)
        for i in range(n + 1):
            if reach[i] == math.inf:
                continue
            for L in range(1, min(self.maxlen, n - i) + 1):
                if w[i : i + L] in self.genset and reach[i] < reach[i + L]:
                    reach[i + L] = reach[i]
        for i in range(n + 1):
            if reach[i] == math.inf:
                continue
            tail = 0 if i == n else self.prefix_pad.get(w[i:], math.inf)
            best = min(best, reach[i] + tail)
        return best

    def _membership(self, w):
        if not w:
            return OUT if self.is_empty else IN
        pad = self.min_padding(w)
        if pad <= self.horizon_for(len(w)) or (self.exact and pad < math.inf):
            return IN
        return OUT if self.exact else UNKNOWN

    def extends(self, w):
        return self.contains(w)

    def extends_left(self, w):
        return self.contains(w)

    def describe(self):
        return f"coded shift with {len(self.gens)} generators"


class ProductShift(Shift):
    def __init__(self, spec: ProductSpec):
        self.left = make_shift(spec.left)
        self.right = make_shift(spec.right)
        la, ra = self.left.alphabet, self.right.alphabet
        syms = tuple(f"{a}:{b}" for a in la.symbols for b in ra.symbols)
        super().__init__(spec, Alphabet(syms))
        self.q2 = ra.size
        self.exact = self.left.exact and self.right.exact
        self.is_empty = self.left.is_empty or self.right.is_empty

    def split(self, w):
        return tuple(a // self.q2 for a in w), tuple(a % self.q2 for a in w)

    def pair(self, u, v):
        if len(u) != len(v):
            raise InputError("coordinate words must have equal length")
        return tuple(a * self.q2 + b for a, b in zip(u, v))

    @staticmethod
    def _combine(m1, m2):
        if m1 is OUT or m2 is OUT:
            return OUT
        if m1 is IN and m2 is IN:
            return IN
        return UNKNOWN

    def _membership(self, w):
        u, v = self.split(w)
        return self._combine(self.left.contains(u), self.right.contains(v))

    def extends(self, w):
        u, v = self.split(w)
        return self._combine(self.left.extends(u), self.right.extends(v))

    def extends_left(self, w):
        u, v = self.split(w)
        return self._combine(self.left.extends_left(u), self.right.extends_left(v))

    def right_context(self, w):
        u, v = self.split(w)
        return self.left.right_context(u), self.right.right_context(v)

    def left_context(self, w):
        u, v = self.split(w)
        return self.left.left_context(u), self.right.left_context(v)

    def periodic_ok(self, w):
        u, v = self.split(w)
        a, ea = self.left.periodic_ok(u)
        b, eb = self.right.periodic_ok(v)
        return a and b, ea and eb

    def describe(self):
        return f"({self.left.describe()}) x ({self.right.describe()})"


class FactorShift(Shift):
    """Image of a shift under a sliding block code; membership by preimage search."""

    def __init__(self, spec: FactorSpec):
        self.base = make_shift(spec.base)
        if not self.base.exact:
            raise ConstructionError("factor maps need an exact base oracle")
        from .language import enumerate_language

        r = self.radius = spec.radius
        self.table = dict(spec.table)
        for win in self.table:
            self.base.alphabet.check(win)
        domain = enumerate_language(self.base, 2 * r + 1).words
        missing = [w for w in domain if w not in self.table]
        if missing:
            shown = ", ".join(self.base.alphabet.format(w) for w in missing[:5])
            raise ConstructionError(f"block map is not total on base windows; missing {shown}")
        targets = sorted({self.table[w] for w in domain})
        alpha = Alphabet.sorted_naturally(targets) if targets else Alphabet(("0",))
        super().__init__(spec, alpha)
        self.code = {w: alpha.index(self.table[w]) for w in domain}
        self.by_target = {}
        for w in domain:
            self.by_target.setdefault(self.code[w], []).append(w)
        self.is_empty = not domain
        self.exact = True

    def _key(self, u):
        r2 = 2 * self.radius
        return u[len(u) - r2 :] if r2 else (), self.base.right_context(u)

    def frontier(self, w: Word) -> dict:
        """Classes of base words of length |w|+2r mapping onto w, keyed by follower data."""
        if not w:
            return {}
        front = {}
        for u in self.by_target.get(w[0], ()):
            front.setdefault(self._key(u), u)
        budget = self.spec.budget
        q = self.base.alphabet.size
        for b in w[1:]:
            nxt = {}
            for u in front.values():
                for a in range(q):
                    v = u + (a,)
                    win = v[len(v) - 2 * self.radius - 1 :]
                    if self.code.get(win) != b:
                        continue
                    if self.base.extends(v) is not IN:
                        continue
                    key = self._key(v)
                    if key not in nxt:
                        nxt[key] = v
                        if len(nxt) > budget:
                            raise BudgetExceededError(
                                f"factor preimage search exceeded budget {budget} at length {len(v)}"
                            )
            # keep representatives short so the scan stays linear
            front = nxt
        return front

    def _accepts(self, w):
        return bool(self.frontier(w))

    def _extends(self, w):
        return bool(self.frontier(w))

    def right_context(self, w):
        return frozenset(self.frontier(w))

    def describe(self):
        return f"factor of ({self.base.describe()}) by a radius-{self.radius} block map"


class ReflectedShift(Shift):
    def __init__(self, spec: ReflectSpec):
        self.base = make_shift(spec.base)
        super().__init__(spec, self.base.alphabet)
        self.exact = self.base.exact
        self.is_empty = self.base.is_empty

    def _membership(self, w):
        return self.base.contains(w[::-1])

    def extends(self, w):
        return self.base.extends_left(w[::-1])

    def extends_left(self, w):
        return self.base.extends(w[::-1])

    def right_context(self, w):
        return self.base.left_context(w[::-1])

    def left_context(self, w):
        return self.base.right_context(w[::-1])

    def periodic_ok(self, w):
        return self.base.periodic_ok(w[::-1])

    def describe(self):
        return f"reflection of ({self.base.describe()})"


_BUILDERS.update(
    {
        FullSpec: FullShift,
        SFTSpec: SFT,
        BetaSpec: BetaShift,
        SGapSpec: SGapShift,
        BoundedDensitySpec: BoundedDensityShift,
        AtMostOneOneSpec: AtMostOneOneShift,
        CodedSpec: CodedShift,
        ProductSpec: ProductShift,
        FactorSpec: FactorShift,
        ReflectSpec: ReflectedShift,
    }
)


@lru_cache(maxsize=256)
def _build(spec: ShiftSpec) -> Shift:
    try:
        builder = _BUILDERS[type(spec)]
    except KeyError:
        raise InputError(f"no builder for {type(spec).__name__}") from None
    return builder(spec)


def make_shift(spec) -> Shift:
    """Validate a spec and return its shift (cached per spec)."""
    if isinstance(spec, Shift):
        return spec
    if isinstance(spec, dict):
        spec = spec_from_doc(spec)
    return _build(spec)


def reflect(shift) -> Shift:
    shift = make_shift(shift)
    if isinstance(shift, ReflectedShift):
        return shift.base
    return make_shift(ReflectSpec(shift.spec))


# ----------------------------------------------------------- constructors

def full_shift(k_or_symbols=2) -> Shift:
    if isinstance(k_or_symbols, int):
        return make_shift(FullSpec(Alphabet.range(k_or_symbols)))
    return make_shift(FullSpec(Alphabet(tuple(k_or_symbols))))


def sft(alphabet, forbidden) -> Shift:
    alpha = alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet))
    return make_shift(SFTSpec(alpha, tuple(alpha.parse(w) for w in forbidden)))


def golden_mean() -> Shift:
    return sft(("0", "1"), ["11"])


def beta_shift(preperiod=(), period=(1, 0)) -> Shift:
    return make_shift(BetaSpec(tuple(preperiod), tuple(period)))


def sgap_shift(gaps, cofinite_from=None) -> Shift:
    return make_shift(SGapSpec(tuple(gaps), cofinite_from))


def bounded_density(g) -> Shift:
    if not isinstance(g, MistakeFunction):
        g = MistakeFunction.parse(str(g))
    return make_shift(BoundedDensitySpec(g))


def at_most_one_one() -> Shift:
    return make_shift(AtMostOneOneSpec())


def coded_shift(alphabet, generators, horizon=None, complete=True) -> Shift:
    alpha = alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet))
    return make_shift(CodedSpec(alpha, tuple(alpha.parse(w) for w in generators), horizon, complete))


def product_shift(x, y) -> Shift:
    return make_shift(ProductSpec(make_shift(x).spec, make_shift(y).spec))


def factor_shift(base, radius: int, rule, budget: int = 200_000) -> Shift:
    """Factor by a block map given as a dict of windows or a callable on windows."""
    from .language import enumerate_language

    base = make_shift(base)
    if callable(rule):
        domain = enumerate_language(base, 2 * radius + 1).words
        table = {w: str(rule(w, base.alphabet)) for w in domain}
    else:
        table = {base.alphabet.parse(k) if not isinstance(k, tuple) else k: str(v) for k, v in rule.items()}
    return make_shift(FactorSpec(base.spec, radius, tuple(table.items()), budget))


def sum_map(window, alphabet) -> int:
    """Letter-to-letter map on a product alphabet: (i, j) -> i + j."""
    (c,) = window
    a, b = alphabet.symbols[c].split(":")
    return int(a) + int(b)


def window_count_map(cap: int):
    """Block map sending a window to its number of ones, capped at ``cap``."""

    def rule(window, alphabet):
        return min(sum(int(alphabet.symbols[c]) for c in window), cap)

    return rule
