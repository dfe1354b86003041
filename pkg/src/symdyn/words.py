"""Alphabets, words and word collections.

A word is a tuple of symbol indices into an :class:`Alphabet`; the empty
tuple is the empty word. Index order is the canonical (lexicographic)
order used everywhere else.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

Word = tuple


class SymdynError(Exception):
    """Base class for errors raised by this package."""


class InputError(SymdynError, ValueError):
    """Bad user input: unknown symbol, malformed word, invalid parameter."""


class ConstructionError(SymdynError, ValueError):
    """A shift description violates its invariants."""


class InsufficientDepthError(SymdynError):
    """A materialized collection is too shallow for the requested query."""


class BudgetExceededError(SymdynError):
    """A search or enumeration would exceed its configured budget."""


class Membership(enum.Enum):
    IN = "in"
    OUT = "out"
    UNKNOWN = "unknown"


_INT_RE = re.compile(r"^-?\d+$")


def _natural_key(s: str):
    return (0, int(s), "") if _INT_RE.match(s) else (1, 0, s)


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple
    labels: tuple | None = None
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(str(s) for s in self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise ConstructionError("alphabet must have at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise ConstructionError(f"alphabet symbols are not distinct: {symbols}")
        if self.labels is not None:
            labels = tuple(int(x) for x in self.labels)
            if len(labels) != len(symbols):
                raise ConstructionError("one label per symbol is required")
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    @classmethod
    def of(cls, *symbols) -> "Alphabet":
        return cls(tuple(symbols))

    @classmethod
    def range(cls, k: int) -> "Alphabet":
        return cls(tuple(str(i) for i in range(k)))

    @classmethod
    def sorted_naturally(cls, symbols: Iterable[str]) -> "Alphabet":
        return cls(tuple(sorted(set(symbols), key=_natural_key)))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def index(self, symbol) -> int:
        try:
            return self._index[str(symbol)]
        except KeyError:
            raise InputError(f"symbol {symbol!r} is not in the alphabet {self.symbols}") from None

    def label(self, i: int) -> int:
        if self.labels is None:
            raise InputError("alphabet has no integer labels")
        return self.labels[i]

    @property
    def compact(self) -> bool:
        """True when every symbol is one character, so words can be written unspaced."""
        return all(len(s) == 1 for s in self.symbols)

    def parse(self, text) -> Word:
        """Parse a word written as symbols separated by spaces (or unspaced if compact)."""
        if isinstance(text, (tuple, list)):
            return tuple(self.index(s) for s in text)
        text = str(text).strip()
        if text in ("", "ε", "-"):
            return ()
        if any(ch.isspace() for ch in text) or "," in text:
            parts = [p for p in re.split(r"[\s,]+", text) if p]
        elif self.compact:
            parts = list(text)
        else:
            parts = [text]
        return tuple(self.index(p) for p in parts)

    def format(self, word: Word) -> str:
        if not word:
            return "ε"
        sep = "" if self.compact else " "
        return sep.join(self.symbols[a] for a in word)

    def check(self, word: Word) -> Word:
        word = tuple(word)
        k = len(self.symbols)
        for a in word:
            if not isinstance(a, int) or not 0 <= a < k:
                raise InputError(f"index {a!r} is not a valid symbol index (alphabet size {k})")
        return word

    def all_words(self, n: int) -> Iterator[Word]:
        """Every word of length n in canonical order."""
        import itertools

        return itertools.product(range(self.size), repeat=n)


def hamming(u: Word, v: Word) -> int:
    if len(u) != len(v):
        raise InputError("Hamming distance needs words of equal length")
    return sum(1 for a, b in zip(u, v) if a != b)


def occurrences(word: Word, sub: Word) -> list[int]:
    """Start positions of every (possibly overlapping) occurrence of sub."""
    k = len(sub)
    return [i for i in range(len(word) - k + 1) if word[i : i + k] == sub]


def contains_subword(word: Word, sub: Word) -> bool:
    k = len(sub)
    if k == 0:
        return True
    return any(word[i : i + k] == sub for i in range(len(word) - k + 1))


def disjoint_occurrences(word: Word, sub: Word) -> int:
    """Greedy leftmost count of pairwise disjoint occurrences of sub."""
    k = len(sub)
    if k == 0:
        raise InputError("cannot count occurrences of the empty word")
    count = 0
    i = 0
    n = len(word)
    while i + k <= n:
        if word[i : i + k] == sub:
            count += 1
            i += k
        else:
            i += 1
    return count


def subwords(word: Word) -> Iterator[Word]:
    n = len(word)
    for i in range(n):
        for j in range(i + 1, n + 1):
            yield word[i:j]


class WordCollection:
    """A collection D of words with D_n available per length.

    Either materialized up to ``depth`` (``levels[n]`` is the sorted tuple
    of members of length n), or backed by a membership predicate with no
    depth limit. Predicate-backed collections may supply incremental
    ``extends_right``/``extends_left`` hooks: given that ``w[:-1]`` (resp.
    ``w[1:]``) is a member, decide whether ``w`` is.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        levels: dict | None = None,
        predicate: Callable[[Word], bool] | None = None,
        factorial: bool = False,
        depth: int | None = None,
        extends_right: Callable[[Word], bool] | None = None,
        extends_left: Callable[[Word], bool] | None = None,
        name: str = "D",
    ):
        if (levels is None) == (predicate is None):
            raise InputError("give exactly one of levels or predicate")
        self.alphabet = alphabet
        self.factorial = factorial
        self.name = name
        self._levels = None
        self._sets = None
        if levels is not None:
            self._levels = {}
            for n, words in levels.items():
                ws = tuple(sorted(set(tuple(w) for w in words)))
                for w in ws:
                    if len(w) != n:
                        raise InputError(f"member {w} filed under length {n}")
                self._levels[n] = ws
            self._sets = {n: frozenset(ws) for n, ws in self._levels.items()}
            self.depth = max(self._levels) if depth is None else depth
            for n in range(self.depth + 1):
                self._levels.setdefault(n, ())
                self._sets.setdefault(n, frozenset())
        else:
            self.depth = depth
        self._predicate = predicate
        self._extends_right = extends_right
        self._extends_left = extends_left

    @property
    def materialized(self) -> bool:
        return self._levels is not None

    def require_depth(self, n: int):
        if self.depth is not None and n > self.depth:
            raise InsufficientDepthError(
                f"{self.name} is materialized to length {self.depth}, but length {n} is needed"
            )

    def __contains__(self, w) -> bool:
        w = tuple(w)
        self.require_depth(len(w))
        if self._sets is not None:
            return w in self._sets[len(w)]
        return bool(self._predicate(w))

    def extends_right(self, w: Word) -> bool:
        if self._extends_right is not None:
            self.require_depth(len(w))
            return bool(self._extends_right(w))
        return w in self

    def extends_left(self, w: Word) -> bool:
        if self._extends_left is not None:
            self.require_depth(len(w))
            return bool(self._extends_left(w))
        return w in self

    def level(self, n: int) -> tuple:
        """D_n in canonical order."""
        self.require_depth(n)
        if self._levels is not None:
            return self._levels[n]
        if not self.factorial:
            raise InputError("enumerating a predicate-backed collection needs it to be factorial")
        out = []
        stack = [()]
        k = self.alphabet.size
        # depth-first in reverse so that pops come out in canonical order
        while stack:
            w = stack.pop()
            if len(w) == n:
                out.append(w)
                continue
            for a in reversed(range(k)):
                c = w + (a,)
                if self.extends_right(c):
                    stack.append(c)
        return tuple(out)

    def count(self, n: int) -> int:
        return len(self.level(n))

    def check_factorial(self, n_max: int | None = None) -> list:
        """Return members with a subword outside the collection (empty if factorial)."""
        n_max = self.depth if n_max is None else n_max
        bad = []
        for n in range(1, n_max + 1):
            for w in self.level(n):
                if w[1:] not in self or w[:-1] not in self:
                    bad.append(w)
        return bad

    @classmethod
    def from_words(cls, alphabet: Alphabet, words: Iterable[Word], factorial=False, depth=None, name="D"):
        levels: dict = {}
        for w in words:
            w = tuple(w)
            levels.setdefault(len(w), []).append(w)
        if not levels:
            levels = {0: []}
        return cls(alphabet, levels=levels, factorial=factorial, depth=depth, name=name)
