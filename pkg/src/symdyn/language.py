"""Language enumeration, counting and extendable cores."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import _kernels
from .words import (
    InputError,
    InsufficientDepthError,
    Membership,
    Word,
    WordCollection,
)
from .zoo import BoundedDensityShift, Shift, make_shift, reflect

IN, OUT, UNKNOWN = Membership.IN, Membership.OUT, Membership.UNKNOWN


def contains(shift, w) -> Membership:
    shift = make_shift(shift)
    if isinstance(w, str):
        w = shift.alphabet.parse(w)
    return shift.contains(tuple(w))


@dataclass(frozen=True)
class LanguageLevel:
    """The words of one length: certain members plus Unknown candidates."""

    n: int
    words: tuple
    unknown: tuple = ()

    @property
    def count(self) -> int:
        return len(self.words)

    @property
    def possible(self) -> int:
        return len(self.words) + len(self.unknown)

    @property
    def approximate(self) -> bool:
        return bool(self.unknown)


def _dfs(shift: Shift, root: Word, n: int, out_in: list, out_unknown: list):
    q = shift.alphabet.size
    stack = [(root, shift.contains(root) if root else IN)]
    while stack:
        w, m = stack.pop()
        if len(w) == n:
            (out_in if m is IN else out_unknown).append(w)
            continue
        for a in reversed(range(q)):
            c = w + (a,)
            mc = shift.extends(c) if m is IN else shift.contains(c)
            if mc is not OUT:
                stack.append((c, mc))


def enumerate_language(shift, n: int, threads: int = 1) -> LanguageLevel:
    """L_n(X) in canonical order by depth-first extension with pruning.

    With ``threads > 1`` the search is split over prefix classes and the
    pieces are merged in prefix order, so the output does not depend on
    scheduling.
    """
    shift = make_shift(shift)
    if n < 0:
        raise InputError("length must be >= 0")
    if shift.is_empty:
        return LanguageLevel(n, ())
    if threads <= 1 or n < 2:
        ins, unk = [], []
        _dfs(shift, (), n, ins, unk)
        return LanguageLevel(n, tuple(ins), tuple(unk))
    q = shift.alphabet.size
    depth = 1
    while depth < n and q ** depth < 4 * threads:
        depth += 1
    roots = [r for r in itertools.product(range(q), repeat=depth) if shift.contains(r) is not OUT]

    def job(root):
        ins, unk = [], []
        _dfs(shift, root, n, ins, unk)
        return ins, unk

    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(job, roots))
    ins = tuple(w for p in parts for w in p[0])
    unk = tuple(w for p in parts for w in p[1])
    return LanguageLevel(n, ins, unk)


def context_classes(shift, n: int, start: Word = ()) -> dict:
    """Group the words ``start + z`` (|z| = n) by right context.

    Returns {key: (representative, multiplicity)}. Valid for exact oracles:
    words sharing a key have the same followers, so counts propagate.
    """
    shift = make_shift(shift)
    if shift.contains(start) is not IN:
        return {}
    q = shift.alphabet.size
    cur = {shift.right_context(start): (start, 1)}
    for _ in range(n):
        nxt = {}
        for rep, mult in cur.values():
            for a in range(q):
                c = rep + (a,)
                if shift.extends(c) is IN:
                    key = shift.right_context(c)
                    if key in nxt:
                        r0, m0 = nxt[key]
                        nxt[key] = (r0, m0 + mult)
                    else:
                        nxt[key] = (c, mult)
        cur = nxt
    return cur


def extension_counts(shift, start: Word, depth: int) -> list:
    """[#{start z in L : |z| = j} for j = 0..depth]."""
    shift = make_shift(shift)
    if not shift.exact:
        raise InputError("class counting needs an exact oracle")
    if shift.contains(start) is not IN:
        return [0] * (depth + 1)
    q = shift.alphabet.size
    counts = [1]
    cur = {shift.right_context(start): (start, 1)}
    for _ in range(depth):
        nxt = {}
        total = 0
        for rep, mult in cur.values():
            for a in range(q):
                c = rep + (a,)
                if shift.extends(c) is IN:
                    total += mult
                    key = shift.right_context(c)
                    if key in nxt:
                        nxt[key] = (nxt[key][0], nxt[key][1] + mult)
                    else:
                        nxt[key] = (c, mult)
        counts.append(total)
        cur = nxt
    return counts


@dataclass(frozen=True)
class Counts:
    """|L_n| for n = 0..n_max; ``possible`` adds Unknown words for horizon-limited oracles."""

    counts: tuple
    possible: tuple
    method: str

    @property
    def approximate(self) -> bool:
        return self.counts != self.possible


def language_counts(shift, n_max: int, cache=None, threads: int = 1) -> Counts:
    shift = make_shift(shift)
    if cache is not None:
        hit = cache.get_counts(shift.fingerprint, n_max)
        if hit is not None:
            return Counts(tuple(hit), tuple(hit), "cache")
    if shift.is_empty:
        z = (1,) + (0,) * n_max
        return Counts(z, z, "empty")
    dfa = shift.as_dfa()
    if dfa is not None:
        trans, start = dfa
        counts, _ = _kernels.dfa_level_counts(trans, start, n_max, ())
        res = Counts(tuple(counts), tuple(counts), "dfa")
    elif isinstance(shift, BoundedDensityShift):
        counts = _kernels.bd_level_counts(shift.gtab(n_max), n_max)
        res = Counts(tuple(counts), tuple(counts), "window-kernel")
    elif shift.exact:
        counts = extension_counts(shift, (), n_max)
        res = Counts(tuple(counts), tuple(counts), "context-classes")
    else:
        levels = [enumerate_language(shift, n, threads) for n in range(n_max + 1)]
        res = Counts(tuple(lv.count for lv in levels), tuple(lv.possible for lv in levels), "enumeration")
    if cache is not None and not res.approximate:
        cache.put_counts(shift.fingerprint, n_max, res.counts)
    return res


def suffix_counts(shift, w: Word, n_max: int) -> list:
    """[|L_n ∩ L w| for n = 0..n_max] (words of length n ending with w)."""
    shift = make_shift(shift)
    w = tuple(w)
    dfa = shift.as_dfa()
    if dfa is not None:
        trans, start = dfa
        _, sc = _kernels.dfa_level_counts(trans, start, n_max, w)
        return list(sc)
    depth = n_max - len(w)
    if depth < 0:
        return [0] * (n_max + 1)
    ext = extension_counts(reflect(shift), w[::-1], depth)
    return [0] * len(w) + ext


def language_collection(shift, depth=None) -> WordCollection:
    """The language as a predicate-backed factorial collection."""
    shift = make_shift(shift)
    return WordCollection(
        shift.alphabet,
        predicate=lambda w: shift.contains(w) is IN,
        factorial=True,
        depth=depth,
        extends_right=lambda w: shift.extends(w) is IN,
        extends_left=lambda w: shift.extends_left(w) is IN,
        name=shift.name,
    )


def materialize(shift, depth: int, threads: int = 1) -> WordCollection:
    shift = make_shift(shift)
    levels = {n: enumerate_language(shift, n, threads).words for n in range(depth + 1)}
    return WordCollection(shift.alphabet, levels=levels, factorial=True, depth=depth, name=shift.name)


# ------------------------------------------------------------ extendable cores

def _extend(D: WordCollection, w: Word, j: int, left: bool):
    """Yield words extending w by j symbols on one side, staying inside D."""
    q = D.alphabet.size
    stack = [w]
    while stack:
        x = stack.pop()
        if len(x) == len(w) + j:
            yield x
            continue
        for a in reversed(range(q)):
            c = (a,) + x if left else x + (a,)
            ok = D.extends_left(c) if left else D.extends_right(c)
            if ok:
                stack.append(c)


def biextends(D: WordCollection, w: Word, j: int) -> bool:
    """Is there u, v of length j with u w v in D? (D factorial.)"""
    for uw in _extend(D, w, j, left=True):
        for _ in _extend(D, uw, j, left=False):
            return True
    return False


def extendable_core(D: WordCollection, n: int, k: int) -> tuple:
    """D_n^{(kn)} = {w in D_n : u w v in D for some u, v in D_{kn}}, canonical order."""
    if not D.factorial:
        raise InputError("extendable cores are defined for factorial collections")
    if k < 0:
        raise InputError("multiplier must be >= 0")
    if D.depth is not None and n + 2 * k * n > D.depth:
        raise InsufficientDepthError(
            f"{D.name} is materialized to length {D.depth}; the core D_{n}^({k * n}) needs {n + 2 * k * n}"
        )
    return tuple(w for w in D.level(n) if biextends(D, w, k * n))


@dataclass(frozen=True)
class CoreChain:
    n: int
    sizes: tuple  # |D_n^{(kn)}| for k = 0, 1, ...
    core: tuple
    stabilized_at: int | None  # first k with D^{(kn)} = D^{((k+1)n)}

    @property
    def nested(self) -> bool:
        return all(b <= a for a, b in zip(self.sizes, self.sizes[1:]))


def core_chain(D: WordCollection, n: int, k_max: int) -> CoreChain:
    """Iterate k = 0..k_max until the core stops shrinking."""
    prev = None
    sizes = []
    stab = None
    for k in range(k_max + 1):
        try:
            cur = extendable_core(D, n, k)
        except InsufficientDepthError:
            if prev is None:
                raise
            break
        sizes.append(len(cur))
        if prev is not None and not set(cur) <= set(prev):
            raise AssertionError("extendable cores are not nested")
        if prev is not None and cur == prev:
            stab = k - 1
            break
        prev = cur
    return CoreChain(n, tuple(sizes), prev if stab is None else cur, stab)


def core_entropy(D: WordCollection, n: int, k_max: int = 3):
    """(ln |D_n^{(kn)}| / n at the stabilized k, chain) for a factorial collection."""
    chain = core_chain(D, n, k_max)
    size = len(chain.core)
    est = math.log(size) / n if size and n else None
    return est, chain
