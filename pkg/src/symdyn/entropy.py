"""Entropy estimates, Perron data and Parry measures, periodic orbits, cylinder measures."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .language import enumerate_language, language_counts, suffix_counts
from .words import Alphabet, InputError, SymdynError, Word
from .zoo import SFT, FullShift, Shift, make_shift

POWER_TOL = 1e-12


class ReducibleError(SymdynError):
    """The SFT graph has more than one strongly connected component."""

    def __init__(self, components):
        self.components = components
        shown = "; ".join("{" + ", ".join("".join(map(str, s)) for s in c) + "}" for c in components)
        super().__init__(f"SFT is reducible; components: {shown}")


# ------------------------------------------------------------------ entropy

@dataclass
class EntropyReport:
    rows: list  # (n, count, estimate, running infimum)
    exact: float | None
    subadditivity_violations: list
    approximate: bool
    method: str

    @property
    def estimates(self) -> list:
        return [r[2] for r in self.rows]

    def csv_rows(self) -> list:
        out = []
        for n, c, est, inf in self.rows:
            if self.exact is not None:
                bound, ok = self.exact, est >= self.exact - 1e-12
            else:
                bound, ok = inf, not any(v[2] == n for v in self.subadditivity_violations)
            out.append({"n": n, "count": c, "estimate": est, "bound": bound, "pass": ok})
        return out


def _log(c: int) -> float:
    return math.log(c) if c > 0 else -math.inf


def entropy_report(shift, n_max: int, cache=None, threads: int = 1) -> EntropyReport:
    """Per-n values (1/n) ln|L_n| with their running infimum and a subadditivity audit."""
    shift = make_shift(shift)
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    res = language_counts(shift, n_max, cache=cache, threads=threads)
    counts = res.counts
    rows = []
    inf = math.inf
    for n in range(1, n_max + 1):
        est = _log(counts[n]) / n
        inf = min(inf, est)
        rows.append((n, counts[n], est, inf))
    viol = []
    for a in range(1, n_max):
        for b in range(a, n_max - a + 1):
            if _log(counts[a + b]) > _log(counts[a]) + _log(counts[b]) + 1e-12:
                viol.append((a, b, a + b))
    return EntropyReport(rows, exact_entropy(shift), viol, res.approximate, res.method)


def exact_entropy(shift) -> float | None:
    """ln of the spectral radius for SFTs (and full shifts); None for other families."""
    shift = make_shift(shift)
    if isinstance(shift, FullShift):
        return math.log(shift.alphabet.size)
    if isinstance(shift, SFT):
        if shift.is_empty:
            return -math.inf
        A = shift.adjacency().astype(float)
        comps = shift.components()
        if len(comps) == 1:
            return math.log(perron(A).value)
        return math.log(max(abs(np.linalg.eigvals(A))))
    return None


# ------------------------------------------------------------- Perron data

@dataclass
class PerronData:
    value: float
    right: np.ndarray
    left: np.ndarray
    residual: float
    iterations: int


def _power(M: np.ndarray, tol: float, max_iter: int):
    v = np.ones(M.shape[0])
    v /= v.sum()
    for it in range(1, max_iter + 1):
        w = M @ v
        w /= w.sum()
        if np.max(np.abs(w - v)) < tol:
            return w, it
        v = w
    return v, max_iter


def perron(A: np.ndarray, tol: float = POWER_TOL, max_iter: int = 1_000_000) -> PerronData:
    """Perron value and vectors of an irreducible nonnegative matrix.

    Iterates on I + A (primitive whenever A is irreducible) from the
    all-ones vector.
    """
    A = np.asarray(A, dtype=float)
    M = np.eye(A.shape[0]) + A
    r, it1 = _power(M, tol, max_iter)
    l, it2 = _power(M.T, tol, max_iter)
    lam = float(l @ A @ r / (l @ r))
    res = max(float(np.max(np.abs(A @ r - lam * r))), float(np.max(np.abs(l @ A - lam * l))))
    return PerronData(lam, r, l, res, max(it1, it2))


@dataclass
class TransferMatrix:
    states: tuple
    matrix: np.ndarray
    perron: PerronData

    @property
    def value(self) -> float:
        return self.perron.value


def transfer_matrix(sft_shift) -> TransferMatrix:
    shift = make_shift(sft_shift)
    if isinstance(shift, FullShift):
        raise InputError("use an SFT with an empty forbidden list for the full shift's transfer matrix")
    if not isinstance(shift, SFT):
        raise InputError("transfer matrices are defined for SFTs")
    if shift.is_empty:
        raise InputError("the SFT is empty")
    comps = shift.components()
    if len(comps) > 1:
        raise ReducibleError(comps)
    A = shift.adjacency()
    return TransferMatrix(shift.states, A, perron(A))


def path_counts(shift, n: int):
    """(|L_n| from walks, |Per_n| from closed walks) on the SFT graph, as exact integers.

    States are words of length K', so a word of length n >= K' is a walk
    with n - K' edges and a period-n point is a closed walk with n edges.
    """
    shift = make_shift(shift)
    A = shift.adjacency().astype(object)
    K = shift.order
    if n < K:
        raise InputError(f"walk counts need n >= {K}")

    def power(e):
        P = np.identity(A.shape[0], dtype=object)
        for _ in range(e):
            P = P.dot(A)
        return P

    return int(power(n - K).sum()), int(np.trace(power(n)))


# -------------------------------------------------------- cylinder measures

class CylinderMeasure:
    """w -> mu([w]); ``exact`` measures return Fractions."""

    def __init__(self, alphabet: Alphabet, evaluator, kind: str, exact: bool, meta=None):
        self.alphabet = alphabet
        self._eval = evaluator
        self.kind = kind
        self.exact = exact
        self.meta = dict(meta or {})

    def __call__(self, w) -> float | Fraction:
        if isinstance(w, str):
            w = self.alphabet.parse(w)
        return self._eval(tuple(w))

    def distribution(self, k: int) -> dict:
        """Nonzero cylinder values at depth k, in canonical order."""
        out = {}
        for w in self.alphabet.all_words(k):
            v = self(w)
            if v:
                out[w] = v
        return out

    def normalization_error(self, k: int):
        total = sum(self(w) for w in self.alphabet.all_words(k))
        return abs(total - 1)

    def consistency_error(self, k: int):
        """max over |w| = k of |mu[w] - sum_a mu[wa]|."""
        worst = 0
        for w in self.alphabet.all_words(k):
            s = sum(self(w + (a,)) for a in range(self.alphabet.size))
            worst = max(worst, abs(self(w) - s))
        return worst

    def shift_defect(self, k: int):
        """Total variation between mu and its push-forward at depth k."""
        tot = 0
        for w in self.alphabet.all_words(k):
            pushed = sum(self((a,) + w) for a in range(self.alphabet.size))
            tot += abs(self(w) - pushed)
        return tot / 2


def tv_distance(mu: CylinderMeasure, nu: CylinderMeasure, k: int) -> float:
    return float(sum(abs(float(mu(w)) - float(nu(w))) for w in mu.alphabet.all_words(k)) / 2)


@dataclass
class ParryData:
    transfer: TransferMatrix
    stationary: np.ndarray
    transition: np.ndarray
    measure: CylinderMeasure
    entropy: float


def sft_mme(sft_shift) -> ParryData:
    """Parry measure of an irreducible SFT, with its Markov entropy."""
    shift = make_shift(sft_shift)
    tm = transfer_matrix(shift)
    A = tm.matrix.astype(float)
    r, l, lam = tm.perron.right, tm.perron.left, tm.perron.value
    pi = l * r / (l @ r)
    P = A * r[None, :] / (lam * r[:, None])
    K = shift.order
    index = shift.state_index

    def evaluate(w):
        if len(w) < K:
            return float(sum(pi[i] for i, s in enumerate(shift.states) if s[: len(w)] == w))
        s = index.get(w[:K])
        if s is None:
            return 0.0
        val = pi[s]
        for a in w[K:]:
            t = shift.next[s, a]
            if t < 0:
                return 0.0
            val *= P[s, t]
            s = t
        return float(val)

    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(P > 0, np.log(np.where(P > 0, P, 1.0)), 0.0)
    h = float(-(pi[:, None] * P * logs).sum())
    mu = CylinderMeasure(shift.alphabet, evaluate, "parry", False, {"perron_value": lam})
    return ParryData(tm, pi, P, mu, h)


# ---------------------------------------------------------- periodic points

@dataclass
class PeriodicPoints:
    n: int
    words: tuple
    exact: bool

    @property
    def count(self) -> int:
        return len(self.words)


def periodic_points(shift, n: int) -> PeriodicPoints:
    """Points x with sigma^n x = x, each given by x[0, n)."""
    shift = make_shift(shift)
    if n < 1:
        raise InputError("period must be >= 1")
    exact = True
    pts = []
    for w in enumerate_language(shift, n).words:
        ok, ex = shift.periodic_ok(w)
        exact = exact and ex
        if ok:
            pts.append(w)
    return PeriodicPoints(n, tuple(pts), exact)


def periodic_orbit_measure(shift, n: int) -> CylinderMeasure:
    """Uniform measure on Per_n, exact rationals."""
    shift = make_shift(shift)
    pts = periodic_points(shift, n)
    if not pts.words:
        raise InputError(f"no points of period {n}")
    total = len(pts.words)
    memo = {}

    def evaluate(w):
        L = len(w)
        if L not in memo:
            memo[L] = Counter(tuple(p[i % n] for i in range(L)) for p in pts.words)
        return Fraction(memo[L].get(w, 0), total)

    return CylinderMeasure(shift.alphabet, evaluate, "periodic-orbit", True, {"n": n, "points": total, "exact_points": pts.exact})


def empirical_measure(words, k: int, alphabet: Alphabet) -> CylinderMeasure:
    """Average frequency of cylinders over window positions 0..n-k of all words.

    Every depth uses the same window positions, so the measure is exactly
    consistent up to depth k.
    """
    words = [tuple(w) for w in words]
    if not words:
        raise InputError("empirical measure of an empty word set")
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise InputError("empirical measures need words of one length")
    if k < 1 or k > n - k:
        raise InputError("need 1 <= k <= n - k")
    windows = Counter(w[i : i + k] for w in words for i in range(n - k + 1))
    total = len(words) * (n - k + 1)
    prefix = Counter()
    for win, c in windows.items():
        for j in range(k + 1):
            prefix[win[:j]] += c

    def evaluate(u):
        if len(u) > k:
            raise InputError(f"empirical measure is defined up to depth {k}")
        return Fraction(prefix.get(u, 0), total)

    return CylinderMeasure(alphabet, evaluate, "empirical", True, {"n": n, "k": k, "words": len(words)})


# ----------------------------------------------------------------- audits

@dataclass
class BoundAudit:
    m: int
    h: float
    h_exact: bool
    rows: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    suffix_word: str | None = None
    epsilon: float | None = None
    epsilon_rows: list = field(default_factory=list)
    gibbs_q1: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        ok = not self.violations
        if self.epsilon is not None:
            ok = ok and self.epsilon > 0
        return ok


def bound_audit(shift, m: int, h: float | None, n_max: int, w=None, measure=None, gibbs_depth=None) -> BoundAudit:
    """Check |L_n| <= |A|^{2m} n^{2m} e^{nh}; fit the suffix-count constant and the Gibbs constant.

    ``h=None`` uses the exact SFT value when available, else the running
    infimum of the estimates (flagged as not exact).
    """
    shift = make_shift(shift)
    h_exact = True
    if h is None:
        h = exact_entropy(shift)
        if h is None:
            rep = entropy_report(shift, n_max)
            h = rep.rows[-1][3]
            h_exact = False
    counts = language_counts(shift, n_max).counts
    q = shift.alphabet.size
    audit = BoundAudit(m, h, h_exact)
    for n in range(1, n_max + 1):
        log_bound = 2 * m * math.log(q) + 2 * m * math.log(n) + n * h
        ok = _log(counts[n]) <= log_bound + 1e-9 * max(1.0, abs(log_bound))
        audit.rows.append({"n": n, "count": counts[n], "estimate": _log(counts[n]) / n, "bound": math.exp(log_bound), "pass": ok})
        if not ok:
            audit.violations.append(n)
    if w is not None:
        if isinstance(w, str):
            w = shift.alphabet.parse(w)
        w = tuple(w)
        audit.suffix_word = shift.alphabet.format(w)
        sc = suffix_counts(shift, w, n_max)
        ratios = []
        for n in range(max(1, len(w)), n_max + 1):
            ratio = sc[n] * math.sqrt(n) / math.exp(n * h) if sc[n] else 0.0
            ratios.append(ratio)
            audit.epsilon_rows.append({"n": n, "suffix_count": sc[n], "ratio": ratio})
        audit.epsilon = min(ratios) if ratios else None
    if measure is not None:
        depth = gibbs_depth or n_max
        for k in range(1, depth + 1):
            best = 0.0
            for u in enumerate_language(shift, k).words:
                best = max(best, float(measure(u)) * math.exp(k * h))
            audit.gibbs_q1.append(best)
    return audit


def union_counts(C, D, n: int) -> dict:
    """|(C u D)_n| against |C_n| + |D_n| and the per-n estimates, for materialized collections."""
    c, d = set(C.level(n)), set(D.level(n))
    u = len(c | d)
    est = lambda x: _log(x) / n if n else 0.0
    return {
        "n": n,
        "union": u,
        "sum": len(c) + len(d),
        "estimate_union": est(u),
        "estimate_max": max(est(len(c)), est(len(d))),
    }
