"""Gluing words, the prefix/good/suffix decomposition and measure centers.

The construction starts from a pair (y, v0) realizing the worst left gluing
cost i, then extends w to the left and v to the right while the set

    D(w, v) = {y' in B_i(y) : w y' v in L}

keeps shrinking. Once it stops, any y' left in D glues universally:
x u in L and z in v L imply x u' z in L, with u = w y and u' = w y'.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .language import enumerate_language
from .mistake import MistakeFunction
from .properties import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    Verdict,
    as_mistake,
    check_irreducible,
    estimate_i,
    hamming_ball,
)
from .words import (
    ConstructionError,
    InputError,
    Membership,
    Word,
    disjoint_occurrences,
    occurrences,
)
from .zoo import Shift, make_shift

IN, OUT = Membership.IN, Membership.OUT

__all__ = [
    "GluingData",
    "Decomposition",
    "ObstructionReport",
    "ClosureReport",
    "MeasureCenter",
    "build_gluing",
    "check_gluing_identity",
    "classify_word",
    "obstruction_entropies",
    "check_closure_conditions",
    "measure_center_approx",
    "check_irreducible",
]


def _in(shift: Shift, w: Word) -> bool:
    return shift.contains(w) is IN


def _exact(shift: Shift, what: str):
    if not shift.exact:
        raise InputError(f"{what} needs an exact membership oracle")


# ------------------------------------------------------------------ gluing

@dataclass
class GluingData:
    i: int
    y: Word
    v0: Word
    w: Word  # the stabilized left extension w^(k)
    v: Word
    y_prime: Word
    D: tuple
    chain: tuple  # (w, v, D) at each step, starting from (empty, v0)
    stabilized: bool
    horizon: int
    status: str = HOLDS
    reason: str = ""

    @property
    def u(self) -> Word:
        return self.w + self.y

    @property
    def u_prime(self) -> Word:
        return self.w + self.y_prime

    @property
    def nested(self) -> bool:
        sets = [set(d) for _, _, d in self.chain]
        return all(b <= a and b for a, b in zip(sets, sets[1:])) and bool(sets[0])

    def describe(self, shift) -> dict:
        f = make_shift(shift).alphabet.format
        return {
            "i": self.i,
            "y": f(self.y),
            "v0": f(self.v0),
            "u": f(self.u),
            "u_prime": f(self.u_prime),
            "v": f(self.v),
            "D": [f(d) for d in self.D],
            "steps": len(self.chain) - 1,
            "stabilized": self.stabilized,
            "status": self.status,
        }


def _d_set(shift, ball, w, v) -> tuple:
    return tuple(yp for yp in ball if _in(shift, w + yp + v))


def _left_ext(shift: Shift, w: Word, y: Word, depth: int) -> list:
    """Words x with 1 <= |x| <= depth and x w y in L, shortest first, canonical."""
    q = shift.alphabet.size
    out = []
    layer = [()]
    for _ in range(depth):
        nxt = []
        for x in layer:
            for a in range(q):
                c = (a,) + x
                if shift.extends_left(c + w + y) is IN:
                    nxt.append(c)
        nxt.sort(key=lambda t: t)
        out.extend(nxt)
        layer = nxt
    return out


def _right_ext(shift: Shift, v: Word, depth: int) -> list:
    q = shift.alphabet.size
    out = []
    layer = [()]
    for _ in range(depth):
        nxt = []
        for z in layer:
            for a in range(q):
                c = z + (a,)
                if shift.extends(v + c) is IN:
                    nxt.append(c)
        out.extend(nxt)
        layer = nxt
    return out


def build_gluing(shift, horizon, i_horizon=None) -> GluingData:
    """Refine (w, v) while D(w, v) shrinks; extensions up to ``horizon`` per side per step.

    Candidate pairs are tried shortest total extension first, then
    canonically. The result is ``stabilized`` when no extension within the
    horizon shrinks D further, and Inconclusive if the chain leaves D empty
    (which means the worst gluing cost was underestimated).
    """
    shift = make_shift(shift)
    _exact(shift, "build_gluing")
    H = int(horizon)
    if H < 1:
        raise InputError("horizon must be >= 1")
    i, arg = estimate_i(shift, i_horizon or (H, H))
    if arg is None:
        raise ConstructionError("the language has no nonempty words")
    if i == math.inf:
        raise ConstructionError("left gluing fails inside the horizon; the shift does not have LAS")
    i = int(i)
    y, v0 = arg
    ball = hamming_ball(shift, y, i)
    w, v = (), v0
    D = _d_set(shift, ball, w, v)
    chain = [(w, v, D)]
    stabilized = False
    while D:
        if len(D) == 1:
            stabilized = True
            break
        lefts = [()] + _left_ext(shift, w, y, H)
        rights = [()] + _right_ext(shift, v, H)
        pairs = sorted(
            ((x, z) for x in lefts for z in rights if x or z),
            key=lambda p: (len(p[0]) + len(p[1]), len(p[0]), p[0], p[1]),
        )
        for x, z in pairs:
            D2 = tuple(yp for yp in D if _in(shift, x + w + yp + v + z))
            if D2 != D:
                w, v, D = x + w, v + z, D2
                chain.append((w, v, D))
                break
        else:
            stabilized = True
            break
    if not D:
        return GluingData(i, y, v0, w, v, (), (), tuple(chain), False, H, INCONCLUSIVE,
                          "D became empty; the gluing cost at this horizon is too small")
    return GluingData(i, y, v0, w, v, D[0], D, tuple(chain), stabilized, H)


def _left_words(shift: Shift, suffix: Word, n: int) -> list:
    """All x with |x| <= n and x + suffix in L."""
    return [()] + _left_ext(shift, (), suffix, n)


def check_gluing_identity(shift, glue: GluingData, n: int) -> Verdict:
    """Exhaustively test: x u in L and z in vL with |x|, |z| - |v| <= n imply x u' z in L."""
    shift = make_shift(shift)
    u, up, v = glue.u, glue.u_prime, glue.v
    xs = _left_words(shift, u, n)
    zs = [v + t for t in [()] + _right_ext(shift, v, n)]
    count = 0
    for x in xs:
        for z in zs:
            count += 1
            if not _in(shift, x + up + z):
                f = shift.alphabet.format
                return Verdict("gluing", FAILS, (n,), witness={"x": f(x), "z": f(z)},
                               reason="x u' z is not in the language", details={"checked": count})
    return Verdict("gluing", HOLDS, (n,), details={"checked": count})


# ---------------------------------------------------------- decomposition

@dataclass(frozen=True)
class Decomposition:
    """``kind`` is G, CpGCs or B (G wins when it applies).

    ``in_b`` is membership in L minus C^p G C^s; the obstruction counts use it.
    """

    word: Word
    kind: str
    prefix: Word = ()
    core: Word = ()
    suffix: Word = ()
    in_cp: bool = False
    in_cs: bool = False
    in_g: bool = False
    in_b: bool = False

    @property
    def collections(self) -> tuple:
        return tuple(n for n, f in (("G", self.in_g), ("Cp", self.in_cp), ("Cs", self.in_cs), ("B", self.in_b)) if f)


def classify_word(shift, glue: GluingData, w) -> Decomposition:
    """Split w = x (v...) (u...) with x free of v and the tail holding u once.

    The cut takes the leftmost v and the rightmost u; that choice decomposes
    w exactly when any choice does.
    """
    shift = make_shift(shift)
    if isinstance(w, str):
        w = shift.alphabet.parse(w)
    w = tuple(w)
    u, v = glue.u, glue.v
    vpos = occurrences(w, v)
    upos = occurrences(w, u)
    in_cp = not vpos
    in_g = w[: len(v)] == v and _in(shift, w + u)
    in_cs = w[: len(u)] == u and len(upos) == 1
    split = None
    if vpos and upos and upos[-1] >= vpos[0] + len(v):
        p, r = vpos[0], upos[-1]
        split = (w[:p], w[p:r], w[r:])
    kind = "G" if in_g else ("CpGCs" if split else "B")
    if split:
        return Decomposition(w, kind, *split, in_cp=in_cp, in_cs=in_cs, in_g=in_g, in_b=False)
    return Decomposition(w, kind, prefix=w if in_cp else (), in_cp=in_cp, in_cs=in_cs, in_g=in_g, in_b=True)


@dataclass
class ObstructionReport:
    rows: list  # dicts with n, L, Cp, Cprime, Cs, B, C, bbound, bbound_ok
    entropy_estimate: float | None

    @property
    def bbound_ok(self) -> bool:
        return all(r["bbound_ok"] for r in self.rows)

    def estimate(self, key: str, n: int):
        c = self.rows[n][key]
        return math.log(c) / n if c > 0 and n > 0 else None


def obstruction_entropies(shift, glue: GluingData, n_max: int) -> ObstructionReport:
    """Count C^p, C', C^s, B and C = C^p u C^s u B per length by a full sweep."""
    shift = make_shift(shift)
    if not glue.u or not glue.v or not _in(shift, glue.v) or not _in(shift, glue.u):
        raise ConstructionError("gluing words must be nonempty language words")
    cp, cprime, rows = [], [], []
    for n in range(n_max + 1):
        words = enumerate_language(shift, n).words
        c = {"Cp": 0, "Cprime": 0, "Cs": 0, "B": 0, "C": 0}
        for w in words:
            d = classify_word(shift, glue, w)
            c["Cp"] += d.in_cp
            c["Cs"] += d.in_cs
            c["B"] += d.in_b
            c["C"] += d.in_cp or d.in_cs or d.in_b
            c["Cprime"] += not occurrences(w, glue.u)
        cp.append(c["Cp"])
        cprime.append(c["Cprime"])
        bound = cprime[n] + sum(cp[j] * cprime[n - j] for j in range(0, n - len(glue.u) + 1))
        rows.append({"n": n, "L": len(words), **c, "bbound": bound, "bbound_ok": c["B"] <= bound})
    last = rows[-1]
    h = math.log(last["L"]) / n_max if n_max > 0 and last["L"] > 0 else None
    return ObstructionReport(rows, h)


# ------------------------------------------------------ closure conditions

@dataclass
class ClosureReport:
    verdicts: dict  # "I", "IIIa", "IIIb" -> Verdict
    gcd: int
    L: int

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.verdicts.values())


def _random_word(shift: Shift, n: int, rng: random.Random) -> Word:
    q = shift.alphabet.size
    w = ()
    while len(w) < n:
        opts = [a for a in range(q) if shift.extends(w + (a,)) is IN]
        if not opts:
            raise ConstructionError("language word with no right extension")
        w = w + (rng.choice(opts),)
    return w


def _sample_point(shift: Shift, n: int, rng: random.Random) -> Word:
    """A window of a periodic point when a random seed word periodizes, else a random word."""
    p = _random_word(shift, rng.randint(1, max(1, n // 2)), rng)
    ok, exact = shift.periodic_ok(p)
    if ok and exact:
        return (p * (n // len(p) + 1))[:n]
    return _random_word(shift, n, rng)


def check_closure_conditions(shift, glue: GluingData, samples: int = 10000, seed: int = 0,
                             n: int = 8, point_length: int = 24) -> ClosureReport:
    """Test [I] on pairs from G_{<=n} and [IIIa]/[IIIb] with L = |v| on sampled points.

    A point is a window of ``point_length`` symbols; every index tuple in it
    whose hypotheses hold counts as one instance, until ``samples`` is met.
    """
    shift = make_shift(shift)
    u, up, v = glue.u, glue.u_prime, glue.v
    L = len(v)
    f = shift.alphabet.format
    memo = {}

    def in_g(w):
        if w not in memo:
            memo[w] = w[:L] == v and _in(shift, w + u)
        return memo[w]

    G = [w for k in range(L, n + 1) for w in enumerate_language(shift, k).words if in_g(w)]
    gcd = 0
    for w in G:
        gcd = math.gcd(gcd, len(w) + len(u))
    rng = random.Random(seed)
    horizon = (n, point_length)

    pairs = [(a, b) for a in G for b in G]
    if len(pairs) > samples:
        pairs = rng.sample(pairs, samples)
    verdicts = {}
    v1 = Verdict("I", HOLDS, horizon, details={"instances": len(pairs), "good_words": len(G)})
    for a, b in pairs:
        if not in_g(a + up + b):
            v1 = Verdict("I", FAILS, horizon, witness={"w": f(a), "w'": f(b)}, reason="w u' w' is not in G")
            break
    verdicts["I"] = v1

    counts = {"IIIa": 0, "IIIb": 0}
    fails = {}
    attempts = 0
    while min(counts.values()) < samples and len(fails) < 2:
        attempts += 1
        if attempts > 10 * samples or (attempts > 100 and not counts["IIIa"]):
            break
        x = _sample_point(shift, point_length, rng)
        N = len(x)
        g = [[in_g(x[i : k + 1]) for k in range(N)] for i in range(N)]
        for i in range(N):
            for k in range(i, N):
                if not g[i][k]:
                    continue
                for j in range(i, k - L + 1):
                    for l in range(k, N):
                        if not g[j][l]:
                            continue
                        counts["IIIa"] += 1
                        if not g[j][k] and "IIIa" not in fails:
                            fails["IIIa"] = {"x": f(x), "i": i, "j": j, "k": k, "l": l}
                        if any(g[a][l] for a in range(i + 1)):
                            counts["IIIb"] += 1
                            if not g[i][l] and "IIIb" not in fails:
                                fails["IIIb"] = {"x": f(x), "i": i, "j": j, "k": k, "l": l}
    for key in ("IIIa", "IIIb"):
        if key in fails:
            verdicts[key] = Verdict(key, FAILS, horizon, {"L": L}, fails[key], "closure implication fails")
        elif counts[key] == 0:
            verdicts[key] = Verdict(key, INCONCLUSIVE, horizon, {"L": L}, reason="no instance met the hypotheses")
        else:
            verdicts[key] = Verdict(key, HOLDS, horizon, {"L": L}, details={"instances": counts[key]})
    return ClosureReport(verdicts, gcd, L)


# ---------------------------------------------------------- measure center

@dataclass
class MeasureCenter:
    """Kept words per length; kept words are certified, flagged ones only unrefuted up to H."""

    H: int
    kept: dict  # n -> tuple of words
    flagged: dict
    witnesses: dict = field(default_factory=dict)  # kept word -> certifying w
    direction: str = "under"

    def counts(self) -> list:
        return [(n, len(self.kept[n]), len(self.flagged[n])) for n in sorted(self.kept)]


def _survival_witness(shift: Shift, u: Word, g: MistakeFunction, H: int):
    k = len(u)
    # powers first: they settle most survivors cheaply
    r = 1
    while r * k <= H:
        p = u * r
        if not _in(shift, p):
            break
        if disjoint_occurrences(p, u) >= g(len(p)) + 1:
            return p
        r += 1
    # layered search over (right context, unmatched tail) keeping the best count
    q = shift.alphabet.size
    layer = {(shift.right_context(()), ()): (0, ())}
    for ell in range(1, H + 1):
        nxt = {}
        need = g(ell) + 1
        for (_, tail), (cnt, rep) in layer.items():
            for a in range(q):
                c = rep + (a,)
                if shift.extends(c) is not IN:
                    continue
                t = tail + (a,)
                cc = cnt
                if t[-k:] == u:
                    cc, t = cnt + 1, ()
                elif len(t) >= k:
                    t = t[len(t) - k + 1 :]
                if cc >= need:
                    return c
                key = (shift.right_context(c), t)
                if key not in nxt or nxt[key][0] < cc:
                    nxt[key] = (cc, c)
        layer = nxt
    return None


def measure_center_approx(shift, g, H: int, n_max: int) -> MeasureCenter:
    """Keep u in L_n iff some w in L_{<=H} has at least g(|w|)+1 disjoint copies of u."""
    shift = make_shift(shift)
    _exact(shift, "measure_center_approx")
    g = as_mistake(g)
    kept, flagged, wit = {}, {}, {}
    for n in range(1, n_max + 1):
        ks, fs = [], []
        for u in enumerate_language(shift, n).words:
            w = _survival_witness(shift, u, g, H)
            if w is None:
                fs.append(u)
            else:
                ks.append(u)
                wit[u] = w
        kept[n], flagged[n] = tuple(ks), tuple(fs)
    return MeasureCenter(H, kept, flagged, wit)
