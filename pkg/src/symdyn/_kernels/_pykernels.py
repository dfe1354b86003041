"""Pure-Python implementations of the hot kernels.

These define the reference semantics; the compiled module must agree
with them bit for bit (see tests/test_kernels.py).
"""
import numpy as np

BACKEND = "python"


def bd_window_ok(word, gtab):
    """True iff every window of length L in ``word`` has at most gtab[L] ones."""
    n = len(word)
    prefix = [0] * (n + 1)
    for i, a in enumerate(word):
        prefix[i + 1] = prefix[i] + (1 if a else 0)
    if prefix[n] == 0:
        return True
    for length in range(1, n + 1):
        cap = gtab[length]
        for start in range(0, n - length + 1):
            if prefix[start + length] - prefix[start] > cap:
                return False
    return True


def bd_suffix_ok(word, gtab):
    """Check only the windows that end at the last position."""
    n = len(word)
    ones = 0
    for length in range(1, n + 1):
        if word[n - length]:
            ones += 1
        if ones > gtab[length]:
            return False
    return True


def dfa_level_counts(trans, start, depth, suffix):
    """Enumerate every accepted word of length <= depth by depth-first search.

    ``trans[s][a]`` is the successor state or -1. Returns per-length word
    counts and per-length counts of words ending with ``suffix``.
    """
    trans = [list(map(int, row)) for row in trans]
    nsym = len(trans[0]) if trans else 0
    suffix = [int(a) for a in suffix]
    slen = len(suffix)
    counts = [0] * (depth + 1)
    scounts = [0] * (depth + 1)
    counts[0] = 1
    if slen == 0:
        scounts[0] = 1
    path = []
    # each frame: (state, next symbol to try)
    stack = [[start, 0]]
    while stack:
        frame = stack[-1]
        state, a = frame
        if len(path) == depth or a >= nsym:
            stack.pop()
            if path:
                path.pop()
            continue
        frame[1] = a + 1
        nxt = trans[state][a]
        if nxt < 0:
            continue
        path.append(a)
        n = len(path)
        counts[n] += 1
        if n >= slen and path[n - slen:] == suffix:
            scounts[n] += 1
        stack.append([nxt, 0])
    return counts, scounts


def _ball(x, n, q, m, powers):
    """All indices within Hamming distance m of index x (base-q digits)."""
    digits = [(x // powers[i]) % q for i in range(n)]
    out = [x]

    def rec(pos, budget, value):
        for i in range(pos, n):
            d = digits[i]
            for c in range(q):
                if c == d:
                    continue
                y = value + (c - d) * powers[i]
                out.append(y)
                if budget > 1:
                    rec(i + 1, budget - 1, y)

    if m > 0:
        rec(0, m, x)
    return out


def greedy_cover(n, q, m):
    """Greedy Hamming covering of [q]^n with radius m.

    Repeatedly picks the word whose radius-m ball holds the most uncovered
    words; ties go to the smallest index. Returns codeword indices in pick
    order.
    """
    total = q ** n
    powers = [q ** i for i in range(n)]
    ball0 = len(_ball(0, n, q, m, powers))
    gain = np.full(total, ball0, dtype=np.int64)
    covered = np.zeros(total, dtype=bool)
    remaining = total
    picks = []
    while remaining:
        c = int(np.argmax(gain))
        picks.append(c)
        for y in _ball(c, n, q, m, powers):
            if covered[y]:
                continue
            covered[y] = True
            remaining -= 1
            for z in _ball(y, n, q, m, powers):
                gain[z] -= 1
    return picks


def cover_uncovered(n, q, m, codewords):
    """Number of words of [q]^n farther than m from every codeword."""
    total = q ** n
    powers = [q ** i for i in range(n)]
    covered = np.zeros(total, dtype=bool)
    for c in codewords:
        for y in _ball(int(c), n, q, m, powers):
            covered[y] = True
    return int(total - covered.sum())


def bd_level_counts(gtab, depth):
    """Per-length counts of binary words whose windows of length L hold <= gtab[L] ones.

    Appending 0 never breaks a window bound (gtab is nondecreasing), so
    only appended 1s are checked.
    """
    counts = [0] * (depth + 1)
    counts[0] = 1
    word = [0] * depth
    choice = [-1] * (depth + 1)
    n = 0
    while n >= 0:
        choice[n] += 1
        if n == depth or choice[n] > 1:
            choice[n] = -1
            n -= 1
            continue
        a = choice[n]
        word[n] = a
        if a == 1:
            ones = 0
            ok = True
            for length in range(1, n + 2):
                ones += word[n + 1 - length]
                if ones > gtab[length]:
                    ok = False
                    break
            if not ok:
                continue
        n += 1
        counts[n] += 1
    return counts
