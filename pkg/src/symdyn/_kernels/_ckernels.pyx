# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in _pykernels.py."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

BACKEND = "cython"


def bd_window_ok(word, gtab):
    cdef Py_ssize_t n = len(word)
    cdef Py_ssize_t i, length, start
    cdef long cap
    cdef cnp.int64_t[:] g = np.asarray(gtab, dtype=np.int64)
    cdef cnp.int64_t[:] prefix = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        prefix[i + 1] = prefix[i] + (1 if word[i] else 0)
    if prefix[n] == 0:
        return True
    for length in range(1, n + 1):
        cap = g[length]
        for start in range(0, n - length + 1):
            if prefix[start + length] - prefix[start] > cap:
                return False
    return True


def bd_suffix_ok(word, gtab):
    cdef Py_ssize_t n = len(word)
    cdef Py_ssize_t length
    cdef long ones = 0
    cdef cnp.int64_t[:] g = np.asarray(gtab, dtype=np.int64)
    for length in range(1, n + 1):
        if word[n - length]:
            ones += 1
        if ones > g[length]:
            return False
    return True


def dfa_level_counts(trans, int start, int depth, suffix):
    cdef cnp.int32_t[:, :] t = np.ascontiguousarray(trans, dtype=np.int32)
    cdef int nsym = t.shape[1] if t.shape[0] else 0
    cdef cnp.int32_t[:] suf = np.asarray(list(suffix), dtype=np.int32)
    cdef int slen = suf.shape[0]
    cdef cnp.int64_t[:] counts = np.zeros(depth + 1, dtype=np.int64)
    cdef cnp.int64_t[:] scounts = np.zeros(depth + 1, dtype=np.int64)
    cdef int *states = <int *> malloc((depth + 1) * sizeof(int))
    cdef int *nexta = <int *> malloc((depth + 1) * sizeof(int))
    cdef int *path = <int *> malloc((depth + 1) * sizeof(int))
    cdef int top = 0
    cdef int a, nxt, n, j
    cdef bint match
    counts[0] = 1
    if slen == 0:
        scounts[0] = 1
    try:
        states[0] = start
        nexta[0] = 0
        while top >= 0:
            a = nexta[top]
            if top == depth or a >= nsym:
                top -= 1
                continue
            nexta[top] = a + 1
            nxt = t[states[top], a]
            if nxt < 0:
                continue
            path[top] = a
            n = top + 1
            counts[n] += 1
            if n >= slen:
                match = True
                for j in range(slen):
                    if path[n - slen + j] != suf[j]:
                        match = False
                        break
                if match:
                    scounts[n] += 1
            top += 1
            states[top] = nxt
            nexta[top] = 0
    finally:
        free(states)
        free(nexta)
        free(path)
    return [int(x) for x in counts], [int(x) for x in scounts]


cdef Py_ssize_t _ball(long x, int n, int q, int m, long *powers, int *digits,
                      long *out) nogil:
    cdef Py_ssize_t cnt = 1
    cdef int i
    # iterative enumeration of (position set, substitution) pairs
    cdef int pos[64]
    cdef int val[64]
    cdef long acc[65]
    cdef int depth
    cdef long y
    for i in range(n):
        digits[i] = (x // powers[i]) % q
    out[0] = x
    if m == 0:
        return cnt
    depth = 0
    acc[0] = x
    pos[0] = 0
    val[0] = -1
    while depth >= 0:
        # advance the substitution at this depth
        val[depth] += 1
        if val[depth] == digits[pos[depth]]:
            val[depth] += 1
        if val[depth] >= q:
            pos[depth] += 1
            val[depth] = -1
            if pos[depth] >= n:
                depth -= 1
            continue
        y = acc[depth] + (val[depth] - digits[pos[depth]]) * powers[pos[depth]]
        out[cnt] = y
        cnt += 1
        if depth + 1 < m and pos[depth] + 1 < n:
            acc[depth + 1] = y
            pos[depth + 1] = pos[depth] + 1
            val[depth + 1] = -1
            depth += 1
    return cnt


cdef Py_ssize_t _ball_size(int n, int q, int m):
    cdef Py_ssize_t total = 0
    cdef Py_ssize_t term = 1
    cdef int j
    for j in range(m + 1):
        if j > n:
            break
        total += term
        term = term * (n - j) // (j + 1) * (q - 1)
    return total


def greedy_cover(int n, int q, int m):
    if n > 63:
        raise ValueError("word length too large for the compiled kernel")
    cdef long total = q ** n
    cdef Py_ssize_t bsize = _ball_size(n, q, m)
    cdef cnp.int64_t[:] gain = np.full(total, bsize, dtype=np.int64)
    cdef cnp.uint8_t[:] covered = np.zeros(total, dtype=np.uint8)
    cdef long *powers = <long *> malloc(n * sizeof(long))
    cdef int *digits = <int *> malloc(n * sizeof(int))
    cdef int *digits2 = <int *> malloc(n * sizeof(int))
    cdef long *ball1 = <long *> malloc(bsize * sizeof(long))
    cdef long *ball2 = <long *> malloc(bsize * sizeof(long))
    cdef long remaining = total
    cdef long c, best, y
    cdef cnp.int64_t bestgain
    cdef Py_ssize_t k1, k2, i1, i2
    cdef int i
    picks = []
    try:
        for i in range(n):
            powers[i] = q ** i
        while remaining > 0:
            best = 0
            bestgain = gain[0]
            for c in range(1, total):
                if gain[c] > bestgain:
                    bestgain = gain[c]
                    best = c
            picks.append(best)
            k1 = _ball(best, n, q, m, powers, digits, ball1)
            for i1 in range(k1):
                y = ball1[i1]
                if covered[y]:
                    continue
                covered[y] = 1
                remaining -= 1
                k2 = _ball(y, n, q, m, powers, digits2, ball2)
                for i2 in range(k2):
                    gain[ball2[i2]] -= 1
    finally:
        free(powers)
        free(digits)
        free(digits2)
        free(ball1)
        free(ball2)
    return picks


def cover_uncovered(int n, int q, int m, codewords):
    if n > 63:
        raise ValueError("word length too large for the compiled kernel")
    cdef long total = q ** n
    cdef Py_ssize_t bsize = _ball_size(n, q, m)
    cdef cnp.uint8_t[:] covered = np.zeros(total, dtype=np.uint8)
    cdef long *powers = <long *> malloc(n * sizeof(long))
    cdef int *digits = <int *> malloc(n * sizeof(int))
    cdef long *ball = <long *> malloc(bsize * sizeof(long))
    cdef Py_ssize_t k, j
    cdef long hit = 0
    cdef int i
    try:
        for i in range(n):
            powers[i] = q ** i
        for c in codewords:
            k = _ball(int(c), n, q, m, powers, digits, ball)
            for j in range(k):
                if not covered[ball[j]]:
                    covered[ball[j]] = 1
                    hit += 1
    finally:
        free(powers)
        free(digits)
        free(ball)
    return int(total - hit)


def bd_level_counts(gtab, int depth):
    cdef cnp.int64_t[:] g = np.asarray(gtab, dtype=np.int64)
    cdef cnp.int64_t[:] counts = np.zeros(depth + 1, dtype=np.int64)
    cdef int *word = <int *> malloc((depth + 1) * sizeof(int))
    cdef int *choice = <int *> malloc((depth + 1) * sizeof(int))
    cdef int n = 0
    cdef int a, length
    cdef long ones
    cdef bint ok
    counts[0] = 1
    try:
        for n in range(depth + 1):
            choice[n] = -1
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
                    if ones > g[length]:
                        ok = False
                        break
                if not ok:
                    continue
            n += 1
            counts[n] += 1
    finally:
        free(word)
        free(choice)
    return [int(x) for x in counts]
