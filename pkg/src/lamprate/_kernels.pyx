# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference versions."""
import numpy as np

ctypedef fused num_t:
    long long
    double


def held_karp(num_t[:, ::1] dist):
    cdef Py_ssize_t n = dist.shape[0]
    if n < 2:
        raise ValueError("need start and end nodes")
    cdef Py_ssize_t k = n - 2
    if k == 0:
        return dist[0, n - 1], []
    if k > 24:
        raise ValueError("too many nodes for subset DP")
    cdef Py_ssize_t nmask = 1 << k
    cdef Py_ssize_t full = nmask - 1
    if num_t is double:
        dp_arr = np.full((nmask, k), np.inf, dtype=np.float64)
    else:
        dp_arr = np.full((nmask, k), 1 << 62, dtype=np.int64)
    cdef num_t[:, ::1] dp = dp_arr
    par_arr = np.full((nmask, k), -1, dtype=np.int8)
    cdef signed char[:, ::1] parent = par_arr
    cdef Py_ssize_t mask, j, t, nm, bit
    cdef num_t c, nc, big
    if num_t is double:
        big = np.inf
    else:
        big = 1 << 62
    for j in range(k):
        dp[1 << j, j] = dist[0, j + 1]
    for mask in range(1, nmask):
        for j in range(k):
            c = dp[mask, j]
            if c == big:
                continue
            for t in range(k):
                bit = 1 << t
                if mask & bit:
                    continue
                nm = mask | bit
                nc = c + dist[j + 1, t + 1]
                if nc < dp[nm, t]:
                    dp[nm, t] = nc
                    parent[nm, t] = <signed char>j
    cdef num_t best = big
    cdef Py_ssize_t last = -1
    for j in range(k):
        c = dp[full, j] + dist[j + 1, n - 1]
        if last < 0 or c < best:
            best = c
            last = j
    order = []
    mask = full
    cdef Py_ssize_t prev
    while last >= 0:
        order.append(last + 1)
        prev = parent[mask, last]
        mask &= ~(1 << last)
        last = prev
    order.reverse()
    return best, order


def two_opt(num_t[:, ::1] dist, order):
    seq_arr = np.asarray(order, dtype=np.intp).copy()
    cdef Py_ssize_t[::1] seq = seq_arr
    cdef Py_ssize_t m = seq.shape[0]
    cdef Py_ssize_t i, j, a, b, c, e, lo, hi, tmp
    cdef num_t delta, total
    cdef bint improved = True
    while improved:
        improved = False
        for i in range(1, m - 2):
            a = seq[i - 1]
            for j in range(i + 1, m - 1):
                b = seq[i]
                c = seq[j]
                e = seq[j + 1]
                delta = dist[a, c] + dist[b, e] - dist[a, b] - dist[c, e]
                if delta < 0:
                    lo = i
                    hi = j
                    while lo < hi:
                        tmp = seq[lo]
                        seq[lo] = seq[hi]
                        seq[hi] = tmp
                        lo += 1
                        hi -= 1
                    improved = True
    total = 0
    for i in range(m - 1):
        total += dist[seq[i], seq[i + 1]]
    return total, [int(x) for x in seq_arr]


def prefix_span(list words, long long[::1] weights, Py_ssize_t offset):
    cdef long long total = 0
    cdef tuple prev = ()
    cdef tuple w
    cdef Py_ssize_t i, k, n, m
    for w in words:
        n = len(w)
        m = len(prev)
        if n < m:
            m = n
        k = 0
        while k < m and <long>w[k] == <long>prev[k]:
            k += 1
        for i in range(k, n):
            total += weights[<long>w[i] + offset]
        prev = w
    return total
