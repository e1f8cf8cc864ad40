"""Pure-Python kernels.  Same contracts as the compiled ``_kernels`` module.

Node convention for the path kernels: node 0 is the fixed start, node n-1 the
fixed end, nodes 1..n-2 must all be visited.
"""


def held_karp(dist):
    """Exact open-path TSP by subset DP.  Returns (cost, order of inner nodes)."""
    n = len(dist)
    if n < 2:
        raise ValueError("need start and end nodes")
    k = n - 2
    if k == 0:
        return dist[0][n - 1], []
    full = (1 << k) - 1
    inf = None
    dp = [[inf] * k for _ in range(1 << k)]
    parent = [[-1] * k for _ in range(1 << k)]
    for j in range(k):
        dp[1 << j][j] = dist[0][j + 1]
    for mask in range(1, full + 1):
        row = dp[mask]
        for j in range(k):
            c = row[j]
            if c is None:
                continue
            dj = dist[j + 1]
            for t in range(k):
                bit = 1 << t
                if mask & bit:
                    continue
                nm = mask | bit
                nc = c + dj[t + 1]
                cur = dp[nm][t]
                if cur is None or nc < cur:
                    dp[nm][t] = nc
                    parent[nm][t] = j
    best, last = None, -1
    for j in range(k):
        c = dp[full][j] + dist[j + 1][n - 1]
        if best is None or c < best:
            best, last = c, j
    order = []
    mask = full
    while last >= 0:
        order.append(last + 1)
        prev = parent[mask][last]
        mask &= ~(1 << last)
        last = prev
    order.reverse()
    return best, order


def path_cost(dist, order):
    return sum(dist[a][b] for a, b in zip(order, order[1:]))


def two_opt(dist, order):
    """Segment-reversal local search with both endpoints pinned.

    ``order`` is the full node sequence (start ... end).  Returns (cost, order).
    """
    seq = list(order)
    m = len(seq)
    improved = True
    while improved:
        improved = False
        for i in range(1, m - 2):
            a, b = seq[i - 1], seq[i]
            dab = dist[a][b]
            for j in range(i + 1, m - 1):
                c, e = seq[j], seq[j + 1]
                delta = dist[a][c] + dist[b][e] - dab - dist[c][e]
                if delta < 0:
                    seq[i : j + 1] = seq[i : j + 1][::-1]
                    improved = True
                    b = seq[i]
                    dab = dist[a][b]
    return path_cost(dist, seq), seq


def prefix_span(words, weights, offset):
    """Total weight of the union of all prefixes of ``words``.

    ``words`` must be sorted; the weight of letter ``s`` is ``weights[s + offset]``.
    """
    total = 0
    prev = ()
    for w in words:
        m = min(len(w), len(prev))
        k = 0
        while k < m and w[k] == prev[k]:
            k += 1
        for s in w[k:]:
            total += weights[s + offset]
        prev = w
    return total
