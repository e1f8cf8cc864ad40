"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from lamprate import _pykernels, kernels


def matrix(n, seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(1, 100, size=(n, n))
    m = m + m.T
    np.fill_diagonal(m, 0)
    return m


def words(count, depth, seed):
    rng = np.random.default_rng(seed)
    letters = np.array([-2, -1, 1, 2])
    return sorted({tuple(rng.choice(letters, rng.integers(1, depth + 1)).tolist()) for _ in range(count)})


def cases():
    for n in (10, 14, 16):
        m = matrix(n, n)
        yield f"held_karp n={n}", lambda impl, m=m: kernels.held_karp(
            m if impl is not _pykernels else m.tolist(), impl=impl)
    for n in (50, 200):
        m = matrix(n, n)
        seq = list(range(n))
        yield f"two_opt n={n}", lambda impl, m=m, seq=seq: kernels.two_opt(
            m if impl is not _pykernels else m.tolist(), seq, impl=impl)
    ws = words(5000, 30, 1)
    weights = np.array([2, 1, 0, 1, 2], dtype=np.int64)
    yield "prefix_span 5000 words", lambda impl: kernels.prefix_span(
        ws, weights if impl is not _pykernels else weights.tolist(), 2, impl=impl)


def cost(result):
    return result[0] if isinstance(result, tuple) else result


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled_kernels is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
    print(f"{'kernel':26s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}  agree")
    for name, fn in cases():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        if kernels.compiled_kernels is None:
            print(f"{name:26s} {py:10.4f} {'-':>11s} {'-':>8s}")
            continue
        c = min(timeit.repeat(lambda: fn(kernels.compiled_kernels), number=1, repeat=args.repeat))
        agree = cost(fn(_pykernels)) == cost(fn(kernels.compiled_kernels))
        print(f"{name:26s} {py:10.4f} {c:11.5f} {py / c:7.1f}x  {'yes' if agree else 'NO'}")


if __name__ == "__main__":
    main()
