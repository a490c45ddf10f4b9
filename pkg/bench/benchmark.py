"""Compare the compiled kernels with the numpy fallback.

    python bench/benchmark.py [--samples N] [--counts 300,600]

Both backends consume the same swap draws, so the script also checks that
their outputs are identical.
"""
import argparse
import time

import numpy as np

from mahonian import kernels
from mahonian.core import Composition, inversion_number_fenwick, inversion_number_naive
from mahonian.diagnostics import _sorted_letters, _stream, _swap_draws


def timed(fn, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--samples", type=int, default=20000)
    parser.add_argument("--counts", default="300,600")
    args = parser.parse_args()
    a = Composition(tuple(int(x) for x in args.counts.split(",")))
    base = _sorted_letters(a)
    swaps = _swap_draws(_stream(0, 0), base.size, args.samples)

    print(f"composition {a.counts}, n = {a.n}, {args.samples} words")
    t_draw, _ = timed(lambda: _swap_draws(_stream(0, 0), base.size, args.samples), repeat=1)
    print(f"  swap draws (numpy PCG64)   {t_draw:8.3f} s")
    results = {}
    if kernels.BACKEND == "cython":
        t, results["cython"] = timed(lambda: kernels.impl.sample_stats(base, swaps, a.d))
        print(f"  sample_stats  cython       {t:8.3f} s")
    else:
        print("  compiled extension not built; fallback only")
    t_np, results["numpy"] = timed(lambda: kernels.fallback.sample_stats(base, swaps, a.d), repeat=1)
    print(f"  sample_stats  numpy        {t_np:8.3f} s")
    if "cython" in results:
        same = all(np.array_equal(x, y) for x, y in zip(results["cython"], results["numpy"]))
        print(f"  outputs identical: {same}")

    word = kernels.impl.shuffle(base, swaps[0])
    as_list = word.tolist()
    reps = 200
    t_fw, _ = timed(lambda: [inversion_number_fenwick(as_list) for _ in range(reps)], repeat=1)
    t_nv, _ = timed(lambda: inversion_number_naive(as_list), repeat=1)
    t_k, _ = timed(lambda: [kernels.impl.inversion_number(word, a.d) for _ in range(reps)], repeat=1)
    print(f"single-word inversion count, n = {a.n}")
    print(f"  naive O(n^2) python        {t_nv * 1e3:8.3f} ms")
    print(f"  fenwick python             {t_fw / reps * 1e3:8.3f} ms")
    print(f"  {kernels.BACKEND:<8} kernel            {t_k / reps * 1e3:8.3f} ms")


if __name__ == "__main__":
    main()
