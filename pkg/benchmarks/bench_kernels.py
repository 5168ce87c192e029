"""Compare the numba kernels against their pure Python twins.

    python3 benchmarks/bench_kernels.py [--utterances N] [--repeat R]

Both paths run on the same seeded inputs and must agree exactly; the script
prints best-of-R wall times and the speedup. With VCCEVAL_DISABLE_NUMBA=1 the
"jit" column is the uncompiled function and the speedup is ~1.
"""
import argparse
import time

import numpy as np

from vcceval import _kernels
from vcceval._accel import NUMBA_ENABLED


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def corpus(n, rng, vocab=50, max_len=30):
    def pack(seqs):
        off = np.zeros(len(seqs) + 1, dtype=np.int64)
        off[1:] = np.cumsum([len(s) for s in seqs])
        return np.concatenate(seqs).astype(np.int64), off

    refs = [rng.integers(0, vocab, rng.integers(1, max_len)) for _ in range(n)]
    hyps = []
    for r in refs:
        h = r.copy()
        flip = rng.random(h.size) < 0.2
        h[flip] = rng.integers(0, vocab, flip.sum())
        hyps.append(h[rng.random(h.size) > 0.05])
    return pack(refs) + pack(hyps)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--utterances", type=int, default=2000)
    p.add_argument("--beta-calls", type=int, default=20000)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    print(f"numba enabled: {NUMBA_ENABLED}")
    # warm up so compilation (or cache load) is not timed
    _kernels.align_many_jit(*corpus(2, rng))
    _kernels.betacf_jit(2.0, 3.0, 0.3, 1e-12, 300)

    data = corpus(args.utterances, rng)
    t_jit, out_jit = best_of(lambda: _kernels.align_many_jit(*data), args.repeat)
    t_py, out_py = best_of(lambda: _kernels.align_many_py(*data), args.repeat)
    assert np.array_equal(np.asarray(out_jit), np.asarray(out_py))
    print(f"align  n={args.utterances:<6d} jit {t_jit * 1e3:9.2f} ms   py {t_py * 1e3:9.2f} ms   x{t_py / t_jit:7.1f}")

    n = args.beta_calls
    params = [(float(a), float(b), float(x))
              for a, b, x in zip(rng.uniform(0.5, 20, n), rng.uniform(0.5, 20, n), rng.random(n))]

    def run(fn):
        return [fn(a, b, x, 1e-12, 300) for a, b, x in params]

    t_jit, b_jit = best_of(lambda: run(_kernels.betacf_jit), args.repeat)
    t_py, b_py = best_of(lambda: run(_kernels.betacf_py), args.repeat)
    assert all(abs(u[0] - v[0]) <= 1e-12 * max(1.0, abs(v[0])) for u, v in zip(b_jit, b_py))
    print(f"betacf n={args.beta_calls:<6d} jit {t_jit * 1e3:9.2f} ms   py {t_py * 1e3:9.2f} ms   x{t_py / t_jit:7.1f}")


if __name__ == "__main__":
    main()
