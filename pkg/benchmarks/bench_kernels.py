"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both implementations are called directly, so the result does not depend on
HYPERFORGE_KERNELS.  The first numba call (compilation) is excluded.
"""
import argparse
import timeit

import numpy as np

from hyperforge import _kernels as kn
from hyperforge import catalog, forms, quadext


def workloads():
    fan16 = catalog.by_name("FAN16")
    ext = quadext.extend(catalog.by_name("FAN8"), "a").carrier   # 81 elements
    rng = np.random.default_rng(0)
    A = rng.random(ext.size) < 0.3
    B = rng.random(ext.size) < 0.3
    G = forms.group(fan16)
    start = np.bincount(rng.integers(0, G.g, size=6), minlength=G.g).astype(np.int64)
    yield "image F8(w)", kn._image_np, kn._image_nb, (ext.add, A, B)
    yield "assoc F8(w) add", kn._assoc_witness_np, kn._assoc_witness_nb, (ext.add,)
    yield "distrib FAN16", kn._distrib_witness_np, kn._distrib_witness_nb, (fan16.add, fan16.mul, False)
    yield "distrib F8(w)", kn._distrib_witness_np, kn._distrib_witness_nb, (ext.add, ext.mul, True)
    yield ("bfs FAN16 dim 6", kn._bfs_np, kn._bfs_nb,
           (start, G.mul, G.iso, G.neg, 1, 0, 10 ** 5))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kn.BACKEND != "numba":
        raise SystemExit("numba is not available; nothing to compare")
    print(f"{'kernel':<18}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for label, f_np, f_nb, call_args in workloads():
        f_nb(*call_args)   # compile
        t_np = min(timeit.repeat(lambda: f_np(*call_args), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: f_nb(*call_args), number=1, repeat=args.repeat))
        print(f"{label:<18}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
