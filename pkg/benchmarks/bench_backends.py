"""Compare the compiled kernels against the pure-Python reference.

Times the three hot paths on identical inputs:

  * eisenstein_sums        one pass over the truncated half-lattice
  * wp_both_direct_batch   full lattice sums for a batch of arguments
  * wp_fast_batch          Laurent series + duplication for a batch

Run from the repository root:

    python benchmarks/bench_backends.py --radius 200 --batch 64
"""

import argparse
import time

import numpy as np

from fermatw._kernels import pyref
from fermatw.lattice import half_points
from fermatw.maps import canonical_lattice
from fermatw.weierstrass import _laurent_coeffs

try:
    from fermatw._kernels import _core
except ImportError:
    _core = None


def _time(fn, *args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius", type=int, default=200,
                    help="truncation radius in shortest-vector units")
    ap.add_argument("--batch", type=int, default=64,
                    help="number of wp arguments per batch call")
    ap.add_argument("--repeat", type=int, default=5,
                    help="take the best of this many timings")
    args = ap.parse_args()

    lat = canonical_lattice(1.0)
    w = half_points(lat, truncation_radius=args.radius)
    rng = np.random.default_rng(0)
    zs = (rng.uniform(0.1, 0.9, args.batch) * lat.omega1
          + rng.uniform(0.1, 0.9, args.batch) * lat.omega2)
    coeffs = np.asarray(_laurent_coeffs(complex(lat.g2), complex(lat.g3), 16),
                        dtype=np.complex128)

    cases = [
        ("eisenstein_sums", "eisenstein_sums", (w,)),
        ("wp_both_direct_batch", "wp_both_direct_batch", (zs, w)),
        ("wp_fast_batch", "wp_fast_batch", (zs, 2, complex(lat.g2), coeffs)),
    ]

    print(f"half-lattice size: {w.size} points, batch: {args.batch} arguments")
    print(f"{'kernel':24s} {'python':>12s} {'ext':>12s} {'speedup':>9s}")
    for label, name, call_args in cases:
        t_py, ref = _time(getattr(pyref, name), *call_args, repeat=args.repeat)
        if _core is None:
            print(f"{label:24s} {t_py * 1e3:10.2f}ms {'n/a':>12s} {'n/a':>9s}")
            continue
        t_ext, got = _time(getattr(_core, name), *call_args, repeat=args.repeat)
        ref0 = np.asarray(ref[0] if isinstance(ref, tuple) else ref)
        got0 = np.asarray(got[0] if isinstance(got, tuple) else got)
        assert np.allclose(ref0, got0, rtol=1e-10, atol=1e-10), label
        print(f"{label:24s} {t_py * 1e3:10.2f}ms {t_ext * 1e3:10.2f}ms "
              f"{t_py / t_ext:8.1f}x")
    if _core is None:
        print("compiled backend not built; showing reference timings only")


if __name__ == "__main__":
    main()
