"""Compare the numba and numpy kernel backends on simulation-sized batches.

Run with ``python benchmarks/bench_kernels.py``. Prints the median wall time
per call for each kernel and backend, the speed-up, and the largest
absolute disagreement between backends.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from symtest import _kernels


def _time(fn, arg, repeat):
    fn(arg)  # warm-up, includes JIT compilation
    laps = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(arg)
        laps.append(time.perf_counter() - t0)
    return statistics.median(laps)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=10_000)
    ap.add_argument("--n", type=int, nargs="+", default=[25, 100, 400])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if _kernels.numba_backend is None:
        raise SystemExit("numba is not importable; nothing to compare")
    backends = {"numpy": _kernels.numpy_backend, "numba": _kernels.numba_backend}
    rng = np.random.default_rng(0)

    print(f"{'kernel':<8}{'n':>6}{'numpy ms':>12}{'numba ms':>12}{'speed-up':>10}{'max |diff|':>13}")
    for n in args.n:
        rows = np.sort(rng.standard_normal((args.rows, n)), axis=1)
        pv = _kernels.numpy_backend.pseudo_rows(rows)
        inputs = {"delta": rows, "pseudo": rows, "el": pv}
        for kernel, x in inputs.items():
            times, outs = {}, {}
            for name, be in backends.items():
                fn = getattr(be, f"{kernel}_rows")
                times[name] = _time(fn, x, args.repeat)
                out = fn(x)
                outs[name] = out[1] if kernel == "el" else out  # compare -log R halves
            ok = np.isfinite(outs["numpy"]) & np.isfinite(outs["numba"])
            diff = float(np.max(np.abs(outs["numpy"][ok] - outs["numba"][ok]))) if ok.any() else float("nan")
            print(
                f"{kernel:<8}{n:>6}{times['numpy'] * 1e3:>12.2f}{times['numba'] * 1e3:>12.2f}"
                f"{times['numpy'] / times['numba']:>10.1f}{diff:>13.2e}"
            )


if __name__ == "__main__":
    main()
