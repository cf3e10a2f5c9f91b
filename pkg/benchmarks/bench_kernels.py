"""Time the numba and numpy kernel backends on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once before timing so numba compilation is excluded.
Results are checked for agreement between backends before timing.
"""
import argparse
import timeit

import numpy as np

from ptnorm import kernels
from ptnorm.evolution import numerov_pencil


def workloads():
    rng = np.random.default_rng(0)
    z = rng.normal(size=20_000) + 1j * rng.normal(size=20_000)
    p = np.linspace(np.pi / 2, np.pi, 20_000)
    mass, stiff = numerov_pencil(800, 5.0)
    half = 0.5j * 5e-4
    x = np.linspace(-1, 1, 802)[1:-1]
    psi0 = np.cos(np.pi * x / 2) + 0j
    lhs, rhs = mass + half * stiff, mass - half * stiff
    return {
        "laguerre n=8, 2e4 points": lambda k: k.laguerre_array(8, 0.3 - 0.2j, z),
        "oval_q, 2e4 points": lambda k: k.oval_q_array(p),
        "crank-nicolson 800 x 2000": lambda k: k.cn_propagate(psi0, lhs, rhs, 2000),
    }


def _first(out):
    return out[0] if isinstance(out, tuple) else out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = sorted(kernels.BACKENDS)
    print(f"backends: {', '.join(names)} (active: {kernels.BACKEND})")
    print(f"{'kernel':30s}" + "".join(f"{n:>14s}" for n in names) + "   speedup")
    for label, call in workloads().items():
        results = {n: _first(call(kernels.BACKENDS[n])) for n in names}
        ref = results["numpy"]
        for n in names:
            err = np.max(np.abs(results[n] - ref)) / max(1.0, np.max(np.abs(ref)))
            assert err < 1e-9, f"{label}: {n} disagrees with numpy by {err:.3g}"
        best = {
            n: min(timeit.repeat(lambda n=n: call(kernels.BACKENDS[n]), number=1, repeat=args.repeat))
            for n in names
        }
        line = f"{label:30s}" + "".join(f"{best[n] * 1e3:11.2f} ms" for n in names)
        if "numba" in best:
            line += f"   {best['numpy'] / best['numba']:6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
