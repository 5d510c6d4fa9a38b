"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --repeat 5
"""

import argparse
import json
import timeit

import numpy as np

from ultrawave._backend import available_backends


def cases(rng):
    x8 = rng.normal(size=(8, 64)) + 1j * rng.normal(size=(8, 64))
    x27 = rng.normal(size=(27, 27)) + 1j * rng.normal(size=(27, 27))
    x243 = rng.normal(size=(243, 243)) + 1j * rng.normal(size=(243, 243))
    table = rng.normal(size=3 ** 6) + 0j
    f = rng.normal(size=9) + 0j
    a = rng.normal(size=27 ** 2) + 0j
    b = rng.normal(size=27 ** 2) * (rng.random(27 ** 2) < 0.1)
    w = rng.normal(size=8)
    return {
        "char_sum G1=8 x 64 cols": lambda k: k.char_sum(x8, 8, 1),
        "char_sum G1=27 x 27 cols": lambda k: k.char_sum(x27, 27, 1),
        # longer axes take the digit path; BLAS wins here
        "char_sum G1=243 x 243 cols": lambda k: k.char_sum(x243, 243, 1),
        "hypersingular_brute p=3 n=2 M=4": lambda k: k.hypersingular_brute(table, 3, 2, 1, 2, 4, [5, 7], w),
        "planewave_near_field p=3 n=3 M=3": lambda k: k.planewave_near_field(f, 3, 3, 1, 1, 3, 4, [1, 2, 5], w),
        "cyclic_convolve G1=27 n=2": lambda k: k.cyclic_convolve(a, b, 27, 2),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="print machine-readable results")
    args = ap.parse_args(argv)
    backends = available_backends()
    rng = np.random.default_rng(0)
    results = {}
    for name, fn in cases(rng).items():
        row = {}
        for label, mod in backends.items():
            fn(mod)  # warm-up
            row[label] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        results[name] = row
    if args.json:
        print(json.dumps(results, indent=2, sort_keys=True))
        return
    labels = list(backends)
    print(f"{'kernel':38s}" + "".join(f"{b:>12s}" for b in labels) + ("   speedup" if len(labels) > 1 else ""))
    for name, row in results.items():
        line = f"{name:38s}" + "".join(f"{row[b] * 1e3:10.2f}ms" for b in labels)
        if "compiled" in row:
            line += f"   {row['python'] / row['compiled']:7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
