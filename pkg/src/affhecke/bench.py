"""Benchmark the compiled term-map kernel against the pure-Python one.

Micro benchmarks call both kernel modules directly on identical
workloads (sparse Laurent arithmetic); the macro benchmark times a
representative Hecke computation in subprocesses with AFFHECKE_KERNEL
forcing each backend.  Run as `python -m affhecke.bench`.
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from . import _termops_py

try:
    from . import _termops_c  # type: ignore[attr-defined]
except ImportError:
    _termops_c = None


def _random_terms(rng, nvars, nterms, span=6):
    out = {}
    while len(out) < nterms:
        k = tuple(rng.randint(-span, span) for _ in range(nvars))
        out[k] = rng.randint(-9, 9) or 1
    return out


def _time(fn, *args, repeat=5):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def _micro(impl, rng_seed=7):
    rng = random.Random(rng_seed)
    a = _random_terms(rng, 2, 150)
    b = _random_terms(rng, 2, 150)
    big = _random_terms(rng, 3, 3000, span=16)
    small = _random_terms(rng, 3, 12)
    frac = {k: Fraction(v, 3) for k, v in small.items()}

    def axpy_loop():
        acc = dict(big)
        for _ in range(40):
            impl.taxpy(acc, small, 2, (1, 0, -1))

    return {
        "tmul 150x150": _time(impl.tmul, a, b),
        "tadd 3000+3000": _time(impl.tadd, big, dict(big)),
        "taxpy 40x12 into 3000": _time(axpy_loop),
        "tmul 3000x12 (Fraction)": _time(impl.tmul, big, frac),
    }


_MACRO_SNIPPET = """
import time
from affhecke.rootdata import parse_descriptor
from affhecke.hecke import hecke_algebra
t0 = time.perf_counter()
alg = hecke_algebra(parse_descriptor("C2"))
alg.satake_product((2, 1))
assert alg.bernstein_residual((1, -1), 1).is_zero()
print(time.perf_counter() - t0)
"""


def _macro(backend: str) -> float:
    env = dict(os.environ, AFFHECKE_KERNEL=backend)
    out = subprocess.run(
        [sys.executable, "-c", _MACRO_SNIPPET],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return float(out.stdout.strip().splitlines()[-1])


def main() -> int:
    backends = [("python", _termops_py)]
    if _termops_c is not None:
        backends.append(("cython", _termops_c))
    else:
        print("compiled kernel not available; showing pure Python only")

    rows = {name: _micro(impl) for name, impl in backends}
    keys = list(next(iter(rows.values())))
    width = max(len(k) for k in keys) + 2
    header = "".join(f"{name:>12}" for name, _ in backends)
    print(f"{'micro kernel':<{width}}{header}" + ("     speedup" if len(rows) > 1 else ""))
    for k in keys:
        line = f"{k:<{width}}"
        for name, _ in backends:
            line += f"{rows[name][k] * 1e3:>10.2f}ms"
        if len(rows) > 1:
            line += f"{rows['python'][k] / rows['cython'][k]:>11.2f}x"
        print(line)

    print()
    print("macro: C2 Satake product + Bernstein residuals (subprocess, cold caches)")
    t_py = _macro("python")
    print(f"  python  {t_py:8.2f}s")
    if _termops_c is not None:
        t_c = _macro("cython")
        print(f"  cython  {t_c:8.2f}s   speedup {t_py / t_c:.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
