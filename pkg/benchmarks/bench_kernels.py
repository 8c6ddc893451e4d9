"""Benchmark the compiled fitting kernel against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--seeds N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rcskit import _kernels
from rcskit.montecarlo import synth_pl_dataset
from rcskit.nf_rcs import (
    FTOL,
    MAX_EVAL,
    ModelOrder,
    NfRcsModel,
    _kernel_args,
    _prepare,
    _search_bounds,
    fit_pl_all,
)

Y_GRID = [2.0 + 0.5 * i for i in range(17)]


def bench_objective(backend, n_calls: int = 20000) -> float:
    model = NfRcsModel(ModelOrder.SIGMA1, a1=2.96, m=-7.86)
    obs = synth_pl_dataset(51.41, 1.85, model, 0.7, Y_GRID, 25e9, 1.64, 0)
    args = _kernel_args(_prepare(obs, 0.7), 3)
    x = [-7.86, 0.3, 0.5, 0.01]
    start = time.perf_counter()
    for _ in range(n_calls):
        backend.pl_eval(x, *args)
    return (time.perf_counter() - start) / n_calls


def bench_single_minimize(backend, n_runs: int = 200) -> float:
    model = NfRcsModel(ModelOrder.SIGMA1, a1=2.96, m=-7.86)
    obs = synth_pl_dataset(51.41, 1.85, model, 0.7, Y_GRID, 25e9, 1.64, 1)
    args = _kernel_args(_prepare(obs, 0.7), 3)
    lower, upper = _search_bounds(3)
    x0 = np.array([-7.86, 0.0, 0.0, 0.0])
    lo, hi = np.array(lower), np.array(upper)
    start = time.perf_counter()
    for _ in range(n_runs):
        backend.nm_minimize(x0, lo, hi, *args, FTOL, MAX_EVAL)
    return (time.perf_counter() - start) / n_runs


def bench_full_chain(backend_name: str, seeds: int) -> float:
    model = NfRcsModel(ModelOrder.SIGMA1, a1=2.96, m=-7.86)
    previous = _kernels.use(backend_name)
    try:
        start = time.perf_counter()
        for seed in range(seeds):
            obs = synth_pl_dataset(51.41, 1.85, model, 0.7, Y_GRID, 25e9, 1.64, seed)
            fit_pl_all(obs, 0.7)
        return (time.perf_counter() - start) / seeds
    finally:
        _kernels.use(previous.BACKEND_NAME)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=50, help="fit chains per backend")
    args = parser.parse_args()

    names = _kernels.available()
    print(f"available backends: {', '.join(names)}")
    print(f"{'benchmark':<28}" + "".join(f"{n:>14}" for n in names) + f"{'speedup':>10}")

    rows = [
        ("objective eval (us)", lambda b: bench_objective(_kernels.get_backend(b)) * 1e6),
        ("single NM run (ms)", lambda b: bench_single_minimize(_kernels.get_backend(b)) * 1e3),
        ("full fit chain (ms)", lambda b: bench_full_chain(b, args.seeds) * 1e3),
    ]
    for label, runner in rows:
        values = {name: runner(name) for name in names}
        speedup = (
            values["pure"] / values["compiled"]
            if {"pure", "compiled"} <= set(values)
            else float("nan")
        )
        print(
            f"{label:<28}"
            + "".join(f"{values[n]:>14.3f}" for n in names)
            + f"{speedup:>9.1f}x"
        )


if __name__ == "__main__":
    main()
