"""Benchmark the compiled contact kernel against the NumPy fallback.

Runs the standard three-preset sweep workload through both backends and
reports wall time plus the maximum disagreement between them.

Usage: python benchmarks/bench_contact.py [--repeats N] [--dx DX]
"""

import argparse
import time

import numpy as np

from grasschannel import KERNEL_BACKEND
from grasschannel._kernels import contact_phi_batch as active_batch
from grasschannel._kernels import numpy_backend
from grasschannel.geometry import EllipseBody
from grasschannel.simulator import ChannelSpec


def workload(dx):
    """All (position, beam) pairs of a d1/d2/d3 three-preset sweep."""
    body = EllipseBody(r_x=0.09, r_y=0.05, mass=0.087)
    chunks = []
    for d in (0.01, 0.02, 0.03):
        ch = ChannelSpec(n=11, l_channel=0.28, b=2 * body.r_y - 2 * d)
        start = -body.r_x - ch.beam.L
        stop = ch.l_channel + body.r_x + ch.beam.L
        xs = np.arange(start, stop + dx / 2, dx)
        bases = np.asarray(ch.base_positions())
        u = (bases[None, :] - xs[:, None]).ravel()
        chunks.append((u, ch.wall_y, ch.beam.L, body.r_x, body.r_y))
    return chunks


def time_backend(fn, chunks, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = [fn(*chunk) for chunk in chunks]
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--dx", type=float, default=1e-3)
    args = parser.parse_args()

    chunks = workload(args.dx)
    n_pairs = sum(len(c[0]) for c in chunks)
    print(f"workload: {n_pairs} (position, beam) pairs, dx = {args.dx} m")
    print(f"active backend: {KERNEL_BACKEND}")

    t_active, res_active = time_backend(active_batch, chunks, args.repeats)
    t_numpy, res_numpy = time_backend(
        numpy_backend.contact_phi_batch, chunks, args.repeats
    )

    max_dphi = 0.0
    for (pa, fa), (pn, fn_) in zip(res_active, res_numpy):
        assert np.array_equal(fa, fn_), "backend flags disagree"
        both = ~np.isnan(pa) & ~np.isnan(pn)
        if both.any():
            max_dphi = max(max_dphi, float(np.abs(pa[both] - pn[both]).max()))

    print(f"{KERNEL_BACKEND:>8}: {t_active * 1e3:8.2f} ms")
    print(f"{'numpy':>8}: {t_numpy * 1e3:8.2f} ms")
    if KERNEL_BACKEND != "numpy":
        print(f"speedup: {t_numpy / t_active:.2f}x")
    print(f"max |phi| disagreement: {max_dphi:.3e} rad")


if __name__ == "__main__":
    main()
