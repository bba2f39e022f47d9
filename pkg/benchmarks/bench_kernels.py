"""Compare the compiled and pure-NumPy kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]

Times the two hot paths (descent loop, frame grid scan) on fixed seeded
workloads and prints one table per kernel.  Run after building the
extension in place (pip install -e . --no-build-isolation).
"""

import argparse
import time

import numpy as np

import momentflow as mf
from momentflow import kernels

H = np.array([[1.0, 0.0], [0.0, -1.0]])
E = np.array([[0.0, 1.0], [0.0, 0.0]])
F = np.array([[0.0, 0.0], [1.0, 0.0]])


def flow_workload(seed):
    rng = np.random.default_rng(seed)
    base = mf.Representation.from_matrices(np.stack([H, E, F]))
    Q1, _ = np.linalg.qr(rng.standard_normal((2, 2)))
    Q2, _ = np.linalg.qr(rng.standard_normal((2, 2)))
    g = Q1 @ np.diag([1.0, 9.0]) @ Q2
    theta = mf.gl_action(g, base)
    return np.ascontiguousarray(theta.orthonormalized())


def time_flow(backend, eta, repeats):
    G = np.eye(2)
    best = float("inf")
    steps = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        _, hist, _, _, status = backend.flow_loop(
            eta.copy(), G, G, True, 50_000, 0.01, 1e-14, 1e-8, 0.5)
        best = min(best, time.perf_counter() - t0)
        steps = hist.shape[0] - 1
        assert status == kernels.STATUS_CONVERGED
    return best, steps


def time_scan(backend, repeats):
    grid = mf.MilnorGrid()
    axes = [np.ascontiguousarray(a) for a in grid.axes()]
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        rows, count = backend.milnor_scan(*axes)
        best = min(best, time.perf_counter() - t0)
        assert count == 0 and rows.shape[0] == grid.size
    return best, grid.size


def fmt(seconds):
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.3f} s "


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats per case (best of N)")
    args = parser.parse_args()

    backends = kernels.available_backends()
    print(f"active backend: {kernels.backend_name()}")
    print(f"available: {', '.join(backends)}\n")

    print("descent loop (3 generators on 2x2 matrices, cond-9 start)")
    flow_times = {}
    for seed in (0, 1, 2):
        eta = flow_workload(seed)
        row = []
        for name, mod in backends.items():
            t, steps = time_flow(mod, eta, args.repeats)
            flow_times.setdefault(name, []).append(t)
            row.append(f"{name}: {fmt(t)} ({steps} steps)")
        print(f"  seed {seed}:  " + "   ".join(row))
    if len(backends) == 2:
        py = sum(flow_times["python"])
        cc = sum(flow_times["compiled"])
        print(f"  speedup: {py / cc:.1f}x\n")
    else:
        print()

    print("frame grid scan (50 x 50 x 50 = 125000 points)")
    scan_times = {}
    for name, mod in backends.items():
        t, n = time_scan(mod, args.repeats)
        scan_times[name] = t
        print(f"  {name}: {fmt(t)} ({n / t / 1e6:.1f} M points/s)")
    if len(backends) == 2:
        print(f"  speedup: {scan_times['python'] / scan_times['compiled']:.1f}x")


if __name__ == "__main__":
    main()
