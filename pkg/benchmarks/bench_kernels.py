"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Micro benchmarks time the retarded-time solver on its own; the end-to-end
runs time a full coefficient evaluation that leans on each kernel.
"""
import argparse
import time
import warnings

import numpy as np

from udwsignal import kernels, kinematics
from udwsignal.kinematics import Inertial, Rest, UniformAcceleration
from udwsignal.scenario import DetectorConfig, Scenario
from udwsignal.signal import compute_c2_d2
from udwsignal.switching import Sudden


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    t1 = np.linspace(2.0, 50.0, 20000)
    inertial = (Inertial((0.3, -0.2, 0.1), (0.0, 0.0, 0.0)), Rest((2.0, 1.0, 0.5)))
    hyper = (UniformAcceleration(1.0, dim=3), Rest((0.0, 0.0, 0.0)))
    timelike_2p1 = Scenario(
        2,
        DetectorConfig(1.0, 1.0, Rest((0.0, 0.0)), Sudden(0.0, 2.0)),
        DetectorConfig(1.0, 1.0, Rest((0.0, 0.0)), Sudden(22.0, 2.0)),
    )
    moving_2p1 = Scenario(
        2,
        DetectorConfig(1.0, 1.3, Inertial((0.3, 0.1), (0.0, 0.0)), Sudden(0.0, 3.0)),
        DetectorConfig(1.0, 0.8, Rest((2.0, 1.0)), Sudden(2.0, 6.0)),
    )
    return {
        "retarded_times inertial (20k)": lambda: kinematics.retarded_times(*inertial, t1),
        "retarded_times hyperbola (20k)": lambda: kinematics.retarded_times(*hyper, t1),
        "2+1 timelike C2/D2": lambda: compute_c2_d2(timelike_2p1),
        "2+1 moving sender C2/D2": lambda: compute_c2_d2(moving_2p1),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    found = kernels.available()
    print(f"backends: {', '.join(found)}")
    warnings.simplefilter("ignore")
    results = {}
    for name, mod in found.items():
        kernels.backend = mod
        for label, fn in cases().items():
            results.setdefault(label, {})[name] = best_of(fn, args.repeat)
    width = max(map(len, results))
    print(f"{'case':<{width}}  " + "  ".join(f"{n:>10}" for n in found) + "  speedup")
    for label, row in results.items():
        cols = "  ".join(f"{row[n] * 1e3:9.2f}ms" for n in found)
        speed = row["python"] / row["cython"] if "cython" in row else float("nan")
        print(f"{label:<{width}}  {cols}  {speed:6.1f}x")


if __name__ == "__main__":
    main()
