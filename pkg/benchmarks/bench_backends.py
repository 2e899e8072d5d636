"""Compare the compiled kernels against the pure-Python fallback.

Times the three per-tick steppers call-for-call on both backends (same
pseudorandom argument stream), then a full agent session through whichever
backend the package selected at import. Run:

    python benchmarks/bench_backends.py [--ticks 200000]
"""

import argparse
import random
import time

from hovernav._kernels import _pure

try:
    from hovernav._kernels import _native
except ImportError:
    _native = None

DIMS = (144.71, 69.11, 0.105, 0.060)


def rate_args(rng):
    return (rng.uniform(-50, 50), rng.uniform(-25, 25), rng.uniform(7e-4, 1.0),
            rng.uniform(-0.05, 0.05), rng.uniform(-0.03, 0.03),
            rng.uniform(0.0, 0.06), False,
            0.05, 0.105, 0.0, 0.05, 0.0, *DIMS)


def absolute_args(rng):
    return (rng.uniform(-50, 50), rng.uniform(-25, 25), rng.uniform(7e-4, 1.0),
            rng.uniform(-0.05, 0.05), rng.uniform(-0.03, 0.03),
            rng.uniform(0.0, 0.06), False,
            False, 0.05, 0.105, *DIMS)


def baseline_args(rng):
    pts = [rng.uniform(-0.04, 0.04) for _ in range(8)]
    return (rng.uniform(-50, 50), rng.uniform(-25, 25), rng.uniform(0.01, 1.0),
            rng.randrange(4), *pts, rng.uniform(-0.3, 0.3),
            rng.uniform(-0.3, 0.3), 1.0, 0.9623506263980885, 0.005,
            1.0 / 60.0, *DIMS)


def bench_kernel(module, fn_name, make_args, n, seed=12345):
    rng = random.Random(seed)
    args = [make_args(rng) for _ in range(2000)]
    fn = getattr(module, fn_name)
    t0 = time.perf_counter()
    for i in range(n):
        fn(*args[i % 2000])
    return time.perf_counter() - t0


def bench_session():
    from hovernav.agents import make_agent
    from hovernav.service import SessionDescriptor, run_session
    agent = make_agent("greedy2d", seed=0)
    t0 = time.perf_counter()
    log, _ = run_session(SessionDescriptor(technique="baseline2d",
                                           map="large", seed=0), policy=agent)
    dt = time.perf_counter() - t0
    return len(log.records), dt


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--ticks", type=int, default=200000)
    args = parser.parse_args()
    n = args.ticks

    print(f"{n} calls per kernel\n")
    print(f"{'kernel':<16}{'pure':>12}{'native':>12}{'speedup':>10}")
    for fn_name, make_args in (("step_rate", rate_args),
                               ("step_absolute", absolute_args),
                               ("step_baseline", baseline_args)):
        t_pure = bench_kernel(_pure, fn_name, make_args, n)
        if _native is not None:
            t_native = bench_kernel(_native, fn_name, make_args, n)
            print(f"{fn_name:<16}{t_pure:>10.3f}s{t_native:>10.3f}s"
                  f"{t_pure / t_native:>9.1f}x")
        else:
            print(f"{fn_name:<16}{t_pure:>10.3f}s{'(not built)':>12}")

    from hovernav import _kernels
    ticks, dt = bench_session()
    print(f"\nfull greedy2d large-map session via {_kernels.BACKEND} backend: "
          f"{ticks} ticks in {dt:.2f}s ({1e6 * dt / ticks:.1f} us/tick)")
    if _native is None:
        print("note: compiled kernels not built; "
              "reinstall without HOVERNAV_PURE_PYTHON to compare")


if __name__ == "__main__":
    main()
