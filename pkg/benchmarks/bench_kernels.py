"""Time the compiled and pure-Python kernels on the same workloads.

    python3 benchmarks/bench_kernels.py [--trials N] [--repeat K]
"""

import argparse
import timeit

from shootout import _pykernels
from shootout.engine import simulate
from shootout.mechanisms import ADJUSTED_CATCH_UP, ALTERNATING, CATCH_UP, mechanism_program
from shootout.model import PRESETS

try:
    from shootout import _ckernels
except ImportError:
    _ckernels = None


def backends():
    yield "python", _pykernels
    if _ckernels is not None:
        yield "cython", _ckernels


def bench_enumeration(impl, rounds, repeat):
    model = PRESETS["brams"]
    ps, qs = (list(map(float, x)) for x in model.rates(rounds))
    starts, kinds, anchors = (list(x) for x in zip(*mechanism_program(CATCH_UP)))
    fn = lambda: impl.outcome_probs(starts, kinds, anchors, rounds, ps, qs)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_simulation(impl, mech, trials, repeat):
    fn = lambda: simulate(mech, 5, PRESETS["brams"], seed=1, trials=trials, backend=impl)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; timing the fallback only")

    rows = []
    for rounds in (5, 8, 10):
        t = {name: bench_enumeration(impl, rounds, args.repeat) for name, impl in backends()}
        rows.append((f"enumerate catchup r={rounds}", t))
    for mech in (ALTERNATING, CATCH_UP, ADJUSTED_CATCH_UP):
        t = {name: bench_simulation(impl, mech, args.trials, args.repeat) for name, impl in backends()}
        rows.append((f"simulate {mech} n={args.trials}", t))

    print(f"{'workload':<36}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for label, t in rows:
        py, cy = t["python"], t.get("cython")
        if cy is None:
            print(f"{label:<36}{py:>12.4f}{'-':>12}{'-':>10}")
        else:
            print(f"{label:<36}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
