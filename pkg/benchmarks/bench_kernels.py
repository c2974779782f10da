"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py            # full run
    python3 benchmarks/bench_kernels.py --quick    # smaller sizes, one repeat

Each row reports the best wall time over ``--repeat`` runs per backend and
the speed-up of the compiled kernels over the fallback.
"""

import argparse
import timeit

import numpy as np

from iqaoa_jssp import load_fixture, total_vector_count
from iqaoa_jssp._backend import available_backends, get_kernels
from iqaoa_jssp.circuit import CircuitParams, init_uniform, run_circuit
from iqaoa_jssp.oracle import enumerate_distribution


def bench_enumerate(name):
    inst = load_fixture(name)
    return f"enumerate {name} ({total_vector_count(inst)} vectors)", lambda b: enumerate_distribution(inst, backend=b)


def bench_decode(name, n):
    inst = load_fixture(name)
    total = total_vector_count(inst)
    ranks = np.random.default_rng(0).integers(0, total, n)

    def run(b):
        get_kernels(b).makespans_of_ranks(inst.machines, inst.durations, ranks, total)

    return f"decode {n} ranks of {name}", run


def bench_circuit(q, mixer):
    params = CircuitParams((0.4, -1.3), (0.9, 2.2), mixer)
    return f"depth-2 circuit, q={q}, mixer {mixer}", lambda b: run_circuit(q, params, b)


def bench_gates(q):
    state = init_uniform(q)

    def run(b):
        k = get_kernels(b)
        k.phase_layer(state, 0.7)
        k.cx_chain(state)

    return f"phase + CX ladder, q={q}", run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)
    repeat = 1 if args.quick else args.repeat

    cases = [bench_enumerate("jssp-3x4"), bench_decode("jssp-5x2", 1000), bench_gates(14 if args.quick else 17)]
    if args.quick:
        cases.append(bench_circuit(11, 3))
    else:
        cases += [bench_enumerate("jssp-4x3"), bench_decode("jssp-4x4", 1000), bench_circuit(11, 3),
                  bench_circuit(17, 2)]

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python fallback is timed")
    header = f"{'case':<44}" + "".join(f"{b:>12}" for b in backends) + ("     speed-up" if len(backends) > 1 else "")
    print(header)
    print("-" * len(header))
    rows = []
    for label, fn in cases:
        times = {b: min(timeit.repeat(lambda: fn(b), number=1, repeat=repeat)) for b in backends}
        line = f"{label:<44}" + "".join(f"{times[b] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) > 1:
            line += f"{times['python'] / times['cython']:>12.1f}x"
        print(line, flush=True)
        rows.append((label, times))
    return rows


if __name__ == "__main__":
    main()
