"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --model universal --n 4 5 6 --repeat 3
"""
import argparse
import time

from pauligraph._backend import available_backends
from pauligraph.dla import model_preset
from pauligraph.graph import component_of
from pauligraph.pauli import PauliString


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(model, n):
    gens = model_preset(model, n)
    gx, gz = gens.x_masks, gens.z_masks
    seed = PauliString.single(n, 1, "X")
    adj = component_of(seed, gens).adjacency
    return {
        "union_find_roots": lambda k: k.union_find_roots(n, gx, gz, -1),
        "bfs_component": lambda k: k.bfs_component(n, seed.index, gx, gz, -1, 1 << 30),
        "eccentricities": lambda k: k.eccentricities(adj.indptr, adj.indices),
    }, len(adj.indptr) - 1


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--model", default="universal")
    parser.add_argument("--n", type=int, nargs="+", default=[4, 5])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the Python kernels are timed")
    print(f"{'kernel':<18} {'n':>3} {'component':>10} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for n in args.n:
        kernels, size = cases(args.model, n)
        for name, call in kernels.items():
            t = {b: best_of(lambda: call(mod), args.repeat) for b, mod in backends.items()}
            speed = f"{t['python'] / t['cython']:8.1f}x" if "cython" in t else ""
            cols = " ".join(f"{t[b] * 1e3:8.2f}ms" for b in backends)
            print(f"{name:<18} {n:>3} {size:>10} {cols}  {speed}")


if __name__ == "__main__":
    main()
