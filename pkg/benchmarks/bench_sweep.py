"""Time EVA with the compiled and the pure-Python sweep on synthetic snapshots.

    python benchmarks/bench_sweep.py --sizes 100 200 400 --repeat 3
"""
import argparse
import time

from echotrack.community import EvaConfig, eva_partition
from echotrack.community.kernels import BACKENDS
from echotrack.synth import Block, SynthConfig, generate


def snapshot(block_size: int, seed: int):
    cfg = SynthConfig((Block(block_size, "pro", 0.2), Block(block_size, "anti", 0.2),
                       Block(block_size, "pro", 0.2)), snapshots=2, inter_p=0.01, seed=seed)
    return generate(cfg)[0][0]


def best_time(graph, backend, repeat):
    times, part = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        part = eva_partition(graph, EvaConfig(), backend)
        times.append(time.perf_counter() - start)
    return min(times), part


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400], help="nodes per block (3 blocks)")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    backends = sorted(BACKENDS)
    print(f"backends: {', '.join(backends)}")
    print(f"{'nodes':>6} {'edges':>7} " + " ".join(f"{b + ' s':>10}" for b in backends) + "  speedup  same")
    for size in args.sizes:
        g = snapshot(size, args.seed)
        results = {b: best_time(g, b, args.repeat) for b in backends}
        row = f"{len(g.nodes):>6} {len(g.edges):>7} " + " ".join(f"{results[b][0]:>10.4f}" for b in backends)
        if "cython" in results:
            speedup = results["python"][0] / results["cython"][0]
            same = results["python"][1] == results["cython"][1]
            row += f"  {speedup:7.1f}x  {same}"
        print(row)


if __name__ == "__main__":
    main()
