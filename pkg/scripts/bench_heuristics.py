#!/usr/bin/env python3
"""Compare decoder work and wall time as sentence length grows.

Generates dense synthetic costs from the bundled demo lexicon and prints,
per length, chart items against A* dequeues for each estimate.  The point
of the table is the shrinking dequeue column as estimates sharpen.

Usage: python scripts/bench_heuristics.py [--max-n 14] [--per-n 5] [--seed 0]
"""

import argparse
import statistics
import sys
import time

from amparse.astar import HEURISTICS, astar_parse
from amparse.chart import chart_parse
from amparse.costs import gen_synthetic
from amparse.demo import demo_lexicon
from amparse.lexicon import augment_closure


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=14)
    ap.add_argument("--per-n", type=int, default=5, help="sentences per length")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    lexicon = augment_closure(demo_lexicon())
    cols = ["chart"] + list(HEURISTICS)
    header = f"{'n':>3} " + " ".join(f"{c:>14}" for c in cols)
    print(header)
    print("-" * len(header))
    for n in range(2, args.max_n + 1, 2):
        work = {c: 0 for c in cols}
        walls = {c: [] for c in cols}
        for k in range(args.per_n):
            costs = gen_synthetic(args.seed + 1000 * n + k, n, lexicon)
            t0 = time.perf_counter()
            res = chart_parse(costs, lexicon)
            walls["chart"].append(time.perf_counter() - t0)
            work["chart"] += res.stats.n_items
            for h in HEURISTICS:
                t0 = time.perf_counter()
                a = astar_parse(costs, lexicon, heuristic=h, k_tags=None)
                walls[h].append(time.perf_counter() - t0)
                work[h] += a.stats.dequeued
        cells = []
        for c in cols:
            ms = statistics.median(walls[c]) * 1000
            cells.append(f"{work[c]:>7d}/{ms:5.1f}ms")
        print(f"{n:>3} " + " ".join(f"{cell:>14}" for cell in cells))
    print("# cells are total work items / median wall per sentence")
    return 0


if __name__ == "__main__":
    sys.exit(main())
