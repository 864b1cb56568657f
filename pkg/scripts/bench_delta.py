#!/usr/bin/env python3
"""Time the 4-point delta scan over random tables and worker counts.

Each table is a complete graph with uniform random weights repaired into
a metric by shortest paths.  One line per (size, workers) pair; the scan
must return the same value at every worker count or the run exits 1.
"""

import argparse
import sys
import time
from random import Random

from lhyp.lspace import FiniteLambdaSpace, min_delta_4pt
from lhyp.ordgroup import LexElem


def random_space(rng: Random, n: int, maxw: int) -> FiniteLambdaSpace:
    D = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            D[i][j] = D[j][i] = rng.randint(1, maxw)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if D[i][k] + D[k][j] < D[i][j]:
                    D[i][j] = D[i][k] + D[k][j]
    labels = ["v%d" % i for i in range(n)]
    return FiniteLambdaSpace(labels, [[LexElem((v,)) for v in row]
                                      for row in D])


def csv_ints(raw: str):
    try:
        return [int(tok) for tok in raw.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=csv_ints, default=[20, 40, 60],
                    help="point counts, comma separated (default 20,40,60)")
    ap.add_argument("--workers", type=csv_ints, default=[1, 2, 4, 8],
                    help="worker counts to compare (default 1,2,4,8)")
    ap.add_argument("--maxw", type=int, default=20,
                    help="largest edge weight before repair (default 20)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = Random(args.seed)
    mismatch = False
    for n in args.sizes:
        X = random_space(rng, n, args.maxw)
        baseline = None
        for w in args.workers:
            t0 = time.perf_counter()
            d = min_delta_4pt(X, workers=w)
            dt = time.perf_counter() - t0
            if baseline is None:
                baseline = d
            agree = d == baseline
            mismatch = mismatch or not agree
            print("points=%d workers=%d delta=%s %.3fs%s"
                  % (n, w, d.render(), dt, "" if agree else " MISMATCH"))
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
