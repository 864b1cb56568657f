#!/usr/bin/env python3
"""Sweep every connected unit-edge graph up to a vertex bound.

For each vertex count the script prints the number of graphs, the
largest basepoint, thinness, and slimness constants seen, and the time
spent.  Exits 1 if any graph breaks one of the six inequalities tying
the three constants together; the offending edge list is printed.
"""

import argparse
import sys
import time

from lhyp.geodspace import GeodesicGraph, delta_relations
from lhyp.smallgraphs import connected_graphs, edge_list


def sweep(n: int):
    worst = None
    failures = []
    count = 0
    for adj in connected_graphs(n):
        edges = edge_list(adj)
        X = GeodesicGraph(["v%d" % i for i in range(n)], edges).as_space()
        rel = delta_relations(X)
        count += 1
        trio = (rel.delta_point, rel.delta_thin, rel.delta_rips)
        if worst is None:
            worst = trio
        else:
            worst = tuple(max(a, b) for a, b in zip(worst, trio))
        if not rel.ok:
            failures.append((edges, rel.failures))
    return count, worst, failures


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--up-to", type=int, default=7, metavar="N",
                    help="largest vertex count to sweep (default 7)")
    args = ap.parse_args(argv)
    if args.up_to < 1:
        ap.error("--up-to must be at least 1")
    bad = 0
    for n in range(1, args.up_to + 1):
        t0 = time.perf_counter()
        count, worst, failures = sweep(n)
        point, thin, rips = (w.render() for w in worst)
        print("n=%d graphs=%d max_point=%s max_thin=%s max_rips=%s %.1fs"
              % (n, count, point, thin, rips, time.perf_counter() - t0))
        for edges, names in failures:
            bad += 1
            print("violation n=%d edges=%s checks=%s"
                  % (n, edges, ",".join(names)))
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
