"""Exhaustive enumeration of small connected graphs up to isomorphism.

Representatives are produced by vertex augmentation: every connected
graph on n vertices arises from a connected graph on n-1 vertices by
adding one vertex joined to a nonempty subset (delete any non-cut vertex
to see this), so augmenting all representatives and deduplicating by a
canonical form covers everything.  The canonical form is the largest
row-major adjacency bitstring over all labellings, found by partition
refinement with individualization.

Counts for n = 1..8: 1, 1, 2, 6, 21, 112, 853, 11117.
"""

from functools import lru_cache
from typing import List, Tuple

Adj = Tuple[int, ...]  # neighbor bitmask per vertex


def _refine(n: int, adj: Adj, cells: List[List[int]]) -> List[List[int]]:
    """Split cells by neighbor counts to every cell until stable."""
    while True:
        masks = [sum(1 << v for v in c) for c in cells]
        out: List[List[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict = {}
            for v in cell:
                sig = tuple(bin(adj[v] & m).count("1") for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                out.append(cell)
            else:
                changed = True
                for sig in sorted(groups):
                    out.append(groups[sig])
        if not changed:
            return out
        cells = out


def _key_of(n: int, adj: Adj, perm: List[int]) -> int:
    key = 0
    for p in range(n):
        ap = adj[perm[p]]
        for q in range(p + 1, n):
            key = key * 2 + (ap >> perm[q] & 1)
    return key


def canonical_key(n: int, adj: Adj) -> int:
    """Isomorphism-invariant integer key of the graph."""
    if n == 1:
        return 0
    best = -1

    def descend(cells: List[List[int]]) -> None:
        nonlocal best
        cells = _refine(n, adj, cells)
        at = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if at is None:
            key = _key_of(n, adj, [v for c in cells for v in c])
            if key > best:
                best = key
            return
        cell = cells[at]
        for v in cell:
            rest = [w for w in cell if w != v]
            descend(cells[:at] + [[v], rest] + cells[at + 1 :])

    descend([list(range(n))])
    return best


@lru_cache(maxsize=None)
def connected_graphs(n: int) -> Tuple[Adj, ...]:
    """All connected graphs on vertices 0..n-1, one per isomorphism class."""
    if n < 1:
        return ()
    if n == 1:
        return ((0,),)
    reps: List[Adj] = []
    seen = set()
    for parent in connected_graphs(n - 1):
        for sub in range(1, 1 << (n - 1)):
            adj = tuple(
                parent[v] | ((sub >> v & 1) << (n - 1)) for v in range(n - 1)
            ) + (sub,)
            key = canonical_key(n, adj)
            if key not in seen:
                seen.add(key)
                reps.append(adj)
    return tuple(reps)


def edge_list(adj: Adj) -> List[Tuple[int, int]]:
    n = len(adj)
    return [(i, j) for i in range(n) for j in range(i + 1, n) if adj[i] >> j & 1]
