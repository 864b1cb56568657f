"""Geodesic Z-metric spaces realized as graphs with unit edges.

A finite Z-metric space is geodesic exactly when every pair of points is
joined by a chain of points at consecutive distance one, which makes such
spaces the path metrics of connected graphs.  This module houses the graph
type, the geodesicity test, comparison tripods, and the two triangle
constants (thinness and slimness) together with the report relating them
to the basepoint triple constant.
"""

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import ConstructionError, InputError
from .lspace import FiniteLambdaSpace, min_delta_at
from .ordgroup import LexElem, QLexElem, qmax


class GeodesicGraph:
    """Connected graph with unit edges; the metric is shortest-path length."""

    __slots__ = ("labels", "adj", "dist", "_index")

    def __init__(self, labels: Sequence[str], edges):
        labels = tuple(str(s) for s in labels)
        if not labels:
            raise InputError("need at least one vertex")
        if len(set(labels)) != len(labels):
            raise InputError("duplicate vertex labels")
        index = {s: i for i, s in enumerate(labels)}
        n = len(labels)
        nb = [set() for _ in range(n)]
        for u, v in edges:
            i = self._resolve(u, index, n)
            j = self._resolve(v, index, n)
            if i == j:
                raise InputError("loop edge at %r" % (labels[i],))
            nb[i].add(j)
            nb[j].add(i)
        self.labels = labels
        self.adj = tuple(tuple(sorted(s)) for s in nb)
        self._index = index
        self.dist = tuple(self._bfs_row(i) for i in range(n))

    @staticmethod
    def _resolve(v, index, n):
        if isinstance(v, int) and not isinstance(v, bool):
            if not 0 <= v < n:
                raise InputError("vertex index %d out of range" % (v,))
            return v
        try:
            return index[str(v)]
        except KeyError:
            raise InputError("unknown vertex %r" % (v,)) from None

    def _bfs_row(self, src: int) -> Tuple[int, ...]:
        n = len(self.labels)
        row = [-1] * n
        row[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            du = row[u]
            for w in self.adj[u]:
                if row[w] < 0:
                    row[w] = du + 1
                    queue.append(w)
        if -1 in row:
            raise InputError(
                "graph is disconnected: no path %s to %s"
                % (self.labels[src], self.labels[row.index(-1)])
            )
        return tuple(row)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, v) -> int:
        return self._resolve(v, self._index, len(self.labels))

    def edges(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(len(self.labels)) for j in self.adj[i] if i < j]

    def as_space(self) -> FiniteLambdaSpace:
        """All-pairs shortest-path table as a rank-one Z-metric space."""
        table = [[LexElem((d,), "Z") for d in row] for row in self.dist]
        return FiniteLambdaSpace(self.labels, table, "Z")


def read_gg(text: str) -> GeodesicGraph:
    """Parse the .gg format: 'graph k' then edge lines 'u v' (0-based)."""
    toks = []
    for line in text.splitlines():
        toks.extend(line.split("#", 1)[0].split())
    if len(toks) < 2 or toks[0] != "graph":
        raise InputError("expected 'graph k' header")
    try:
        k = int(toks[1])
    except ValueError as exc:
        raise InputError("bad vertex count %r" % (toks[1],)) from exc
    if k < 1:
        raise InputError("need at least one vertex")
    rest = toks[2:]
    if len(rest) % 2:
        raise InputError("odd number of edge endpoints")
    edges = []
    for a, b in zip(rest[::2], rest[1::2]):
        try:
            edges.append((int(a), int(b)))
        except ValueError as exc:
            raise InputError("bad edge endpoint %r %r" % (a, b)) from exc
    return GeodesicGraph([str(i) for i in range(k)], edges)


def write_gg(G: GeodesicGraph) -> str:
    lines = ["graph %d" % len(G)]
    lines.extend("%d %d" % e for e in G.edges())
    return "\n".join(lines) + "\n"


def _int_table(X: FiniteLambdaSpace) -> List[List[int]]:
    # geodesic analysis is defined for Z-valued distances only
    if X.domain != "Z" or X.rank != 1:
        raise InputError("need rank-one Z-valued distances, got %s^%d" % (X.domain, X.rank))
    return X.raw_table()


def unit_graph(X: FiniteLambdaSpace, check: bool = True) -> GeodesicGraph:
    """Graph on the points of X with edges at distance one.

    With check=True the graph's path metric must reproduce the distance
    table, which holds exactly when X is geodesic.
    """
    D = _int_table(X)
    n = len(X)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if D[i][j] == 1]
    G = GeodesicGraph(X.labels, edges)
    if check:
        for i in range(n):
            for j in range(n):
                if G.dist[i][j] != D[i][j]:
                    raise ConstructionError(
                        "unit edges do not realize d(%s,%s)=%d (paths give %d)"
                        % (X.labels[i], X.labels[j], D[i][j], G.dist[i][j])
                    )
    return G


def is_geodesic(X: FiniteLambdaSpace) -> Tuple[bool, Optional[Tuple[str, str, int]]]:
    """Whether every pair admits points at every intermediate parameter.

    Returns (True, None), or (False, (x, y, t)) naming a pair and a
    parameter 0 < t < d(x,y) with no point z at d(x,z)=t, d(z,y)=d-t.
    """
    D = _int_table(X)
    n = len(X)
    for i in range(n):
        Di = D[i]
        for j in range(i + 1, n):
            dij = Di[j]
            Dj = D[j]
            for t in range(1, dij):
                if not any(Di[z] == t and Dj[z] == dij - t for z in range(n)):
                    return False, (X.labels[i], X.labels[j], t)
    return True, None


def _require_geodesic(X: FiniteLambdaSpace) -> List[List[int]]:
    ok, wit = is_geodesic(X)
    if not ok:
        raise InputError("space is not geodesic: gap at (%s,%s,t=%d)" % wit)
    return _int_table(X)


def between_set(X: FiniteLambdaSpace, x, y) -> Tuple[str, ...]:
    """Points z with d(x,z) + d(z,y) = d(x,y), endpoints included."""
    D = _int_table(X)
    i, j = X.index(x), X.index(y)
    return tuple(X.labels[z] for z in _between(D, i, j))


def _between(D, i, j) -> List[int]:
    dij = D[i][j]
    return [z for z in range(len(D)) if D[i][z] + D[z][j] == dij]


def _level(D, c, a, t) -> List[int]:
    dca = D[c][a]
    return [z for z in range(len(D)) if D[c][z] == t and D[z][a] == dca - t]


def level_set(X: FiniteLambdaSpace, x, y, t: int) -> Tuple[str, ...]:
    """Points z at parameter t between x and y: d(x,z)=t and d(z,y)=d(x,y)-t."""
    D = _int_table(X)
    return tuple(X.labels[z] for z in _level(D, X.index(x), X.index(y), t))


def canonical_segment(X: FiniteLambdaSpace, x, y) -> Tuple[str, ...]:
    """The least unit-step chain from x to y, greedy by point index."""
    D = _int_table(X)
    i, j = X.index(x), X.index(y)
    dij = D[i][j]
    chain = [i]
    cur = i
    for t in range(1, dij + 1):
        Dc = D[cur]
        nxt = next(
            (z for z in range(len(D)) if Dc[z] == 1 and D[i][z] == t and D[z][j] == dij - t),
            None,
        )
        if nxt is None:
            raise InputError(
                "no unit chain from %s to %s at parameter %d; space is not geodesic"
                % (X.labels[i], X.labels[j], t)
            )
        chain.append(nxt)
        cur = nxt
    return tuple(X.labels[z] for z in chain)


def all_segments(X: FiniteLambdaSpace, x, y) -> Iterator[Tuple[str, ...]]:
    """Every unit-step distance-realizing chain from x to y, in index order."""
    D = _int_table(X)
    i, j = X.index(x), X.index(y)
    dij = D[i][j]

    def extend(prefix: List[int], t: int) -> Iterator[Tuple[str, ...]]:
        if t == dij:
            yield tuple(X.labels[z] for z in prefix)
            return
        cur = prefix[-1]
        for z in range(len(D)):
            if D[cur][z] == 1 and D[i][z] == t + 1 and D[z][j] == dij - t - 1:
                prefix.append(z)
                yield from extend(prefix, t + 1)
                prefix.pop()

    return extend([i], 0)


@dataclass(frozen=True)
class Tripod:
    """Comparison tripod of a triple: side lengths and the three insizes.

    The insize at a corner is the Gromov product of the other two points
    there; the two insizes meeting along a side sum to that side's length.
    """

    points: Tuple[str, str, str]
    sides: Tuple[LexElem, LexElem, LexElem]  # d(y,z), d(x,z), d(x,y)
    insizes: Tuple[QLexElem, QLexElem, QLexElem]  # at x, at y, at z


def tripod_insizes(X: FiniteLambdaSpace, x, y, z) -> Tripod:
    i, j, k = X.index(x), X.index(y), X.index(z)
    d = X.dist
    dyz, dxz, dxy = d[j][k], d[i][k], d[i][j]
    at_x = QLexElem(dxy + dxz - dyz, 2)
    at_y = QLexElem(dxy + dyz - dxz, 2)
    at_z = QLexElem(dxz + dyz - dxy, 2)
    return Tripod(
        (X.labels[i], X.labels[j], X.labels[k]),
        (dyz, dxz, dxy),
        (at_x, at_y, at_z),
    )


def min_thinness(X: FiniteLambdaSpace) -> QLexElem:
    value, _ = min_thinness_witness(X)
    return value


def min_thinness_witness(X):
    """Least delta bounding every identified pair in every triangle.

    Over each triple and corner, points at equal parameter t from the
    corner on any realizing side toward the two other corners are
    identified on the tripod, for integer t up to the floor of the corner
    insize.  The result is the largest distance between identified
    points; the witness names (corner, other, other, t, u, v).
    """
    D = _require_geodesic(X)
    n = len(X)
    levels: Dict[Tuple[int, int, int], List[int]] = {}

    def level(c, a, t):
        key = (c, a, t)
        got = levels.get(key)
        if got is None:
            got = levels[key] = _level(D, c, a, t)
        return got

    best = 0
    wit = None
    for a, b, c in combinations(range(n), 3):
        for corner, p, q in ((a, b, c), (b, a, c), (c, a, b)):
            Dc = D[corner]
            half = (Dc[p] + Dc[q] - D[p][q]) // 2
            for t in range(1, half + 1):
                for u in level(corner, p, t):
                    Du = D[u]
                    for v in level(corner, q, t):
                        if Du[v] > best:
                            best = Du[v]
                            wit = (corner, p, q, t, u, v)
    value = QLexElem(LexElem((best,), "Z"))
    if wit is None:
        return value, None
    corner, p, q, t, u, v = wit
    L = X.labels
    return value, (L[corner], L[p], L[q], t, L[u], L[v])


def min_rips(X: FiniteLambdaSpace) -> QLexElem:
    value, _ = min_rips_witness(X)
    return value


def min_rips_witness(X):
    """Least delta with every side point near the union of the other sides.

    For each triple, each choice of the side containing u, and each point
    u on any realizing side, the distance from u to the union of all
    points between the remaining two pairs is taken; the result is the
    maximum, the witness (x, y, z, u) with u between x and y.
    """
    D = _require_geodesic(X)
    n = len(X)
    betw: Dict[Tuple[int, int], List[int]] = {}

    def between(i, j):
        key = (i, j) if i < j else (j, i)
        got = betw.get(key)
        if got is None:
            got = betw[key] = _between(D, key[0], key[1])
        return got

    best = 0
    wit = None
    for a, b, c in combinations(range(n), 3):
        for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
            other = set(between(x, z)) | set(between(y, z))
            for u in between(x, y):
                Du = D[u]
                dmin = min(Du[w] for w in other)
                if dmin > best:
                    best = dmin
                    wit = (x, y, z, u)
    value = QLexElem(LexElem((best,), "Z"))
    if wit is None:
        return value, None
    L = X.labels
    return value, tuple(L[v] for v in wit)


def _check_side(X, D, side, x, y) -> List[int]:
    idx = [X.index(v) for v in side]
    if idx[0] != X.index(x) or idx[-1] != X.index(y):
        raise InputError("side endpoints do not match the triple")
    dij = D[idx[0]][idx[-1]]
    if len(idx) != dij + 1:
        raise InputError("side has %d steps, distance is %d" % (len(idx) - 1, dij))
    for t, z in enumerate(idx):
        if D[idx[0]][z] != t or D[z][idx[-1]] != dij - t:
            raise InputError("side is not distance-realizing at step %d" % (t,))
    return idx


@dataclass(frozen=True)
class InnerTriangle:
    """The three side points identified with the tripod center."""

    vertices: Tuple[str, str, str]  # on [x,y], [x,z], [y,z]
    diameter: LexElem


def inner_triangle(X: FiniteLambdaSpace, x, y, z, sides=None, delta=None) -> InnerTriangle:
    """Locate the center preimages on chosen sides of the triangle x,y,z.

    sides, when given, are three explicit chains ([x..y], [x..z], [y..z]);
    the default takes the canonical segment for each pair.  Insizes are
    rounded down toward the measuring corner (x for the first two sides,
    y for the third).  With delta set, a diameter above 4*delta raises
    ConstructionError.
    """
    D = _require_geodesic(X)
    i, j, k = X.index(x), X.index(y), X.index(z)
    if sides is None:
        sides = (
            canonical_segment(X, x, y),
            canonical_segment(X, x, z),
            canonical_segment(X, y, z),
        )
    sxy = _check_side(X, D, sides[0], x, y)
    sxz = _check_side(X, D, sides[1], x, z)
    syz = _check_side(X, D, sides[2], y, z)
    tx = (D[i][j] + D[i][k] - D[j][k]) // 2
    ty = (D[i][j] + D[j][k] - D[i][k]) // 2
    p, q, r = sxy[tx], sxz[tx], syz[ty]
    diam = LexElem((max(D[p][q], D[p][r], D[q][r]),), "Z")
    if delta is not None:
        if QLexElem.from_lex(diam) > _as_q(delta, X) * 4:
            raise ConstructionError(
                "inner triangle of (%s,%s,%s) has diameter %s > 4 delta"
                % (X.labels[i], X.labels[j], X.labels[k], diam.render())
            )
    return InnerTriangle((X.labels[p], X.labels[q], X.labels[r]), diam)


def _as_q(delta, X: FiniteLambdaSpace) -> QLexElem:
    if isinstance(delta, QLexElem):
        return delta
    if isinstance(delta, LexElem):
        return QLexElem.from_lex(delta)
    return QLexElem(LexElem((delta,) + (0,) * (X.rank - 1), X.domain))


SIDE_RULE = (
    "identified pairs range over all distance-realizing sides; "
    "side-to-side distance is taken to the union of all realizing sides"
)


@dataclass
class DeltaRelations:
    """The three triangle constants and the inequalities tying them together."""

    delta_point: QLexElem
    delta_thin: QLexElem
    delta_rips: QLexElem
    failures: Tuple[str, ...] = ()
    side_rule: str = SIDE_RULE

    @property
    def ok(self) -> bool:
        return not self.failures


def delta_relations(X: FiniteLambdaSpace) -> DeltaRelations:
    """Compare the basepoint, thinness, and slimness constants of X.

    The expected bounds: thin <= 4 point, point <= 2 thin, rips <= thin,
    thin <= 4 rips, and the two composites rips <= 4 point, point <= 8 rips.
    """
    _require_geodesic(X)
    dp = QLexElem.zero(X.rank, X.domain)
    for v in range(len(X)):
        dp = qmax(dp, min_delta_at(X, v))
    dt = min_thinness(X)
    dr = min_rips(X)
    checks = (
        ("thin<=4*point", dt <= dp * 4),
        ("point<=2*thin", dp <= dt * 2),
        ("rips<=thin", dr <= dt),
        ("thin<=4*rips", dt <= dr * 4),
        ("rips<=4*point", dr <= dp * 4),
        ("point<=8*rips", dp <= dr * 8),
    )
    failures = tuple(name for name, good in checks if not good)
    return DeltaRelations(dp, dt, dr, failures)
