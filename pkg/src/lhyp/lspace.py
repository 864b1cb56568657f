"""Finite metric spaces with distances in Z^n or Q^n.

Distances are exact group elements; hyperbolicity constants live in the
divisible hull and are reported as exact fractions.  The two minimal
constants (triple condition at a basepoint, four-point condition) are
computed by full scans; the four-point scan can be partitioned across
worker processes.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ConstructionError, InputError
from .ordgroup import LexElem, QLexElem, parse_lex


class FiniteLambdaSpace:
    """A finite point set with a symmetric distance table over Z^n or Q^n."""

    __slots__ = ("labels", "dist", "domain", "_index")

    def __init__(self, labels: Sequence[str], dist: Sequence[Sequence[LexElem]], domain: str = "Z"):
        labels = tuple(str(s) for s in labels)
        if not labels:
            raise InputError("need at least one point")
        if len(set(labels)) != len(labels):
            raise InputError("duplicate point labels")
        if len(dist) != len(labels) or any(len(row) != len(labels) for row in dist):
            raise InputError("distance table is not %d x %d" % (len(labels), len(labels)))
        rank = None
        for row in dist:
            for e in row:
                if not isinstance(e, LexElem) or e.domain != domain:
                    raise InputError("table entry %r not in the declared group" % (e,))
                if rank is None:
                    rank = e.rank
                elif e.rank != rank:
                    raise InputError("mixed ranks in distance table")
        self.labels = labels
        self.dist = tuple(tuple(row) for row in dist)
        self.domain = domain
        self._index = {s: i for i, s in enumerate(labels)}

    @property
    def rank(self) -> int:
        return self.dist[0][0].rank if self.dist else 1

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, point) -> int:
        if isinstance(point, int):
            if not 0 <= point < len(self.labels):
                raise InputError("point index %d out of range" % (point,))
            return point
        try:
            return self._index[point]
        except KeyError:
            raise InputError("unknown point %r" % (point,)) from None

    def d(self, x, y) -> LexElem:
        return self.dist[self.index(x)][self.index(y)]

    def raw_table(self):
        """Distance entries as natively comparable values.

        Rank 1 gives bare coordinates; higher ranks give reversed
        coordinate tuples, whose componentwise sums and native ordering
        agree with the group operations.
        """
        if self.rank == 1:
            return [[e.coords[0] for e in row] for row in self.dist]
        return [[e.coords[::-1] for e in row] for row in self.dist]

    def lex_of_raw(self, v) -> LexElem:
        if self.rank == 1:
            return LexElem((v,), self.domain)
        return LexElem(v[::-1], self.domain)


@dataclass
class ValidationReport:
    ok: bool
    axiom: Optional[str] = None
    witness: Tuple[str, ...] = ()

    def __str__(self):
        if self.ok:
            return "metric ok"
        return "violates %s at %s" % (self.axiom, ",".join(self.witness))


def validate_metric(X: FiniteLambdaSpace) -> ValidationReport:
    """Check nonnegativity, identity of indiscernibles, symmetry, triangle."""
    n = len(X)
    dist = X.dist
    zero = LexElem.zero(X.rank, X.domain)
    for i in range(n):
        for j in range(n):
            if dist[i][j] < zero:
                return ValidationReport(False, "LM1", (X.labels[i], X.labels[j]))
    for i in range(n):
        for j in range(n):
            if (i == j) != dist[i][j].is_zero():
                return ValidationReport(False, "LM2", (X.labels[i], X.labels[j]))
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] != dist[j][i]:
                return ValidationReport(False, "LM3", (X.labels[i], X.labels[j]))
    for i in range(n):
        for j in range(n):
            dij = dist[i][j]
            for k in range(n):
                if dist[i][k] + dist[k][j] < dij:
                    return ValidationReport(False, "LM4", (X.labels[i], X.labels[j], X.labels[k]))
    return ValidationReport(True)


def gromov_product(X: FiniteLambdaSpace, x, y, v) -> QLexElem:
    """(x . y)_v = (d(x,v) + d(y,v) - d(x,y)) / 2, in the divisible hull."""
    i, j, k = X.index(x), X.index(y), X.index(v)
    return QLexElem(X.dist[i][k] + X.dist[j][k] - X.dist[i][j], 2)


def _doubled_products(X: FiniteLambdaSpace, v: int):
    """Matrix of 2(x.y)_v in raw form."""
    raw = X.raw_table()
    n = len(X)
    dv = [raw[i][v] for i in range(n)]
    if X.rank == 1:
        return [[dv[i] + dv[j] - raw[i][j] for j in range(n)] for i in range(n)]
    return [
        [tuple(a + b - c for a, b, c in zip(dv[i], dv[j], raw[i][j])) for j in range(n)]
        for i in range(n)
    ]


def min_delta_at(X: FiniteLambdaSpace, v) -> QLexElem:
    value, _ = min_delta_at_witness(X, v)
    return value


def min_delta_at_witness(X: FiniteLambdaSpace, v) -> Tuple[QLexElem, Tuple[str, str, str]]:
    """Least delta making the triple condition at basepoint v hold.

    Scans ordered triples in index order; the witness is the first
    maximizing triple (x,y,z) of the defect min{(x.z)_v,(z.y)_v}-(x.y)_v.
    """
    vi = X.index(v)
    D = _doubled_products(X, vi)
    n = len(X)
    rank1 = X.rank == 1
    best = None
    bi = bj = 0
    for i in range(n):
        Di = D[i]
        for j in range(n):
            m = max(map(min, Di, D[j]))
            if rank1:
                defect = m - Di[j]
            else:
                defect = tuple(a - b for a, b in zip(m, Di[j]))
            if best is None or defect > best:
                best, bi, bj = defect, i, j
    Di, Dj = D[bi], D[bj]
    if rank1:
        target = best + Di[bj]
    else:
        target = tuple(a + b for a, b in zip(best, Di[bj]))
    bk = next(k for k in range(n) if min(Di[k], Dj[k]) == target)
    value = QLexElem(X.lex_of_raw(best), 2)
    if value.sign() < 0:
        value = QLexElem.zero(X.rank, X.domain)
    return value, (X.labels[bi], X.labels[bj], X.labels[bk])


def min_delta_triple(X: FiniteLambdaSpace) -> QLexElem:
    """Least delta for the triple condition simultaneously at every basepoint."""
    best = QLexElem.zero(X.rank, X.domain)
    for v in range(len(X)):
        dv = min_delta_at(X, v)
        if dv > best:
            best = dv
    return best


_PAIRINGS = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))


def _scan_quads_num(raw, idxs, n):
    """Four-point scan over first indices in idxs; numeric entries."""
    best = None
    wit = None
    for i in idxs:
        di = raw[i]
        for j in range(i + 1, n):
            dij = di[j]
            dj = raw[j]
            for k in range(j + 1, n):
                dik = di[k]
                djk = dj[k]
                dk = raw[k]
                for l in range(k + 1, n):
                    s1 = dij + dk[l]
                    s2 = dik + dj[l]
                    s3 = di[l] + djk
                    if s1 >= s2:
                        if s2 >= s3:
                            top, sec, p = s1, s2, 0
                        elif s1 >= s3:
                            top, sec, p = s1, s3, 0
                        else:
                            top, sec, p = s3, s1, 2
                    elif s2 >= s3:
                        top, sec, p = s2, (s1 if s1 >= s3 else s3), 1
                    else:
                        top, sec, p = s3, s2, 2
                    v = top - sec
                    if best is None or v > best:
                        best = v
                        wit = (i, j, k, l, p)
    return best, wit


def _scan_quads_tup(raw, idxs, n):
    best = None
    wit = None
    for i in idxs:
        di = raw[i]
        for j in range(i + 1, n):
            dij = di[j]
            dj = raw[j]
            for k in range(j + 1, n):
                dik = di[k]
                djk = dj[k]
                dk = raw[k]
                for l in range(k + 1, n):
                    s1 = tuple(a + b for a, b in zip(dij, dk[l]))
                    s2 = tuple(a + b for a, b in zip(dik, dj[l]))
                    s3 = tuple(a + b for a, b in zip(di[l], djk))
                    tri = sorted((s1, s2, s3))
                    top, sec = tri[2], tri[1]
                    p = (s1, s2, s3).index(top)
                    v = tuple(a - b for a, b in zip(top, sec))
                    if best is None or v > best:
                        best = v
                        wit = (i, j, k, l, p)
    return best, wit


def _scan_chunk(args):
    raw, idxs, n, numeric = args
    fn = _scan_quads_num if numeric else _scan_quads_tup
    return fn(raw, idxs, n)


def _chunk_first_indices(n: int, parts: int) -> List[List[int]]:
    """Greedy balanced split of first indices by quadruple counts."""
    weights = [(n - 1 - i) * (n - 2 - i) * (n - 3 - i) // 6 for i in range(n - 3)]
    buckets: List[List[int]] = [[] for _ in range(parts)]
    loads = [0] * parts
    for i in sorted(range(n - 3), key=lambda i: -weights[i]):
        b = loads.index(min(loads))
        buckets[b].append(i)
        loads[b] += weights[i]
    for b in buckets:
        b.sort()
    return [b for b in buckets if b]


def min_delta_4pt(X: FiniteLambdaSpace, workers: int = 1) -> QLexElem:
    value, _ = min_delta_4pt_witness(X, workers)
    return value


def min_delta_4pt_witness(
    X: FiniteLambdaSpace, workers: int = 1
) -> Tuple[QLexElem, Optional[Tuple[str, str, str, str]]]:
    """Least delta for the four-point condition, with first maximizing witness.

    The scan runs over index-sorted quadruples and the three pairings of
    each; partitioning across workers does not change the result.
    """
    n = len(X)
    if n < 4:
        return QLexElem.zero(X.rank, X.domain), None
    raw = X.raw_table()
    numeric = X.rank == 1
    if workers <= 1:
        best, wit = _scan_chunk((raw, list(range(n - 3)), n, numeric))
    else:
        chunks = _chunk_first_indices(n, workers)
        results = []
        with ProcessPoolExecutor(max_workers=min(workers, len(chunks))) as pool:
            for r in pool.map(_scan_chunk, [(raw, c, n, numeric) for c in chunks]):
                results.append(r)
        best, wit = None, None
        for b, w in results:
            if b is None:
                continue
            if best is None or b > best or (b == best and w < wit):
                best, wit = b, w
    defect = X.lex_of_raw(best)
    value = QLexElem(defect, 2)
    if value.sign() < 0:
        value = QLexElem.zero(X.rank, X.domain)
        return value, None
    i, j, k, l, p = wit
    a, b, c, d = _PAIRINGS[p]
    quad = (i, j, k, l)
    witness = tuple(X.labels[quad[t]] for t in (a, b, c, d))
    return value, witness


@dataclass
class HyperbolicityReport:
    delta_triple_at: Dict[str, QLexElem]
    delta_triple: QLexElem
    delta_4pt: QLexElem
    witness_triple: Tuple[str, ...] = ()
    witness_quad: Tuple[str, ...] = ()
    basepoint_of_witness: str = ""


def hyperbolicity_report(X: FiniteLambdaSpace, workers: int = 1) -> HyperbolicityReport:
    per = {}
    best = QLexElem.zero(X.rank, X.domain)
    wt: Tuple[str, ...] = ()
    bp = ""
    for v, lab in enumerate(X.labels):
        val, wit = min_delta_at_witness(X, v)
        per[lab] = val
        if val > best:
            best, wt, bp = val, wit, lab
    d4, w4 = min_delta_4pt_witness(X, workers)
    return HyperbolicityReport(per, best, d4, wt, w4 or (), bp)


def subspace_at(X: FiniteLambdaSpace, x, i: int) -> FiniteLambdaSpace:
    """Points whose distance from x lies in Lambda_i, over the first i coordinates."""
    if not 0 <= i <= X.rank:
        raise InputError("convex index %d out of range for rank %d" % (i, X.rank))
    xi = X.index(x)
    keep = [j for j in range(len(X)) if X.dist[xi][j].height() <= i]
    for a in keep:
        for b in keep:
            if X.dist[a][b].height() > i:
                raise ConstructionError(
                    "subspace at %r not closed in Lambda_%d: d(%s,%s)=%s"
                    % (x, i, X.labels[a], X.labels[b], X.dist[a][b].render())
                )
    dist = [
        [LexElem(X.dist[a][b].coords[:i], X.domain) for b in keep]
        for a in keep
    ]
    return FiniteLambdaSpace([X.labels[j] for j in keep], dist, X.domain)


def convex_classes(X: FiniteLambdaSpace, i: int) -> List[List[int]]:
    """Partition of the points by the relation d(x,y) in Lambda_i."""
    if not 0 <= i <= X.rank:
        raise InputError("convex index %d out of range for rank %d" % (i, X.rank))
    n = len(X)
    cls: List[List[int]] = []
    assigned = [-1] * n
    for a in range(n):
        if assigned[a] >= 0:
            continue
        members = [a]
        assigned[a] = len(cls)
        for b in range(a + 1, n):
            if assigned[b] < 0 and X.dist[a][b].height() <= i:
                members.append(b)
                assigned[b] = len(cls)
        cls.append(members)
    for members in cls:
        for a in members[1:]:
            for b in members:
                if X.dist[a][b].height() > i:
                    raise ConstructionError(
                        "relation d in Lambda_%d is not transitive at %s,%s"
                        % (i, X.labels[a], X.labels[b])
                    )
    return cls


def quotient_by_convex(X: FiniteLambdaSpace, i: int) -> FiniteLambdaSpace:
    """Quotient metric space over Lambda/Lambda_i."""
    cls = convex_classes(X, i)
    labels = []
    for members in cls:
        if len(members) == 1:
            labels.append(X.labels[members[0]])
        else:
            labels.append("{%s}" % ",".join(X.labels[m] for m in members))
    k = len(cls)
    dist = []
    for a in range(k):
        row = []
        for b in range(k):
            ra, rb = cls[a][0], cls[b][0]
            val = LexElem(X.dist[ra][rb].coords[i:], X.domain)
            for ma in cls[a]:
                for mb in cls[b]:
                    if LexElem(X.dist[ma][mb].coords[i:], X.domain) != val:
                        raise ConstructionError(
                            "quotient distance ill-defined between classes %s,%s"
                            % (labels[a], labels[b])
                        )
            row.append(val)
        dist.append(row)
    return FiniteLambdaSpace(labels, dist, X.domain)


def scale(X: FiniteLambdaSpace, k) -> FiniteLambdaSpace:
    """Multiply every distance by a positive scalar."""
    if X.domain == "Z":
        if not isinstance(k, int) or k < 1:
            raise InputError("scale factor for Z^n must be a positive integer")
        dist = [[e * k for e in row] for row in X.dist]
    else:
        k = Fraction(k)
        if k <= 0:
            raise InputError("scale factor must be positive")
        dist = [[LexElem(tuple(c * k for c in e.coords), "Q") for e in row] for row in X.dist]
    return FiniteLambdaSpace(X.labels, dist, X.domain)


def _tokens(text: str) -> List[str]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        out.extend(line.split())
    return out


def parse_group_header(tok: str) -> Tuple[str, int]:
    if "^" in tok:
        dom, _, r = tok.partition("^")
        try:
            rank = int(r)
        except ValueError as exc:
            raise InputError("bad group %r" % (tok,)) from exc
    else:
        dom, rank = tok, 1
    if dom not in ("Z", "Q") or rank < 1:
        raise InputError("bad group %r" % (tok,))
    return dom, rank


def read_lms(text: str) -> FiniteLambdaSpace:
    """Parse the .lms format: group header, labelled points, distance matrix."""
    toks = _tokens(text)
    if len(toks) < 2 or toks[0] != "lambda":
        raise InputError("expected 'lambda Z^n' or 'lambda Q^n' header")
    domain, rank = parse_group_header(toks[1])
    if len(toks) < 4 or toks[2] != "points":
        raise InputError("expected 'points k'")
    try:
        k = int(toks[3])
    except ValueError as exc:
        raise InputError("bad point count %r" % (toks[3],)) from exc
    if k < 1:
        raise InputError("need at least one point")
    need = 4 + k + k * k
    if len(toks) != need:
        raise InputError("expected %d tokens, got %d" % (need, len(toks)))
    labels = toks[4 : 4 + k]
    entries = toks[4 + k :]
    dist = []
    for i in range(k):
        dist.append([parse_lex(entries[i * k + j], rank, domain) for j in range(k)])
    return FiniteLambdaSpace(labels, dist, domain)


def write_lms(X: FiniteLambdaSpace) -> str:
    lines = ["lambda %s^%d" % (X.domain, X.rank)]
    lines.append("points %d %s" % (len(X), " ".join(X.labels)))
    for row in X.dist:
        lines.append(" ".join(e.render() for e in row))
    return "\n".join(lines) + "\n"
