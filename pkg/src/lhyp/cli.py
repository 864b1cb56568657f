"""Batch front end: one subcommand per pipeline stage.

Reports are plain ``key value`` lines in a fixed order so golden files
can be compared byte for byte.  Wall time goes to stderr to keep stdout
stable across runs.  Exit codes: 0 clean, 1 mathematical violation or
counterexample found, 2 unreadable or malformed input.
"""

import argparse
import hashlib
import os
import sys
import time
from typing import List, Optional, Sequence, Tuple

from .catalog import read_grp, read_len
from .completion import check_RS, gamma1, gamma2, write_cg
from .errors import ConstructionError, InputError
from .isometry import ClassCert, IsoPerm, classify_certificate, read_perm
from .lenfun import check_axioms, check_complete, check_free, check_regular
from .lspace import hyperbolicity_report, read_lms, validate_metric
from .ordgroup import LexElem, parse_lex
from .relhyp import (RelCayley, check_Pn, check_qi, short_pair_report,
                     verify_relhyp_geodesics)


def _workers() -> int:
    raw = os.environ.get("LHYP_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError("LHYP_THREADS must be an integer, got %r" % raw) from None
    return max(1, n)


def _read(path: str) -> Tuple[str, bytes]:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc)) from None
    try:
        return data.decode("utf-8"), data
    except UnicodeDecodeError:
        raise InputError("%s is not utf-8 text" % path) from None


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if hasattr(value, "render"):
        return value.render()
    if isinstance(value, (tuple, list)):
        return ",".join(_fmt(v) for v in value) if value else "none"
    if isinstance(value, str) and not value:
        return "none"
    return str(value)


class Report:
    """Ordered key-value lines; .failed tracks verdict lines that said no."""

    def __init__(self, command: str):
        self.lines: List[Tuple[str, str]] = [("command", command)]
        self.failed = False

    def add(self, key: str, value) -> None:
        self.lines.append((key, _fmt(value)))

    def verdict(self, key: str, ok: bool, witness=None) -> None:
        self.add(key, ok)
        if not ok:
            self.failed = True
            if witness is not None:
                self.add(key + "_witness", witness)

    def digest(self, role: str, path: str, data: bytes) -> None:
        line = ("input_" + role,
                "%s sha256:%s" % (path, hashlib.sha256(data).hexdigest()))
        if line not in self.lines:
            self.lines.append(line)

    def emit(self) -> None:
        for key, value in self.lines:
            sys.stdout.write("%s %s\n" % (key, value))


def _parse_delta(text: str, rank: int) -> LexElem:
    # bare integers are accepted for rank one as a convenience
    if text.startswith("("):
        d = parse_lex(text, rank)
    else:
        try:
            d = LexElem((int(text),) + (0,) * (rank - 1))
        except ValueError:
            raise InputError("bad delta %r" % text) from None
    if len(d.coords) != rank:
        raise InputError("delta rank %d does not match %d" % (len(d.coords), rank))
    return d


def _load_space(rep: Report, path: str):
    text, data = _read(path)
    rep.digest("space", path, data)
    return read_lms(text)


# -- check ----------------------------------------------------------------

def cmd_check(args) -> Report:
    rep = Report("check")
    X = _load_space(rep, args.space)
    rep.add("points", len(X))
    rep.add("rank", X.rank)
    rep.add("domain", X.domain)
    v = validate_metric(X)
    wit = None if v.ok else "%s at %s" % (v.axiom, ",".join(v.witness))
    rep.verdict("metric", v.ok, wit)
    if not v.ok:
        return rep
    hr = hyperbolicity_report(X, _workers())
    rep.add("delta_triple", hr.delta_triple)
    rep.add("delta_4pt", hr.delta_4pt)
    per = hr.delta_triple_at
    # every basepoint constant doubles any other, and the four-point
    # constant sits within a factor two of each of them
    doubling = all(per[t] <= per[s] * 2 for t in X.labels for s in X.labels)
    four_point = all(per[t] <= hr.delta_4pt * 2 and hr.delta_4pt <= per[t] * 2
                     for t in X.labels)
    rep.verdict("doubling_sweep", doubling)
    rep.verdict("four_point_sweep", four_point)
    return rep


# -- delta ----------------------------------------------------------------

def cmd_delta(args) -> Report:
    rep = Report("delta")
    X = _load_space(rep, args.space)
    v = validate_metric(X)
    if not v.ok:
        rep.verdict("metric", False, "%s at %s" % (v.axiom, ",".join(v.witness)))
        return rep
    hr = hyperbolicity_report(X, _workers())
    rep.add("points", len(X))
    for lab in X.labels:
        rep.add("delta_at", "%s %s" % (lab, hr.delta_triple_at[lab].render()))
    rep.add("delta_triple", hr.delta_triple)
    rep.add("witness_triple", hr.witness_triple)
    rep.add("basepoint", hr.basepoint_of_witness)
    rep.add("delta_4pt", hr.delta_4pt)
    rep.add("witness_4pt", hr.witness_quad)
    return rep


# -- complete -------------------------------------------------------------

def cmd_complete(args) -> Report:
    rep = Report("complete")
    X = _load_space(rep, args.space)
    if args.delta < 0:
        raise InputError("delta must be a natural number")
    rep.add("method", args.method)
    rep.add("delta", args.delta)
    if args.method == "gamma2":
        ok, table = check_RS(X, LexElem((args.delta,) + (0,) * (X.rank - 1)))
        if not ok:
            rep.verdict("midpoints", False,
                        "no %d-central point for %s" %
                        (2 * args.delta, ",".join(table.failing or ())))
            return rep
        rep.add("midpoints", True)
        out = gamma2(X, args.delta, order_seed=args.seed)
    else:
        out = gamma1(X, args.delta, order_seed=args.seed)
    rep.add("vertices", len(out.labels))
    rep.add("edges", len(out.edges))
    rep.add("essential", out.essential_count())
    derived = out.derived_space()
    identity = (list(derived.labels) == list(X.labels)
                and derived.dist == X.dist)
    if identity:
        rep.add("certificate", "identity")
    else:
        rep.add("certificate", "stage-" + out.certificate.get("stage", "?"))
    for key in sorted(out.certificate):
        rep.add("cert_" + key, out.certificate[key])
    text = write_cg(out)
    rep.add("output", "sha256:%s" % hashlib.sha256(text.encode()).hexdigest())
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError("cannot write %s: %s" % (args.out, exc)) from None
        rep.add("written", args.out)
    return rep


# -- classify -------------------------------------------------------------

_KIND_NAMES = {
    "elliptic": "Elliptic",
    "hyperbolic_or_inversion": "HyperbolicOrInversion",
    "inversion": "InversionCert",
    "undetermined": "Undetermined",
}


def _render_cert(cert: ClassCert) -> str:
    name = _KIND_NAMES[cert.kind]
    if cert.kind == "elliptic":
        return "%s(%d)" % (name, cert.K)
    return name


def cmd_classify(args) -> Report:
    rep = Report("classify")
    X = _load_space(rep, args.space)
    text, data = _read(args.perm)
    rep.digest("perm", args.perm, data)
    perm = read_perm(text)
    pi = IsoPerm(X, perm)
    delta = _parse_delta(args.delta, X.rank)
    cert = classify_certificate(X, pi, delta, args.K)
    rep.add("delta", delta)
    rep.add("K", args.K)
    rep.add("order", pi.order)
    rep.add("certificate", _render_cert(cert))
    rep.add("witness", cert.witness)
    rep.add("horizon", cert.horizon)
    return rep


# -- lenfun ---------------------------------------------------------------

def _len_loader(rep: Report, base: str):
    def loader(ref: str) -> str:
        path = os.path.join(base, ref)
        text, data = _read(path)
        rep.digest("group", ref, data)
        return text
    return loader


def cmd_lenfun(args) -> Report:
    rep = Report("lenfun")
    text, data = _read(args.len)
    rep.digest("len", args.len, data)
    table = read_len(text, _len_loader(rep, os.path.dirname(os.path.abspath(args.len))))
    rep.add("elements", len(table))
    rep.add("rank", table.rank)
    sample = table.elements()
    ran_any = False
    if args.axioms:
        ran_any = True
        ax = check_axioms(table, sample)
        rep.verdict("axiom_nonneg", ax.nonneg_ok, ax.nonneg_witness)
        rep.verdict("axiom_symmetric", ax.symmetric_ok, ax.symmetric_witness)
        rep.verdict("axiom_subadditive", ax.subadditive_ok, ax.subadditive_witness)
        rep.add("delta_min", ax.delta)
        rep.add("delta_witness", ax.delta_witness)
        rep.add("pairs_checked", ax.pairs_checked)
        rep.add("triples_checked", ax.triples_checked)
    delta = _parse_delta(args.delta, table.rank) if args.delta else \
        LexElem.zero(table.rank)
    if args.regular is not None:
        ran_any = True
        rg = check_regular(table, sample, args.regular, delta)
        rep.add("regular_k", rg.k)
        rep.verdict("r1", rg.r1_ok, rg.r1_witness)
        rep.verdict("r2", rg.r2_ok, rg.r2_witness)
        rep.verdict("r1_implies_r2", rg.implication_r1_to_r2)
        rep.verdict("r2_implies_r1", rg.implication_r2_to_r1)
    if args.complete:
        ran_any = True
        cp = check_complete(table, sample, delta)
        rep.verdict("complete", cp.complete, cp.witness)
        rep.verdict("prefix_gap", cp.prefix_gap_ok, cp.prefix_gap_witness)
        rep.add("prefix_gap_max", cp.prefix_gap_max)
    if args.free:
        ran_any = True
        fr = check_free(table, sample, delta)
        rep.verdict("free", fr.free, fr.witness)
        rep.verdict("kernel_trivial", fr.kernel_trivial)
    if not ran_any:
        raise InputError("pick at least one of --axioms --regular --complete --free")
    return rep


# -- relcayley ------------------------------------------------------------

def cmd_relcayley(args) -> Report:
    rep = Report("relcayley")
    gtext, gdata = _read(args.group)
    rep.digest("group", args.group, gdata)
    ltext, ldata = _read(args.len)
    rep.digest("len", args.len, ldata)
    gbase = os.path.dirname(os.path.abspath(args.group))
    group, gens = read_grp(gtext, _len_loader(rep, gbase))
    table = read_len(ltext, _len_loader(rep, os.path.dirname(os.path.abspath(args.len))))
    rc = RelCayley(table.group, table, args.N, args.radius,
                   gens=gens if gens else None)
    rep.add("N", args.N)
    rep.add("radius", args.radius)
    rep.add("cosets", len(rc))
    rep.add("base", rc.labels[0])
    sp = short_pair_report(rc)
    rep.add("short_pairs_checked", sp.checked)
    rep.verdict("short_pairs", sp.ok, sp.witness)
    qi = check_qi(rc)
    rep.add("N_prime", qi.N_prime)
    rep.add("alpha", qi.alpha)
    rep.add("alpha_star", qi.alpha_star)
    rep.add("qi_pairs", qi.pairs_checked)
    rep.add("unreachable", qi.unreachable)
    rep.verdict("qi_upper", qi.upper_ok, qi.witness)
    rep.verdict("qi_lower", qi.lower_ok, qi.witness)
    delta = _parse_delta(args.delta, table.rank) if args.delta else \
        LexElem.zero(table.rank)
    ge = verify_relhyp_geodesics(rc, args.K, delta)
    rep.add("geodesic_two_edge_checked", ge.two_edge_checked)
    rep.verdict("geodesic_two_edge", ge.two_edge_ok, ge.witness)
    rep.add("geodesic_three_edge_checked", ge.three_edge_checked)
    rep.verdict("geodesic_three_edge", ge.three_edge_ok, ge.witness)
    if args.pn is not None:
        pd = delta.coords[0] if table.rank == 1 else 0
        pn = check_Pn(table.group, table, args.pn, args.radius, delta=pd)
        rep.add("pn_n", pn.n)
        rep.add("pn_alpha", pn.alpha)
        rep.verdict("pn_alpha_ok", pn.alpha_ok)
        rep.verdict("pn_generates", pn.generates)
        rep.add("pn_double_cosets", pn.double_cosets)
        rep.add("pn_threshold", pn.threshold.render())
        rep.add("pn_L", pn.L.render())
    return rep


# -- entry point ----------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lhyp",
                                description="finite Lambda-metric space toolkit")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="validate a space and its constants")
    c.add_argument("--space", required=True, metavar="F.lms")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("delta", help="hyperbolicity constants per basepoint")
    c.add_argument("--space", required=True, metavar="F.lms")
    c.set_defaults(func=cmd_delta)

    c = sub.add_parser("complete", help="run a completion stage")
    c.add_argument("--space", required=True, metavar="F.lms")
    c.add_argument("--method", required=True, choices=("gamma1", "gamma2"))
    c.add_argument("--delta", required=True, type=int)
    c.add_argument("--seed", type=int, default=None,
                   help="shuffle construction order (default: canonical)")
    c.add_argument("--out", metavar="F.cg", help="write the graph here")
    c.set_defaults(func=cmd_complete)

    c = sub.add_parser("classify", help="certificate for a finite isometry")
    c.add_argument("--space", required=True, metavar="F.lms")
    c.add_argument("--perm", required=True, metavar="F.perm")
    c.add_argument("--delta", required=True, metavar="Q")
    c.add_argument("--K", type=int, default=0, metavar="K")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("lenfun", help="length function checks")
    c.add_argument("--len", required=True, metavar="F.len")
    c.add_argument("--axioms", action="store_true")
    c.add_argument("--regular", type=int, default=None, metavar="K")
    c.add_argument("--complete", action="store_true")
    c.add_argument("--free", action="store_true")
    c.add_argument("--delta", default=None, metavar="Q")
    c.set_defaults(func=cmd_lenfun)

    c = sub.add_parser("relcayley", help="relative Cayley graph reports")
    c.add_argument("--group", required=True, metavar="F.grp")
    c.add_argument("--len", required=True, metavar="F.len")
    c.add_argument("--N", required=True, type=int)
    c.add_argument("--radius", required=True, type=int)
    c.add_argument("--pn", type=int, default=None, metavar="N",
                   help="also run the ball property at this n")
    c.add_argument("--K", type=int, default=1, metavar="K")
    c.add_argument("--delta", default=None, metavar="Q")
    c.set_defaults(func=cmd_relcayley)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        rep = args.func(args)
    except InputError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except ConstructionError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1
    finally:
        sys.stderr.write("wall %.3fs\n" % (time.perf_counter() - t0))
    rep.emit()
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
