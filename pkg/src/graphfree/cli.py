"""Command-line surface.

Commands: trace, moments, cumulants, freeness, factor, gram, verify.
Graphs come from spec files (JSON records with ``vertices`` and
``edges``) or from the built-in battery via ``--named``.  Exit codes:
0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import cumulants, factors, falg, verification
from .graphs import (Graph, GraphError, enumerate_paths, graph_from_spec,
                     named_graph, pf_weighting)
from .gralg import GradedElement, tau

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2


class CliError(Exception):
    pass


def _load_graph(args) -> Graph:
    if getattr(args, "named", None):
        g = named_graph(args.named)
    else:
        if not args.graph:
            raise CliError("give a graph file or --named NAME")
        try:
            with open(args.graph, encoding="utf-8") as fh:
                record = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read {args.graph}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CliError(f"{args.graph}: not a valid graph spec: {exc}") from exc
        try:
            g, _ = graph_from_spec(record)
        except GraphError as exc:
            raise CliError(f"{args.graph}: {exc}") from exc
    if getattr(args, "weights", None):
        try:
            raw = [float(x) for x in args.weights.split(",")]
        except ValueError as exc:
            raise CliError(f"bad --weights: {exc}") from exc
        if len(raw) != g.n_vertices:
            raise CliError(f"--weights needs {g.n_vertices} values")
        total = sum(raw)
        g = g.with_mu2([x / total for x in raw])
    if getattr(args, "pf", False):
        try:
            g, _ = pf_weighting(g)
        except GraphError as exc:
            raise CliError(str(exc)) from exc
    return g


def _parse_loop(g: Graph, text: str):
    names = [s.strip() for s in text.split(",")]
    try:
        return g.path_from_vertices(names)
    except GraphError as exc:
        raise CliError(str(exc)) from exc


def _emit(args, human_lines, payload):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _table(rows, header):
    widths = [max(len(str(r[i])) for r in [header] + rows)
              for i in range(len(header))]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths))]
    for r in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)))
    return lines


# ---------------------------------------------------------------------------
# commands


def cmd_trace(args) -> int:
    g = _load_graph(args)
    loops = []
    if args.loop:
        loops = [_parse_loop(g, args.loop)]
    elif args.all_loops:
        for n in range(0, args.max_len + 1, 2):
            for v in range(g.n_vertices):
                loops.extend(enumerate_paths(g, v, n, v))
    else:
        raise CliError("give --loop or --all-loops")
    rows, payload = [], []
    for p in loops:
        if p.length > args.max_degree:
            raise CliError(f"loop degree {p.length} over --max-degree cap")
        x = GradedElement.basis(g, p)
        via_pairings = tau(x)
        via_transform = falg.t_functional(falg.phi(x))
        name = "->".join(g.ids[v] for v in p.vertices)
        rows.append([name, f"{via_pairings:.12g}", f"{via_transform:.12g}",
                     f"{abs(via_pairings - via_transform):.3g}"])
        payload.append({"loop": name, "pairing_trace": via_pairings,
                        "transform_trace": via_transform,
                        "difference": abs(via_pairings - via_transform)})
    _emit(args, _table(rows, ["loop", "pairing route", "transform route", "diff"]),
          {"trace": payload})
    worst = max((abs(p["difference"]) for p in payload), default=0.0)
    return EXIT_OK if worst <= args.tol else EXIT_VERIFICATION


def _parse_tuple(g: Graph, text: str):
    return [_parse_loop(g, part) for part in text.split(";")]


def cmd_moments(args) -> int:
    g = _load_graph(args)
    payload = {}
    lines = []
    if args.tuple:
        paths = _parse_tuple(g, args.tuple)
        val = cumulants.moment_phi(g, paths)
        pretty = {g.ids[v]: c for v, c in val.items()}
        lines.append(f"moment: {pretty}")
        payload["moment"] = pretty
    elif args.matrix_moments:
        got = cumulants.omega_matrix_moments(g, args.matrix_moments)
        evens = g.vertices_of_parity(0)
        odds = g.vertices_of_parity(1)
        q = g.n_edges
        rate = g.mu2[evens[0]] / (g.mu2[odds[0]] * q)
        want = [cumulants.nc_rate_moment(rate, k)
                for k in range(1, args.matrix_moments + 1)]
        rows = [[k + 1, f"{got[k]:.12g}", f"{want[k]:.12g}",
                 f"{abs(got[k] - want[k]):.3g}"]
                for k in range(len(got))]
        lines += _table(rows, ["k", "matrix moment", "pairing sum", "diff"])
        payload["matrix_moments"] = got
        payload["pairing_sums"] = want
        payload["rate"] = rate
    else:
        raise CliError("give --tuple or --matrix-moments K")
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_cumulants(args) -> int:
    g = _load_graph(args)
    if not args.tuple:
        raise CliError("give --tuple 'v,w,v;v,w,v'")
    paths = _parse_tuple(g, args.tuple)
    via_mobius = cumulants.kappa_mobius(g, paths)
    via_closed = cumulants.kappa_starry(g, paths)
    diff = cumulants.b_diff_norm(via_mobius, via_closed)
    pretty_m = {g.ids[v]: c for v, c in via_mobius.items()}
    pretty_c = {g.ids[v]: c for v, c in via_closed.items()}
    _emit(args,
          [f"mobius route: {pretty_m}", f"closed form:  {pretty_c}",
           f"difference:   {diff:.3g}"],
          {"mobius": pretty_m, "closed_form": pretty_c, "difference": diff})
    return EXIT_OK if diff <= args.tol else EXIT_VERIFICATION


def cmd_freeness(args) -> int:
    g = _load_graph(args)
    rng = np.random.default_rng(args.seed)
    rep = cumulants.freeness_certificate(g, max_order=args.max_order,
                                         tol=args.tol, rng=rng)
    lines = [
        f"mixed tuples checked: {rep.n_tuples} (orders 2..{rep.max_order})",
        f"max mixed cumulant:   {rep.max_mixed_cumulant:.3g} (tol {rep.tol:.1g})",
        f"diagram identity:     {rep.stp_checks} checks, max dev {rep.stp_max_dev:.3g}",
        f"passed: {rep.passed}",
    ] + [f"note: {n}" for n in rep.notes]
    if rep.witness and not rep.passed:
        lines.append(f"witness: {rep.witness}")
    _emit(args, lines, rep.as_dict())
    return EXIT_OK if rep.passed else EXIT_VERIFICATION


def cmd_factor(args) -> int:
    g = _load_graph(args)
    rep = factors.m_gamma_report(g)
    lines = [f"verdict: {rep.verdict}"]
    if rep.atoms:
        lines += _table([[v, f"{t:.12g}"] for v, t in rep.atoms],
                        ["atom vertex", "trace"])
    if rep.diffuse:
        lines += _table(
            [[("(not computed)" if p is None else f"{p:.12g}"), f"{w:.12g}"]
             for p, w in rep.diffuse],
            ["diffuse parameter", "weight"])
    lines += [f"note: {n}" for n in rep.notes]
    _emit(args, lines, rep.as_dict())
    return EXIT_OK


def cmd_gram(args) -> int:
    g = _load_graph(args)
    basis = falg.truncated_basis(g, args.max_degree)
    worst_off, worst_diag = 0.0, 0.0
    for i, p in enumerate(basis):
        bp = GradedElement.basis(g, p)
        for q in basis[i:]:
            val = falg.inner(bp, GradedElement.basis(g, q))
            if p == q:
                worst_diag = max(worst_diag, abs(val - g.mu(p.start) * g.mu(p.finish)))
            else:
                worst_off = max(worst_off, abs(val))
    ok = worst_off <= args.tol and worst_diag <= args.tol
    _emit(args,
          [f"basis size: {len(basis)} (degrees <= {args.max_degree})",
           f"max off-diagonal: {worst_off:.3g}",
           f"max diagonal deviation from mu(s)mu(f): {worst_diag:.3g}",
           f"passed: {ok}"],
          {"basis_size": len(basis), "max_off_diagonal": worst_off,
           "max_diagonal_deviation": worst_diag, "passed": ok})
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_verify(args) -> int:
    rep = verification.run_verification(
        suite=args.suite, max_degree=args.max_degree, tol=args.tol,
        seed=args.seed, fast=args.fast)
    rows = [[r.check_id, "pass" if r.passed else "FAIL", r.witness,
             f"{r.elapsed:.2f}s"] for r in rep.results]
    lines = _table(rows, ["check", "status", "witness", "time"])
    lines.append(f"{rep.n_passed}/{len(rep.results)} checks passed")
    _emit(args, lines, rep.as_dict())
    return EXIT_OK if rep.ok else EXIT_VERIFICATION


# ---------------------------------------------------------------------------
# argument plumbing


def _add_common(p, graph_arg: bool = True):
    if graph_arg:
        p.add_argument("graph", nargs="?", help="graph spec file (JSON record)")
        p.add_argument("--named", help="built-in graph (a2, a3, a4, k1_2, ...)")
        p.add_argument("--pf", action="store_true",
                       help="replace the weighting by the Perron-Frobenius one")
        p.add_argument("--weights",
                       help="comma-separated vertex weights (normalized)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-degree", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="graphfree",
        description="Path-algebra traces, cumulants and factor parameters "
                    "on weighted bipartite graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="trace of loops via both routes")
    _add_common(p)
    p.add_argument("--loop", help="comma-separated vertex ids")
    p.add_argument("--all-loops", action="store_true")
    p.add_argument("--max-len", type=int, default=4)
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("moments", help="base-valued or matrix moments")
    _add_common(p)
    p.add_argument("--tuple", help="semicolon-separated loops of length 2")
    p.add_argument("--matrix-moments", type=int, metavar="K",
                   help="normalized matrix moments up to order K")
    p.set_defaults(fn=cmd_moments)

    p = sub.add_parser("cumulants", help="cumulants by both routes")
    _add_common(p)
    p.add_argument("--tuple", help="semicolon-separated length-2 paths")
    p.set_defaults(fn=cmd_cumulants)

    p = sub.add_parser("freeness", help="mixed-cumulant certificate")
    _add_common(p)
    p.add_argument("--max-order", type=int, default=5)
    p.set_defaults(fn=cmd_freeness)

    p = sub.add_parser("factor", help="structure report of the graph algebra")
    _add_common(p)
    p.set_defaults(fn=cmd_factor)

    p = sub.add_parser("gram", help="orthogonality of the path basis")
    _add_common(p)
    p.set_defaults(fn=cmd_gram)

    p = sub.add_parser("verify", help="run property suites")
    _add_common(p, graph_arg=False)
    p.add_argument("--suite", default="all",
                   choices=list(verification.SUITES) + ["all"])
    p.add_argument("--fast", action="store_true", help="smaller size caps")
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "max_degree", 16) < 0:
        print("error: --max-degree must be >= 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
