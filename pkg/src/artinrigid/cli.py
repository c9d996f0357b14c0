"""Command line: ``artinrigid <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 a size cap or
search budget ran out.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import deligne, dihedral, farey, graph_core, hierarchy, igraph, oracle
from .errors import BudgetError, LabelError, ParseError, PreconditionError, SizeError, UnresolvedBallError

CHECKS = ("girth6", "bipartite", "six_cycle_audit", "g1_g2", "pentagon", "delta_uniqueness", "link_angle", "farey", "c1c2")


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _load(path: str) -> graph_core.DefiningGraph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Exit(2, f"cannot read {path}: {exc.strerror}")
    try:
        return graph_core.parse(text)
    except ParseError as exc:
        raise _Exit(2, f"{path}:{exc.line}: {exc.reason}")
    except LabelError as exc:
        raise _Exit(2, f"{path}: {exc}")


def _flag(x: bool) -> str:
    return "true" if x else "false"


# ---------------------------------------------------------------- analyze / hierarchy


def analyze_lines(g: graph_core.DefiningGraph) -> List[str]:
    rep = graph_core.classify(g)
    lines = [f"vertices: {len(g.vertices)}", f"edges: {len(g.labels)}"]
    if rep.twistless:
        lines.append("twistless: true")
    elif rep.separating_vertices:
        lines.append(f"twistless: false (separating vertex {rep.separating_vertices[0]})")
    else:
        a, b = rep.separating_edges[0]
        lines.append(f"twistless: false (separating edge {a}-{b})")
    rig = graph_core.is_star_rigid(g)
    if rig.rigid:
        lines.append("star_rigid: true")
    else:
        v, f = rig.witness
        moved = ",".join(f"{x}->{y}" for x, y in sorted(f.items()) if x != y)
        lines.append(f"star_rigid: false (star of {v} fixed, {moved})")
    lines += [
        f"hyperbolic_type: {_flag(rep.hyperbolic_type)}",
        f"large_type: {_flag(rep.large_type)}",
        f"xxxl: {_flag(rep.xxxl)}",
        f"two_dimensional: {_flag(rep.two_dimensional)}",
        f"triangle_free: {_flag(rep.triangle_free)}",
        f"connected: {_flag(rep.connected)}",
        f"large_generators: {' '.join(rep.large_generators) or '-'}",
        f"automorphisms: {len(graph_core.label_automorphisms(g))}",
    ]
    return lines


def cmd_analyze(args) -> Tuple[List[str], int]:
    return analyze_lines(_load(args.graph)), 0


def cmd_hierarchy(args) -> Tuple[List[str], int]:
    g = _load(args.graph)
    tree = hierarchy.find_twistless_hierarchy(g)
    if tree is None:
        return ["none"], 0
    ok, problems = hierarchy.check_hierarchy(g, tree)
    if not ok:
        return [f"hierarchy failed re-verification: {p}" for p in problems], 1
    return hierarchy.dumps(g, tree).splitlines(), 0


# ---------------------------------------------------------------- dihedral / deligne / igraph / farey


def cmd_dihedral(args) -> Tuple[List[str], int]:
    m = args.m
    try:
        if args.query == "nf":
            return [str(dihedral.nf(args.words[0], m))], 0
        if args.query == "eq":
            if len(args.words) != 2:
                raise _Exit(2, "eq needs two words")
            x, y = (dihedral.nf(w, m) for w in args.words)
            return [_flag(dihedral.eq(x, y))], 0
        return [str(dihedral.center_generator(m))], 0
    except (ValueError, PreconditionError) as exc:
        raise _Exit(2, str(exc))


def _ball(args, g) -> deligne.DeligneBall:
    try:
        return deligne.develop_ball(g, args.depth, args.residue_radius, args.budget)
    except PreconditionError as exc:
        raise _Exit(2, str(exc))


def cmd_deligne(args) -> Tuple[List[str], int]:
    ball = _ball(args, _load(args.graph))
    lines = deligne.dumps(ball).splitlines()
    lines.append(f"status {ball.status} unresolved {len(ball.unresolved)}")
    return lines, 0


def cmd_igraph(args) -> Tuple[List[str], int]:
    g = _load(args.graph)
    ball = _ball(args, g)
    iball = igraph.build_td_ball(ball)
    td = iball.td_adjacency()
    kinds = [iball.kind(v) for v in td]
    lines = [
        f"T {kinds.count('T')} D {kinds.count('D')} edges {sum(len(s) for s in td.values()) // 2}",
        f"bipartite {_flag(graph_core.is_bipartite(td))} girth {_girth_text(graph_core.girth(td))}",
    ]
    audit = igraph.six_cycle_audit(iball, ball)
    lines.append(f"six_cycles unique {audit.unique} multiple {audit.multiple} inconclusive {audit.inconclusive}")
    for a, b in iball.edges():
        lines.append(f"edge {a[0]}{a[1]} {b[0]}{b[1]}")
    return lines, 0


def cmd_farey(args) -> Tuple[List[str], int]:
    ball = farey.farey_ball(args.qmax, args.window)
    return farey.dumps(ball).splitlines(), 0


def _girth_text(x) -> str:
    return "inf" if x == float("inf") else str(int(x))


# ---------------------------------------------------------------- verify


def read_template(path: str):
    """Template file: lines ``vertex <name> <T|D>`` and ``edge <u> <v>``."""
    adj: Dict[str, set] = {}
    kinds: Dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            rows = fh.read().splitlines()
    except OSError as exc:
        raise _Exit(2, f"cannot read {path}: {exc.strerror}")
    for i, raw in enumerate(rows, 1):
        parts = raw.split("#")[0].split()
        if not parts:
            continue
        if parts[0] == "vertex" and len(parts) == 3 and parts[2] in ("T", "D"):
            kinds[parts[1]] = parts[2]
            adj.setdefault(parts[1], set())
        elif parts[0] == "edge" and len(parts) == 3 and parts[1] in kinds and parts[2] in kinds:
            adj[parts[1]].add(parts[2])
            adj[parts[2]].add(parts[1])
        else:
            raise _Exit(2, f"{path}:{i}: cannot read {raw!r}")
    return adj, kinds


def verify_lines(
    g: graph_core.DefiningGraph,
    depth: int,
    radius: int,
    budget: int,
    checks: Sequence[str],
    g2_template=None,
) -> Tuple[List[str], int]:
    lines: List[str] = []
    state = {"fail": False, "budget": False}

    def emit(name: str, verdict: str, detail: str) -> None:
        lines.append(f"CHECK {name} {verdict} {detail}".rstrip())
        if verdict == "FAIL":
            state["fail"] = True

    tris = graph_core.triangles(g)
    rep = graph_core.classify(g)
    need_ball = {"girth6", "bipartite", "six_cycle_audit", "g1_g2"} & set(checks)
    ball = iball = None
    if need_ball:
        if not (rep.large_type and rep.connected):
            for name in sorted(need_ball, key=CHECKS.index):
                emit(name, "INCONCLUSIVE", "needs a connected large-type graph")
        else:
            ball = deligne.develop_ball(g, depth, radius, budget)
            if ball.unresolved:
                state["budget"] = True
                for name in sorted(need_ball, key=CHECKS.index):
                    emit(name, "INCONCLUSIVE", f"{len(ball.unresolved)} unresolved identifications")
                ball = None
            else:
                iball = igraph.build_td_ball(ball)
    td = iball.td_adjacency() if iball else None

    for name in checks:
        if name in need_ball and iball is None:
            continue
        if name == "girth6":
            gv = graph_core.girth(td)
            ok = gv == 6 if tris else gv >= 8
            want = "6" if tris else ">= 8"
            emit(name, "PASS" if ok else "FAIL", f"girth={_girth_text(gv)} expected {want}")
        elif name == "bipartite":
            ok = graph_core.is_bipartite(td) and iball.edge_types_ok()
            emit(name, "PASS" if ok else "FAIL", f"vertices={len(td)}")
        elif name == "six_cycle_audit":
            a = igraph.six_cycle_audit(iball, ball)
            detail = f"unique={a.unique} multiple={a.multiple} inconclusive={a.inconclusive}"
            if a.multiple:
                cyc, cs = a.failures[0]
                detail += f" first={'-'.join(f'{k}{i}' for k, i in cyc)} chambers={cs}"
            emit(name, "FAIL" if a.multiple else "PASS", detail)
        elif name == "g1_g2":
            if not tris:
                emit(name, "INCONCLUSIVE", "no triangle")
                continue
            a, b, c = tris[0]
            try:
                probe = igraph.g1_g2_probe(g, ball, a, b, c, g2_template=g2_template)
            except PreconditionError as exc:
                emit(name, "INCONCLUSIVE", str(exc))
                continue
            for ln in probe.lines:
                _, sub, verdict, *rest = ln.split(" ", 3)
                emit(sub, verdict, " ".join(rest))
        elif name == "pentagon":
            t = next((t for t in tris if g.label(t[0], t[1]) == g.label(t[0], t[2]) == g.label(t[1], t[2]) == 3), None)
            if t is None:
                emit(name, "INCONCLUSIVE", "no (3,3,3) triangle")
                continue
            try:
                p = igraph.exotic_pentagon(g, *t)
                emit(name, "PASS" if igraph.pentagon_link_check(p) else "FAIL", f"triangle={''.join(t)} edges=5")
            except Exception as exc:  # CertificationError
                emit(name, "FAIL", str(exc))
        elif name == "delta_uniqueness":
            labels = sorted(set(g.labels.values()))
            bad = [m for m in labels if not dihedral.delta_power_coset_check(m, 3, 3)]
            emit(name, "FAIL" if bad else "PASS", f"labels={labels} K=Q=3")
        elif name == "link_angle":
            if not (rep.large_type and rep.connected):
                emit(name, "INCONCLUSIVE", "needs a connected large-type graph")
                continue
            lm = deligne.link_metric_at_apex(g)
            adj = g.adjacency()
            worst = None
            for i, x in enumerate(g.vertices):
                for y in g.vertices[i + 1 :]:
                    if y in adj[x]:
                        continue
                    d = lm.distance(x, y)
                    if worst is None or d < worst:
                        worst = d
            if worst is None:
                emit(name, "PASS", "no non-adjacent pair")
            else:
                emit(name, "PASS" if worst > 1 else "FAIL", f"min distance={worst}*pi")
        elif name == "farey":
            fb = farey.farey_ball(12)
            lines_bad = [v for v in fb.vertices if farey.link_is_line(fb, v) == "not-line"]
            tri = farey.edge_two_triangles(fb)
            ok = not lines_bad and not tri.bad
            emit(name, "PASS" if ok else "FAIL", f"Qmax=12 interior_edges={tri.interior_edges} bad={len(tri.bad)}")
        elif name == "c1c2":
            adj = g.adjacency()
            if len(adj) < 3:
                emit(name, "INCONCLUSIVE", "fewer than 3 vertices")
                continue
            c1, c2 = hierarchy.condition_C1(adj), hierarchy.condition_C2(adj)
            emit(name, "PASS" if c1 == c2 else "FAIL", f"C1={_flag(c1)} C2={_flag(c2)}")
    code = 1 if state["fail"] else 3 if state["budget"] else 0
    return lines, code


def cmd_verify(args) -> Tuple[List[str], int]:
    g = _load(args.graph)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()] if args.checks else list(CHECKS)
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise _Exit(2, f"unknown checks: {', '.join(unknown)}")
    template = read_template(args.g2_template) if args.g2_template else None
    return verify_lines(g, args.depth, args.residue_radius, args.budget, checks, template)


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artinrigid", description="Artin group graph and complex checks")
    sub = ap.add_subparsers(dest="command", required=True)

    def ball_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--depth", type=int, default=1, help="residue exploration rounds (default 1)")
        p.add_argument("--residue-radius", type=int, default=deligne.DEFAULT_RADIUS,
                       help=f"dihedral ball radius per residue (default {deligne.DEFAULT_RADIUS})")
        p.add_argument("--budget", type=int, default=oracle.SEARCH_BUDGET,
                       help=f"word search budget (default {oracle.SEARCH_BUDGET})")

    def out_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("analyze", help="classification, star rigidity, automorphisms")
    p.add_argument("graph")
    out_flag(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("hierarchy", help="twistless hierarchy or 'none'")
    p.add_argument("graph")
    out_flag(p)
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("dihedral", help="normal forms in <a,b | <ab>_m = <ba>_m>")
    p.add_argument("query", choices=("nf", "eq", "center"))
    p.add_argument("m", type=int)
    p.add_argument("words", nargs="*")
    out_flag(p)
    p.set_defaults(func=cmd_dihedral)

    p = sub.add_parser("deligne", help="dump a developed ball")
    p.add_argument("graph")
    ball_flags(p)
    out_flag(p)
    p.set_defaults(func=cmd_deligne)

    p = sub.add_parser("igraph", help="T/D ball summary, audits and edge list")
    p.add_argument("graph")
    ball_flags(p)
    out_flag(p)
    p.set_defaults(func=cmd_igraph)

    p = sub.add_parser("farey", help="edge list of a Farey window")
    p.add_argument("--qmax", type=int, default=8)
    p.add_argument("--window", type=int, default=1)
    out_flag(p)
    p.set_defaults(func=cmd_farey)

    p = sub.add_parser("verify", help="run CHECK lines; exit 1 on any FAIL")
    p.add_argument("graph")
    ball_flags(p)
    p.add_argument("--checks", help=f"comma separated subset of {','.join(CHECKS)}")
    p.add_argument("--g2-template", help="replacement G2 pattern file (vertex/edge lines)")
    out_flag(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        lines, code = args.func(args)
    except _Exit as exc:
        print(exc, file=sys.stderr)
        return exc.code
    except (SizeError, BudgetError, UnresolvedBallError) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
