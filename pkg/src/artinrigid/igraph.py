"""Finite pieces of the intersection graph: T/D balls, the exotic pentagon, characteristic copies.

T-vertices are unbounded standard trees Fix(g a g^-1), D-vertices are type-2
vertices gA_ab, and a tree is joined to every type-2 vertex it passes
through.  Inside a developed ball a tree meets a type-2 vertex when one of
the chambers carries both the type-1 vertex g<a> on the tree and gA_ab.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Set, Tuple

from . import oracle
from .deligne import DeligneBall, is_standard_tree_infinite
from .errors import CertificationError, PreconditionError, SizeError, UnresolvedBallError
from .graph_core import Adjacency, DefiningGraph, barycentric_subdivision, girth, is_bipartite, modified_link

SEARCH_NODES = 2_000_000

Node = Tuple[str, Hashable]


@dataclass(frozen=True)
class IVertex:
    kind: str  # "T", "D" or "E"
    key: Hashable
    descriptor: str


@dataclass
class IntersectionBall:
    vertices: Dict[Node, IVertex]
    adjacency: Adjacency
    source: Optional[DeligneBall] = None

    def kind(self, v: Node) -> str:
        return self.vertices[v].kind

    def edges(self) -> List[Tuple[Node, Node]]:
        out = []
        for v in self.adjacency:
            for u in self.adjacency[v]:
                if repr(v) < repr(u):
                    out.append((v, u))
        return sorted(out, key=repr)

    def td_adjacency(self) -> Adjacency:
        keep = {v for v, iv in self.vertices.items() if iv.kind in "TD"}
        return {v: {u for u in self.adjacency[v] if u in keep} for v in keep}

    def edge_types_ok(self) -> bool:
        allowed = {frozenset("TD"), frozenset("TE"), frozenset("E")}
        return all(frozenset((self.kind(a), self.kind(b))) in allowed for a, b in self.edges())


def build_td_ball(ball: DeligneBall) -> IntersectionBall:
    if ball.unresolved:
        raise UnresolvedBallError(f"{len(ball.unresolved)} unresolved identifications; raise the oracle budget")
    verts: Dict[Node, IVertex] = {}
    adj: Adjacency = {}
    for vid, (e, _) in ball.type2.items():
        node = ("D", vid)
        verts[node] = IVertex("D", vid, f"z_{''.join(e)} at c{ball.type2[vid][1][0]}")
        adj[node] = set()
    for tid, (a, desc, _) in ball.trees.items():
        node = ("T", tid)
        verts[node] = IVertex("T", tid, oracle.word_text(desc))
        adj[node] = set()
    for (cid, a), t1 in ball.chamber_type1.items():
        tid = ball.type1_tree.get(t1)
        if tid is None:
            continue
        for e in ball.edges():
            if a in e:
                d = ("D", ball.chamber_type2[(cid, e)])
                adj[("T", tid)].add(d)
                adj[d].add(("T", tid))
    return IntersectionBall(verts, adj, ball)


# ---------------------------------------------------------------- pentagon


@dataclass
class PentagonReport:
    fragment: IntersectionBall
    verdicts: List[Tuple[str, str, object]]

    @property
    def certified(self) -> bool:
        return all(isinstance(v, oracle.Equal) for _, _, v in self.verdicts)


def exotic_pentagon(g: DefiningGraph, a: str, b: str, c: str) -> PentagonReport:
    """The 5-cycle <a> - <z_ab> - <b> - <abcabc> - <bacbac> - <a>, each edge a commutation."""
    if not (g.label(a, b) == g.label(a, c) == g.label(b, c) == 3):
        raise PreconditionError("exotic pentagon needs a triangle with labels 3, 3, 3")
    words = {
        "a": (a,),
        "z_ab": (a, b) * 3,
        "b": (b,),
        "abcabc": (a, b, c) * 2,
        "bacbac": (b, a, c) * 2,
    }
    kinds = {"a": "T", "z_ab": "D", "b": "T", "abcabc": "E", "bacbac": "E"}
    cycle = ["a", "z_ab", "b", "abcabc", "bacbac"]
    verts = {("P", n): IVertex(kinds[n], n, "".join(words[n])) for n in cycle}
    adj: Adjacency = {v: set() for v in verts}
    verdicts = []
    for i, x in enumerate(cycle):
        y = cycle[(i + 1) % 5]
        lhs = oracle.positive(words[x] + words[y])
        rhs = oracle.positive(words[y] + words[x])
        same = oracle.positive_equal(lhs, rhs, g)
        v = oracle.Equal("positive closure") if same else oracle.Distinct("positive closure")
        verdicts.append((x, y, v))
        adj[("P", x)].add(("P", y))
        adj[("P", y)].add(("P", x))
    report = PentagonReport(IntersectionBall(verts, adj), verdicts)
    if not report.certified:
        bad = [f"{x}-{y}" for x, y, v in verdicts if not isinstance(v, oracle.Equal)]
        raise CertificationError(f"commutation not certified for {', '.join(bad)}")
    return report


def pentagon_link_check(report: PentagonReport) -> bool:
    """Girth 5, and each vertex's modified link joins its two pentagon neighbours."""
    adj = report.fragment.adjacency
    if girth(adj) != 5:
        return False
    for v in adj:
        u, w = sorted(adj[v], key=repr)
        if w not in modified_link(adj, v).get(u, set()):
            return False
    return True


# ---------------------------------------------------------------- pattern search


def _embeddings(
    pattern: Adjacency,
    kinds: Dict[Hashable, str],
    target: Adjacency,
    target_kind,
    max_nodes: int = SEARCH_NODES,
    first_only: bool = False,
) -> List[Dict[Hashable, Hashable]]:
    """Injective, type-respecting maps carrying pattern edges to target edges."""
    # greedy order: next is the vertex with most placed neighbours, so cycles close early
    order: List[Hashable] = []
    rank = {v: i for i, v in enumerate(sorted(pattern, key=repr))}
    remaining = set(pattern)
    while remaining:
        placed = set(order)
        v = max(
            remaining,
            key=lambda u: (len(pattern[u] & placed), order and order[-1] in pattern[u], len(pattern[u]), -rank[u]),
        )
        order.append(v)
        remaining.discard(v)
    found: List[Dict] = []
    f: Dict = {}
    used: Set = set()
    count = 0
    by_kind: Dict[str, List] = {}
    for v in sorted(target, key=repr):
        by_kind.setdefault(target_kind(v), []).append(v)

    def extend(i: int) -> bool:
        nonlocal count
        if i == len(order):
            found.append(dict(f))
            return first_only
        v = order[i]
        placed = [u for u in pattern[v] if u in f]
        if placed:
            cand = set(target[f[placed[0]]])
            for u in placed[1:]:
                cand &= target[f[u]]
            cands = sorted(cand, key=repr)
        else:
            cands = by_kind.get(kinds[v], [])
        for x in cands:
            if x in used or target_kind(x) != kinds[v] or len(target[x]) < len(pattern[v]):
                continue
            count += 1
            if count > max_nodes:
                raise SizeError(f"pattern search exceeded {max_nodes} nodes")
            f[v] = x
            used.add(x)
            if extend(i + 1):
                return True
            del f[v]
            used.discard(x)
        return False

    extend(0)
    return found


def _dedupe(embs: List[Dict], pattern: Adjacency) -> List[Dict]:
    out = []
    seen = set()
    for f in embs:
        key = frozenset(frozenset((f[a], f[b])) for a in pattern for b in pattern[a])
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def find_characteristic_subgraphs(
    iball: IntersectionBall, gprime: DefiningGraph, max_nodes: int = SEARCH_NODES
) -> List[Dict[Tuple[str, object], Node]]:
    """Copies of the subdivided gprime in the T/D graph, original vertices on T, edge midpoints on D."""
    bary = barycentric_subdivision(gprime)
    kinds = {x: ("T" if x[0] == "V" else "D") for x in bary.vertices}
    target = iball.td_adjacency()
    embs = _embeddings(bary.adjacency, kinds, target, iball.kind, max_nodes)
    return _dedupe(embs, bary.adjacency)


@dataclass
class Witness:
    status: str  # "unique", "multiple" or "none"
    chambers: List[int]


def fundamentality_witness(iball: IntersectionBall, embedding: Dict, ball: DeligneBall) -> Witness:
    """Chambers holding every D-vertex of the copy and a type-1 vertex on each of its trees."""
    ds = {v[1] for v in embedding.values() if v[0] == "D"}
    ts = {v[1] for v in embedding.values() if v[0] == "T"}
    hits = []
    for c in ball.chambers:
        if not ds <= set(ball.type2_of(c.id).values()):
            continue
        trees = {ball.type1_tree.get(t1) for t1 in ball.type1_of(c.id).values()}
        if ts <= trees:
            hits.append(c.id)
    status = "unique" if len(hits) == 1 else "multiple" if hits else "none"
    return Witness(status, hits)


def six_cycles(adj: Adjacency) -> List[Tuple[Node, ...]]:
    """Embedded 6-cycles, each listed once starting from its least vertex."""
    order = {v: i for i, v in enumerate(sorted(adj, key=repr))}
    out = []
    for s in sorted(adj, key=repr):
        stack = [(s, [s])]
        while stack:
            v, path = stack.pop()
            if len(path) == 6:
                if s in adj[v] and order[path[1]] < order[path[-1]]:
                    out.append(tuple(path))
                continue
            for u in adj[v]:
                if order[u] > order[s] and u not in path:
                    stack.append((u, path + [u]))
    return out


@dataclass
class AuditReport:
    unique: int = 0
    multiple: int = 0
    inconclusive: int = 0
    interior_unique: int = 0
    interior_total: int = 0
    failures: List[Tuple] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.unique + self.multiple + self.inconclusive


def six_cycle_audit(iball: IntersectionBall, ball: DeligneBall) -> AuditReport:
    """Witness every 6-cycle of the T/D graph by a chamber.

    A cycle counts as interior when one of its D-vertices is an explored
    residue; the chambers meeting it there are then all in the ball up to the
    residue radius.
    """
    rep = AuditReport()
    explored = set(ball.residues)
    adj = iball.td_adjacency()
    for cyc in six_cycles(adj):
        emb = {i: v for i, v in enumerate(cyc)}
        w = fundamentality_witness(iball, emb, ball)
        interior = any(v[0] == "D" and v[1] in explored for v in cyc)
        if w.status == "unique":
            rep.unique += 1
        elif w.status == "multiple":
            rep.multiple += 1
            rep.failures.append((cyc, w.chambers))
        else:
            rep.inconclusive += 1
        if interior:
            rep.interior_total += 1
            rep.interior_unique += w.status == "unique"
    return rep


# ---------------------------------------------------------------- G1 / G2


def hexagon_chain(n: int, center_kind: str) -> Tuple[Adjacency, Dict[str, str]]:
    """n hexagons around a centre c, consecutive ones sharing the path c - x_i - y_i.

    Hexagon i is c, x_{i-1}, y_{i-1}, w_i, y_i, x_i with x_n = x_0, so the
    first and last hexagons share only the edge c - x_0.  y_0 and y_n are
    separate vertices.  Kinds alternate starting from ``center_kind`` at c.
    """
    other = "T" if center_kind == "D" else "D"
    adj: Adjacency = {}

    def link(u, v):
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)

    kinds = {"c": center_kind}
    for i in range(1, n + 1):
        x0, x1 = f"x{i - 1}", f"x{i % n}"
        y0, y1, w = f"y{i - 1}", f"y{i}", f"w{i}"
        for u, v in (("c", x0), (x0, y0), (y0, w), (w, y1), (y1, x1), (x1, "c")):
            link(u, v)
        kinds.update({x0: other, x1: other, y0: center_kind, y1: center_kind, w: other})
    return adj, kinds


@dataclass
class ProbeReport:
    n: int
    g1_found: bool
    y_chambers: List[int]
    g1_in_ball: int  # 1 if some copy of G1 occurs anywhere in the ball, else 0
    g2_embeddings: List[Dict]
    lines: List[str]


def _y_chambers(ball: DeligneBall, a: str, b: str, n: int) -> List[int]:
    """Chambers 1, a, ab, aba, ... (n of them) inside the base residue of {a, b}."""
    e = (a, b) if (a, b) in ball.edges() else (b, a)
    base = ball.chamber_type2[(0, e)]
    res = ball.residues.get(base)
    if res is None:
        raise PreconditionError(f"residue of {''.join(e)} was not explored")
    out = []
    for k in range(n):
        word = tuple((a if i % 2 == 0 else b, 1) for i in range(k))
        hit = next((cid for w, (_, cid) in zip(res.words, res.members) if _same(w, word, ball.graph)), None)
        if hit is None:
            raise PreconditionError(f"chamber {oracle.word_text(word) or '1'} lies outside the residue radius")
        out.append(hit)
    return out


def _same(w1, w2, g) -> bool:
    return isinstance(oracle.artin_equal(w1, w2, g), oracle.Equal) if oracle.free_reduce(w1) != tuple(w2) else True


def g1_g2_probe(
    g: DefiningGraph,
    ball: DeligneBall,
    a: str,
    b: str,
    c: str,
    g2_template: Optional[Tuple[Adjacency, Dict[str, str]]] = None,
    max_nodes: int = SEARCH_NODES,
) -> ProbeReport:
    """Build Y = K u aK u abK u ... and compare its hexagons with the G1 and G2 patterns."""
    if g.label(a, b) is None or g.label(b, c) is None or g.label(a, c) is None:
        raise PreconditionError("a, b, c must span a triangle")
    n = g.label(a, b)
    iball = build_td_ball(ball)
    td = iball.td_adjacency()
    ys = _y_chambers(ball, a, b, n)
    sub: Adjacency = {}
    for cid in ys:
        ds = [("D", v) for v in ball.type2_of(cid).values()]
        ts = [("T", ball.type1_tree[t1]) for t1 in ball.type1_of(cid).values()]
        for d in ds:
            for t in ts:
                if t in td.get(d, ()):
                    sub.setdefault(d, set()).add(t)
                    sub.setdefault(t, set()).add(d)
    g1, g1_kinds = hexagon_chain(n, "D")
    n_edges = sum(len(v) for v in sub.values()) // 2
    iso = len(sub) == 3 * n + 2 and n_edges == 4 * n + 1
    if iso:
        iso = bool(_embeddings(g1, g1_kinds, sub, iball.kind, max_nodes, first_only=True))
    g1_any = _embeddings(g1, g1_kinds, td, iball.kind, max_nodes, first_only=True)
    g2, g2_kinds = g2_template if g2_template is not None else hexagon_chain(n, "T")
    g2_all = _dedupe(_embeddings(g2, g2_kinds, td, iball.kind, max_nodes), g2)
    lines = [
        f"CHECK g1_present {'PASS' if iso else 'FAIL'} n={n} Y={','.join(map(str, ys))} "
        f"vertices={len(sub)} edges={n_edges}",
        f"CHECK g2_absent {'PASS' if not g2_all else 'FAIL'} embeddings={len(g2_all)}"
        + (f" first={sorted(g2_all[0].items())[:3]}" if g2_all else ""),
    ]
    return ProbeReport(n, iso, ys, len(g1_any), g2_all, lines)
