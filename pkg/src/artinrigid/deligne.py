"""The fundamental domain with its Moussong metric, and finite developments of the modified Deligne complex.

Chambers are group elements g (the translate gK).  A type-2 vertex is a coset
gA_ab, a type-1 vertex a coset g<a>.  A ball is grown residue by residue: the
chambers around gA_ab are g*h for h in a dihedral ball of radius R.

Identification is layered.  Inside one residue everything is decided exactly
by dihedral arithmetic.  Across residues, elements and cosets are bucketed by
invariants that any equal pair must share (abelianisation and images in finite
matrix quotients), and only pairs inside a bucket go to the oracle.  A pair the
oracle cannot settle is kept apart and listed as unresolved.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Set, Tuple

import numpy as np

from . import dihedral, oracle
from .errors import BudgetError, PreconditionError
from .graph_core import BarycentricGraph, DefiningGraph, barycentric_subdivision, classify, girth, is_connected
from .oracle import Equal, GroupWord, Unknown

Edge = Tuple[str, str]
MAX_CHAMBERS = 50_000
DEFAULT_RADIUS = 3


# ---------------------------------------------------------------- metric data


@dataclass(frozen=True)
class Length:
    """A closed-form length together with its floating value."""

    expr: str
    value: float

    def close_to(self, x: float, tol: float = 1e-12) -> bool:
        return abs(self.value - x) <= tol


@dataclass(frozen=True)
class TriangleShape:
    """The triangle (v0, v_a, v_ab); angles are stored as rational multiples of pi."""

    generator: str
    edge: Edge
    label: int
    angles: Dict[str, Fraction]
    sides: Dict[str, Length]


@dataclass
class FundamentalDomain:
    graph: DefiningGraph
    apex: Tuple[str, object]
    type1: List[Tuple[str, object]]
    type2: List[Tuple[str, object]]
    triangles: List[TriangleShape]
    boundary: BarycentricGraph
    boundary_map: Dict[Tuple[str, object], Tuple[str, object]]

    def simplices(self) -> List[Tuple]:
        out = []
        for t in self.triangles:
            out.append((self.apex, ("V", t.generator), ("E", t.edge)))
        return out

    def boundary_edges(self) -> Set[frozenset]:
        """Edges of the simplices that avoid the apex."""
        return {frozenset((s[1], s[2])) for s in self.simplices()}


def triangle_shape(a: str, edge: Edge, m: int) -> TriangleShape:
    half = math.pi / (2 * m)
    return TriangleShape(
        generator=a,
        edge=edge,
        label=m,
        angles={"type1": Fraction(1, 2), "type2": Fraction(1, 2 * m), "apex": Fraction(1, 2) - Fraction(1, 2 * m)},
        sides={
            "apex-type1": Length("1", 1.0),
            "apex-type2": Length(f"1/sin(pi/{2 * m})", 1 / math.sin(half)),
            "type1-type2": Length(f"1/tan(pi/{2 * m})", 1 / math.tan(half)),
        },
    )


def fundamental_domain(g: DefiningGraph) -> FundamentalDomain:
    if not classify(g).two_dimensional:
        raise PreconditionError("some triangle of the defining graph has 1/m sum > 1")
    tris = []
    for a, b, m in g.edges():
        tris.append(triangle_shape(a, (a, b), m))
        tris.append(triangle_shape(b, (a, b), m))
    bary = barycentric_subdivision(g)
    return FundamentalDomain(
        graph=g,
        apex=("0", None),
        type1=[("V", v) for v in g.vertices],
        type2=[("E", (a, b)) for a, b, _ in g.edges()],
        triangles=tris,
        boundary=bary,
        boundary_map={x: x for x in bary.vertices},
    )


@dataclass
class LinkMetric:
    """The subdivided graph with edge lengths in units of pi."""

    graph: DefiningGraph
    adjacency: Dict[Tuple[str, object], Dict[Tuple[str, object], Fraction]]

    def distance(self, x, y) -> Optional[Fraction]:
        x = ("V", x) if isinstance(x, str) else x
        y = ("V", y) if isinstance(y, str) else y
        dist = {x: Fraction(0)}
        heap = [(Fraction(0), 0, x)]
        tick = 1
        while heap:
            d, _, u = heapq.heappop(heap)
            if u == y:
                return d
            if d > dist[u]:
                continue
            for v, w in self.adjacency[u].items():
                nd = d + w
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, tick, v))
                    tick += 1
        return None


def link_metric_at_apex(g: DefiningGraph) -> LinkMetric:
    bary = barycentric_subdivision(g)
    adj: Dict = {x: {} for x in bary.vertices}
    for a, b, m in g.edges():
        e = ("E", (a, b))
        w = Fraction(1, 2) - Fraction(1, 2 * m)
        for v in (a, b):
            adj[e][("V", v)] = w
            adj[("V", v)][e] = w
    return LinkMetric(g, adj)


def is_standard_tree_infinite(g: DefiningGraph, a: str) -> bool:
    nb = g.neighbors(a)
    if not nb:
        return False
    return not (len(nb) == 1 and g.label(a, nb[0]) % 2 == 0)


# ---------------------------------------------------------------- balls


@dataclass
class Chamber:
    id: int
    rep: GroupWord
    depth: int
    parent: Optional[int] = None
    via: Optional[Edge] = None
    offset: GroupWord = ()


@dataclass
class Residue:
    """An explored type-2 vertex: owner chamber g, and members g*h with h in the dihedral ball."""

    edge: Edge
    label: int
    owner: int
    radius: int
    members: List[Tuple[dihedral.DihedralElement, int]]
    words: List[GroupWord]


@dataclass
class DeligneBall:
    graph: DefiningGraph
    depth: int
    residue_radius: int
    chambers: List[Chamber]
    residues: Dict[int, Residue]
    type2: Dict[int, Tuple[Edge, Tuple[int, ...]]]
    type1: Dict[int, Tuple[str, Tuple[int, ...]]]
    trees: Dict[int, Tuple[str, GroupWord, Tuple[int, ...]]]
    chamber_type2: Dict[Tuple[int, Edge], int]
    chamber_type1: Dict[Tuple[int, str], int]
    type1_tree: Dict[int, int]
    unresolved: List[Tuple[str, str, str]] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "Exact" if not self.unresolved else "Unresolved"

    def edges(self) -> List[Edge]:
        return [(a, b) for a, b, _ in self.graph.edges()]

    def type2_of(self, cid: int) -> Dict[Edge, int]:
        return {e: self.chamber_type2[(cid, e)] for e in self.edges()}

    def type1_of(self, cid: int) -> Dict[str, int]:
        return {a: self.chamber_type1[(cid, a)] for a in self.graph.vertices}


class _UnionFind:
    def __init__(self) -> None:
        self.parent: Dict[Hashable, Hashable] = {}

    def add(self, x: Hashable) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: Hashable) -> Hashable:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: Hashable, y: Hashable) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # keep the earlier node as root so numbering stays deterministic
            if _order_key(ry) < _order_key(rx):
                rx, ry = ry, rx
            self.parent[ry] = rx


def _order_key(x) -> Tuple:
    return (x[0], str(x[1:]))


def _sub(word: Sequence[Tuple[str, int]], a: str, b: str) -> GroupWord:
    return tuple((a if x == "a" else b, s) for x, s in word)


class _Builder:
    def __init__(self, g: DefiningGraph, budget: int, max_chambers: int) -> None:
        self.g = g
        self.budget = budget
        self.max_chambers = max_chambers
        self.quotients = oracle.quotient_family(g)
        self.classes = oracle.odd_classes(g)
        self.chambers: List[Chamber] = []
        self.images: List[list] = []
        self.buckets: Dict[tuple, List[int]] = {}
        self.residues: Dict[Tuple[int, Edge], Residue] = {}
        self.unresolved: List[Tuple[str, str, str]] = []
        self.t2 = _UnionFind()
        self.t1 = _UnionFind()
        self.tr = _UnionFind()
        self.gen_mats = [{v: (fq.mats[v], fq.inv[v]) for v in g.vertices} for fq in self.quotients]
        self.edges: List[Edge] = [(x, y) for x, y, _ in g.edges()]
        self.labels: Dict[Edge, int] = {(x, y): m for x, y, m in g.edges()}
        self.infinite = {v for v in g.vertices if is_standard_tree_infinite(g, v)}

    # ------------------------------------------------------------ chambers

    def _ab_key(self, w: GroupWord, zero: Set[str] = frozenset()) -> tuple:
        ab = oracle.abelianization(w, self.g)
        return tuple(sorted((r, v) for r, v in ab.items() if r not in zero and v))

    def _image(self, base: list, w: GroupWord) -> list:
        out = []
        for fq, M, mats in zip(self.quotients, base, self.gen_mats):
            for x, s in w:
                M = (M @ mats[x][0 if s > 0 else 1]) % fq.p
            out.append(M)
        return out

    def add_chamber(self, rep: GroupWord, depth: int, parent: Optional[int], via: Optional[Edge], offset: GroupWord,
                    images: list) -> int:
        key = (self._ab_key(rep), tuple(M.tobytes() for M in images))
        bucket = self.buckets.setdefault(key, [])
        for cid in bucket:
            v = oracle.artin_equal(self.chambers[cid].rep, rep, self.g, self.budget)
            if isinstance(v, Equal):
                return cid
            if isinstance(v, Unknown):
                self.unresolved.append(("chamber", f"c{cid}", oracle.word_text(rep)))
        if len(self.chambers) >= self.max_chambers:
            raise BudgetError(f"ball exceeds {self.max_chambers} chambers")
        cid = len(self.chambers)
        self.chambers.append(Chamber(cid, rep, depth, parent, via, offset))
        self.images.append(images)
        bucket.append(cid)
        for e in self.edges:
            self.t2.add((cid, e))
        for a in self.g.vertices:
            self.t1.add((cid, a))
            if a in self.infinite:
                self.tr.add((cid, a))
        return cid

    # ------------------------------------------------------------ residues

    def explore(self, owner: int, e: Edge, m: int, radius: int) -> Residue:
        a, b = e
        base = self.chambers[owner]
        members = []
        words = []
        for h, w in dihedral.ball_words(m, radius):
            off = _sub(w, a, b)
            rep = oracle.free_reduce(base.rep + off)
            cid = self.add_chamber(rep, base.depth + 1, owner, e, off, self._image(self.images[owner], off))
            members.append((h, cid))
            words.append(off)
        res = Residue(e, m, owner, radius, members, words)
        self.residues[(owner, e)] = res
        self._residue_unions(res)
        return res

    def _residue_unions(self, res: Residue) -> None:
        """Exact identifications inside one residue, all by dihedral arithmetic."""
        a, b = res.edge
        m = res.label
        lookup = {h: cid for h, cid in res.members}
        for _, cid in res.members:
            self.t2.union((res.owner, res.edge), (cid, res.edge))
        R = res.radius
        for s, letter in ((a, "a"), (b, "b")):
            powers = [dihedral.generator(letter, m, j) for j in range(1, 2 * R + 1)]
            others = [f for f in self.edges if s in f and f != res.edge]
            for h, cid in res.members:
                for pw in powers:
                    other = lookup.get(dihedral.mult(h, pw))
                    if other is not None:
                        self.t1.union((cid, s), (other, s))
                        for f in others:
                            self.t2.union((cid, f), (other, f))
        # trees: (gh) s (gh)^-1 compared as dihedral elements, across both letters
        conj: Dict[dihedral.DihedralElement, Tuple[int, str]] = {}
        for s, letter in ((a, "a"), (b, "b")):
            if s not in self.infinite:
                continue
            gen = dihedral.generator(letter, m)
            for h, cid in res.members:
                x = dihedral.mult(dihedral.mult(h, gen), dihedral.inv(h))
                if x in conj:
                    self.tr.union(conj[x], (cid, s))
                else:
                    conj[x] = (cid, s)

    def coset_known(self, cid: int, e: Edge) -> bool:
        """Whether the type-2 vertex (cid, e) coincides with an explored residue of the same edge."""
        node = self.t2.find((cid, e))
        explored = [self.t2.find((o, f)) for (o, f) in self.residues if f == e]
        if node in explored:
            return True
        for (o, f) in self.residues:
            if f != e:
                continue
            x = oracle.free_reduce(oracle.inverse(self.chambers[o].rep) + self.chambers[cid].rep)
            if not self._quotient_coset_match(o, cid, e):
                continue
            v = oracle.parabolic_member(x, e, self.g, self.budget)
            if isinstance(v, Equal):
                self.t2.union((o, f), (cid, e))
                return True
            if isinstance(v, Unknown):
                self.unresolved.append(("vertex2", f"c{o}/{''.join(e)}", f"c{cid}/{''.join(e)}"))
        return False

    def _quotient_coset_match(self, c1: int, c2: int, gens: Sequence[str]) -> bool:
        for fq, M1, M2 in zip(self.quotients, self.images[c1], self.images[c2]):
            k1 = fq.coset_key(M1, gens)
            if k1 is not None and k1 != fq.coset_key(M2, gens):
                return False
        return True

    # ------------------------------------------------------------ global passes

    def _coset_pass(self, uf: _UnionFind, gens_of, kind: str) -> None:
        nodes = sorted({uf.find(x) for x in uf.parent}, key=_order_key)
        buckets: Dict[tuple, List] = {}
        for node in nodes:
            cid = node[0]
            gens = gens_of(node)
            zero = {self.classes[v] for v in gens}
            key = [node[1], self._ab_key(self.chambers[cid].rep, zero)]
            for fq, M in zip(self.quotients, self.images[cid]):
                key.append(fq.coset_key(M, gens))
            buckets.setdefault(tuple(key), []).append(node)
        for members in buckets.values():
            reps: List = []
            for node in members:
                for r in reps:
                    if uf.find(r) == uf.find(node):
                        break
                    x = oracle.free_reduce(oracle.inverse(self.chambers[r[0]].rep) + self.chambers[node[0]].rep)
                    v = oracle.parabolic_member(x, gens_of(node), self.g, self.budget)
                    if isinstance(v, Equal):
                        uf.union(r, node)
                        break
                    if isinstance(v, Unknown):
                        self.unresolved.append((kind, _node_text(r), _node_text(node)))
                else:
                    reps.append(node)

    def _tree_pass(self) -> None:
        for cid_a in list(self.tr.parent):
            self.tr.union(cid_a, self.t1.find(cid_a))
        roots = sorted({self.tr.find(x) for x in self.tr.parent}, key=_order_key)
        buckets: Dict[tuple, List] = {}
        for node in roots:
            desc = self.descriptor(node)
            key = (self.classes[node[1]], oracle.quotient_images(desc, self.g))
            buckets.setdefault(key, []).append(node)
        for members in buckets.values():
            reps: List = []
            roots = {n: oracle.reflection_root(self.chambers[n[0]].rep, n[1], self.g) for n in members}
            for node in members:
                for r in reps:
                    # distinct reflections in the Coxeter group certify distinct trees
                    if oracle.roots_differ(roots[r], roots[node]):
                        continue
                    v = oracle.artin_equal(self.descriptor(r), self.descriptor(node), self.g, self.budget)
                    if isinstance(v, Equal):
                        self.tr.union(r, node)
                        break
                    if isinstance(v, Unknown):
                        self.unresolved.append(("tree", _node_text(r), _node_text(node)))
                else:
                    reps.append(node)

    def descriptor(self, node) -> GroupWord:
        cid, a = node
        w = self.chambers[cid].rep
        return oracle.free_reduce(w + ((a, 1),) + oracle.inverse(w))


def _node_text(node) -> str:
    cid, x = node
    return f"c{cid}/{''.join(x)}"


def develop_ball(
    g: DefiningGraph,
    depth: int,
    residue_radius: int = DEFAULT_RADIUS,
    budget: int = oracle.SEARCH_BUDGET,
    max_chambers: int = MAX_CHAMBERS,
) -> DeligneBall:
    """Grow the ball of chambers reached through ``depth`` rounds of residue exploration."""
    g.require_large_type()
    if not is_connected(g.adjacency()):
        raise PreconditionError("defining graph must be connected")
    if depth < 0:
        raise PreconditionError("depth must be >= 0")
    b = _Builder(g, budget, max_chambers)
    n = len(g.vertices)
    b.add_chamber((), 0, None, None, (), [np.eye(n, dtype=np.int64) for _ in b.quotients])
    frontier = [0]
    for _ in range(depth):
        fresh: List[int] = []
        for cid in frontier:
            for e in b.edges:
                if b.coset_known(cid, e):
                    continue
                before = len(b.chambers)
                b.explore(cid, e, b.labels[e], residue_radius)
                fresh.extend(range(before, len(b.chambers)))
        frontier = fresh
    b._coset_pass(b.t2, lambda node: node[1], "vertex2")
    b._coset_pass(b.t1, lambda node: (node[1],), "vertex1")
    b._tree_pass()
    return _finish(b, depth, residue_radius)


def _finish(b: _Builder, depth: int, radius: int) -> DeligneBall:
    def number(uf: _UnionFind) -> Dict:
        ids: Dict = {}
        out: Dict = {}
        for x in sorted(uf.parent, key=_order_key):
            r = uf.find(x)
            if r not in ids:
                ids[r] = len(ids)
            out[x] = ids[r]
        return out

    n2, n1, nt = number(b.t2), number(b.t1), number(b.tr)
    type2: Dict[int, Tuple[Edge, Tuple[int, ...]]] = {}
    for (cid, e), i in n2.items():
        edge, cs = type2.get(i, (e, ()))
        type2[i] = (edge, cs + (cid,))
    type1: Dict[int, Tuple[str, Tuple[int, ...]]] = {}
    for (cid, a), i in n1.items():
        gen, cs = type1.get(i, (a, ()))
        type1[i] = (gen, cs + (cid,))
    trees: Dict[int, Tuple[str, GroupWord, Tuple[int, ...]]] = {}
    type1_tree: Dict[int, int] = {}
    for node, i in nt.items():
        t1 = n1[node]
        type1_tree[t1] = i
        if i not in trees:
            root = b.tr.find(node)
            trees[i] = (root[1], b.descriptor(root), ())
        gen, desc, members = trees[i]
        if t1 not in members:
            trees[i] = (gen, desc, members + (t1,))
    residues = {n2[(o, e)]: r for (o, e), r in b.residues.items()}
    return DeligneBall(
        graph=b.g,
        depth=depth,
        residue_radius=radius,
        chambers=b.chambers,
        residues=residues,
        type2={i: (e, tuple(sorted(cs))) for i, (e, cs) in type2.items()},
        type1={i: (a, tuple(sorted(cs))) for i, (a, cs) in type1.items()},
        trees=trees,
        chamber_type2=dict(n2),
        chamber_type1=dict(n1),
        type1_tree=type1_tree,
        unresolved=b.unresolved,
    )


# ---------------------------------------------------------------- dump


def dumps(ball: DeligneBall) -> str:
    lines = []
    for c in ball.chambers:
        lines.append(f"chamber {c.id} depth {c.depth} rep {oracle.word_text(c.rep) or '1'}")
    for i, (e, cs) in sorted(ball.type2.items()):
        lines.append(f"vertex2 {i} edge {''.join(e)} chambers {','.join(map(str, cs))}")
    for i, (a, cs) in sorted(ball.type1.items()):
        lines.append(f"vertex1 {i} gen {a} chambers {','.join(map(str, cs))}")
    for kind, x, y in ball.unresolved:
        lines.append(f"unresolved {x} {y}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- checks on a ball


def check_ball(ball: DeligneBall) -> List[str]:
    """Structural self-checks; returns a list of problems (empty when all hold)."""
    problems = []
    for vid, res in ball.residues.items():
        have = set(ball.type2[vid][1])
        want = {cid for _, cid in res.members}
        if not want <= have:
            problems.append(f"residue {vid} misses chambers {sorted(want - have)}")
    for c in ball.chambers:
        if c.parent is not None:
            parent = ball.chambers[c.parent].rep
            if oracle.free_reduce(parent + c.offset) != c.rep:
                problems.append(f"chamber {c.id} is not parent times offset")
    # sharing g<a> forces sharing every gA_e with a in e
    for tid, (a, cs) in ball.type1.items():
        for e in ball.edges():
            if a not in e:
                continue
            seen = {ball.chamber_type2[(cid, e)] for cid in cs}
            if len(seen) > 1:
                problems.append(f"type-1 vertex {tid} spans several type-2 vertices on {''.join(e)}")
    return problems


def residue_link_girth(ball: DeligneBall, v: int) -> Tuple[float, bool]:
    """Girth of the link of an explored type-2 vertex, counted on interior cycles only.

    The link has a vertex per chamber h and per coset h<a>, h<b>; chamber h is
    joined to its two cosets.  Only chambers at word length < R are kept, so
    every cycle found lies strictly inside the truncation.  Returns
    (girth, interior_cycle_found); the girth is math.inf when there is none.
    """
    res = ball.residues.get(v)
    if res is None:
        raise PreconditionError(f"type-2 vertex {v} was not explored")
    m, R = res.label, res.radius
    inner = [h for h, w in zip((x for x, _ in res.members), res.words) if len(w) < R]
    inside = set(inner)
    parent: Dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj: Dict[Hashable, Set[Hashable]] = {}
    for letter in ("a", "b"):
        for h in inner:
            parent.setdefault((letter, h), (letter, h))
        for h in inner:
            for j in range(1, 2 * R + 1):
                y = dihedral.mult(h, dihedral.generator(letter, m, j))
                if y in inside:
                    ra, rb = find((letter, h)), find((letter, y))
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
    for h in inner:
        node = ("c", h)
        adj.setdefault(node, set())
        for letter in ("a", "b"):
            coset = ("coset",) + find((letter, h))
            adj.setdefault(coset, set()).add(node)
            adj[node].add(coset)
    gval = girth(adj)
    return gval, gval != math.inf


# ---------------------------------------------------------------- standard trees


@dataclass
class StandardTreeSlice:
    root: int
    vertices: List[Tuple[int, int]]  # (type, class id), alternating 1 / 2
    edges: List[Tuple[Tuple[int, int], Tuple[int, int]]]
    descriptor: GroupWord

    def is_acyclic(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1


def standard_tree_slice(ball: DeligneBall, seed: int, depth: int = 8) -> StandardTreeSlice:
    """Grow Fix(x), x = the conjugate of the seed's generator, through explored residues.

    Membership of each new type-1 vertex g*h<s> in a residue gA_e is decided
    by checking h^-1 y h = s in the dihedral group, where y = g^-1 x g.
    """
    g = ball.graph
    a, cs = ball.type1[seed]
    c0 = cs[0]
    root_desc = oracle.free_reduce(ball.chambers[c0].rep + ((a, 1),) + oracle.inverse(ball.chambers[c0].rep))
    verts = [(1, seed)]
    edges = []
    seen = {(1, seed)}
    if not is_standard_tree_infinite(g, a) and not g.neighbors(a):
        return StandardTreeSlice(seed, verts, edges, root_desc)
    # frontier holds (type-1 id, generator, a chamber of that coset)
    frontier = [(seed, a, c0)]
    for _ in range(depth):
        nxt = []
        for t1, s, cid in frontier:
            for e in ball.edges():
                if s not in e:
                    continue
                v2 = ball.chamber_type2[(cid, e)]
                if (2, v2) not in seen:
                    seen.add((2, v2))
                    verts.append((2, v2))
                    edges.append(((1, t1), (2, v2)))
                elif ((1, t1), (2, v2)) not in edges:
                    continue
                res = ball.residues.get(v2)
                if res is None:
                    continue
                nxt.extend(_fixed_in_residue(ball, res, cid, s, v2, seen, verts, edges))
        frontier = nxt
        if not frontier:
            break
    return StandardTreeSlice(seed, verts, edges, root_desc)


def _fixed_in_residue(ball, res: Residue, cid: int, s: str, v2: int, seen, verts, edges):
    e0, e1 = res.edge
    m = res.label
    letter = "a" if s == e0 else "b"
    by_chamber = {c: h for h, c in res.members}
    if cid not in by_chamber:
        # the known chamber of this coset is outside the explored part; find one that is
        t1 = ball.chamber_type1[(cid, s)]
        alt = [c for c in ball.type1[t1][1] if c in by_chamber]
        if not alt:
            return []
        cid = alt[0]
    h0 = by_chamber[cid]
    y = dihedral.mult(dihedral.mult(h0, dihedral.generator(letter, m)), dihedral.inv(h0))
    out = []
    for h, c in res.members:
        hinv = dihedral.inv(h)
        z = dihedral.mult(dihedral.mult(hinv, y), h)
        for t, tl in ((e0, "a"), (e1, "b")):
            if z == dihedral.generator(tl, m):
                t1 = ball.chamber_type1[(c, t)]
                if (1, t1) not in seen:
                    seen.add((1, t1))
                    verts.append((1, t1))
                    edges.append(((2, v2), (1, t1)))
                    out.append((t1, t, c))
    return out


# ---------------------------------------------------------------- Bass-Serre count


def bass_serre_chamber_count(g: DefiningGraph, depth: int, radius: int) -> int:
    """Chamber count of develop_ball for a single edge or a two-edge path, from amalgam structure.

    A_ab *_<b> A_bc acts on its Bass-Serre tree, so residues of distinct
    type-2 vertices share chambers only along the amalgamating <b>.  Only
    dihedral arithmetic is used here, not the word oracle.
    """
    edges = g.edges()
    if depth < 0 or depth > 2:
        raise PreconditionError("depth must be 0, 1 or 2")
    if depth == 0:
        return 1
    if len(edges) == 1:
        return len(dihedral.ball_words(edges[0][2], radius))
    if len(edges) != 2 or not set(edges[0][:2]) & set(edges[1][:2]):
        raise PreconditionError("needs a single edge or a path with two edges")
    (a1, b1, m1), (a2, b2, m2) = edges
    shared = (set((a1, b1)) & set((a2, b2))).pop()
    B = [dihedral.ball_words(m1, radius), dihedral.ball_words(m2, radius)]
    letter = ["a" if shared == a1 else "b", "a" if shared == a2 else "b"]
    total = len(B[0]) + len(B[1]) - 1 - 2 * radius
    if depth == 1:
        return total
    for side in (0, 1):
        mine, other = B[side], B[1 - side]
        m = (m1, m2)[side]
        ball_set = {h for h, _ in mine}
        reps: List[dihedral.DihedralElement] = []
        for h, _ in mine:
            if _in_shared(h, letter[side], m):
                continue
            if any(dihedral.coset_equal_gen(r, h, letter[side]) for r in reps):
                continue
            reps.append(h)
            overlap = sum(
                1
                for j in range(-radius, radius + 1)
                if dihedral.mult(h, dihedral.generator(letter[side], m, j) if j else dihedral.identity(m)) in ball_set
            )
            total += len(other) - overlap
    return total


def _in_shared(h: dihedral.DihedralElement, letter: str, m: int) -> bool:
    return dihedral.coset_equal_gen(dihedral.identity(m), h, letter)
