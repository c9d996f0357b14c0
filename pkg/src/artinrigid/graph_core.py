"""Labelled presentation graphs and the graph-level predicates used elsewhere.

A presentation graph has string vertices and integer edge labels m >= 2; a
missing edge stands for m = infinity.  Abstract graphs (balls, links, Farey
pieces) are plain adjacency mappings ``{vertex: set(neighbours)}`` so that
every module can share the same small toolkit below.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Set, Tuple

from .errors import LabelError, ParseError, PreconditionError

Adjacency = Dict[Hashable, Set[Hashable]]

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
HEADER = "artin-graph v1"


@dataclass(frozen=True, eq=False)
class DefiningGraph:
    vertices: Tuple[str, ...]
    labels: Mapping[FrozenSet[str], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex")
        vs = set(self.vertices)
        for e, m in self.labels.items():
            if len(e) != 2 or not e <= vs:
                raise ValueError(f"bad edge {sorted(e)}")
            if not isinstance(m, int) or m < 2:
                raise LabelError(f"label {m!r} on {sorted(e)} is not an integer >= 2")

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(self.labels.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DefiningGraph):
            return NotImplemented
        return self.vertices == other.vertices and dict(self.labels) == dict(other.labels)

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[Tuple[str, str, int]]) -> "DefiningGraph":
        return cls(tuple(vertices), {frozenset((a, b)): m for a, b, m in edges})

    def label(self, a: str, b: str) -> Optional[int]:
        return self.labels.get(frozenset((a, b)))

    def edges(self) -> List[Tuple[str, str, int]]:
        """Edges as (a, b, m) with a before b in vertex order, sorted."""
        pos = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for e, m in self.labels.items():
            a, b = sorted(e, key=pos.__getitem__)
            out.append((a, b, m))
        out.sort(key=lambda t: (pos[t[0]], pos[t[1]]))
        return out

    def neighbors(self, v: str) -> List[str]:
        return [u for u in self.vertices if frozenset((u, v)) in self.labels]

    def adjacency(self) -> Adjacency:
        adj: Adjacency = {v: set() for v in self.vertices}
        for e in self.labels:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def induced(self, subset: Iterable[str]) -> "DefiningGraph":
        keep = set(subset)
        return DefiningGraph(
            tuple(v for v in self.vertices if v in keep),
            {e: m for e, m in self.labels.items() if e <= keep},
        )

    def require_large_type(self) -> None:
        for a, b, m in self.edges():
            if m < 3:
                raise PreconditionError(f"edge {a}-{b} has label {m}; large type needs labels >= 3")


def parse(text: str) -> DefiningGraph:
    """Read an ``artin-graph v1`` document."""
    vertices: List[str] = []
    labels: Dict[FrozenSet[str], int] = {}
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not seen_header:
            if line != HEADER:
                raise ParseError(lineno, f"expected header {HEADER!r}")
            seen_header = True
            continue
        parts = line.split()
        if parts[0] == "vertex":
            if len(parts) != 2:
                raise ParseError(lineno, "vertex line takes one identifier")
            v = parts[1]
            if not _IDENT.match(v):
                raise ParseError(lineno, f"bad identifier {v!r}")
            if v in vertices:
                raise ParseError(lineno, f"duplicate vertex {v}")
            vertices.append(v)
        elif parts[0] == "edge":
            if len(parts) != 4:
                raise ParseError(lineno, "edge line takes two identifiers and a label")
            a, b, m_text = parts[1:]
            for v in (a, b):
                if v not in vertices:
                    raise ParseError(lineno, f"undeclared vertex {v}")
            if a == b:
                raise ParseError(lineno, "self-loop")
            key = frozenset((a, b))
            if key in labels:
                raise ParseError(lineno, f"duplicate edge {a} {b}")
            if not re.fullmatch(r"-?\d+", m_text):
                raise ParseError(lineno, f"label {m_text!r} is not a decimal integer")
            m = int(m_text)
            if m < 2:
                raise LabelError(f"line {lineno}: label {m} < 2")
            labels[key] = m
        else:
            raise ParseError(lineno, f"unknown directive {parts[0]!r}")
    if not seen_header:
        raise ParseError(0, "missing header")
    return DefiningGraph(tuple(vertices), labels)


def dumps(g: DefiningGraph) -> str:
    lines = [HEADER]
    lines += [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {a} {b} {m}" for a, b, m in g.edges()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- abstract graphs


def as_adjacency(graph) -> Adjacency:
    """Normalise a DefiningGraph, an adjacency mapping or a networkx-like graph."""
    if isinstance(graph, DefiningGraph):
        return graph.adjacency()
    if hasattr(graph, "adj") and hasattr(graph, "nodes"):
        return {v: set(graph.adj[v]) for v in graph.nodes}
    return {v: set(ns) for v, ns in graph.items()}


def edge_count(adj: Adjacency) -> int:
    return sum(len(ns) for ns in adj.values()) // 2


def is_connected(adj: Adjacency, removed: Iterable[Hashable] = ()) -> bool:
    """Connectivity of ``adj`` minus ``removed``; the empty graph counts as connected."""
    gone = set(removed)
    rest = [v for v in adj if v not in gone]
    if len(rest) <= 1:
        return True
    seen = {rest[0]}
    stack = [rest[0]]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in gone and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(rest)


def components(adj: Adjacency, within: Optional[Iterable[Hashable]] = None) -> List[Set[Hashable]]:
    pool = set(adj) if within is None else set(within)
    comps = []
    order = [v for v in adj if v in pool]
    seen: Set[Hashable] = set()
    for s in order:
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u in pool and u not in seen:
                    seen.add(u)
                    comp.add(u)
                    stack.append(u)
        comps.append(comp)
    return comps


def separating_vertices(adj: Adjacency) -> List[Hashable]:
    return [v for v in adj if not is_connected(adj, (v,))]


def separating_edges(adj: Adjacency) -> List[Tuple[Hashable, Hashable]]:
    order = {v: i for i, v in enumerate(adj)}
    out = []
    for a in adj:
        for b in adj[a]:
            if order[a] < order[b] and not is_connected(adj, (a, b)):
                out.append((a, b))
    return out


def is_twistless(adj: Adjacency) -> bool:
    return not separating_vertices(adj) and not separating_edges(adj)


def girth(graph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    adj = as_adjacency(graph)
    best = math.inf
    for s in adj:
        dist = {s: 0}
        parent = {s: None}
        q = deque([s])
        while q:
            v = q.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for u in adj[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    q.append(u)
                elif parent[v] != u:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def is_bipartite(graph) -> bool:
    adj = as_adjacency(graph)
    colour: Dict[Hashable, int] = {}
    for s in adj:
        if s in colour:
            continue
        colour[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for u in adj[v]:
                if u not in colour:
                    colour[u] = 1 - colour[v]
                    q.append(u)
                elif colour[u] == colour[v]:
                    return False
    return True


def modified_link(graph, v: Hashable) -> Adjacency:
    """Neighbours of v on embedded 5-cycles, joined when consecutive with v on one.

    An embedded 5-cycle through v reads v, w, x, y, w' with five distinct
    vertices; chords are allowed.
    """
    adj = as_adjacency(graph)
    link: Adjacency = {}
    nbrs = sorted(adj[v], key=repr)
    for w, w2 in combinations(nbrs, 2):
        found = False
        for x in adj[w]:
            if x in (v, w2):
                continue
            for y in adj[x]:
                if y in (v, w, w2):
                    continue
                if w2 in adj[y]:
                    found = True
                    break
            if found:
                break
        if found:
            link.setdefault(w, set()).add(w2)
            link.setdefault(w2, set()).add(w)
    return link


# ---------------------------------------------------------------- classification


@dataclass
class ClassificationReport:
    large_type: bool
    xxxl: bool
    triangle_free: bool
    two_dimensional: bool
    hyperbolic_type: bool
    connected: bool
    leaf_vertices: List[str]
    isolated_vertices: List[str]
    separating_vertices: List[str]
    separating_edges: List[Tuple[str, str]]
    twistless: bool
    large_generators: List[str]


def triangles(g: DefiningGraph) -> List[Tuple[str, str, str]]:
    adj = g.adjacency()
    out = []
    for a, b, c in combinations(g.vertices, 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            out.append((a, b, c))
    return out


def large_generators(g: DefiningGraph) -> List[str]:
    """Generators that are neither isolated nor the tip of an even-labelled leaf."""
    out = []
    for v in g.vertices:
        nb = g.neighbors(v)
        if not nb:
            continue
        if len(nb) == 1 and g.label(v, nb[0]) % 2 == 0:
            continue
        out.append(v)
    return out


def classify(g: DefiningGraph) -> ClassificationReport:
    adj = g.adjacency()
    ms = list(g.labels.values())
    large = all(m >= 3 for m in ms)
    tris = triangles(g)
    two_dim = all(
        Fraction(1, g.label(a, b)) + Fraction(1, g.label(a, c)) + Fraction(1, g.label(b, c)) <= 1
        for a, b, c in tris
    )
    # Outside large type the Coxeter-hyperbolicity test needs more than triangles; report False there.
    hyperbolic = large and not any(
        g.label(a, b) == g.label(a, c) == g.label(b, c) == 3 for a, b, c in tris
    )
    sep_v = separating_vertices(adj)
    sep_e = separating_edges(adj)
    return ClassificationReport(
        large_type=large,
        xxxl=all(m >= 6 for m in ms),
        triangle_free=not tris,
        two_dimensional=two_dim,
        hyperbolic_type=hyperbolic,
        connected=is_connected(adj),
        leaf_vertices=[v for v in g.vertices if len(adj[v]) == 1],
        isolated_vertices=[v for v in g.vertices if not adj[v]],
        separating_vertices=sep_v,
        separating_edges=sep_e,
        twistless=not sep_v and not sep_e,
        large_generators=large_generators(g),
    )


# ---------------------------------------------------------------- subdivision


@dataclass
class BarycentricGraph:
    """Vertices are ``("V", a)`` or ``("E", (a, b))``; edges join an edge-vertex to its endpoints."""

    vertices: List[Tuple[str, object]]
    adjacency: Adjacency

    def edge_count(self) -> int:
        return edge_count(self.adjacency)


def barycentric_subdivision(g: DefiningGraph) -> BarycentricGraph:
    verts: List[Tuple[str, object]] = [("V", v) for v in g.vertices]
    adj: Adjacency = {x: set() for x in verts}
    for a, b, _ in g.edges():
        e = ("E", (a, b))
        verts.append(e)
        adj[e] = {("V", a), ("V", b)}
        adj[("V", a)].add(e)
        adj[("V", b)].add(e)
    return BarycentricGraph(verts, adj)


# ---------------------------------------------------------------- isomorphisms


def _signature(g: DefiningGraph, v: str) -> Tuple[int, Tuple[int, ...]]:
    ms = sorted(g.label(v, u) for u in g.neighbors(v))
    return len(ms), tuple(ms)


def _iso_search(g1: DefiningGraph, g2: DefiningGraph, find_all: bool) -> List[Dict[str, str]]:
    if len(g1.vertices) != len(g2.vertices) or sorted(g1.labels.values()) != sorted(g2.labels.values()):
        return []
    sig1 = {v: _signature(g1, v) for v in g1.vertices}
    sig2 = {v: _signature(g2, v) for v in g2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return []
    # Order so each vertex after the first in a component touches an earlier one.
    adj1 = g1.adjacency()
    order: List[str] = []
    placed: Set[str] = set()
    for comp in components(adj1):
        start = max(comp, key=lambda v: (len(adj1[v]), -g1.vertices.index(v)))
        frontier = [start]
        while frontier:
            frontier.sort(key=lambda v: (-sum(u in placed for u in adj1[v]), -len(adj1[v]), g1.vertices.index(v)))
            v = frontier.pop(0)
            if v in placed:
                continue
            placed.add(v)
            order.append(v)
            frontier.extend(u for u in adj1[v] if u not in placed)
    results: List[Dict[str, str]] = []
    mapping: Dict[str, str] = {}
    used: Set[str] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            results.append(dict(mapping))
            return not find_all
        v = order[i]
        for w in g2.vertices:
            if w in used or sig2[w] != sig1[v]:
                continue
            if all(g1.label(v, u) == g2.label(w, mapping[u]) for u in order[:i]):
                mapping[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    extend(0)
    return results


def is_label_isomorphism(g1: DefiningGraph, g2: DefiningGraph, f: Mapping[str, str]) -> bool:
    if set(f) != set(g1.vertices) or set(f.values()) != set(g2.vertices):
        return False
    return all(g1.label(a, b) == g2.label(f[a], f[b]) for a, b in combinations(g1.vertices, 2))


def label_isomorphism(g1: DefiningGraph, g2: DefiningGraph) -> Optional[Dict[str, str]]:
    found = _iso_search(g1, g2, find_all=False)
    if not found:
        return None
    f = found[0]
    if not is_label_isomorphism(g1, g2, f):
        raise AssertionError("backtracking returned a map that fails re-verification")
    return f


def label_automorphisms(g: DefiningGraph) -> List[Dict[str, str]]:
    return _iso_search(g, g, find_all=True)


def star(g: DefiningGraph, v: str, mode: str = "closed") -> Set[str]:
    """``closed`` gives v with its neighbours; ``link`` gives the neighbours only."""
    nb = set(g.neighbors(v))
    if mode == "closed":
        return nb | {v}
    if mode == "link":
        return nb
    raise ValueError(f"unknown star mode {mode!r}")


@dataclass
class StarRigidity:
    rigid: bool
    witness: Optional[Tuple[str, Dict[str, str]]] = None

    def __bool__(self) -> bool:
        return self.rigid


def star_rigidity_witnesses(g: DefiningGraph, mode: str = "closed") -> List[Tuple[str, Dict[str, str]]]:
    autos = [phi for phi in label_automorphisms(g) if any(phi[v] != v for v in phi)]
    out = []
    for v in g.vertices:
        st = star(g, v, mode)
        for phi in autos:
            if all(phi[u] == u for u in st):
                out.append((v, phi))
    return out


def is_star_rigid(g: DefiningGraph, mode: str = "closed") -> StarRigidity:
    autos = [phi for phi in label_automorphisms(g) if any(phi[v] != v for v in phi)]
    for v in g.vertices:
        st = star(g, v, mode)
        for phi in autos:
            if all(phi[u] == u for u in st):
                return StarRigidity(False, (v, phi))
    return StarRigidity(True)
