"""Twistless hierarchies terminating in twistless stars, and the C1/C2 cycle-cover test.

A decomposition of a vertex set U into full subgraphs U1, U2 with
U1 ∪ U2 = U and both proper is the same thing as a set S = U1 ∩ U2 together
with a split of the components of U \\ S into two non-empty groups (no edge
may run between U1 \\ S and U2 \\ S).  Searching over S is therefore enough.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple, Union

from .errors import SizeError
from .graph_core import Adjacency, DefiningGraph, as_adjacency, components, is_connected, is_twistless

HIERARCHY_CAP = 16
C1_CAP = 10


@dataclass(frozen=True)
class Decomposition:
    gamma1: FrozenSet[str]
    gamma2: FrozenSet[str]

    @property
    def intersection(self) -> FrozenSet[str]:
        return self.gamma1 & self.gamma2


@dataclass(frozen=True)
class Leaf:
    vertices: FrozenSet[str]
    center: str


@dataclass(frozen=True)
class Split:
    vertices: FrozenSet[str]
    decomposition: Decomposition
    left: "HierarchyTree"
    right: "HierarchyTree"


HierarchyTree = Union[Leaf, Split]


def _order(g: DefiningGraph, vs) -> List[str]:
    return sorted(vs, key=g.vertices.index)


def degenerate_intersection(g: DefiningGraph, s: FrozenSet[str]) -> bool:
    """Empty, a single vertex, or a single edge."""
    if len(s) <= 1:
        return True
    if len(s) == 2:
        a, b = tuple(s)
        return g.label(a, b) is not None
    return False


def _decompositions_of(g: DefiningGraph, u: FrozenSet[str], twistless_only: bool) -> Iterator[Decomposition]:
    adj = g.induced(u).adjacency()
    verts = _order(g, u)
    for size in range(0, len(verts) - 1):
        for s in combinations(verts, size):
            sset = frozenset(s)
            if twistless_only and degenerate_intersection(g, sset):
                continue
            comps = components(adj, within=u - sset)
            if len(comps) < 2:
                continue
            first, rest = comps[0], comps[1:]
            # first component always on side 1; enumerate which others join it
            for mask in product((0, 1), repeat=len(rest)):
                if all(mask):
                    continue
                side1 = set(first).union(*(c for c, bit in zip(rest, mask) if bit))
                side2 = set().union(*(c for c, bit in zip(rest, mask) if not bit))
                yield Decomposition(frozenset(side1 | sset), frozenset(side2 | sset))


def admissible_decompositions(
    g: DefiningGraph, twistless_only: bool = False, cap: int = HIERARCHY_CAP
) -> List[Decomposition]:
    if len(g.vertices) > cap:
        raise SizeError(f"{len(g.vertices)} vertices exceeds cap {cap}")
    return list(_decompositions_of(g, frozenset(g.vertices), twistless_only))


def is_decomposition(g: DefiningGraph, u: FrozenSet[str], d: Decomposition) -> bool:
    if not (d.gamma1 | d.gamma2) == u or d.gamma1 == u or d.gamma2 == u:
        return False
    return all(e <= d.gamma1 or e <= d.gamma2 for e in g.labels if e <= u)


def twistless_star_center(g: DefiningGraph, u: FrozenSet[str]) -> Optional[str]:
    """First vertex whose closed star in g[u] is all of u, provided g[u] is twistless."""
    sub = g.induced(u)
    adj = sub.adjacency()
    centers = [v for v in sub.vertices if adj[v] | {v} == set(u)]
    if not centers or not is_twistless(adj):
        return None
    return centers[0]


def find_twistless_hierarchy(g: DefiningGraph, cap: int = HIERARCHY_CAP) -> Optional[HierarchyTree]:
    if len(g.vertices) > cap:
        raise SizeError(f"{len(g.vertices)} vertices exceeds cap {cap}")

    @lru_cache(maxsize=None)
    def solve(u: FrozenSet[str]) -> Optional[HierarchyTree]:
        c = twistless_star_center(g, u)
        if c is not None:
            return Leaf(u, c)
        for d in _decompositions_of(g, u, twistless_only=True):
            left = solve(d.gamma1)
            if left is None:
                continue
            right = solve(d.gamma2)
            if right is None:
                continue
            return Split(u, d, left, right)
        return None

    return solve(frozenset(g.vertices))


def check_hierarchy(g: DefiningGraph, t: HierarchyTree) -> Tuple[bool, List[str]]:
    """Re-verify every node of ``t`` against g; returns (ok, reasons for failure)."""
    problems: List[str] = []

    def fmt(vs) -> str:
        return "{" + ",".join(_order(g, vs)) + "}"

    def walk(node: HierarchyTree, u: FrozenSet[str]) -> None:
        if node.vertices != u:
            problems.append(f"node {fmt(node.vertices)} does not match expected {fmt(u)}")
            return
        if isinstance(node, Leaf):
            sub = g.induced(u)
            adj = sub.adjacency()
            if node.center not in u or adj[node.center] | {node.center} != set(u):
                problems.append(f"leaf {fmt(u)} is not the closed star of {node.center}")
            elif not is_twistless(adj):
                problems.append(f"leaf {fmt(u)} has a separating vertex or edge")
            return
        d = node.decomposition
        if not is_decomposition(g, u, d):
            problems.append(f"split of {fmt(u)} is not an admissible decomposition")
            return
        if degenerate_intersection(g, d.intersection):
            problems.append(f"split of {fmt(u)} has degenerate intersection {fmt(d.intersection)}")
        walk(node.left, d.gamma1)
        walk(node.right, d.gamma2)

    unknown = set(t.vertices) - set(g.vertices)
    if unknown:
        return False, [f"unknown vertices {sorted(unknown)}"]
    walk(t, frozenset(g.vertices))
    return not problems, problems


# ---------------------------------------------------------------- text form


def dumps(g: DefiningGraph, t: HierarchyTree) -> str:
    lines: List[str] = []

    def fmt(vs) -> str:
        return "{" + ",".join(_order(g, vs)) + "}"

    def walk(node: HierarchyTree, depth: int) -> None:
        pad = "  " * depth
        if isinstance(node, Leaf):
            lines.append(f"{pad}leaf center={node.center} V={fmt(node.vertices)}")
        else:
            lines.append(f"{pad}split S={fmt(node.decomposition.intersection)}")
            walk(node.left, depth + 1)
            walk(node.right, depth + 1)

    walk(t, 0)
    return "\n".join(lines) + "\n"


_SPLIT = re.compile(r"split S=\{([^}]*)\}\Z")
_LEAF = re.compile(r"leaf center=(\S+) V=\{([^}]*)\}\Z")


def loads(text: str) -> HierarchyTree:
    """Inverse of ``dumps``; node vertex sets are rebuilt bottom-up from the leaves."""
    rows = []
    for raw in text.splitlines():
        if not raw.strip():
            continue
        depth = (len(raw) - len(raw.lstrip(" "))) // 2
        rows.append((depth, raw.strip()))
    pos = 0

    def parse_set(s: str) -> FrozenSet[str]:
        return frozenset(x.strip() for x in s.split(",") if x.strip())

    def node(depth: int) -> HierarchyTree:
        nonlocal pos
        if pos >= len(rows) or rows[pos][0] != depth:
            raise ValueError(f"malformed hierarchy near row {pos + 1}")
        _, body = rows[pos]
        pos += 1
        mt = _LEAF.match(body)
        if mt:
            return Leaf(parse_set(mt.group(2)), mt.group(1))
        mt = _SPLIT.match(body)
        if not mt:
            raise ValueError(f"cannot read {body!r}")
        left = node(depth + 1)
        right = node(depth + 1)
        d = Decomposition(left.vertices, right.vertices)
        if d.intersection != parse_set(mt.group(1)):
            raise ValueError(f"split S={{{mt.group(1)}}} disagrees with its children")
        return Split(left.vertices | right.vertices, d, left, right)

    tree = node(0)
    if pos != len(rows):
        raise ValueError("trailing rows after hierarchy")
    return tree


# ---------------------------------------------------------------- C1 / C2


def induced_cycles(adj: Adjacency) -> List[FrozenSet]:
    """Vertex sets of all induced cycles (length >= 3)."""
    order = {v: i for i, v in enumerate(adj)}
    found: Set[FrozenSet] = set()

    def extend(path: List, inpath: Set) -> None:
        start, last = path[0], path[-1]
        for u in adj[last]:
            if u == start and len(path) >= 3:
                found.add(frozenset(path))
                continue
            if u in inpath or order[u] <= order[start]:
                continue
            # u must not be adjacent to any interior path vertex (chordless),
            # and may touch start only if it closes the cycle next
            if any(u in adj[p] for p in path[1:-1]):
                continue
            path.append(u)
            inpath.add(u)
            if start in adj[u] and len(path) >= 3:
                found.add(frozenset(path))
            else:
                extend(path, inpath)
            path.pop()
            inpath.discard(u)

    for s in adj:
        extend([s], {s})
    return sorted(found, key=lambda c: sorted(order[v] for v in c))


def _cycle_edges(adj: Adjacency, cyc: FrozenSet) -> Set[FrozenSet]:
    return {frozenset((a, b)) for a in cyc for b in adj[a] if b in cyc}


def condition_C1(graph, cap: int = C1_CAP) -> bool:
    """Whether the graph is a union of induced cycles C_1, ..., C_n, each sharing an edge with an earlier one."""
    adj = as_adjacency(graph)
    if len(adj) > cap:
        raise SizeError(f"{len(adj)} vertices exceeds C1 cap {cap}")
    cycles = induced_cycles(adj)
    if not cycles:
        return False
    all_edges = {frozenset((a, b)) for a in adj for b in adj[a]}
    edges = [_cycle_edges(adj, c) for c in cycles]
    # cycles that can be chained: connected components of the edge-sharing relation
    n = len(cycles)
    share = [[j for j in range(n) if j != i and len(edges[i] & edges[j]) >= 1] for i in range(n)]
    seen: Set[int] = set()
    for s in range(n):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            i = stack.pop()
            for j in share[i]:
                if j not in comp:
                    comp.add(j)
                    stack.append(j)
        seen |= comp
        verts = set().union(*(cycles[i] for i in comp))
        covered = set().union(*(edges[i] for i in comp))
        if verts == set(adj) and covered == all_edges:
            return True
    return False


def condition_C2(graph) -> bool:
    """Connected with no separating vertex (the empty graph does not qualify)."""
    adj = as_adjacency(graph)
    if not adj:
        return False
    if not is_connected(adj):
        return False
    return all(is_connected(adj, (v,)) for v in adj)
