"""Finite windows of the Farey graph.

Vertices are reduced fractions p/q with q > 0, plus infinity as 1/0; p/q and
r/s are adjacent when |ps - rq| = 1.  The neighbours of p/q form one
sequence (p0 + k p)/(q0 + k q), k in Z, consecutive terms adjacent, which is
why links are lines.

A window holds every reduced p/q with q <= Qmax and |p| <= Qmax * K.  A
vertex is interior when every neighbour with denominator <= Qmax is in the
window; infinity is interior since its neighbours are the integers and the
window keeps a contiguous block of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Dict, List, Set, Tuple

from .errors import SizeError

FareyVertex = Tuple[int, int]
INFINITY: FareyVertex = (1, 0)
MAX_VERTICES = 20_000


def vertex(p: int, q: int) -> FareyVertex:
    """Reduced, normalised form; -1/0 and 1/0 both give infinity."""
    if q == 0:
        if p == 0:
            raise ValueError("0/0 is not a Farey vertex")
        return INFINITY
    d = gcd(p, q)
    p, q = p // d, q // d
    if q < 0:
        p, q = -p, -q
    return p, q


def text(v: FareyVertex) -> str:
    return f"{v[0]}/{v[1]}"


def adjacent(x: FareyVertex, y: FareyVertex) -> bool:
    return abs(x[0] * y[1] - y[0] * x[1]) == 1


@dataclass
class FareyBall:
    qmax: int
    window: int
    vertices: List[FareyVertex]
    adjacency: Dict[FareyVertex, Set[FareyVertex]]

    def __contains__(self, v: FareyVertex) -> bool:
        return v in self.adjacency

    @property
    def pmax(self) -> int:
        return self.qmax * self.window

    def edges(self) -> List[Tuple[FareyVertex, FareyVertex]]:
        return [(u, v) for u in self.vertices for v in self.adjacency[u] if u < v]


def farey_ball(qmax: int, window: int = 1, max_vertices: int = MAX_VERTICES) -> FareyBall:
    if qmax < 1:
        raise ValueError("qmax must be >= 1")
    pmax = qmax * window
    verts = [INFINITY]
    for q in range(1, qmax + 1):
        for p in range(-pmax, pmax + 1):
            if gcd(p, q) == 1:
                verts.append((p, q))
    if len(verts) > max_vertices:
        raise SizeError(f"{len(verts)} vertices exceeds {max_vertices}")
    verts.sort(key=lambda v: (v[1] == 0, v[0] / v[1] if v[1] else 0))
    adj: Dict[FareyVertex, Set[FareyVertex]] = {v: set() for v in verts}
    for u, v in combinations(verts, 2):
        if adjacent(u, v):
            adj[u].add(v)
            adj[v].add(u)
    return FareyBall(qmax, window, verts, adj)


def neighbours_up_to(v: FareyVertex, qbound: int, pbound: int) -> List[FareyVertex]:
    """All Farey neighbours of v with denominator <= qbound (numerators capped at pbound for infinity)."""
    if v == INFINITY:
        return [(n, 1) for n in range(-pbound, pbound + 1)]
    p, q = v
    # one neighbour from the extended Euclid identity p*y - q*x = 1
    x0, y0 = _neighbour_seed(p, q)
    out = set()
    # denominators y0 + k q; |y0 + k q| <= qbound bounds k
    lo = (-qbound - y0) // q - 1
    hi = (qbound - y0) // q + 1
    for k in range(lo, hi + 1):
        num, den = x0 + k * p, y0 + k * q
        if abs(den) <= qbound and (num, den) != (0, 0):
            out.add(vertex(num, den))
    return sorted(out, key=lambda w: (w[1] == 0, w[0] / w[1] if w[1] else 0))


def _neighbour_seed(p: int, q: int) -> Tuple[int, int]:
    # solve p*y - q*x = 1 with the extended Euclidean algorithm
    def ext(a: int, b: int) -> Tuple[int, int, int]:
        if b == 0:
            return a, 1, 0
        d, s, t = ext(b, a % b)
        return d, t, s - (a // b) * t

    d, s, t = ext(p, q)  # p*s + q*t = d = +-1
    if d < 0:
        s, t = -s, -t
    return -t, s


def is_interior(ball: FareyBall, v: FareyVertex) -> bool:
    if v not in ball:
        return False
    if v == INFINITY:
        return True
    return all(w in ball for w in neighbours_up_to(v, ball.qmax, ball.pmax))


def link_is_line(ball: FareyBall, v: FareyVertex) -> str:
    """"line", "not-line" or "boundary-inconclusive" for the link of v inside the window."""
    if not is_interior(ball, v):
        return "boundary-inconclusive"
    nb = ball.adjacency[v]
    sub = {u: ball.adjacency[u] & nb for u in nb}
    if len(nb) < 3:
        return "boundary-inconclusive"
    degs = [len(s) for s in sub.values()]
    edges = sum(degs) // 2
    if max(degs) > 2 or edges != len(nb) - 1 or degs.count(1) != 2:
        return "not-line"
    # connected + |E| = |V| - 1 + max degree 2 makes a path
    start = next(u for u in nb if len(sub[u]) == 1)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in sub[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return "line" if len(seen) == len(nb) else "not-line"


@dataclass
class TriangleReport:
    interior_edges: int
    bad: List[Tuple[FareyVertex, FareyVertex, int]]


def edge_two_triangles(ball: FareyBall) -> TriangleReport:
    """Triangles through each interior edge: both ends interior and the mediant inside the window."""
    interior = {v for v in ball.vertices if is_interior(ball, v)}
    bad = []
    count = 0
    for u, v in ball.edges():
        if u not in interior or v not in interior or u[1] + v[1] > ball.qmax:
            continue
        count += 1
        k = len(ball.adjacency[u] & ball.adjacency[v])
        if k != 2:
            bad.append((u, v, k))
    return TriangleReport(count, bad)


def induced_four_cycles(ball: FareyBall, interior_only: bool = True) -> List[Tuple[FareyVertex, ...]]:
    """Chordless 4-cycles (two triangles on an edge give 4-cycles with a chord, which do not count)."""
    pool = [v for v in ball.vertices if not interior_only or is_interior(ball, v)]
    keep = set(pool)
    out = []
    for a, c in combinations(pool, 2):
        if c in ball.adjacency[a]:
            continue
        common = sorted((ball.adjacency[a] & ball.adjacency[c]) & keep)
        for b, d in combinations(common, 2):
            if d not in ball.adjacency[b]:
                out.append((a, b, c, d))
    return out


def dumps(ball: FareyBall) -> str:
    return "".join(f"{text(u)} {text(v)}\n" for u, v in ball.edges())
