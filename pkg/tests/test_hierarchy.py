from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from artinrigid import hierarchy as h
from artinrigid.errors import SizeError
from artinrigid.graph_core import DefiningGraph, is_twistless

from conftest import load


def atlas_graphs(min_n=1, max_n=6):
    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if min_n <= n <= max_n and nx.is_connected(G):
            yield {v: set(G[v]) for v in G}


def brute_induced_cycles(adj):
    out = set()
    vs = list(adj)
    for k in range(3, len(vs) + 1):
        for s in combinations(vs, k):
            ss = set(s)
            if all(len(adj[v] & ss) == 2 for v in s):
                sub = {v: adj[v] & ss for v in s}
                seen, stack = {s[0]}, [s[0]]
                while stack:
                    for u in sub[stack.pop()]:
                        if u not in seen:
                            seen.add(u)
                            stack.append(u)
                if seen == ss:
                    out.add(frozenset(s))
    return out


@pytest.mark.parametrize("adj", list(atlas_graphs(3, 6))[::7])
def test_induced_cycles_brute_force(adj):
    assert set(h.induced_cycles(adj)) == brute_induced_cycles(adj)


def test_c1_c2_agree_from_three_vertices():
    graphs = list(atlas_graphs(3, 6))
    assert len(graphs) == 141
    for adj in graphs:
        c1, c2 = h.condition_C1(adj), h.condition_C2(adj)
        assert c1 == c2
        assert c2 == nx.is_biconnected(nx.Graph([(a, b) for a in adj for b in adj[a]]))


def test_single_edge_separates_c1_from_c2():
    k2 = {0: {1}, 1: {0}}
    assert h.condition_C2(k2) and not h.condition_C1(k2)


def test_c1_cap():
    adj = {i: {(i + 1) % 11, (i - 1) % 11} for i in range(11)}
    with pytest.raises(SizeError):
        h.condition_C1(adj)


def test_octahedron_hierarchy():
    g = load("octahedron")
    t = h.find_twistless_hierarchy(g)
    assert isinstance(t, h.Split)
    assert t.decomposition.intersection == frozenset({"N", "S", "e1", "e3"})
    ok, problems = h.check_hierarchy(g, t)
    assert ok, problems
    for leaf in (t.left, t.right):
        assert isinstance(leaf, h.Leaf)
        sub = g.induced(leaf.vertices).adjacency()
        assert is_twistless(sub) and sub[leaf.center] | {leaf.center} == set(leaf.vertices)


def test_triangle_is_a_leaf():
    t = h.find_twistless_hierarchy(load("triangle333"))
    assert isinstance(t, h.Leaf) and t.vertices == frozenset("abc")


@pytest.mark.parametrize("name", ["path33", "square", "book3"])
def test_no_hierarchy(name):
    assert h.find_twistless_hierarchy(load(name)) is None


def test_square_splits_along_diagonals():
    ds = h.admissible_decompositions(load("square"), twistless_only=True)
    assert sorted(sorted(d.intersection) for d in ds) == [["a", "c"], ["b", "d"]]


def test_dump_load_round_trip():
    g = load("octahedron")
    t = h.find_twistless_hierarchy(g)
    text = h.dumps(g, t)
    assert text.splitlines()[0] == "split S={N,S,e1,e3}"
    assert h.loads(text) == t
    assert h.dumps(g, h.loads(text)) == text


def test_check_hierarchy_rejects_tampering():
    g = load("octahedron")
    t = h.find_twistless_hierarchy(g)
    bad = h.Split(t.vertices, t.decomposition, h.Leaf(t.left.vertices, "N"), t.right)
    ok, problems = h.check_hierarchy(g, bad)
    assert not ok and "closed star" in problems[0]
    swapped = h.Split(t.vertices, t.decomposition, t.right, t.left)
    assert not h.check_hierarchy(g, swapped)[0]


def test_loads_rejects_inconsistent_split():
    with pytest.raises(ValueError):
        h.loads("split S={a}\n  leaf center=a V={a,b}\n  leaf center=c V={b,c}\n")


@given(st.integers(3, 8))
def test_cycles_satisfy_both(n):
    adj = {i: {(i + 1) % n, (i - 1) % n} for i in range(n)}
    assert h.condition_C1(adj) and h.condition_C2(adj)


@given(st.integers(2, 7))
def test_paths_satisfy_neither_beyond_two(n):
    adj = {i: {j for j in (i - 1, i + 1) if 0 <= j < n} for i in range(n)}
    assert not h.condition_C1(adj)
    assert h.condition_C2(adj) == (n == 2)


def test_decomposition_predicate():
    g = load("square")
    u = frozenset(g.vertices)
    assert h.is_decomposition(g, u, h.Decomposition(frozenset("abc"), frozenset("acd")))
    assert not h.is_decomposition(g, u, h.Decomposition(frozenset("ab"), frozenset("cd")))
    assert h.degenerate_intersection(g, frozenset("ab"))
    assert not h.degenerate_intersection(g, frozenset("ac"))
    assert not h.degenerate_intersection(g, frozenset("abc"))


def test_hierarchy_cap():
    g = DefiningGraph.from_edges([f"v{i}" for i in range(17)], [])
    with pytest.raises(SizeError):
        h.find_twistless_hierarchy(g)
