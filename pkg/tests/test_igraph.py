import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artinrigid import deligne as D
from artinrigid import igraph as I
from artinrigid import oracle
from artinrigid.errors import PreconditionError, UnresolvedBallError
from artinrigid.graph_core import girth, is_bipartite

from conftest import load


@pytest.fixture(scope="module")
def ball333():
    return D.develop_ball(load("triangle333"), 1, 3)


@pytest.fixture(scope="module")
def iball333(ball333):
    return I.build_td_ball(ball333)


@st.composite
def small_graphs(draw, n_max=7):
    n = draw(st.integers(3, n_max))
    adj = {i: set() for i in range(n)}
    for a, b in itertools.combinations(range(n), 2):
        if draw(st.booleans()):
            adj[a].add(b)
            adj[b].add(a)
    return adj


# ---- pentagon


def test_pentagon_certified():
    p = I.exotic_pentagon(load("triangle333"), "a", "b", "c")
    assert p.certified and len(p.verdicts) == 5
    assert I.pentagon_link_check(p)
    kinds = sorted(v.kind for v in p.fragment.vertices.values())
    assert kinds == ["D", "E", "E", "T", "T"]


def test_pentagon_needs_labels_three():
    with pytest.raises(PreconditionError):
        I.exotic_pentagon(load("triangle344"), "a", "b", "c")


# ---- T/D ball


def test_unresolved_ball_is_refused(monkeypatch):
    def unavailable(w, g):
        raise oracle.ReductionError("disabled")

    monkeypatch.setattr(oracle, "geodesic_reduce", unavailable)
    ball = D.develop_ball(load("square"), 1, 3, budget=1)
    assert ball.unresolved and ball.status == "Unresolved"
    with pytest.raises(UnresolvedBallError):
        I.build_td_ball(ball)


def test_td_ball_shape(iball333):
    td = iball333.td_adjacency()
    assert is_bipartite(td) and girth(td) == 6
    assert iball333.edge_types_ok()
    for v, nb in td.items():
        assert all(iball333.kind(u) != iball333.kind(v) for u in nb)


# ---- search primitives against brute force


@settings(max_examples=40)
@given(small_graphs())
def test_six_cycles_brute_force(adj):
    G = nx.Graph([(a, b) for a in adj for b in adj[a]])
    G.add_nodes_from(adj)
    want = {frozenset(c) for c in nx.simple_cycles(G, length_bound=6) if len(c) == 6}
    got = I.six_cycles(adj)
    assert len(got) == len({(frozenset(c), frozenset(frozenset(e) for e in zip(c, c[1:] + c[:1]))) for c in got})
    assert {frozenset(c) for c in got} == want


@settings(max_examples=40)
@given(small_graphs(6), st.integers(3, 4))
def test_embeddings_brute_force(target, k):
    pattern = {i: {(i + 1) % k, (i - 1) % k} for i in range(k)}
    kinds = {i: "X" for i in pattern}
    got = I._embeddings(pattern, kinds, target, lambda v: "X")
    brute = []
    for img in itertools.permutations(target, k):
        if all(img[(i + 1) % k] in target[img[i]] for i in range(k)):
            brute.append(img)
    assert sorted(tuple(f[i] for i in range(k)) for f in got) == sorted(brute)


def test_hexagon_chain_shape():
    for n in (3, 4, 5):
        for centre in "TD":
            adj, kinds = I.hexagon_chain(n, centre)
            assert len(adj) == 3 * n + 2
            assert sum(len(v) for v in adj.values()) // 2 == 4 * n + 1
            assert kinds["c"] == centre
            assert all(kinds[u] != kinds[v] for u in adj for v in adj[u])
            assert girth(adj) == 6


# ---- characteristic copies and fundamentality


def test_characteristic_copies_are_fundamental(ball333, iball333):
    copies = I.find_characteristic_subgraphs(iball333, load("triangle333"))
    assert len(copies) == len(ball333.chambers)
    for emb in copies:
        w = I.fundamentality_witness(iball333, emb, ball333)
        assert w.status == "unique"


def test_path_copy_is_found(iball333):
    copies = I.find_characteristic_subgraphs(iball333, load("path33"))
    assert copies
    assert all(v[0] == ("T" if k[0] == "V" else "D") for c in copies for k, v in c.items())


def test_six_cycle_audit(ball333, iball333):
    a = I.six_cycle_audit(iball333, ball333)
    assert a.multiple == 0 and a.inconclusive == 0
    assert a.unique == a.total == a.interior_total == a.interior_unique > 0


# ---- G1 / G2


def test_g1_present_g2_absent(ball333):
    p = I.g1_g2_probe(load("triangle333"), ball333, "a", "b", "c")
    assert p.g1_found and p.g1_in_ball and not p.g2_embeddings
    assert [ln.split()[2] for ln in p.lines] == ["PASS", "PASS"]
    assert len(p.y_chambers) == 3


def test_g2_negative_control(ball333):
    g1 = I.hexagon_chain(3, "D")
    p = I.g1_g2_probe(load("triangle333"), ball333, "a", "b", "c", g2_template=g1)
    assert p.g2_embeddings
    assert p.lines[1].split()[2] == "FAIL"


def test_probe_needs_triangle(ball333):
    g = load("path33")
    ball = D.develop_ball(g, 1, 3)
    with pytest.raises(PreconditionError):
        I.g1_g2_probe(g, ball, "a", "b", "c")
