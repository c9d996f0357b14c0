import pytest

from artinrigid import cli, igraph, oracle

from conftest import CORPUS


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out.splitlines(), err


def graph(name):
    return CORPUS / f"{name}.graph"


def verdicts(lines):
    return {ln.split()[1]: ln.split()[2] for ln in lines if ln.startswith("CHECK ")}


# ---- input errors


def test_bad_label_exits_2(capsys):
    code, out, err = run(capsys, "analyze", graph("bad_label"))
    assert code == 2 and out == [] and "bad_label" in err


def test_missing_file_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, "verify", tmp_path / "nope.graph")
    assert code == 2 and "cannot read" in err


def test_parse_error_reports_line(capsys, tmp_path):
    p = tmp_path / "g.graph"
    p.write_text("artin-graph v1\nnonsense here\n")
    code, _, err = run(capsys, "analyze", p)
    assert code == 2 and ":2:" in err


def test_unknown_check_exits_2(capsys):
    code, _, err = run(capsys, "verify", graph("triangle333"), "--checks", "girth6,colour")
    assert code == 2 and "colour" in err


# ---- simple commands


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", graph("path33"))
    assert code == 0
    assert out[0] == "vertices: 3" and out[1] == "edges: 2"
    assert out[2].startswith("twistless: false (separating vertex b)")


def test_hierarchy(capsys):
    code, out, _ = run(capsys, "hierarchy", graph("octahedron"))
    assert code == 0 and out[0] == "split S={N,S,e1,e3}"
    assert run(capsys, "hierarchy", graph("square"))[1] == ["none"]


def test_dihedral(capsys):
    assert run(capsys, "dihedral", "eq", 3, "aba", "bab")[1] == ["true"]
    assert run(capsys, "dihedral", "eq", 3, "ab", "ba")[1] == ["false"]
    assert run(capsys, "dihedral", "eq", 3, "ab")[0] == 2
    assert run(capsys, "dihedral", "center", 2)[0] == 2


def test_farey_command(capsys):
    code, out, _ = run(capsys, "farey", "--qmax", 1)
    assert code == 0 and len(out) == 5


def test_out_flag(capsys, tmp_path):
    dest = tmp_path / "ball.txt"
    code, out, _ = run(capsys, "deligne", graph("triangle333"), "--depth", 0, "--out", dest)
    assert code == 0 and out == []
    lines = dest.read_text().splitlines()
    assert lines[-1] == "status Exact unresolved 0"


def test_igraph_command(capsys):
    code, out, _ = run(capsys, "igraph", graph("triangle333"), "--residue-radius", 3)
    assert code == 0
    assert out[1] == "bipartite true girth 6"
    assert out[2] == "six_cycles unique 121 multiple 0 inconclusive 0"


def test_output_is_deterministic(capsys):
    first = run(capsys, "deligne", graph("triangle344"))
    assert run(capsys, "deligne", graph("triangle344")) == first


# ---- verify


@pytest.mark.parametrize("name", ["triangle333", "triangle344"])
def test_verify_triangles(capsys, name):
    code, out, _ = run(capsys, "verify", graph(name))
    v = verdicts(out)
    assert code == 0 and "FAIL" not in v.values()
    for key in ("girth6", "bipartite", "six_cycle_audit", "g1_present", "g2_absent", "delta_uniqueness", "farey"):
        assert v[key] == "PASS"


def test_verify_tree_has_no_six_cycles(capsys):
    code, out, _ = run(capsys, "verify", graph("path33"), "--checks", "girth6,g1_g2,c1c2")
    assert code == 0
    assert out == [
        "CHECK girth6 PASS girth=inf expected >= 8",
        "CHECK g1_g2 INCONCLUSIVE no triangle",
        "CHECK c1c2 PASS C1=false C2=false",
    ]


def test_verify_unresolved_exits_3(capsys, monkeypatch):
    def unavailable(w, g):
        raise oracle.ReductionError("disabled")

    monkeypatch.setattr(oracle, "geodesic_reduce", unavailable)
    code, out, _ = run(capsys, "verify", graph("square"), "--budget", 1, "--checks", "girth6,farey")
    assert code == 3
    assert verdicts(out) == {"girth6": "INCONCLUSIVE", "farey": "PASS"}


def test_size_cap_exits_3(capsys):
    code, out, err = run(capsys, "farey", "--qmax", 200)
    assert code == 3 and out == [] and "budget exhausted" in err


def test_square_verifies(capsys):
    code, out, _ = run(capsys, "verify", graph("square"), "--checks", "girth6,bipartite,six_cycle_audit")
    assert code == 0
    assert out[0] == "CHECK girth6 PASS girth=8 expected >= 8"


def test_verify_c1c2_skips_single_edge(capsys, tmp_path):
    p = tmp_path / "k2.graph"
    p.write_text("artin-graph v1\nvertex a\nvertex b\nedge a b 3\n")
    code, out, _ = run(capsys, "verify", p, "--checks", "c1c2")
    assert (code, out) == (0, ["CHECK c1c2 INCONCLUSIVE fewer than 3 vertices"])


def test_corrupted_template_fails(capsys, tmp_path):
    # swapping in the G1 pattern as "G2" must be detected
    adj, kinds = igraph.hexagon_chain(3, "D")
    rows = [f"vertex {v} {kinds[v]}" for v in adj]
    rows += [f"edge {u} {v}" for u in adj for v in adj[u] if u < v]
    p = tmp_path / "g2.txt"
    p.write_text("\n".join(rows) + "\n")
    code, out, _ = run(capsys, "verify", graph("triangle333"), "--checks", "g1_g2", "--g2-template", p)
    assert code == 1
    assert verdicts(out) == {"g1_present": "PASS", "g2_absent": "FAIL"}


def test_unreadable_template_exits_2(capsys, tmp_path):
    p = tmp_path / "g2.txt"
    p.write_text("vertex x Q\n")
    code, _, err = run(capsys, "verify", graph("triangle333"), "--g2-template", p)
    assert code == 2 and ":1:" in err
