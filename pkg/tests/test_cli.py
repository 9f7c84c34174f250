"""Command-line surface: outputs and the 0/1/2 exit code contract."""

import json
import os
import shutil

import pytest

from treeamb import acceptance, formats
from treeamb.cli import run

DATA = os.path.join(os.path.dirname(__file__), "data")


def data(name):
    return os.path.join(DATA, name)


def out_of(capsys):
    return capsys.readouterr().out.strip()


def test_validate_every_shipped_fixture(capsys):
    for name in sorted(os.listdir(DATA)):
        if name.startswith(("broken", "orphan", "partial")):
            continue
        assert run(["validate", data(name)]) == 0, name
    assert "ok" in out_of(capsys)


def test_validate_broken_reports_file_and_line(capsys):
    assert run(["validate", data("broken.pta")]) == 2
    assert "broken.pta:5" in capsys.readouterr().err


def test_validate_missing_and_unknown_files(capsys):
    assert run(["validate", data("nosuch.pta")]) == 2
    assert run(["validate", data("tc.mtree") + ".bak"]) == 2
    capsys.readouterr()


def test_member_true_exits_zero(capsys):
    assert run(["member", "-a", data("negunion2.pta"),
                "-t", data("tc.mtree")]) == 0
    assert out_of(capsys) == "true"


def test_member_false_exits_one(capsys, tmp_path):
    both = tmp_path / "both.mtree"
    both.write_text(
        "mtree both\nalphabet a1 a2 c\nstate 0 out=c\nstate 1 out=a1\n"
        "state 2 out=a2\ninit 0\nedge 0 l 1\nedge 0 r 2\nedge 1 l 1\n"
        "edge 1 r 1\nedge 2 l 2\nedge 2 r 2\n")
    assert run(["member", "-a", data("negunion2.pta"), "-t", str(both)]) == 1
    assert out_of(capsys) == "false"


def test_member_alphabet_mismatch_exits_two(capsys):
    assert run(["member", "-a", data("free2.pta"),
                "-t", data("tprime.mtree")]) == 2
    assert "alphabet" in capsys.readouterr().err


def test_classify_plain_and_json(capsys):
    assert run(["classify", "-a", data("negunion2.pta"),
                "-t", data("tc.mtree")]) == 0
    assert out_of(capsys) == "Exact(2)"
    assert run(["classify", "-a", data("free2.pta"), "-t", data("tc.mtree"),
                "--json"]) == 0
    doc = json.loads(out_of(capsys))
    assert doc["verdict"] == "uncountable"
    assert doc["witness"]["runs"][0].startswith("run of=")


def test_ambiguous_exit_codes(capsys):
    assert run(["ambiguous", "-a", data("negunion2.pta"), "-k", "1"]) == 1
    assert out_of(capsys) == "false"
    assert run(["ambiguous", "-a", data("negunion2.pta"), "-k", "2"]) == 0
    assert out_of(capsys) == "true"
    assert run(["ambiguous", "-a", data("negunion2.pta"), "-k", "0"]) == 2


def test_empty_writes_witness(capsys, tmp_path):
    w = tmp_path / "w.mtree"
    assert run(["empty", "-a", data("exists_a1.pta"),
                "--witness", str(w)]) == 1
    assert out_of(capsys) == "nonempty"
    assert run(["validate", str(w)]) == 0
    assert run(["member", "-a", data("exists_a1.pta"), "-t", str(w)]) == 0
    capsys.readouterr()


def test_empty_language_exits_zero(capsys, tmp_path):
    dead = tmp_path / "dead.pta"
    dead.write_text("pta dead\nalphabet c\nstate q color=1\ninit q\n"
                    "trans q c q q\n")
    assert run(["empty", "-a", str(dead)]) == 0
    assert out_of(capsys) == "empty"


def test_construct_union_restrict_single_init(capsys, tmp_path):
    u = tmp_path / "u.pta"
    assert run(["construct", "intersect", data("negunion2.pta"),
                data("exists_a1.pta"), "-o", str(u)]) == 2  # alphabets differ
    assert run(["construct", "union", data("negunion2.pta"),
                data("negunion2.pta"), "-o", str(u)]) == 0
    assert run(["validate", str(u)]) == 0
    s = tmp_path / "s.pta"
    assert run(["construct", "single-init", str(u), "-o", str(s)]) == 0
    parsed = formats.parse_pta((tmp_path / "s.pta").read_text(), "s.pta")
    assert len(parsed.initials) == 1
    r = tmp_path / "r.pta"
    assert run(["construct", "restrict", data("negunion2.pta"), "q0",
                "-o", str(r)]) == 0
    parsed = formats.parse_pta(r.read_text(), "r.pta")
    assert parsed.initials == frozenset(["q0"])
    capsys.readouterr()


def test_construct_graft_at_node_and_antichain(capsys, tmp_path):
    g1 = tmp_path / "g1.mtree"
    assert run(["construct", "graft", data("t0.mtree"), data("tprime.mtree"),
                "--at", "lr", "-o", str(g1)]) == 0
    assert run(["validate", str(g1)]) == 0
    g2 = tmp_path / "g2.mtree"
    assert run(["construct", "graft", data("t0.mtree"), data("tprime.mtree"),
                "--chain", data("lsr.chain"), "-o", str(g2)]) == 0
    assert run(["validate", str(g2)]) == 0
    assert run(["construct", "graft", data("t0.mtree"), data("tprime.mtree"),
                "-o", str(g1)]) == 2
    assert run(["construct", "graft", data("t0.mtree"), data("tprime.mtree"),
                "--at", "x", "-o", str(g1)]) == 2
    capsys.readouterr()


def test_construct_reduce(capsys, tmp_path):
    a2 = tmp_path / "a2.pta"
    a2.write_text("pta overout\nalphabet c a1\nstate u color=0\ninit u\n"
                  "trans u a1 u u\ntrans u c u u\n")
    red = tmp_path / "red.pta"
    assert run(["construct", "reduce", str(a2), data("lastm.moore"),
                "-o", str(red)]) == 0
    assert run(["validate", str(red)]) == 0
    capsys.readouterr()


def test_zoo_writes_automata_and_reps(capsys, tmp_path):
    for args in (["neg-union", "--k", "3"], ["exists-a1"], ["lfa"],
                 ["free2"], ["no-max"], ["perf"], ["x-subset-ydown"],
                 ["complement-singleton", "--tree", data("tc.mtree")]):
        out = tmp_path / (args[0] + ".pta")
        assert run(["zoo"] + args + ["-o", str(out)]) == 0, args
        assert run(["validate", str(out)]) == 0
    w = tmp_path / "w.mtree"
    assert run(["zoo", "lfa-witness", "--m", "2", "--k", "1",
                "-o", str(w)]) == 0
    assert run(["validate", str(w)]) == 0
    repdir = tmp_path / "rep"
    assert run(["zoo", "rep-combs", "-o", str(repdir)]) == 0
    assert run(["validate", str(repdir)]) == 0
    assert run(["zoo", "frak", "--a0", data("free2.pta"),
                "--anb", data("free2.pta"), "-o",
                str(tmp_path / "f.pta")]) == 0
    assert run(["zoo", "atlantis"]) == 2
    capsys.readouterr()


def test_game_build_and_solve(capsys, tmp_path):
    g = tmp_path / "m.game"
    dot = tmp_path / "m.dot"
    assert run(["game", "build", "-a", data("exists_a1.pta"),
                "-t", data("tprime.mtree"), "-o", str(g),
                "--dot", str(dot)]) == 0
    assert g.read_text() == open(data("member.game")).read()
    assert "digraph" in dot.read_text()
    assert run(["game", "solve", "-g", str(g)]) == 0
    out = out_of(capsys)
    assert "Automaton wins" in out and "initial vertex won by Automaton" in out


def test_leads_prints_divergence_node(capsys):
    assert run(["leads", "-a", data("exists_a1.pta"), "--t0", data("t0.mtree"),
                "--tprime", data("tprime.mtree"), "--run", data("phi.run"),
                "--straj", data("t0.straj")]) == 0
    assert out_of(capsys) == "lr"


def test_leads_rejects_accepted_t0(capsys):
    assert run(["leads", "-a", data("exists_a1.pta"),
                "--t0", data("tprime.mtree"),
                "--tprime", data("tprime.mtree"), "--run", data("phi.run"),
                "--straj", data("t0.straj")]) == 2
    capsys.readouterr()


def test_suite_table_shape(capsys, monkeypatch):
    monkeypatch.setattr(acceptance, "CRITERIA",
                        [("always-true", 10.0, lambda: True),
                         ("always-false", 10.0, lambda: False)])
    assert run(["suite"]) == 1
    lines = out_of(capsys).splitlines()
    assert lines[0].startswith("always-true") and "PASS" in lines[0]
    assert lines[1].startswith("always-false") and "FAIL" in lines[1]
    assert lines[-1].endswith("FAIL")
    monkeypatch.setattr(acceptance, "CRITERIA",
                        [("always-true", 10.0, lambda: True)])
    assert run(["suite"]) == 0
    capsys.readouterr()
