import json

import pytest

from strobust.cli import EXIT_OK, EXIT_PARSE, EXIT_REFUTED, EXIT_USAGE, main
from strobust.fileformat import load, save
from strobust.graph import chain, complete_dag
from strobust.transform import ReduceMap


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    save(chain(5), "chain5.dag")
    save(complete_dag(4, "K_4"), "k4.dag")
    return tmp_path


def run(*argv):
    return main([str(a) for a in argv])


def test_butterfly_connector(work):
    assert run("gen", "butterfly", "--k", 2, "-o", "b2.dag") == EXIT_OK
    assert load("b2.dag").n_nodes == 20
    assert run("check", "connector", "b2.dag", "--mode", "exhaustive", "--report", "r.json") == EXIT_OK
    assert json.loads((work / "r.json").read_text())["verdict"] == "holds"


def test_depth_refuted(work):
    assert run("check", "depth", "chain5.dag", "--e", 1, "--d", 4, "--mode", "exhaustive", "--report", "r.json") == EXIT_REFUTED
    rep = json.loads((work / "r.json").read_text())
    assert rep["verdict"] == "refuted" and len(rep["evidence"]["removal"]["members"]) == 1
    assert "wall_time" not in rep


def test_suite_theorem2(work):
    assert run("suite", "theorem2", "--graph", "k4.dag", "--seed", 11, "--report", "t2.json") == EXIT_OK
    rep = json.loads((work / "t2.json").read_text())
    assert rep["suite"] == "theorem2" and rep["lines"]


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "base", "--n", 8, "-o", "x.dag"],
        ["gen", "sandwich", "--n", 2, "--tau", 1],
        ["check", "depth", "k4.dag", "--e", 0, "--d", 0, "--mode", "sampled"],
        ["suite", "theorem2", "--graph", "k4.dag"],
        ["suite", "theorem5"],
        ["gen", "nope"],
    ],
)
def test_usage_errors(work, argv):
    assert run(*argv) == EXIT_USAGE


def test_budget_refusal(work):
    save(complete_dag(30), "k30.dag")
    assert run("check", "depth", "k30.dag", "--e", 8, "--d", 1, "--budget", 1000) == EXIT_USAGE


def test_parse_failure(work):
    (work / "bad.dag").write_text("nodes 2\nedge 1 0\n")
    assert run("check", "depth", "bad.dag", "--e", 0, "--d", 0) == EXIT_PARSE


def test_missing_file(work):
    assert run("check", "depth", "missing.dag", "--e", 0, "--d", 0) == EXIT_USAGE


def test_force_guard(work):
    assert run("transform", "reduce", "k4.dag", "-o", "k4.dag") == EXIT_USAGE
    assert load("k4.dag").n_nodes == 4
    assert run("transform", "reduce", "k4.dag", "-o", "k4.dag", "--force") == EXIT_OK
    assert load("k4.dag").n_nodes == 52


def test_reduce_sidecar(work):
    assert run("transform", "reduce", "k4.dag", "-o", "r.dag") == EXIT_OK
    m = ReduceMap.from_json((work / "r.dag.map.json").read_text())
    assert m.reduced == load("r.dag")


def test_overlay_and_hardness(work):
    assert run("transform", "overlay", "k4.dag", "-o", "h.dag") == EXIT_OK
    ch = str(work / "h.dag.challenges.json")
    assert run("check", "hardness", "h.dag", "--s", 1, "--t", 3, "--eps", "1/4", "--challenges", ch) == EXIT_OK
    assert run("check", "hardness", "h.dag", "--s", 1, "--t", 3, "--eps", "1/8") == EXIT_REFUTED


def test_gen_with_sidecar_and_replay(work):
    for out in ("a.dag", "b.dag"):
        assert run("gen", "sandwich", "--n", 2, "--tau", 2, "--seed", 5, "-o", out) == EXIT_OK
    assert (work / "a.dag").read_bytes() == (work / "b.dag").read_bytes()
    assert (work / "a.dag.cert.json").read_bytes() == (work / "b.dag.cert.json").read_bytes()
    for out in ("ra.json", "rb.json"):
        run("check", "max-st", "a.dag", "--mode", "sampled", "--trials", 20, "--seed", 1, "--report", out)
    assert (work / "ra.json").read_bytes() == (work / "rb.json").read_bytes()


def test_other_generators(work):
    assert run("gen", "superconcentrator", "--n", 3, "-o", "sc.dag") == EXIT_OK
    assert run("gen", "base", "--n", 6, "--e", 1, "--seed", 2, "-o", "base.dag") == EXIT_OK
    assert json.loads((work / "base.dag.cert.json").read_text())["e"] == 1
    assert run("gen", "three-grates", "base.dag", "--tau", 2, "--seed", 3, "-o", "g3.dag") == EXIT_OK
    assert load("g3.dag").n_nodes == 18
    assert run("gen", "amplify", "sc.dag", "--c", "1/2", "-o", "amp.dag") == EXIT_OK
    assert load("amp.dag").n_nodes == 2 * 20 + 6


def test_other_checks(work):
    run("gen", "butterfly", "--k", 1, "-o", "b1.dag")
    cases = [
        (["edge-depth", "k4.dag", "--e", 1, "--d", 2], EXIT_OK),
        (["st", "b1.dag", "--k1", 1, "--k2", 1], EXIT_OK),
        (["max-st", "b1.dag"], EXIT_OK),
        (["superconcentrator", "b1.dag"], EXIT_OK),
        (["connector", "b1.dag", "--partial"], EXIT_OK),
        (["grate", "b1.dag", "--c0", 0, "--c1", 1], EXIT_OK),
        (["ssdr", "chain5.dag", "--e", 1, "--d", 1], EXIT_REFUTED),
    ]
    for argv, code in cases:
        assert run("check", *argv, "--report", "out.json") == code, argv


def test_route_and_codec(work):
    run("gen", "butterfly", "--k", 2, "-o", "b2.dag")
    assert run("route", "b2.dag", "--pairing", "0:3,1:2,2:1,3:0", "-o", "route.json") == EXIT_OK
    assert json.loads((work / "route.json").read_text())["routed"]
    assert run("route", "b2.dag", "--pairing", "0:9") == EXIT_USAGE
    assert run("codec", "encode", "b2.dag", "--perm", "2,0,3,1", "-o", "bits.txt") == EXIT_OK
    assert run("codec", "decode", "b2.dag", "bits.txt", "-o", "perm.json") == EXIT_OK
    assert json.loads((work / "perm.json").read_text())["perm"] == [2, 0, 3, 1]
    assert run("codec", "decode", "b2.dag", "1" * 32) == EXIT_PARSE


def test_route_refuted(work):
    from conftest import hub_graph

    save(hub_graph(), "hub.dag")
    assert run("route", "hub.dag", "--pairing", "0:1,1:0", "-o", "r.json") == EXIT_REFUTED
    assert json.loads((work / "r.json").read_text())["routed"] is False


def test_suites_via_cli(work):
    run("gen", "butterfly", "--k", 1, "-o", "b1.dag")
    assert run("suite", "theorem5", "--graph", "b1.dag", "--report", "s5.json") == EXIT_OK
    assert run("suite", "theorem7", "--graph", "k4.dag", "--report", "s7.json") == EXIT_OK
    assert run("suite", "theorem8", "--graph", "b1.dag", "--report", "s8.json") == EXIT_OK
    assert run("suite", "theorem6", "--n", 2, "--tau", 2, "--seed", 3, "--report", "s6.json") == EXIT_OK
