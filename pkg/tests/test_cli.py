"""Command-line front-end: exit codes, JSON outputs, pipelines between
subcommands, config merging, and the density sweep."""

from __future__ import annotations

import json

import pytest

from lincyc import LinearHypergraph, cli, enumerate_cycles


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- gen ---------------------------------------------------------------------------------


def test_gen_planted_writes_parseable_graph(tmp_path, capsys):
    out = tmp_path / "g.txt"
    wits = tmp_path / "w.json"
    code, _, err = run(
        ["gen", "--n", "24", "--r", "3", "--mode", "planted", "--lengths", "3",
         "--out", str(out), "--witnesses-out", str(wits), "--seed", "1"],
        capsys,
    )
    assert code == 0
    assert "# seed 1" in err
    g = LinearHypergraph.from_text(out.read_text())
    assert enumerate_cycles(g, 6).lengths == {3}
    payload = json.loads(wits.read_text())
    assert len(payload) == 1 and len(payload[0]) == 3


def test_gen_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 24, "mode": "planted", "lengths": "4"}))
    out = tmp_path / "g.txt"
    # --n on the command line must beat the config value
    code, _, _ = run(
        ["gen", "--n", "30", "--config", str(cfg), "--out", str(out), "--seed", "0"],
        capsys,
    )
    assert code == 0
    g = LinearHypergraph.from_text(out.read_text())
    assert g.n == 30
    assert enumerate_cycles(g, 6).lengths == {4}


# -- find / verify -----------------------------------------------------------------------


@pytest.fixture()
def planted_file(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, _, _ = run(
        ["gen", "--n", "40", "--r", "3", "--mode", "planted", "--lengths", "4",
         "--background-density", "0.5", "--out", str(out), "--seed", "1"],
        capsys,
    )
    assert code == 0
    return out


def test_find_exact_length_four(planted_file, capsys):
    code, out, _ = run(
        ["find", "--input", str(planted_file), "--k", "2", "--mode", "c2k",
         "--seed", "0"],
        capsys,
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["outcome"] == "success" and obj["length"] == 4


def test_find_then_verify_round_trip(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    code, _, _ = run(
        ["gen", "--n", "150", "--r", "3", "--out", str(graph), "--seed", "0"], capsys
    )
    assert code == 0
    code, out, _ = run(
        ["find", "--input", str(graph), "--k", "2", "--mode", "even", "--json",
         "--seed", "0"],
        capsys,
    )
    assert code == 0
    report = json.loads(out)
    assert report["outcome"] == "success"
    cycles = tmp_path / "c.json"
    cycles.write_text(json.dumps({"cycles": report["cycles"]}))
    code, out, _ = run(
        ["verify", "--input", str(graph), "--cycles", str(cycles)], capsys
    )
    assert code == 0 and "verify" in out


def test_find_failure_exits_two(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("3 3 1\n0 1 2\n")
    code, out, _ = run(
        ["find", "--input", str(graph), "--k", "2", "--mode", "even", "--seed", "0"],
        capsys,
    )
    assert code == 2 and "failure" in out


def test_verify_tampered_cycle(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("3 8 4\n0 1 4\n1 2 5\n2 3 6\n0 3 7\n")
    cycles = tmp_path / "c.json"
    cycles.write_text(json.dumps([[[0, 1, 4], [1, 2, 5], [2, 3, 6]]]))  # open chain
    code, out, _ = run(["verify", "--input", str(graph), "--cycles", str(cycles)], capsys)
    assert code == 2 and "cycle 0" in out


def test_missing_input_exits_one(tmp_path, capsys):
    code, _, err = run(
        ["find", "--input", str(tmp_path / "nope.txt"), "--k", "2"], capsys
    )
    assert code == 1 and "input error" in err


# -- spectrum / mert -----------------------------------------------------------------------


def test_spectrum_json(planted_file, capsys):
    code, out, _ = run(
        ["spectrum", "--input", str(planted_file), "--max-len", "6"], capsys
    )
    assert code == 0
    obj = json.loads(out)
    assert 4 in obj["lengths"] and obj["complete"]


def test_spectrum_budget_exit(planted_file, capsys):
    code, out, _ = run(
        ["spectrum", "--input", str(planted_file), "--max-len", "6",
         "--budget", "3"],
        capsys,
    )
    assert code == 2
    assert json.loads(out)["complete"] is False


def test_mert_dump(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    code, _, _ = run(
        ["gen", "--n", "60", "--r", "3", "--out", str(graph), "--seed", "3"], capsys
    )
    assert code == 0
    code, out, _ = run(["mert", "--input", str(graph), "--seed", "3"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert {"root", "height", "levels", "parent", "chi", "matching"} <= set(obj)


# -- sweep ----------------------------------------------------------------------------------


def spearman(xs, ys):
    def ranks(vals):
        order = sorted(range(len(vals)), key=lambda i: vals[i])
        out = [0.0] * len(vals)
        for rank, i in enumerate(order):
            out[i] = float(rank)
        return out

    rx, ry = ranks(xs), ranks(ys)
    mx, my = sum(rx) / len(rx), sum(ry) / len(ry)
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    den = (
        sum((a - mx) ** 2 for a in rx) * sum((b - my) ** 2 for b in ry)
    ) ** 0.5
    return num / den if den else 0.0


def test_sweep_csv_and_monotone_smoke(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, err = run(
        ["sweep", "--n", "80", "--r", "3", "--k", "2", "--d-from", "1",
         "--d-to", "16", "--points", "10", "--trials", "3", "--jobs", "4",
         "--seed", "42", "--out", str(out)],
        capsys,
    )
    assert code == 0 and "# seed 42" in err
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "d,trials,successes,mean_shortest,mean_bound"
    rows = [ln.split(",") for ln in lines[1:]]
    assert len(rows) == 10
    ds = [float(r[0]) for r in rows]
    succ = [int(r[2]) for r in rows]
    # success rate rises with density, up to sampling noise
    assert spearman(ds, succ) > 0
