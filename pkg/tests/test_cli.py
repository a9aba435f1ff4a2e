import json

import pytest

from gsselect import make_instance
from gsselect.cli import main
from gsselect.harness import CSV_HEADER
from gsselect.model import dump_instance


def write(tmp_path, inst, name="inst.json"):
    path = tmp_path / name
    dump_instance(inst, path)
    return str(path)


def test_check_infeasible_cites_product(tmp_path, capsys):
    path = write(tmp_path, make_instance([1, 1], [0.5, 0.5], 0.2))
    assert main(["check", path]) == 1
    assert "0.25" in capsys.readouterr().err


def test_check_feasible(tmp_path, capsys):
    path = write(tmp_path, make_instance([1, 1], [0.5, 0.5], 0.25))
    assert main(["check", path]) == 0
    assert "feasible" in capsys.readouterr().out


@pytest.mark.parametrize("algo", ["dp", "exhaustive", "gd-c", "gd-p"])
def test_solve_writes_report(tmp_path, algo):
    path = write(tmp_path, make_instance([1, 2, 3], [0.5] * 3, 0.3, ids=["a", "b", "c"]))
    out = tmp_path / "rep.json"
    assert main(["solve", path, "--algo", algo, "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["algorithm"] == algo and rep["objective"] == 3 and rep["selected_ids"] == ["a", "b"]
    assert rep["status"] == ("Optimal" if algo in ("dp", "exhaustive") else "Heuristic")


def test_solve_dpaa_paper_style(tmp_path, capsys):
    gen = tmp_path / "gen"
    assert main(["gen", "--k", "25", "--cost-rule", "ceil_k_over_5", "--p-low", "0.25", "--p-high", "0.75",
                 "--seed", "3", "--count", "2", "--out", str(gen)]) == 0
    files = sorted(gen.iterdir())
    assert len(files) == 2
    capsys.readouterr()
    assert main(["solve", str(files[0]), "--algo", "dpaa", "--epsilon", "0.1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["status"] == "Optimal" and rep["epsilon"] == 0.1 and rep["bound"] == 0
    assert main(["solve", str(files[0]), "--algo", "dp"]) == 0
    assert json.loads(capsys.readouterr().out)["objective"] == rep["objective"]


def test_solve_dpaa_requires_epsilon(tmp_path):
    path = write(tmp_path, make_instance([1], [0.5], 0.5))
    assert main(["solve", path, "--algo", "dpaa"]) == 2
    assert main(["solve", path, "--algo", "dpaa", "--epsilon", "-1"]) == 2


def test_solve_infeasible_exit_code(tmp_path):
    path = write(tmp_path, make_instance([1, 1], [0.5, 0.5], 0.2))
    assert main(["solve", path]) == 1


def test_invalid_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"threshold": 0.5, "sites": [{"id": "a", "cost": 0, "p": 0.5}]}))
    assert main(["check", str(bad)]) == 2
    assert "sites[0].cost" in capsys.readouterr().err
    bad.write_text("{not json")
    assert main(["solve", str(bad)]) == 2
    assert main(["check", str(tmp_path / "missing.json")]) == 2


def test_internal_error_exit_code(tmp_path, monkeypatch):
    import gsselect.cli as cli

    def boom(_):
        raise RuntimeError("bug")

    monkeypatch.setattr(cli, "load_instance", boom)
    assert main(["check", "whatever.json"]) == 3


def test_bench(tmp_path):
    cfg = {
        "K": 10, "cost_rule": "ceil_k_over_5", "p_low": 0.25, "p_high": 0.75,
        "thresholds": [0.1, 1e-3], "num_instances": 5, "seed": 1,
        "algorithms": ["exhaustive", "dp", "dpaa(0.1)", "gd-c", "gd-p"],
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out, svg, js = tmp_path / "r.csv", tmp_path / "r.svg", tmp_path / "r.json"
    assert main(["bench", "--config", str(cfg_path), "--out", str(out), "--svg", str(svg), "--json", str(js)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 1 + 2 * 5
    by = {}
    for line in lines[1:]:
        th, alg, eps, mean = line.split(",")[:4]
        by[(th, alg, eps)] = mean
    for th in ("0.1", "0.001"):
        assert by[(th, "dp", "")] == by[(th, "exhaustive", "")] == by[(th, "dpaa", "0.1")]
    assert svg.read_text().startswith("<svg")
    assert len(json.loads(js.read_text())) == 10


def test_bench_bad_config(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"K": 3}))
    assert main(["bench", "--config", str(cfg_path), "--out", str(tmp_path / "r.csv")]) == 2
