import json
import math

import pytest

from tripower.cli import main


def test_theory_subcommand(capsys):
    assert main(["theory", "--tau", "2.5", "--rel-tol", "1e-4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["A"] == pytest.approx(math.pi, abs=1e-12)
    assert payload["negGamma"] == pytest.approx(2 * math.sqrt(math.pi), rel=1e-10)
    assert payload["I_unif"] < payload["I_ecm"]
    assert payload["limit_constant_uniform"] < payload["limit_constant_ecm"]


def test_generate_sample_triangles_pipeline(tmp_path, capsys):
    degrees = tmp_path / "d.txt"
    graph = tmp_path / "g.edges"
    assert main(["generate-degrees", "--n", "200", "--tau", "2.5",
                 "--out", str(degrees)]) == 0
    assert main(["sample", "--model", "uniform", "--degrees", str(degrees),
                 "--switches", "5000", "--seed", "7", "--out", str(graph)]) == 0
    stats = json.loads((tmp_path / "g.edges.stats.json").read_text())
    assert stats["switch_stats"]["attempted"] == 5000
    capsys.readouterr()
    assert main(["triangles", str(graph)]) == 0
    out = capsys.readouterr().out.strip()
    assert out.isdigit()


def test_sample_default_burn_in_and_models(tmp_path):
    degrees = tmp_path / "d.txt"
    main(["generate-degrees", "--n", "100", "--tau", "2.5", "--out", str(degrees)])
    for model in ("uniform", "ecm", "grg"):
        out = tmp_path / f"{model}.edges"
        assert main(["sample", "--model", model, "--degrees", str(degrees),
                     "--seed", "3", "--out", str(out)]) == 0
        assert out.exists()


def test_ck_subcommand(tmp_path, capsys):
    graph = tmp_path / "k4.edges"
    graph.write_text("# n=4 m=6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    assert main(["ck", str(graph)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "k,N_k,triangles_k,c_k"
    assert out[1].startswith("3,4,12,")


def test_oracle_subcommand(capsys):
    assert main(["oracle", "--degrees", "1,1,1,1", "--edge", "0,1"]) == 0
    out = capsys.readouterr().out
    assert "ensemble size: 3" in out
    assert "1/3" in out
    assert "0.33333333333333331" in out


def test_oracle_conditioning(capsys):
    assert main(["oracle", "--degrees", "2,2,2", "--edge", "0,2",
                 "--given", "0,1"]) == 0
    out = capsys.readouterr().out
    assert "= 1" in out


def test_exit_codes(tmp_path, capsys):
    # usage error: unknown flag
    assert main(["theory", "--tau", "2.5", "--bogus"]) == 1
    # usage error: missing subcommand arguments
    assert main(["sample", "--model", "uniform"]) == 1
    # runtime error: tau out of range
    assert main(["theory", "--tau", "3.5"]) == 2
    # runtime error: nonexistent file
    assert main(["triangles", str(tmp_path / "missing.edges")]) == 2
    # runtime error: oracle guard
    assert main(["oracle", "--degrees", "1,1,1,1,1,1,1,1,1,1,1,1"]) == 2
    capsys.readouterr()


def test_experiment_subcommand(tmp_path):
    out_dir = tmp_path / "sweep"
    assert main(["experiment", "--tau", "2.5", "--n-grid", "200,300",
                 "--models", "ecm,grg", "--replicates", "2", "--seed", "5",
                 "--threads", "2", "--out", str(out_dir)]) == 0
    assert (out_dir / "triangles.csv").exists()
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["config"]["master_seed"] == 5
    assert len(summary["summary"]["cells"]) == 4


def test_experiment_with_config_file(tmp_path):
    cfg = tmp_path / "exp.cfg"
    out_dir = tmp_path / "run"
    cfg.write_text(
        "tau = 2.5\nn_grid = 150\nmodels = ecm\nreplicates = 2\nmaster_seed = 3\n"
    )
    assert main(["experiment", "--config", str(cfg), "--out", str(out_dir),
                 "--k-list", "2,3"]) == 0
    ck = (out_dir / "ck.csv").read_text().splitlines()
    assert ck[0] == "model,n,k,range,replicates_used,empirical_ck,predicted_ck"
    assert len(ck) == 3
