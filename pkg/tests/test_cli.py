import subprocess
import sys

import pytest

from graphon_complexity import estimate_dimension, estimate_distances
from graphon_complexity.cli import main
from graphon_complexity.io import read_csv, read_graph

ER_CFG = "[graphon]\nfamily = erdos_renyi\np = 0.5\n"


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def er_graph(tmp_path, capsys):
    cfg = tmp_path / "er.cfg"
    cfg.write_text(ER_CFG)
    g = tmp_path / "g.adj"
    code, _, _ = run(["sample", "--spec", cfg, "--n", 100, "--seed", 1, "--out", g], capsys)
    assert code == 0 and g.exists()
    return g


def test_sample_and_test(er_graph, capsys):
    assert run(["test", "--graph", er_graph, "--k", 0, "--eps", 0.1], capsys)[0] == 1
    code, out, _ = run(["test", "--graph", er_graph, "--k", 1, "--eps", 0.1], capsys)
    assert code == 0 and out.startswith("accept")


def test_sample_requires_seed(tmp_path, capsys):
    code, _, err = run(["sample", "--fixture", "er", "--n", 10, "--out", tmp_path / "x.adj"], capsys)
    assert code == 1 and "--seed" in err


def test_usage_errors(capsys, tmp_path):
    assert run(["bogus"], capsys)[0] == 1
    assert run([], capsys)[0] == 1
    assert run(["distances", "--graph", tmp_path / "missing", "--out", tmp_path / "o"], capsys)[0] == 1
    assert run(["sample", "--fixture", "er", "--n", 10, "--seed", 1, "--rho", 0,
                "--out", tmp_path / "x.adj"], capsys)[0] == 1


def test_unsupported_oracle_exit(tmp_path, capsys):
    cfg = tmp_path / "h.cfg"
    cfg.write_text("[graphon]\nfamily = holder_cube\nd = 3\nkernel = inner_product\n")
    code, _, err = run(["truth", "--spec", cfg, "--n", 5, "--seed", 0, "--method", "quadrature",
                        "--out", tmp_path / "t.csv"], capsys)
    assert code == 2 and "unsupported" in err


def test_rejection_exit_and_certificate(tmp_path, capsys):
    g = tmp_path / "c.adj"
    assert run(["sample", "--fixture", "sbm2_cliques", "--n", 2500, "--seed", 3, "--out", g],
               capsys)[0] == 0
    cert = tmp_path / "cert.csv"
    code, out, _ = run(["test", "--graph", g, "--k", 1, "--eps", 0.1, "--certificate", cert], capsys)
    assert code == 3 and out.startswith("reject") and cert.exists()


def test_dimension_matches_library(tmp_path, capsys):
    g = tmp_path / "geo.txt"
    run(["sample", "--fixture", "geometric1", "--n", 1000, "--seed", 0, "--out", g], capsys)
    code, out, _ = run(["dimension", "--graph", g, "--dcap", 2], capsys)
    lib = estimate_dimension(estimate_distances(read_graph(g)), 2, 1.0)
    assert code == 0
    assert f"dim_hat={lib.value!r} eps_D={lib.radius_used!r}" in out


def test_distances_sweep_covering(er_graph, tmp_path, capsys):
    d = tmp_path / "d.csv"
    assert run(["distances", "--graph", er_graph, "--out", d, "--conservative"], capsys)[0] == 0
    assert read_csv(d)[1] == ["i", "j", "sq_standard", "sq_conservative"]
    s = tmp_path / "s.csv"
    code, out, _ = run(["sweep", "--graph", er_graph, "--grid", "0.1:0.1:5", "--out", s], capsys)
    assert code == 0 and len(read_csv(s)[2]) == 5
    code, out, _ = run(["covering", "--graph", er_graph, "--eps", 0.9], capsys)
    assert code == 0 and "size=1" in out


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "graphon_complexity", "--help"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "experiment" in out.stdout
