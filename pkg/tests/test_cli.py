"""End-to-end command-line flows and exit codes."""

import json

import pytest

from gaplab.cli import main
from gaplab.netgen import SimpleDigraph
from gaplab.harness import read_records_csv, read_summary_csv
from gaplab.analysis import read_fits_csv, read_binned_csv


def write_config(path, out_dir, sizes=(8, 16), instances=2):
    path.write_text(json.dumps({
        "model": "copy",
        "params": {"m_x": 1, "m_y": 1, "p_x": 0.5, "p_y": 0.5},
        "sizes": list(sizes), "instances_per_size": instances,
        "master_seed": 90210, "solver": "dense", "n_scan": 5,
        "out_dir": str(out_dir)}))


# ---------------------------------------------------------------------------
# generate / gap
# ---------------------------------------------------------------------------

def test_generate_writes_edge_list(tmp_path, capsys):
    out = tmp_path / "g.edges"
    assert main(["generate", "--model", "copy", "--n", "32",
                 "--seed", "7", "--out", str(out)]) == 0
    g = SimpleDigraph.read_text(out)
    assert g.n == 32
    assert "n=32" in capsys.readouterr().out


def test_generate_with_targets(tmp_path):
    out = tmp_path / "g.edges"
    assert main(["generate", "--model", "alpha_pa", "--n", "24",
                 "--targets", "2.1", "2.72", "2",
                 "--seed", "3", "--out", str(out)]) == 0
    assert SimpleDigraph.read_text(out).n == 24


def test_gap_reports_minimum(tmp_path, capsys):
    graph = tmp_path / "g.edges"
    main(["generate", "--model", "pa", "--n", "24", "--seed", "11",
          "--out", str(graph)])
    trace = tmp_path / "trace.csv"
    assert main(["gap", "--graph", str(graph), "--out", str(trace)]) == 0
    out = capsys.readouterr().out
    assert "delta=" in out and "s_star=" in out
    lines = trace.read_text().splitlines()
    assert lines[0] == "s,delta"
    probed = {float(l.split(",")[0]) for l in lines[1:]}
    assert 0.0 in probed and 1.0 in probed


# ---------------------------------------------------------------------------
# sweep / analyze / fit / plot
# ---------------------------------------------------------------------------

def test_sweep_pipeline(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    run_dir = tmp_path / "run"
    write_config(cfg, run_dir)
    assert main(["sweep", "--config", str(cfg)]) == 0
    records = read_records_csv(run_dir / "records.csv")
    assert len(records) == 4
    assert (run_dir / "summary.csv").exists()
    assert (run_dir / "fits.csv").exists()
    assert (run_dir / "scaling.svg").exists()
    out = capsys.readouterr().out
    assert "fit powerlaw" in out


def test_sweep_overrides(tmp_path):
    cfg = tmp_path / "cfg.json"
    write_config(cfg, tmp_path / "ignored")
    out_dir = tmp_path / "actual"
    assert main(["sweep", "--config", str(cfg), "--out", str(out_dir),
                 "--seed", "5", "--workers", "1", "--no-plots"]) == 0
    records = read_records_csv(out_dir / "records.csv")
    assert records[0].seed != read_seed_for_master_90210(records[0].n)
    assert not (out_dir / "scaling.svg").exists()


def read_seed_for_master_90210(n):
    from gaplab.harness import derive_seed
    return derive_seed(90210, n, 0)


def test_analyze_with_degrees(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    run_dir = tmp_path / "run"
    write_config(cfg, run_dir, sizes=(16, 32), instances=3)
    main(["sweep", "--config", str(cfg), "--no-plots"])
    out_dir = tmp_path / "analysis"
    assert main(["analyze", "--records", str(run_dir / "records.csv"),
                 "--out", str(out_dir), "--degrees", "--s-t", "5"]) == 0
    assert (out_dir / "summary.csv").exists()
    for direction in ("in", "out"):
        binned = read_binned_csv(out_dir / ("degree_%s.csv" % direction),
                                 s_t=5)
        assert sum(b.samples for b in binned.bins) == 3 * 32
    assert (out_dir / "degrees.svg").exists()
    assert "regenerated 3 graphs at n=32" in capsys.readouterr().out


def test_fit_and_plot(tmp_path):
    cfg = tmp_path / "cfg.json"
    run_dir = tmp_path / "run"
    write_config(cfg, run_dir, sizes=(8, 16, 32))
    main(["sweep", "--config", str(cfg), "--no-plots"])

    fits_path = tmp_path / "fits.csv"
    assert main(["fit", "--summary", str(run_dir / "summary.csv"),
                 "--out", str(fits_path)]) == 0
    assert len(read_fits_csv(fits_path)) == 3

    plot_dir = tmp_path / "plots"
    assert main(["plot", "--summary", str(run_dir / "summary.csv"),
                 "--fits", str(fits_path),
                 "--records", str(run_dir / "records.csv"),
                 "--out", str(plot_dir)]) == 0
    assert (plot_dir / "scaling.svg").exists()
    assert (plot_dir / "gap_histogram.svg").exists()


def test_sweep_resume_via_cli(tmp_path):
    cfg = tmp_path / "cfg.json"
    run_dir = tmp_path / "run"
    write_config(cfg, run_dir)
    main(["sweep", "--config", str(cfg), "--no-plots"])
    first = (run_dir / "records.csv").read_bytes()
    main(["sweep", "--config", str(cfg), "--no-plots"])
    assert (run_dir / "records.csv").read_bytes() == first


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------

def test_usage_error_exits_1():
    with pytest.raises(SystemExit) as err:
        main(["defragment"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        main(["generate", "--model", "copy"])    # --n and --out missing
    assert err.value.code == 1


def test_runtime_error_exits_2(tmp_path, capsys):
    assert main(["gap", "--graph", str(tmp_path / "missing.edges")]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["generate", "--model", "copy", "--n", "10", "--p-x", "1.5",
                 "--out", str(tmp_path / "g.edges")]) == 2
    assert main(["analyze", "--records", str(tmp_path / "none.csv"),
                 "--out", str(tmp_path / "a")]) == 2
