import argparse
import math

import numpy as np
import pytest

from specrad import cli
from specrad.errors import NumericalFailureError
from specrad.records import read_records

TAIL_ARGS = ["--set", "n=64", "--set", "delta=0.25", "--trials", "150",
             "--seed", "3"]


def _run(argv):
    return cli.main(argv)


class TestResolution:

    def test_precedence_defaults_config_set_flags(self, tmp_path):
        cfgfile = tmp_path / "exp.cfg"
        cfgfile.write_text("experiment = tail\nseed = 5\nn = 80\n")
        args = argparse.Namespace(command="tail", config=str(cfgfile),
                                  set=["seed=7"], seed=9, trials=None,
                                  out=None)
        cfg = cli._resolve(args)
        assert cfg["seed"] == 9          # explicit flag beats --set
        assert cfg["n"] == "80"          # config file beats defaults
        assert cfg["trials"] == 20000    # untouched default survives

    def test_unknown_key_exits_2(self, tmp_path):
        assert _run(["tail", "--set", "bogus=1",
                     "--out", str(tmp_path / "t.csv")]) == 2

    def test_experiment_mismatch_exits_2(self, tmp_path):
        cfgfile = tmp_path / "exp.cfg"
        cfgfile.write_text("experiment = tail\n")
        assert _run(["radius-mc", "--config", str(cfgfile),
                     "--out", str(tmp_path / "r.csv")]) == 2

    def test_malformed_config_exits_2(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("this line has no equals sign\n")
        assert _run(["tail", "--config", str(bad)]) == 2
        assert _run(["tail", "--config", str(tmp_path / "absent.cfg")]) == 2

    def test_invalid_geometry_exits_2(self, tmp_path):
        assert _run(["dbm-decorrelation", "--set", "n=64", "--set", "sep=3.0",
                     "--trials", "4", "--out", str(tmp_path / "d.csv")]) == 2


class TestDeterminism:

    def test_worker_count_does_not_change_output(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert _run(["tail", *TAIL_ARGS, "--jobs", "1", "--out", str(a)]) == 0
        assert _run(["tail", *TAIL_ARGS, "--jobs", "2", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_rerun_is_byte_identical(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert _run(["tail", *TAIL_ARGS, "--out", str(a)]) == 0
        assert _run(["tail", *TAIL_ARGS, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_outdir_environment_variable(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SPECRAD_OUTDIR", str(tmp_path))
        assert _run(["kostlan", "--set", "n=1000", "--set", "points=3",
                     "--set", "tmin=0", "--set", "tmax=1"]) == 0
        assert (tmp_path / "kostlan.csv").exists()


class TestFailureHandling:

    def test_failed_trials_marked_and_exit_1(self, tmp_path, monkeypatch):
        real = cli._TRIAL_FNS["tail"]

        def flaky(cfg, i):
            if i % 5 == 0:
                raise NumericalFailureError("synthetic breakdown")
            return real(cfg, i)

        monkeypatch.setitem(cli._TRIAL_FNS, "tail", flaky)
        out = tmp_path / "t.csv"
        assert _run(["tail", *TAIL_ARGS, "--out", str(out)]) == 1
        header, rows = read_records(out)
        failed = [r for r in rows if r["failed"] == "1"]
        assert len(failed) == 30
        assert "synthetic breakdown" in failed[0]["failure_reason"]
        assert failed[0]["lam1"] == "nan"


class TestExperiments:

    def test_kostlan_frozen_value(self, tmp_path, capsys):
        out = tmp_path / "k.csv"
        assert _run(["kostlan", "--set", "n=1000", "--set", "tmin=0",
                     "--set", "tmax=1", "--set", "points=3",
                     "--out", str(out)]) == 0
        captured = capsys.readouterr().out
        assert "sup |exact - limit|" in captured
        header, rows = read_records(out)
        assert len(rows) == 3
        first = {r["t"]: r for r in rows}["0"]
        assert float(first["exact_cdf"]) == pytest.approx(0.09943439068204124,
                                                          abs=1e-9)
        assert float(first["gumbel_cdf"]) == pytest.approx(math.exp(-1.0),
                                                           abs=1e-12)

    def test_radius_mc_small(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        assert _run(["radius-mc", "--set", "n=40", "--trials", "50",
                     "--seed", "1", "--out", str(out)]) == 0
        assert "edge scales undefined" in capsys.readouterr().out
        header, rows = read_records(out)
        assert len(rows) == 50
        rhos = np.array([float(r["rho"]) for r in rows])
        assert 0.8 < rhos.mean() < 1.6

    def test_girko_check_on_empty_annulus(self, tmp_path, capsys):
        # test function far outside the spectrum: lhs = 0 and the quadrature
        # closes fast, so the full handler runs in well under a second
        out = tmp_path / "g.csv"
        assert _run(["girko-check", "--set", "n=12", "--seed", "5",
                     "--set", "L=2.5", "--set", "l=0.5",
                     "--set", "angular_nodes=64", "--set", "max_refine=1",
                     "--out", str(out)]) == 0
        assert "OK" in capsys.readouterr().out
        _, rows = read_records(out)
        assert float(rows[0]["lhs"]) == 0.0
        assert abs(float(rows[0]["rhs_logdet"])) < 1e-4

    def test_kernel_table(self, tmp_path, capsys):
        out = tmp_path / "kern.csv"
        assert _run(["kernel", "--set", "ns=10000,1000000",
                     "--out", str(out)]) == 0
        text = capsys.readouterr().out
        assert "decreasing" in text
        _, rows = read_records(out)
        ratios = [float(r["ratio"]) for r in rows]
        assert ratios[0] == pytest.approx(2.5313, abs=2e-4)
        assert ratios[1] == pytest.approx(1.8330, abs=2e-4)

    def test_mde_scan_mass(self, tmp_path, capsys):
        out = tmp_path / "m.csv"
        assert _run(["mde-scan", "--set", "z=0.5", "--set", "points=21",
                     "--set", "emax=1.5", "--out", str(out)]) == 0
        assert "density mass = 1.0000" in capsys.readouterr().out
        _, rows = read_records(out)
        assert len(rows) == 21
        assert all(float(r["residual"]) <= 1e-12 for r in rows)

    def test_linstat_oracle_vs_mc(self, tmp_path, capsys):
        out = tmp_path / "l.csv"
        assert _run(["linstat", "--set", "n=256", "--trials", "40",
                     "--seed", "2", "--out", str(out)]) == 0
        text = capsys.readouterr().out
        assert "oracle mean = 12.342472" in text
        assert "SE from oracle" in text

    def test_coupling_smoke(self, tmp_path, capsys):
        out = tmp_path / "c.csv"
        assert _run(["coupling", "--set", "n=16", "--trials", "2",
                     "--set", "particle_steps=32", "--out", str(out)]) == 0
        assert "median max coupling distance" in capsys.readouterr().out
        _, rows = read_records(out)
        assert {"dist_1_1", "dist_2_2", "max_distance"} <= set(rows[0])

    def test_decorrelation_smoke(self, tmp_path, capsys):
        out = tmp_path / "d.csv"
        assert _run(["dbm-decorrelation", "--set", "n=16", "--trials", "12",
                     "--seed", "4", "--out", str(out)]) == 0
        text = capsys.readouterr().out
        assert "factorized bound" in text
        assert "corr(lambda_1)" in text


class TestRender:

    @pytest.fixture()
    def tail_csv(self, tmp_path):
        out = tmp_path / "t.csv"
        assert _run(["tail", *TAIL_ARGS, "--out", str(out)]) == 0
        return out

    def test_histogram(self, tail_csv, tmp_path):
        svg = tmp_path / "h.svg"
        assert _run(["render", str(tail_csv), "--plot", "histogram",
                     "--x", "lam1", "--out", str(svg)]) == 0
        assert svg.exists() and svg.stat().st_size > 0

    def test_cdf_overlay_with_radius_reference(self, tmp_path):
        csv = tmp_path / "r.csv"
        assert _run(["radius-mc", "--set", "n=200", "--trials", "30",
                     "--seed", "1", "--out", str(csv)]) == 0
        svg = tmp_path / "cdf.svg"
        assert _run(["render", str(csv), "--plot", "cdf-overlay",
                     "--x", "rho", "--ref", "kostlan", "--n", "200",
                     "--out", str(svg)]) == 0
        assert svg.exists()
        # the reference needs the matrix size
        assert _run(["render", str(csv), "--plot", "cdf-overlay",
                     "--x", "rho", "--ref", "kostlan"]) == 2

    def test_loglog(self, tmp_path, capsys):
        csv = tmp_path / "kern.csv"
        assert _run(["kernel", "--out", str(csv)]) == 0
        svg = tmp_path / "ll.svg"
        assert _run(["render", str(csv), "--plot", "loglog", "--x", "n",
                     "--y", "target", "--out", str(svg)]) == 0
        assert "fitted slope" in capsys.readouterr().out
        assert _run(["render", str(csv), "--plot", "loglog", "--x", "n"]) == 2

    def test_missing_column_exits_2(self, tail_csv):
        assert _run(["render", str(tail_csv), "--x", "nosuch"]) == 2

    def test_empty_csv_exits_2(self, tmp_path):
        empty = tmp_path / "e.csv"
        empty.write_text("experiment,trial_index,seed,failed,failure_reason\r\n")
        assert _run(["render", str(empty)]) == 2
        assert _run(["render", str(tmp_path / "missing.csv")]) == 2
