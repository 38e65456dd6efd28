"""Tests for the CSV command-line front end."""

import subprocess
import sys

import numpy as np
import pytest

from diracwalk import cli


def run_cli(argv):
    return cli.main(argv)


def read_csv(path):
    """Split a CSV written by the CLI into (meta, columns, rows, footers)."""
    meta = {}
    rows = []
    columns = None
    with open(path, "rb") as fh:
        raw = fh.read()
    assert b"\r" not in raw
    for line in raw.decode().splitlines():
        if line.startswith("# "):
            body = line[2:]
            if ":" in body:
                key, val = body.split(":", 1)
                if columns is None:
                    meta[key.strip()] = val.strip()
                else:
                    meta.setdefault("footers", {})[key.strip()] = val.strip()
            if body.startswith("columns:"):
                columns = body.split(":", 1)[1].strip().split(",")
        else:
            rows.append(line.split(","))
    return meta, columns, rows


def test_evolve_row_count_and_normalization(tmp_path):
    out = tmp_path / "evolve.csv"
    assert run_cli(["evolve", "--epsilon", "0.2", "--steps", "20", "--out", str(out)]) == 0
    meta, columns, rows = read_csv(out)
    assert meta["command"] == "evolve"
    assert columns == ["n", "k", "alpha", "beta", "p", "ballistic_peak"]
    assert len(rows) == 21
    assert sum(float(r[4]) for r in rows) == pytest.approx(1.0, abs=1e-12)


def test_evolve_free_particle_single_row(tmp_path):
    out = tmp_path / "free.csv"
    assert run_cli(["evolve", "--epsilon", "0", "--steps", "5", "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    nonzero = [r for r in rows if float(r[4]) != 0.0]
    assert len(nonzero) == 1
    assert nonzero[0][1] == "5"
    assert float(nonzero[0][4]) == 1.0


def test_evolve_ballistic_peak_column(tmp_path):
    out = tmp_path / "peakcol.csv"
    assert run_cli(["evolve", "--epsilon", "0.2", "--steps", "50", "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    expected = 1.04 ** (-50)
    assert float(rows[0][5]) == pytest.approx(expected, rel=1e-12)
    at_peak = [r for r in rows if r[1] == "50"][0]
    assert float(at_peak[4]) == pytest.approx(expected, rel=1e-12)


def test_peak_rows(tmp_path):
    out = tmp_path / "peak.csv"
    assert run_cli(["peak", "--epsilon", "0.3", "--steps", "40", "--out", str(out)]) == 0
    _, columns, rows = read_csv(out)
    assert columns == ["n", "p_nn", "p_nn_closed"]
    assert len(rows) == 41
    for r in rows[::7]:
        assert float(r[1]) == pytest.approx(float(r[2]), rel=1e-12)


def test_moments_footer_and_regimes(tmp_path):
    out = tmp_path / "m.csv"
    assert run_cli(["moments", "--epsilon", "0.2", "--steps", "200", "--out", str(out)]) == 0
    meta, columns, rows = read_csv(out)
    assert columns[-1] == "regime"
    assert len(rows) == 200
    assert 12 <= int(meta["footers"]["crossover_n"]) <= 50
    regimes = {r[-1] for r in rows}
    assert regimes == {"ballistic", "crossover", "diffusive"}


def test_gaussian_tv_footers_decrease(tmp_path):
    out = tmp_path / "g.csv"
    assert run_cli(["gaussian", "--preset", "fig4", "--out", str(out)]) == 0
    meta, _, rows = read_csv(out)
    assert meta["epsilon"] == "0.2"
    tv100 = float(meta["footers"]["tv_n100"])
    tv300 = float(meta["footers"]["tv_n300"])
    assert tv300 < tv100
    half_p = sum(float(r[2]) for r in rows if r[0] == "100")
    assert half_p == pytest.approx(0.5, abs=1e-12)


def test_presets_route_and_mismatch(tmp_path):
    out = tmp_path / "fig1.csv"
    assert run_cli(["evolve", "--preset", "fig1", "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    assert {r[0] for r in rows} == {"20", "50", "100", "200"}
    assert run_cli(["peak", "--preset", "fig1", "--out", str(tmp_path / "x.csv")]) == 1


def test_mc_consistency_and_exit_codes(tmp_path):
    out = tmp_path / "mc.csv"
    code = run_cli(
        ["mc", "--epsilon", "0.2", "--steps", "20", "--realizations", "3000",
         "--seed", "11", "--out", str(out)]
    )
    assert code == 0
    meta, _, rows = read_csv(out)
    assert int(meta["footers"]["sites_beyond_4se"]) <= 1
    assert len(rows) == 21


def test_mc_zero_realizations_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli(["mc", "--epsilon", "0.2", "--realizations", "0"])
    assert exc.value.code == 2


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run_cli(["evolve", "--epsilon", "0.2", "--frob", "1"])
    assert exc.value.code == 2


def test_epsilon_and_physical_are_exclusive(tmp_path, capsys):
    code = run_cli(
        ["evolve", "--epsilon", "0.2", "--mu", "1", "--b0", "1", "--delta", "1",
         "--out", str(tmp_path / "x.csv")]
    )
    assert code == 1
    assert "not both" in capsys.readouterr().err
    assert run_cli(["evolve", "--steps", "5", "--out", str(tmp_path / "y.csv")]) == 1


def test_physical_route_derives_epsilon(tmp_path):
    out = tmp_path / "phys.csv"
    code = run_cli(
        ["evolve", "--mu", "1", "--b0", "0.39479111969976156", "--delta", "1",
         "--steps", "4", "--out", str(out)]
    )
    assert code == 0
    meta, _, _ = read_csv(out)
    assert float(meta["epsilon"]) == pytest.approx(0.2, rel=1e-12)


def test_validate_echoes_epsilon(tmp_path):
    out = tmp_path / "val.csv"
    code = run_cli(
        ["validate", "--mu", "1", "--b0", "0.39479111969976156", "--delta", "1",
         "--out", str(out)]
    )
    assert code == 0
    _, _, rows = read_csv(out)
    table = {r[0]: r[1] for r in rows}
    assert float(table["epsilon"]) == pytest.approx(0.2, rel=1e-12)
    assert float(table["x0"]) == pytest.approx(12.0, rel=1e-9)
    # validate rejects the dimensionless route
    assert run_cli(["validate", "--epsilon", "0.2", "--out", str(out)]) == 1


def test_compare_routes_agree(tmp_path):
    out = tmp_path / "cmp.csv"
    code = run_cli(
        ["compare", "--epsilon", "0.5", "--steps", "30", "--realizations", "500",
         "--seed", "3", "--out", str(out)]
    )
    assert code == 0
    meta, columns, rows = read_csv(out)
    assert columns[:4] == ["k", "p_recurrence", "p_closedform", "abs_diff"]
    assert float(meta["footers"]["max_abs_diff"]) < 1e-9
    assert len(rows) == 31


def test_epsilon_above_one_flagged(tmp_path):
    out = tmp_path / "hot.csv"
    assert run_cli(["evolve", "--epsilon", "1.5", "--steps", "3", "--out", str(out)]) == 0
    meta, _, _ = read_csv(out)
    assert "weak-noise" in meta["warning"]


def test_byte_identical_reruns(tmp_path):
    args = ["mc", "--epsilon", "0.2", "--steps", "15", "--realizations", "2000", "--seed", "7"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_byte_identical_across_worker_counts(tmp_path, monkeypatch):
    args = ["mc", "--epsilon", "0.3", "--steps", "12", "--realizations", "5000", "--seed", "5"]
    a, b = tmp_path / "w1.csv", tmp_path / "w4.csv"
    monkeypatch.setenv("NDW_THREADS", "1")
    assert run_cli(args + ["--out", str(a)]) == 0
    monkeypatch.setenv("NDW_THREADS", "4")
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()

    da, db = tmp_path / "d1.csv", tmp_path / "d4.csv"
    dirac_args = ["dirac", "--steps", "8", "--realizations", "300", "--phis", "0.2", "--seed", "2"]
    monkeypatch.setenv("NDW_THREADS", "1")
    assert run_cli(dirac_args + ["--out", str(da)]) == 0
    monkeypatch.setenv("NDW_THREADS", "4")
    assert run_cli(dirac_args + ["--out", str(db)]) == 0
    assert da.read_bytes() == db.read_bytes()


def test_dirac_sweep_rows(tmp_path):
    out = tmp_path / "dirac.csv"
    code = run_cli(
        ["dirac", "--steps", "10", "--realizations", "64",
         "--phis", "0.2,0.1,0.05", "--seed", "3", "--out", str(out)]
    )
    assert code == 0
    _, columns, rows = read_csv(out)
    assert columns[0] == "phi"
    tvs = [float(r[2]) for r in rows]
    assert tvs[0] > tvs[1] > tvs[2]
    # the dirac sweep refuses the epsilon flag
    assert run_cli(["dirac", "--epsilon", "0.2", "--out", str(out)]) == 1


def test_unwritable_output_path(tmp_path):
    assert run_cli(["evolve", "--epsilon", "0.2", "--steps", "2",
                    "--out", str(tmp_path / "no" / "dir.csv")]) == 1


def test_module_entry_point(tmp_path):
    out = tmp_path / "sub.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "diracwalk", "evolve", "--epsilon", "0.1",
         "--steps", "3", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    meta, _, rows = read_csv(out)
    assert meta["command"] == "evolve"
    assert len(rows) == 4


def test_stdout_output(capsys):
    assert run_cli(["evolve", "--epsilon", "0.2", "--steps", "1", "--out", "-"]) == 0
    captured = capsys.readouterr().out
    assert captured.startswith("# diracwalk")
    assert len(captured.strip().splitlines()) == 7
