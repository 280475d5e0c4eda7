import csv
import io
import json
import math

import numpy as np
import pytest

from qcoopgames import checks, cli
from qcoopgames.game import GameSpec, THREE_PLAYER_WEIGHTS, standard_game


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


def parse_payoffs(text):
    return [float(line.split()[1]) for line in text.strip().splitlines()]


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


# --- payoff --------------------------------------------------------------


def test_payoff_pd_half():
    code, text = run("payoff --players 3 --channel pd --p 0.4 --theta 1.5708 --q 0.5 --r 0.5".split())
    assert code == 0
    assert np.allclose(parse_payoffs(text), [0.5, 0.5, -1], atol=1e-12)


def test_payoff_dp_annihilation():
    code, text = run("payoff --players 3 --channel dp --p 0.75 --theta 0.3 --q 0.2 --r 0.2".split())
    assert code == 0
    assert np.allclose(parse_payoffs(text), [0, 0, 0], atol=1e-12)


def test_payoff_four_player_deterministic():
    code, text = run("payoff --players 4 --channel ad --p 0 --theta 0 --q 1 --r 1 --s 0".split())
    assert code == 0
    assert parse_payoffs(text) == [1, 1, 1, -3]


def test_payoff_analytic_column():
    code, text = run(
        "payoff --players 4 --channel dp --p 0.3 --theta-deg 40 --q 0.2 --r 0.6 --s 0.9 --analytic".split()
    )
    assert code == 0
    rows = text.strip().splitlines()[1:]
    assert len(rows) == 4
    assert all(float(r.split()[3]) <= 1e-12 for r in rows)


def test_payoff_nd_ignores_p():
    _, a = run("payoff --players 3 --channel nd --p 0.9 --theta 1 --q 0.2 --r 0.7".split())
    _, b = run("payoff --players 3 --channel pd --p 0 --theta 1 --q 0.2 --r 0.7".split())
    assert np.allclose(parse_payoffs(a), parse_payoffs(b), atol=1e-15)


@pytest.mark.parametrize(
    "argv,name",
    [
        ("payoff --players 3 --channel ad --p 1.5 --theta 0 --q 0.5 --r 0.5", "--p"),
        ("payoff --players 3 --channel ad --p 0.5 --theta 2 --q 0.5 --r 0.5", "--theta"),
        ("payoff --players 3 --channel ad --p 0.5 --theta 0 --q -1 --r 0.5", "--q"),
        ("payoff --players 4 --channel ad --p 0.5 --theta 0 --q 0.5 --r 0.5", "--s"),
        ("payoff --players 3 --channel ad --p 0.5 --theta 0 --q 0.5 --r 0.5 --s 0.1", "--s"),
        ("payoff --players 5 --channel ad --p 0.5 --theta 0 --q 0.5 --r 0.5", "--players"),
        ("payoff --players 3 --channel xx --p 0.5 --theta 0 --q 0.5 --r 0.5", "--channel"),
    ],
)
def test_invalid_flags_exit_1(argv, name, capsys):
    try:
        code, _ = run(argv.split())
    except SystemExit as exc:
        code = exc.code
    assert code == 1
    assert name in capsys.readouterr().err


# --- surface -------------------------------------------------------------

FIG1 = "surface --players 3 --channel ad --q 0.2 --r 0.2 --p-grid 0 1 101 --theta-grid 0 1.5707963267948966 101"


def test_fig1_surface_shape_and_determinism(tmp_path):
    path = tmp_path / "fig1.csv"
    code, _ = run(FIG1.split() + ["--output", str(path)])
    assert code == 0
    first = path.read_bytes()
    run(FIG1.split() + ["--output", str(path)])
    assert path.read_bytes() == first
    text = first.decode()
    assert text.splitlines()[0] == ",".join(cli.CSV_HEADER)
    rows = read_csv(text)
    assert len(rows) == 10201
    assert "\r" not in text
    for row in rows[::97]:
        assert row["s"] == "" and row["P_D"] == ""
        total = sum(float(row[k]) for k in ("P_A", "P_B", "P_C"))
        assert abs(total) <= 1e-11  # 12 significant digits per printed value


def test_csv_round_trip():
    profile = cli.StrategyProfile(0.2, 0.3, 0.7)
    rows = cli.surface_rows(4, "all", profile, np.linspace(0, 1, 5), np.linspace(0, math.pi / 2, 4))
    parsed = read_csv(cli.render(rows, "csv"))
    assert len(parsed) == len(rows) == 60
    for mem, disk in zip(rows, parsed):
        assert disk["channel"] == mem[1]
        for key, value in zip(cli.CSV_HEADER[2:], mem[2:]):
            assert float(disk[key]) == pytest.approx(value, rel=1e-11, abs=1e-12)


def test_fig4_slice_ad_equals_pd_at_full_decoherence():
    code, text = run(
        "surface --players 3 --channel all --q 0.2 --r 0.2 --p-grid 0 1 11 --theta-grid 1.5707963267948966 1.5707963267948966 1".split()
    )
    assert code == 0
    rows = read_csv(text)
    assert len(rows) == 33
    last = {r["channel"]: r for r in rows if float(r["p"]) == 1.0}
    assert set(last) == {"ad", "pd", "dp"}
    for key in ("P_A", "P_B", "P_C"):
        assert float(last["ad"][key]) == pytest.approx(float(last["pd"][key]), abs=1e-12)


def test_fig5_slice_pd_beats_ad_near_maximal_entanglement():
    code, text = run(
        "surface --players 3 --channel all --q 0.2 --r 0.2 --p-grid 0.5 0.5 1 --theta-grid 1.2 1.5707963267948966 9".split()
    )
    assert code == 0
    rows = read_csv(text)
    by_theta = {}
    for r in rows:
        by_theta.setdefault(r["theta"], {})[r["channel"]] = float(r["P_A"])
    for vals in by_theta.values():
        assert vals["pd"] >= vals["ad"]


def test_surface_json(tmp_path):
    path = tmp_path / "s.json"
    code, _ = run(
        "surface --players 4 --channel pd --q 0.2 --r 0.2 --s 0.4 --p-grid 0 1 3 --theta-grid 0 1 2 --format json --output".split()
        + [str(path)]
    )
    assert code == 0
    data = json.loads(path.read_text())
    assert data["columns"] == cli.CSV_HEADER
    assert len(data["rows"]) == 6
    for row in data["rows"]:
        assert abs(row["P_A"] + row["P_B"] + row["P_C"] + row["P_D"]) <= 1e-11


def test_surface_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code, text = run("surface --players 3 --channel dp --q 0.2 --r 0.2 --p-grid 0 1 2 --theta-grid 0 1 2".split())
    assert code == 0
    assert (tmp_path / "surface_3p_dp.csv").exists()
    assert "wrote" in text


def test_surface_unwritable_path(tmp_path):
    target = tmp_path / "missing" / "x.csv"
    code, _ = run(
        "surface --players 3 --channel ad --q 0.2 --r 0.2 --p-grid 0 1 2 --theta-grid 0 1 2 --output".split()
        + [str(target)]
    )
    assert code == 1


@pytest.mark.parametrize("grid", [["0", "1", "0"], ["0.5", "0.2", "3"], ["0", "1", "1"], ["0", "2", "3"]])
def test_surface_bad_grid(grid):
    code, _ = run(["surface", "--players", "3", "--channel", "ad", "--q", "0.2", "--r", "0.2", "--p-grid", *grid])
    assert code == 1


def test_surface_rows_reassert_zero_sum(monkeypatch):
    broken = THREE_PLAYER_WEIGHTS.copy()
    broken[0, 1] += 0.5
    monkeypatch.setattr(cli, "standard_game", lambda n: GameSpec(3, broken))
    code, _ = run("surface --players 3 --channel ad --q 0.2 --r 0.2 --p-grid 0 1 2 --theta-grid 0 0 1".split())
    assert code == 2


# --- verify --------------------------------------------------------------


def test_verify_default_seed_passes():
    code, text = run(["verify"])
    assert code == 0
    assert text.count("PASS") == 13 and "FAIL" not in text


def test_verify_other_seed_more_samples():
    code, text = run("verify --seed 7 --samples 5000".split())
    assert code == 0, text


def test_verify_negative_control(monkeypatch):
    broken = THREE_PLAYER_WEIGHTS.copy()
    broken[2, 1] = -1.0  # C now loses only 1 on |001>
    original = checks.run_checks
    monkeypatch.setattr(
        checks,
        "run_checks",
        lambda seed, samples: original(seed, samples, specs={3: GameSpec(3, broken), 4: standard_game(4)}),
    )
    code, text = run("verify --samples 50".split())
    assert code == 2
    assert "FAIL  zero_sum" in text
    assert "failing checks:" in text


# --- equilibrium ---------------------------------------------------------


def parse_report(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def test_equilibrium_ad_three_player():
    code, text = run("equilibrium --players 3 --channel ad --p 0.3 --theta 1.5708".split())
    assert code == 0
    rep = parse_report(text)
    assert rep["argmax"] == "q=0.5 r=0.5"
    assert float(rep["stationarity_residual"]) <= 1e-6


def test_equilibrium_pd_four_player():
    code, text = run("equilibrium --players 4 --channel pd --p 0.6 --theta 1.0".split())
    rep = parse_report(text)
    assert rep["argmax"] == "q=0.5 r=0.5 s=0.5"
    assert float(rep["value"]) == pytest.approx(0.5, abs=1e-12)


def test_equilibrium_dp_flat():
    code, text = run("equilibrium --players 3 --channel dp --p 0.75 --theta 1.0".split())
    rep = parse_report(text)
    assert abs(float(rep["value"])) <= 1e-12
    assert rep["flat"] == "yes"


def test_equilibrium_bad_grid():
    code, _ = run("equilibrium --players 3 --channel dp --p 0.5 --theta 1.0 --grid-points 2".split())
    assert code == 1


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run(
        [sys.executable, "-m", "qcoopgames", "payoff", "--players", "3", "--channel", "pd",
         "--theta", "1.0", "--q", "0.5", "--r", "0.5"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    assert parse_payoffs(res.stdout)[0] == pytest.approx(0.5, abs=1e-12)
