import json

import pytest

from stsc.cli import main, snr_grid
from stsc.sim import CSV_HEADER


def read_rows(path):
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    return [dict(zip(CSV_HEADER, line.split(","))) for line in lines[1:]]


def test_snr_grid():
    assert snr_grid(0, 30, 5) == [0, 5, 10, 15, 20, 25, 30]
    assert snr_grid(0, 1, 0.1)[-1] == 1.0


def test_sweep_default_config(tmp_path):
    out = tmp_path / "fig2.csv"
    assert main(["sweep", "--out", str(out)]) == 0
    rows = read_rows(out)
    assert len(rows) == 21
    assert {r["scheme"] for r in rows} == {"ssm", "dsm", "mac-golden"}
    assert {r["fading"] for r in rows} == {"slow"}
    assert {r["trials"] for r in rows} == {"10000"}
    meta = json.loads((tmp_path / "fig2.meta.json").read_text())
    assert meta["config"]["seed"] == 42 and meta["config"]["trials"] == 10000
    assert meta["wall_time_s"] >= 0 and meta["version"]


def test_sweep_fast_flag_and_overrides(tmp_path):
    out = tmp_path / "s.csv"
    argv = ["sweep", "--out", str(out), "--fading", "slow", "--fading", "fast",
            "--scheme", "dsm", "--snr-start", "0", "--snr-stop", "10", "--snr-step", "10",
            "--trials", "200", "--seed", "7"]
    assert main(argv) == 0
    rows = read_rows(out)
    assert [(r["fading"], r["snr_db"]) for r in rows] == [
        ("slow", "0"), ("slow", "10"), ("fast", "0"), ("fast", "10")]
    assert {r["seed"] for r in rows} == {"7"}


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"schemes": ["ssm"], "trials": 50, "snr_start": 5,
                               "snr_stop": 5, "seed": 3}))
    out = tmp_path / "r.csv"
    assert main(["sweep", "--config", str(cfg), "--trials", "60", "--out", str(out)]) == 0
    rows = read_rows(out)
    assert len(rows) == 1 and rows[0]["trials"] == "60" and rows[0]["seed"] == "3"


def test_sidecar_replay_is_byte_identical(tmp_path):
    out = tmp_path / "a.csv"
    assert main(["sweep", "--scheme", "mac-golden", "--trials", "300", "--snr-step", "10",
                 "--out", str(out)]) == 0
    replay = tmp_path / "b.csv"
    assert main(["sweep", "--config", str(tmp_path / "a.meta.json"), "--out", str(replay)]) == 0
    assert out.read_bytes() == replay.read_bytes()


@pytest.mark.parametrize("argv", [
    ["sweep", "--trials", "0"],
    ["sweep", "--snr-step", "-1"],
    ["sweep", "--snr-start", "10", "--snr-stop", "0"],
])
def test_sweep_validation_errors(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path / "x.csv")]) == 1
    assert not (tmp_path / "x.csv").exists()


def test_unknown_scheme_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--scheme", "bpsk"])
    assert exc.value.code == 1


def test_bad_config_schema_message(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": "many"}))
    assert main(["sweep", "--config", str(cfg)]) == 1
    assert "trials" in capsys.readouterr().err
    cfg.write_text("{not json")
    assert main(["sweep", "--config", str(cfg)]) == 1


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["sweep", "--trials", "10", "--scheme", "dsm", "--snr-step", "30",
                 "--out", str(blocker / "out.csv")]) == 2


@pytest.mark.parametrize("scheme", ["mac-golden-notwist", "mac-golden-twist"])
@pytest.mark.parametrize("mode", ["over-codewords", "over-differences"])
def test_cnvd_command(scheme, mode, capsys):
    assert main(["cnvd", "--scheme", scheme, "--mode", mode]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["kappa"] > 0
    assert report["config"]["scheme"] == scheme
    for entry in report["per_j"]:
        assert entry["min_nonzero_absdet"] > 0
        assert entry["witness_b1"] is not None


def test_cnvd_unknown_scheme():
    with pytest.raises(SystemExit) as exc:
        main(["cnvd", "--scheme", "dsm"])
    assert exc.value.code == 1


def test_cnvd_twist_vs_notwist_kappa(capsys):
    main(["cnvd", "--scheme", "mac-golden-notwist"])
    plain = json.loads(capsys.readouterr().out)
    main(["cnvd", "--scheme", "mac-golden-twist"])
    twisted = json.loads(capsys.readouterr().out)
    assert plain["per_j"][1]["zero_count"] == 64
    assert twisted["per_j"][1]["zero_count"] == 0
    assert plain["per_j"][1]["min_nonzero_absdet"] != twisted["per_j"][1]["min_nonzero_absdet"]


@pytest.mark.parametrize("t", [1, 2, 4])
def test_lift_check(t, capsys):
    assert main(["lift-check", "--t-max", str(t)]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and f"t={t}" in out


def test_lift_check_rejects_large_t():
    assert main(["lift-check", "--t-max", "9"]) == 1


def test_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    assert capsys.readouterr().out.count("PASS") == 4


@pytest.mark.parametrize("inject,name", [("tau-sign", "relative norm"),
                                         ("normalization", "energy normalization")])
def test_selftest_catches_mutations(inject, name, capsys):
    assert main(["selftest", "--inject", inject]) == 2
    assert f"FAIL  {name}" in capsys.readouterr().out


@pytest.fixture(scope="module")
def sweep_csvs(tmp_path_factory):
    d = tmp_path_factory.mktemp("plots")
    slow, fast = d / "slow.csv", d / "fast.csv"
    common = ["--trials", "300", "--snr-step", "10"]
    assert main(["sweep", "--out", str(slow), *common]) == 0
    assert main(["sweep", "--out", str(fast), "--fading", "fast", *common]) == 0
    return slow, fast


def _legend_entries(svg_text):
    return sum(svg_text.count(f"{s} ({f})") for s in ("ssm", "dsm", "mac-golden")
               for f in ("slow", "fast"))


def test_plot_three_curves(sweep_csvs, tmp_path):
    out = tmp_path / "fig2.svg"
    assert main(["plot", str(sweep_csvs[0]), "--out", str(out)]) == 0
    text = out.read_text()
    assert text.lstrip().startswith("<?xml") and "<svg" in text
    assert _legend_entries(text) == 3


def test_plot_overlay_six_curves(sweep_csvs, tmp_path):
    out = tmp_path / "both.svg"
    assert main(["plot", str(sweep_csvs[0]), str(sweep_csvs[1]), "--out", str(out)]) == 0
    assert _legend_entries(out.read_text()) == 6


def test_plot_empty_csv(tmp_path):
    empty = tmp_path / "e.csv"
    empty.write_text("")
    assert main(["plot", str(empty), "--out", str(tmp_path / "e.svg")]) == 1
    empty.write_text(",".join(CSV_HEADER) + "\n")
    assert main(["plot", str(empty), "--out", str(tmp_path / "e.svg")]) == 1


def test_plot_malformed_row_reports_line(sweep_csvs, tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    lines = sweep_csvs[0].read_text().splitlines()
    lines[3] = lines[3].replace(",", ";", 2)
    bad.write_text("\n".join(lines) + "\n")
    assert main(["plot", str(bad), "--out", str(tmp_path / "b.svg")]) == 1
    assert "row 4" in capsys.readouterr().err
