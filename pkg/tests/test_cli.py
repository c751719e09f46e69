import csv
import json
import shutil
from pathlib import Path

import pytest

from adelic_perc.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _rows(path):
    lines = Path(path).read_text().splitlines()
    assert lines[0].startswith("# config-hash: ")
    return list(csv.DictReader(lines[1:]))


def test_help(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for cmd in ("verify", "simulate", "beta-c", "two-point", "adelic-prob", "diagram"):
        assert cmd in out


def test_verify_pass(capsys):
    assert main(["verify", "product-formula-ff"]) == 0
    assert "1000/1000" in capsys.readouterr().out


def test_verify_dperp(capsys):
    assert main(["verify", "dperp"]) == 0
    assert str(3**8 * (3**8 - 1) // 2) in capsys.readouterr().out


def test_verify_unknown_suite(capsys):
    assert main(["verify", "nosuch"]) == 2
    assert "available" in capsys.readouterr().err


def test_missing_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"kernel": {"variant": "Lattice", "alpha": 1}}))
    assert main(["simulate", str(cfg)]) == 2
    assert main(["simulate", str(tmp_path / "missing.json")]) == 2
    cfg.write_text("{not json")
    assert main(["beta-c", str(cfg)]) == 2


def test_budget_error(tmp_path):
    cfg = json.loads((CONFIGS / "simulate_hier.json").read_text())
    cfg["vertices"]["max_index"] = 40
    p = tmp_path / "huge.json"
    p.write_text(json.dumps(cfg))
    assert main(["simulate", str(p), "--out", str(tmp_path)]) == 2


def test_simulate_rows_and_rerun(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", str(CONFIGS / "simulate_hier.json"), "--out", str(a)]) == 0
    assert main(["simulate", str(CONFIGS / "simulate_hier.json"), "--out", str(b), "--threads", "2"]) == 0
    cfg = json.loads((CONFIGS / "simulate_hier.json").read_text())
    rows = _rows(a / "survival.csv")
    assert len(rows) == len(cfg["betas"]) * len(cfg["vertices"]["max_index"]) * cfg["trials"]
    for name in ("survival.csv", "clusters.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_simulate_beta_zero(tmp_path):
    cfg = json.loads((CONFIGS / "simulate_hier.json").read_text())
    cfg["betas"] = [0]
    p = tmp_path / "zero.json"
    p.write_text(json.dumps(cfg))
    assert main(["simulate", str(p), "--out", str(tmp_path), "--emit-edges"]) == 0
    for r in _rows(tmp_path / "survival.csv"):
        assert float(r["largest_fraction"]) == pytest.approx(1 / int(r["size"]))
    assert _rows(tmp_path / "edges.csv") == []


def test_simulate_fflocal_fraction_grows(tmp_path):
    cfg = json.loads((CONFIGS / "simulate_fflocal.json").read_text())
    cfg["vertices"]["max_degree"] = [6, 8, 10]
    cfg["trials"] = 5
    p = tmp_path / "ff.json"
    p.write_text(json.dumps(cfg))
    assert main(["simulate", str(p), "--out", str(tmp_path)]) == 0
    by_size = {}
    for r in _rows(tmp_path / "survival.csv"):
        by_size.setdefault(int(r["size"]), []).append(float(r["largest_fraction"]))
    med = [sorted(v)[len(v) // 2] for _, v in sorted(by_size.items())]
    assert med == sorted(med) and med[-1] > 0.9


def test_two_point_and_adelic(tmp_path, capsys):
    assert main(["two-point", str(CONFIGS / "twopoint_hier.json"), "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "twopoint.csv")
    assert [r["pair"] for r in rows] == ["0-1", "0-2", "0-63"]
    assert main(["adelic-prob", str(CONFIGS / "adelic_ff.json"), "--out", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "adelic_prob.json").read_text())
    assert payload["probability"] == pytest.approx(0.5 * (1 - 2**-0.5), rel=1e-12)
    assert "config_hash" in payload


def test_beta_c_writes_json(tmp_path):
    cfg = json.loads((CONFIGS / "betac_lattice.json").read_text())
    cfg["vertices"]["radius"] = [4, 6]
    cfg["trials"] = 7
    p = tmp_path / "bc.json"
    p.write_text(json.dumps(cfg))
    assert main(["beta-c", str(p), "--out", str(tmp_path)]) == 0
    out = json.loads((tmp_path / "betac.json").read_text())
    lo, hi = out["bracket"]
    assert 0 <= lo < hi and hi - lo <= cfg["tol"]
    assert len(out["seeds"]) == 7
