from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest

from cyclicalg.cli import main, report_body
from cyclicalg.config import ConfigError, ProjectConfig

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def cfg_copy(tmp_path):
    def copy(name):
        dst = tmp_path / name
        shutil.copy(CONFIGS / name, dst)
        return dst
    return copy


def run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(args + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None), out


def test_config_round_trip():
    cfg = ProjectConfig.load(CONFIGS / "silver.json")
    again = ProjectConfig.from_dict(json.loads(cfg.canonical_json()))
    assert again.hash() == cfg.hash() and again.to_dict() == cfg.to_dict()


def test_parse_error_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "towers": {,\n}\n')
    assert main(["certify", "--config", str(bad), "x"]) == 1
    assert "line 2" in capsys.readouterr().err
    with pytest.raises(ConfigError):
        ProjectConfig.load(bad)


def test_unknown_name_and_missing_file(tmp_path):
    assert main(["certify", "--config", str(CONFIGS / "silver.json"), "nope"]) == 1
    assert main(["certify", "--config", str(tmp_path / "missing.json"), "silver"]) == 1


@pytest.mark.parametrize("name,code,status", [("silver", 0, "Division"),
                                              ("split", 2, "NotDivision")])
def test_certify_exit_codes(tmp_path, name, code, status):
    got, rep, _ = run(["certify", "--config", str(CONFIGS / "silver.json"), name], tmp_path)
    assert got == code and rep["results"]["verdict"]["status"] == status


def test_certify_unknown_exit_code(tmp_path):
    got, rep, _ = run(["certify", "--config", str(CONFIGS / "exotic_m4.json"), "quartic"],
                      tmp_path)
    assert got == 3 and rep["results"]["verdict"]["status"] == "Unknown"


def test_verify_round_trip_and_tamper(tmp_path, cfg_copy, capsys):
    cfg = cfg_copy("silver.json")
    code, rep, out = run(["certify", "--config", str(cfg), "split"], tmp_path)
    assert code == 2
    assert main(["verify", str(out)]) == 0

    rep["results"]["verdict"]["witness"]["y"][0][0] = "-2"
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(rep))
    assert main(["verify", str(bad)]) == 6
    assert "FAILED" in capsys.readouterr().err

    data = json.loads(cfg.read_text())
    data["budgets"]["height"] = 2
    cfg.write_text(json.dumps(data))
    assert main(["verify", str(out)]) == 5


def test_verify_rejects_edited_embedded_config(tmp_path):
    code, rep, out = run(["certify", "--config", str(CONFIGS / "silver.json"), "silver"],
                         tmp_path)
    rep["config"]["algebras"]["silver"]["d"] = "1"
    out.write_text(json.dumps(rep))
    assert main(["verify", str(out)]) == 5


def test_verify_division_rechecks_hypotheses(tmp_path):
    code, rep, out = run(["certify", "--config", str(CONFIGS / "cubic.json"), "cubic_quat"],
                         tmp_path)
    assert code == 0 and rep["results"]["verdict"]["certificate"] == "3xquat(ii)"
    assert main(["verify", str(out)]) == 0
    rep["results"]["verdict"]["certificate"] = "biquaternion"
    out.write_text(json.dumps(rep))
    assert main(["verify", str(out)]) == 6


def test_skew_queries(tmp_path):
    cfg = str(CONFIGS / "silver.json")
    code, rep, out = run(["skew", "--config", cfg, "petit_tt"], tmp_path)
    assert code == 0 and rep["results"]["product"] == ["s"]
    assert main(["verify", str(out)]) == 0
    for name in ("irred_split", "irred_silver", "divmod_cubic"):
        code, rep, out = run(["skew", "--config", cfg, name], tmp_path, name + ".json")
        assert code == 0
        assert main(["verify", str(out)]) == 0


def test_codebook_small_and_cap(tmp_path, cfg_copy):
    cfg = cfg_copy("silver.json")
    csv_path = tmp_path / "cb.csv"
    code, rep, out = run(["codebook", "--config", str(cfg), "single_one", "--csv",
                          str(csv_path)], tmp_path)
    assert code == 0 and rep["results"]["min_det_exact"] == "1"
    assert len(csv_path.read_text().splitlines()) == 2
    assert main(["verify", str(out)]) == 0

    code, rep, _ = run(["codebook", "--config", str(cfg), "zero_only"], tmp_path, "z.json")
    assert code == 0 and rep["results"]["nonzero_codewords"] == 0

    data = json.loads(cfg.read_text())
    data["budgets"]["enumeration_cap"] = 100
    cfg.write_text(json.dumps(data))
    assert main(["codebook", "--config", str(cfg), "silver_01"]) == 4


def test_codebook_split_not_fully_diverse(tmp_path):
    code, rep, out = run(["codebook", "--config", str(CONFIGS / "silver.json"), "split_01"],
                         tmp_path)
    res = rep["results"]
    assert not res["fully_diverse"] and res["diversity_witness"] is not None
    assert main(["verify", str(out)]) == 0


def test_report_body_excludes_timing(tmp_path):
    _, rep, _ = run(["certify", "--config", str(CONFIGS / "silver.json"), "silver"], tmp_path)
    assert "timing" in rep and "timing" not in json.loads(report_body(rep))


def test_print_config(capsys):
    assert main(["print-config", "--config", str(CONFIGS / "silver.json")]) == 0
    shown = json.loads(capsys.readouterr().out)
    assert shown == ProjectConfig.load(CONFIGS / "silver.json").to_dict()
