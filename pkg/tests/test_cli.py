"""Command-line interface: flags, config files, outputs and exit codes."""

import json

import numpy as np
import pytest

from eightport.cli import (EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, build_config,
                           build_parser, main)


def run(tmp_path, *argv):
    return main(list(argv))


def test_compensate_stdout_json(capsys):
    assert main(["compensate", "--e13", "0.5", "--e24", "1.0"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["a"] == pytest.approx(1 + np.sqrt(2), abs=1e-9)
    assert payload["eps_eff"] == pytest.approx(2 - np.sqrt(2), abs=1e-9)
    assert payload["eps_bs"] is None


def test_compensate_from_individual_efficiencies(capsys):
    code = main(["compensate", "--e1", "0.9", "--e2", "0.7",
                 "--e3", "0.95", "--e4", "0.7"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["eps13"] == pytest.approx(0.9243243243243243, abs=1e-9)
    assert payload["eps24"] == pytest.approx(0.7, abs=1e-12)
    assert payload["eps_bs"] == pytest.approx(0.6028708133971292, abs=1e-9)


def test_mixed_efficiency_flags_rejected(capsys):
    code = main(["compensate", "--e1", "0.9", "--e13", "0.5"])
    assert code == EXIT_CONFIG
    code = main(["compensate", "--e13", "0.5"])
    assert code == EXIT_CONFIG


def test_bad_efficiency_value_is_config_error(capsys):
    assert main(["compensate", "--e13", "1.5", "--e24", "0.5"]) == EXIT_CONFIG


def test_config_file_with_cli_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("e13 = 0.5\ne24 = 1.0\nseed = 7\n# comment\n")
    assert main(["compensate", "--config", str(cfg)]) == EXIT_OK
    base = json.loads(capsys.readouterr().out)
    assert base["eps13"] == 0.5
    # CLI flag wins over the file value
    assert main(["compensate", "--config", str(cfg), "--e24", "0.8"]) == EXIT_OK
    over = json.loads(capsys.readouterr().out)
    assert over["eps24"] == 0.8


def test_malformed_config_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("e13 0.5\n")
    assert main(["compensate", "--config", str(cfg)]) == EXIT_CONFIG


def test_cutoff_floor_and_amplitude_guard(capsys):
    assert main(["compensate", "--e13", "0.5", "--e24", "1.0",
                 "--cutoff", "8"]) == EXIT_CONFIG
    # amplitude far beyond the requested cutoff is a numeric-domain error
    code = main(["sample", "--e13", "0.5", "--e24", "1.0",
                 "--signal", "coherent:5,0", "--cutoff", "16",
                 "--events", "10"])
    assert code == EXIT_NUMERIC


def test_unknown_signal_or_generator(tmp_path):
    assert main(["sample", "--signal", "thermal:2", "--events", "10",
                 "--out", str(tmp_path / "x.csv")]) == EXIT_CONFIG
    assert main(["sample", "--generator", "weird", "--events", "10",
                 "--out", str(tmp_path / "x.csv")]) == EXIT_CONFIG


def test_phase_dist_files(tmp_path):
    out = tmp_path / "dist.csv"
    code = main(["phase-dist", "--e13", "0.5", "--e24", "1.0",
                 "--signal", "coherent:1,0", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "alpha,p_ideal,p_squeeze,p_beamsplitter"
    assert len(lines) == 2048 + 1
    summary = json.loads((tmp_path / "dist.csv.summary.json").read_text())
    assert summary["var_min_ideal"] == pytest.approx(0.759, abs=2e-3)
    assert summary["var_min_squeeze"] == pytest.approx(1.135, abs=2e-3)
    assert summary["var_min_beamsplitter"] == pytest.approx(1.249, abs=2e-3)


def test_sweep_outputs(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--grid", "20", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "e13,e24,a,eps_eff,gamma"
    assert len(lines) == 400 + 1
    summary = json.loads((tmp_path / "sweep.csv.summary.json").read_text())
    assert summary["max_gamma"] > 1.1


def test_sweep_parametric_columns(tmp_path):
    out = tmp_path / "param.csv"
    assert main(["sweep", "--grid", "10", "--parametric",
                 "--out", str(out)]) == EXIT_OK
    assert out.read_text().splitlines()[0] == "a,gamma"


def test_sample_reruns_byte_identical(tmp_path):
    args = ["sample", "--e13", "0.5", "--e24", "1.0", "--signal", "coherent:1,0",
            "--events", "2000", "--seed", "3", "--bins", "32"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(out1)]) == EXIT_OK
    assert main(args + ["--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    assert (tmp_path / "a.csv.hist.csv").read_bytes() == \
        (tmp_path / "b.csv.hist.csv").read_bytes()
    report = json.loads((tmp_path / "a.csv.report.json").read_text())
    assert report["events"] == 2000 and report["seed"] == 3
    hist_lines = (tmp_path / "a.csv.hist.csv").read_text().splitlines()
    assert hist_lines[0] == "bin_lo,bin_hi,count"
    assert sum(int(l.split(",")[2]) for l in hist_lines[1:]) == 2000


def test_build_config_defaults():
    args = build_parser().parse_args(["compensate"])
    cfg = build_config(args)
    assert (cfg.eps13, cfg.eps24) == (1.0, 1.0)
    assert cfg.cutoff == 64 and cfg.seed == 0 and cfg.signal == "coherent:1,0"
