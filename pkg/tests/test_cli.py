"""Command-line front end: parsing, exit codes, and printed summaries."""

import json
import math

import pytest

from conical_fronts.cli import VERBS, build_parser, main


# ----------------------------------------------------------------- parsing

def test_parser_accepts_every_verb_with_flags():
    parser = build_parser()
    for verb in VERBS:
        args = parser.parse_args([verb, "--config", "c.json", "--out", "o",
                                  "--jobs", "2", "--grid-scale", "1.5"])
        assert args.verb == verb
        assert args.config == "c.json"
        assert args.out == "o"
        assert args.jobs == 2
        assert args.grid_scale == 1.5


def test_parser_defaults():
    args = build_parser().parse_args(["validate"])
    assert args.config is None
    assert args.out is None
    assert args.jobs == 1
    assert args.grid_scale == 1.0


def test_parser_rejects_unknown_verb_and_missing_verb(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["frobnicate"])
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
    capsys.readouterr()


# ----------------------------------------------------------------- running

def test_validate_verb_passes_and_prints_stage_lines(tmp_path, capsys):
    code = main(["validate", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "stages: validate" in out
    assert "stage validate" in out
    assert "summary: PASS" in out
    assert (tmp_path / "manifest.json").exists()


def test_solve_planar_verb_prints_the_oracle_speed(tmp_path, capsys):
    code = main(["solve-planar", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "stages: validate -> solve-planar" in out
    assert "planar-1d-oracle" in out
    assert "c = 0.4953702" in out
    assert "summary: PASS" in out


def test_failed_run_exits_nonzero(tmp_path, capsys):
    cfg = {"problem": {"alphas": [math.pi / 3]},
           "strip_grid": {"nx": 32, "ny": 64, "y_max": 4.0,
                          "auto_extend": False}}
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text(json.dumps(cfg))
    code = main(["solve-pulsating", "--config", str(cfg_path),
                 "--out", str(tmp_path / "out")])
    out = capsys.readouterr().out
    assert code == 1
    stage_lines = [ln for ln in out.splitlines()
                   if ln.startswith("stage solve-pulsating")]
    assert stage_lines and "failed" in stage_lines[0]
    assert "summary: FAIL" in out
