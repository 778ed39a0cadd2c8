import json
import os
import shutil
import subprocess
from pathlib import Path

import numpy as np
import pytest

import codesign

DATA = Path(__file__).resolve().parents[2] / "tests" / "data"


def test_scenarios_listed():
    assert set(codesign.scenario_names()) >= {"cam-follower", "three-squares", "gripper-cams"}


def test_scenario_config_is_json():
    cfg = json.loads(codesign.scenario_config("three-squares", 0.25))
    assert len(cfg["parts"]) == 3


def test_unknown_scenario_raises():
    with pytest.raises(codesign.ConfigError, match="cam-follower"):
        codesign.scenario_config("pendulum")


def test_translating_squares_measure():
    g = codesign.initial_collision(codesign.scenario_config("translating-squares"))
    assert g.shape == (2, 2)
    assert 0.2375 <= g[0, 1] <= 0.2625
    assert g[0, 0] == 0.0


def test_uniaxial_tsf():
    assert abs(codesign.uniaxial_tsf(1.0, 0.3) - 273 / 91) <= 1e-12


def test_disjoint_run_is_collision_free_at_once():
    out = codesign.run((DATA / "disjoint_static.json").read_text())
    assert out["converged"]
    assert out["outer_iterations"] == 0
    assert all(r["G"] == 0.0 for r in out["rows"])
    assert [d.shape for d in out["designs"]] == [(8, 8), (8, 8)]
    assert np.all(out["designs"][0] == 1.0)


def test_bad_config_raises():
    with pytest.raises(codesign.ConfigError, match="spacing"):
        codesign.run((DATA / "negative_spacing.json").read_text())


def _cli():
    exe = os.environ.get("CODESIGN_CLI") or shutil.which("codesign")
    if not exe or not Path(exe).exists():
        pytest.skip("command-line tool not available")
    return exe


def test_cli_config_error_exit_code():
    proc = subprocess.run([_cli(), "run", "--config", str(DATA / "negative_spacing.json")], capture_output=True)
    assert proc.returncode == 2
    assert b"spacing" in proc.stderr
