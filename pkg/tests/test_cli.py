import json
from pathlib import Path

import pandas as pd
import pytest

from app.run_tomography import RunConfig, main
from core.errors import ValidationError
from reconstruction.pattern_tomography import required_angle_count

SETTINGS = str(Path(__file__).parent.parent / "config" / "config.yaml")


def cli(*args):
    return main(["--settings", SETTINGS, *[str(a) for a in args]])


def test_run_config_round_trip(tmp_path):
    config = RunConfig(command="reconstruct", dim=5, tolerances={"trace": 1e-9})
    path = config.save(str(tmp_path / "run.json"))
    assert RunConfig.load(path) == config

    with pytest.raises(ValidationError):
        RunConfig.from_dict({"command": "simulate", "colour": "blue"})
    with pytest.raises(ValidationError):
        RunConfig(command="plot", out=str(tmp_path)).validate()
    with pytest.raises(ValidationError):
        RunConfig(dim=0, out=str(tmp_path)).validate()
    with pytest.raises(ValidationError):
        RunConfig.load(str(tmp_path / "missing.json"))


def test_run_config_reads_json_and_yaml_numbers(tmp_path):
    config = RunConfig(tolerances={"trace": 1e-09, "edge_mass": 1e-6})
    back = RunConfig.load(config.save(str(tmp_path / "run.json")))
    assert back.tolerances == {"trace": 1e-09, "edge_mass": 1e-6}
    assert isinstance(back.tolerances["trace"], float)

    (tmp_path / "run.yaml").write_text("command: verify-lemmas\ntolerances:\n  trace: 1e-9\n")
    loaded = RunConfig.load(str(tmp_path / "run.yaml"))
    assert loaded.tolerances == {"trace": 1e-9}
    assert loaded.command == "verify-lemmas"

    (tmp_path / "broken.json").write_text("{not json")
    with pytest.raises(ValidationError):
        RunConfig.load(str(tmp_path / "broken.json"))
    with pytest.raises(ValidationError):
        RunConfig.from_dict({"tolerances": {"trace": "tiny"}})


def test_simulate_writes_files_and_is_deterministic(tmp_path):
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        code = cli("--command", "simulate", "--state", "vacuum", "--dim", 2,
                   "--angles", 4, "--samples", 200, "--seed", 3, "--out", out)
        assert code == 0
        outputs.append(out)

    first, second = outputs
    csvs = sorted(p.name for p in first.glob("samples_*.csv"))
    assert csvs == [f"samples_{j:03d}.csv" for j in range(4)]
    for name in csvs:
        assert (first / name).read_bytes() == (second / name).read_bytes()

    truth = json.loads((first / "ground_truth.json").read_text())
    assert truth["dim"] == 2
    assert truth["state"]["kind"] == "number"
    run_config = json.loads((first / "run_config.json").read_text())
    assert run_config["seed"] == 3 and run_config["samples"] == 200

    frame = pd.read_csv(first / "samples_002.csv")
    assert list(frame.columns) == ["theta_radians", "x_value"]
    assert len(frame) == 200


def test_exact_simulate_then_reconstruct(tmp_path):
    angles = required_angle_count(3, 2) + 1
    assert cli("--command", "simulate", "--state", "number:1", "--dim", 3,
               "--angles", angles, "--samples", 0, "--out", tmp_path) == 0
    assert len(list(tmp_path.glob("density_*.json"))) == angles

    assert cli("--command", "reconstruct", "--dim", 3, "--out", tmp_path) == 0
    result = json.loads((tmp_path / "reconstruction.json").read_text())
    assert result["diagnostics"]["mode"] == "exact"
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["fidelity"] >= 1 - 1e-8


def test_config_file_is_copied(tmp_path):
    source = tmp_path / "run.json"
    out = tmp_path / "out"
    RunConfig(command="simulate", dim=2, angles=4, samples=50, out=str(out), settings=SETTINGS).save(str(source))
    assert main(["--config", str(source)]) == 0
    assert (out / "run_config_input.json").read_bytes() == source.read_bytes()


def test_tolerance_overrides_reach_the_run(tmp_path):
    def run_with(name, tolerances):
        source = tmp_path / f"{name}.json"
        RunConfig(command="simulate", state="thermal:0.1", dim=4, angles=4, samples=50,
                  out=str(tmp_path / name), settings=SETTINGS, tolerances=tolerances).save(str(source))
        return main(["--config", str(source)])

    assert run_with("default", {}) == 2
    assert run_with("loose", {"edge_mass": 1e-3}) == 0
    assert run_with("unknown", {"edge": 1e-3}) == 2
    error = json.loads((tmp_path / "unknown" / "error.json").read_text())
    assert error["details"]["unknown"] == ["edge"]


def test_errors_exit_with_status_and_report(tmp_path, capsys):
    code = cli("--command", "simulate", "--state", "squeezed:1", "--dim", 4, "--out", tmp_path)
    assert code == 2
    error = json.loads((tmp_path / "error.json").read_text())
    assert error["exit_code"] == 2
    assert "squeezed" in error["message"]
    assert '"exit_code": 2' in capsys.readouterr().err

    empty = tmp_path / "empty"
    empty.mkdir()
    assert cli("--command", "reconstruct", "--dim", 2, "--out", empty) == 2

    strict = tmp_path / "strict"
    assert cli("--command", "simulate", "--state", "coherent:2", "--dim", 4,
               "--angles", 8, "--samples", 10, "--out", strict) == 2
    assert cli("--command", "simulate", "--state", "coherent:2", "--dim", 4,
               "--angles", 8, "--samples", 10, "--out", strict, "--no-strict") == 0


def test_compare_phase_space(tmp_path):
    assert cli("--command", "compare-phase-space", "--state", "vacuum", "--dim", 2,
               "--angles", 16, "--out", tmp_path) == 0
    for name in ("wigner_direct.csv", "wigner_radon.csv", "husimi.csv"):
        assert (tmp_path / name).exists()
    report = json.loads((tmp_path / "phase_space_report.json").read_text())
    assert report["wigner_integral"] == pytest.approx(1.0, abs=1e-3)
    assert report["husimi_integral"] == pytest.approx(1.0, abs=1e-3)
    assert not report["weyl_scan"]["completeness_suspect"]

    assert cli("--command", "compare-phase-space", "--dim", 4, "--angles", 4, "--out", tmp_path / "few") == 2


@pytest.mark.slow
def test_verify_lemmas(tmp_path):
    assert cli("--command", "verify-lemmas", "--dim", 25, "--out", tmp_path) == 0
    table = pd.read_csv(tmp_path / "suites.csv")
    assert table["passed"].all()
    assert len(table) == 6
