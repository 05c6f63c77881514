import logging
from pathlib import Path

import pytest

from core.config import (
    DEFAULT_TOLERANCES,
    get_section,
    get_tolerance,
    load_config,
    resolve_tolerances,
    setup_logging,
)
from core.errors import CertificationError, ConfigError, TomographyError, TruncationError

SETTINGS = Path(__file__).parent.parent / "config" / "config.yaml"


def test_load_repository_config():
    config = load_config(str(SETTINGS))
    assert get_section(config, "fock")["gh_order"] == 256
    assert get_section(config, "dawson")["recurrence_radius"] == 4.0
    assert get_section(config, "missing") == {}
    assert get_section(None, "fock") == {}


def test_load_config_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(str(tmp_path / "nope.yaml"))
    bad = tmp_path / "bad.yaml"
    bad.write_text("- a\n- b\n")
    with pytest.raises(ConfigError):
        load_config(str(bad))


def test_tolerance_precedence():
    config = {"tolerances": {"trace": 1e-10}}
    assert get_tolerance(None, "trace") == DEFAULT_TOLERANCES["trace"]
    assert get_tolerance(config, "trace") == 1e-10
    assert get_tolerance(config, "trace", {"trace": 1e-6}) == 1e-6
    with pytest.raises(ConfigError):
        get_tolerance(config, "nonsense")


def test_resolve_tolerances():
    resolved = resolve_tolerances(load_config(str(SETTINGS)))
    assert resolved == DEFAULT_TOLERANCES

    config = {"tolerances": {"trace": "1e-9"}}
    resolved = resolve_tolerances(config, {"pdf_negativity": -1e-6})
    assert resolved["trace"] == 1e-9
    assert resolved["pdf_negativity"] == -1e-6
    assert set(resolved) == set(DEFAULT_TOLERANCES)

    with pytest.raises(ConfigError):
        resolve_tolerances({"tolerances": {"tracee": 1e-9}})
    with pytest.raises(ConfigError):
        resolve_tolerances(None, {"doubling": 1e-9})


def test_setup_logging_writes_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    setup_logging({"logging": {"level": "debug", "file": str(log_file)}})
    logging.getLogger("core.test").debug("hello")
    logging.shutdown()
    assert "hello" in log_file.read_text()
    setup_logging(level="WARNING")
    assert logging.getLogger().level == logging.WARNING


def test_error_payloads():
    error = TruncationError("edge mass too large", {"edge_mass": 0.1})
    payload = error.to_dict()
    assert payload["exit_code"] == 2
    assert payload["details"] == {"edge_mass": 0.1}
    assert payload["error"] == "truncation-edge-mass"
    assert CertificationError("x").exit_code == 3
    assert isinstance(error, TomographyError)
