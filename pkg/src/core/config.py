"""
Configuration and Logging Setup

Loads config/config.yaml and wires the `logging:` section into the standard
logging module. Tolerance defaults live here so every module reads the same
numbers; the YAML file (and RunConfig overrides) can replace any of them.
"""

import logging
import os
from typing import Dict, Optional

import yaml

from core.errors import ConfigError

DEFAULT_CONFIG_PATH = "config/config.yaml"

DEFAULT_TOLERANCES = {
    "hermitian": 1e-12,
    "trace": 1e-12,
    "min_eigenvalue": -1e-10,
    "edge_mass": 1e-6,
    "pdf_normalization": 1e-8,
    "pdf_negativity": -1e-12,
    "imag_residue": 1e-12,
    "quadrature_doubling": 1e-9,
    "closed_form_relative": 1e-7,
    "closed_form_absolute": 1e-9,
    "recurrence_mismatch": 1e-9,
    "min_samples": 1000,
    "boundary_support": 1e-6,
    "weyl_zero": 1e-10,
    "weyl_suspect_fraction": 1e-3,
}


def load_config(config_path: str = DEFAULT_CONFIG_PATH) -> Dict:
    """
    Load configuration from YAML file.

    Args:
        config_path: Path to config file

    Returns:
        Configuration dictionary

    Raises:
        FileNotFoundError: If the file does not exist
        ConfigError: If the file does not hold a mapping
    """
    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Config file not found: {config_path}")

    with open(config_path, 'r') as f:
        config = yaml.safe_load(f) or {}

    if not isinstance(config, dict):
        raise ConfigError(f"Config file must contain a mapping: {config_path}")

    return config


def get_section(config: Optional[Dict], name: str) -> Dict:
    """Return config[name] or an empty dict."""
    if not config:
        return {}
    return config.get(name, {}) or {}


def get_tolerance(config: Optional[Dict], name: str, overrides: Optional[Dict] = None) -> float:
    """
    Look up a tolerance: RunConfig overrides, then `tolerances:` in YAML, then defaults.

    Args:
        config: Loaded YAML config (may be None)
        name: Tolerance key, e.g. "closed_form_relative"
        overrides: Per-run overrides

    Returns:
        The tolerance value
    """
    if overrides and name in overrides:
        return float(overrides[name])
    tolerances = get_section(config, "tolerances")
    if name in tolerances:
        # YAML 1.1 reads 1e-9 as a string
        return float(tolerances[name])
    if name not in DEFAULT_TOLERANCES:
        raise ConfigError(f"Unknown tolerance: {name}")
    return DEFAULT_TOLERANCES[name]


def resolve_tolerances(config: Optional[Dict], overrides: Optional[Dict] = None) -> Dict[str, float]:
    """
    Every tolerance with overrides and YAML values applied.

    Raises:
        ConfigError: If the YAML section or the overrides name an unknown key
    """
    for source, values in (("tolerances", get_section(config, "tolerances")), ("overrides", overrides or {})):
        unknown = sorted(set(values) - set(DEFAULT_TOLERANCES))
        if unknown:
            raise ConfigError(f"Unknown tolerance keys in {source}: {', '.join(unknown)}", {"unknown": unknown})
    return {name: get_tolerance(config, name, overrides) for name in DEFAULT_TOLERANCES}


def setup_logging(config: Optional[Dict] = None, level: Optional[str] = None) -> None:
    """
    Configure root logging from the `logging:` config section.

    Args:
        config: Loaded config; uses logging.level and logging.file
        level: Explicit level name, wins over the config
    """
    section = get_section(config, "logging")
    level_name = (level or section.get("level", "INFO")).upper()
    handlers = [logging.StreamHandler()]

    log_file = section.get("file")
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        handlers=handlers,
        force=True,
    )
