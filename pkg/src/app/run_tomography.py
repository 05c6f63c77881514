"""
Tomography Runner

Command-line entry point wiring the library into reproducible runs:
1. simulate            - state -> per-angle sample CSVs (or exact densities) + ground truth
2. reconstruct         - per-angle data -> reconstruction.json (+ report against ground truth)
3. verify-lemmas       - pass/fail table of the verification suites
4. compare-phase-space - direct vs back-projected Wigner surface, Husimi surface, Weyl scan

Every run copies its configuration into the output directory. Library errors
end the run with error.json and exit status 2 (validation) or 3 (certification).

Usage:
    python src/app/run_tomography.py --command simulate --state vacuum --dim 4 --angles 64 --samples 100000 --seed 7 --out runs/vacuum
    python src/app/run_tomography.py --command reconstruct --dim 4 --out runs/vacuum
    python src/app/run_tomography.py --command verify-lemmas --dim 25
"""

import json
import math
import os
import shutil
import sys
import traceback
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, List, Optional

import yaml

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from core.config import (
    DEFAULT_CONFIG_PATH,
    get_section,
    load_config,
    resolve_tolerances,
    setup_logging,
)
from core.errors import CertificationError, TomographyError, ValidationError
from core.fock_core import (
    build_hermite_table,
    density_matrix_from_json,
    density_matrix_to_json,
    fock_config_from_dict,
    quadrature_pdf,
)
from core.special_functions import evaluator_from_dict
from phase_space.phase_space import (
    RadonConfig,
    compare_wigner_paths,
    grid_for_dim,
    grid_to_csv,
    husimi,
    smoothed_wigner,
    weyl_condition_scan,
)
from reconstruction.pattern_tomography import (
    compare_to_truth,
    load_quadrature_data,
    make_uniform_angle_grid,
    reconstruct,
    result_to_json,
    write_densities,
)
from simulation.measurement_sim import (
    RNG_NAME,
    make_state,
    parse_state_spec,
    sample_all_angles,
    write_sample_batches,
)
from verification.lemma_suites import run_all_suites, suite_table

COMMANDS = ("simulate", "reconstruct", "verify-lemmas", "compare-phase-space")

GROUND_TRUTH_FILE = "ground_truth.json"
RUN_CONFIG_FILE = "run_config.json"
ERROR_FILE = "error.json"


@dataclass
class RunConfig:
    """
    Everything a run depends on.

    Attributes:
        command: One of COMMANDS
        state: State description (see parse_state_spec)
        dim: Truncation dimension
        angles: Number of angles on the uniform [0, 2pi) grid
        samples: Samples per angle; 0 writes exact densities instead
        seed: Base seed (angle j uses substream (seed, j))
        out: Output directory
        input: Data directory for reconstruct (defaults to out)
        settings: Library YAML config
        strict: Truncation-edge violations raise instead of warn
        lemma5_states: Random states in the dual-path suite
        tolerances: Overrides for core.config tolerances
    """

    command: str = "simulate"
    state: str = "vacuum"
    dim: int = 4
    angles: int = 64
    samples: int = 100000
    seed: int = 7
    out: str = "runs/latest"
    input: Optional[str] = None
    settings: str = DEFAULT_CONFIG_PATH
    strict: bool = True
    lemma5_states: int = 50
    tolerances: Dict[str, float] = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        """
        Raises:
            ValidationError: On an unknown command, non-positive counts or an unwritable output directory
        """
        if self.command not in COMMANDS:
            raise ValidationError(f"Unknown command '{self.command}'; expected one of {COMMANDS}")
        if self.dim < 1 or self.angles < 1 or self.samples < 0 or self.lemma5_states < 1:
            raise ValidationError(
                "dim, angles and lemma5_states must be positive and samples non-negative",
                {"dim": self.dim, "angles": self.angles, "samples": self.samples},
            )
        try:
            os.makedirs(self.out, exist_ok=True)
        except OSError as e:
            raise ValidationError(f"Cannot create output directory {self.out}: {e}")
        if not os.access(self.out, os.W_OK):
            raise ValidationError(f"Output directory not writable: {self.out}")
        return self

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"Unknown RunConfig keys: {sorted(unknown)}")
        data = dict(data)
        try:
            # YAML 1.1 reads exponent-only floats such as 1e-9 as strings
            data["tolerances"] = {k: float(v) for k, v in (data.get("tolerances") or {}).items()}
        except (TypeError, ValueError) as e:
            raise ValidationError(f"Tolerance overrides must be numbers: {e}")
        return cls(**data)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        """Read a RunConfig file (JSON, or YAML with the same keys)."""
        if not os.path.exists(path):
            raise ValidationError(f"Run config not found: {path}")
        with open(path, 'r') as f:
            try:
                data = json.load(f) if path.endswith(".json") else yaml.safe_load(f) or {}
            except (json.JSONDecodeError, yaml.YAMLError) as e:
                raise ValidationError(f"Cannot parse run config {path}: {e}")
        if not isinstance(data, dict):
            raise ValidationError(f"Run config must hold a mapping: {path}")
        return cls.from_dict(data)

    def save(self, path: str) -> str:
        with open(path, 'w') as f:
            json.dump(self.to_dict(), f, indent=2)
        return path


def _write_json(payload: Dict, path: str) -> str:
    with open(path, 'w') as f:
        json.dump(payload, f, indent=2)
    return path


def _load_settings(run_config: RunConfig) -> Dict:
    if os.path.exists(run_config.settings):
        return load_config(run_config.settings)
    if run_config.settings != DEFAULT_CONFIG_PATH:
        raise ValidationError(f"Settings file not found: {run_config.settings}")
    return {}


def _build_state(run_config: RunConfig, tol: Dict[str, float]):
    spec = parse_state_spec(run_config.state, run_config.dim, seed=run_config.seed)
    rho = make_state(
        spec,
        edge_tol=tol["edge_mass"],
        strict=run_config.strict,
        trace_tol=tol["trace"],
        eig_tol=tol["min_eigenvalue"],
        hermitian_tol=tol["hermitian"],
    )
    return spec, rho


def _evaluator(settings: Dict, tol: Dict[str, float]):
    return replace(evaluator_from_dict(get_section(settings, "dawson")), mismatch_tol=tol["recurrence_mismatch"])


def _fock_config(settings: Dict, tol: Dict[str, float], dim: int):
    return fock_config_from_dict(get_section(settings, "fock"), dim=dim, doubling_tol=tol["quadrature_doubling"])


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def run_simulate(run_config: RunConfig, settings: Dict) -> Dict:
    print("\n[2/4] Building state...")
    tol = resolve_tolerances(settings, run_config.tolerances)
    spec, rho = _build_state(run_config, tol)
    print(f"  State: {spec.label} (dim={rho.dim}, trace={rho.trace():.12f})")

    print("\n[3/4] Generating quadrature data...")
    grid = make_uniform_angle_grid(run_config.angles)
    cfg = _fock_config(settings, tol, run_config.dim)
    # make_state has already checked the truncation
    edge_tol = math.inf
    if run_config.samples == 0:
        table = build_hermite_table(rho.dim - 1, cfg.x_grid)
        dists = [
            quadrature_pdf(rho, float(t), table, edge_tol=edge_tol, imag_tol=tol["imag_residue"])
            for t in grid.angles
        ]
        paths = write_densities(dists, run_config.out)
        print(f"  Exact densities: {len(paths)} files")
    else:
        grid_points = get_section(settings, "simulation").get("grid_points", 4096)
        batches = sample_all_angles(rho, grid.angles, run_config.samples, run_config.seed,
                                    cfg=cfg, grid_points=grid_points, edge_tol=edge_tol)
        paths = write_sample_batches(batches, run_config.out)
        print(f"  Sample files: {len(paths)} x {run_config.samples} outcomes (rng={RNG_NAME})")

    print("\n[4/4] Saving ground truth...")
    truth = density_matrix_to_json(rho)
    truth["state"] = spec.to_dict()
    _write_json(truth, os.path.join(run_config.out, GROUND_TRUTH_FILE))
    return {"files": len(paths), "state": spec.label}


def run_reconstruct(run_config: RunConfig, settings: Dict) -> Dict:
    source = run_config.input or run_config.out
    tol = resolve_tolerances(settings, run_config.tolerances)
    print(f"\n[2/4] Loading quadrature data from {source}...")
    try:
        data = load_quadrature_data(source)
    except FileNotFoundError as e:
        raise ValidationError(str(e))
    print(f"  Angles: {len(data)}")

    print("\n[3/4] Reconstructing...")
    cfg = _fock_config(settings, tol, run_config.dim)
    clip = get_section(settings, "tomography").get("clip_negative", True)
    result = reconstruct(
        data, run_config.dim, cfg, _evaluator(settings, tol),
        clip_negative=clip,
        min_samples=int(tol["min_samples"]),
        rel_tol=tol["closed_form_relative"],
        zero_tol=tol["closed_form_absolute"],
        normalization_tol=tol["pdf_normalization"],
        negativity_tol=tol["pdf_negativity"],
    )
    result_to_json(result, os.path.join(run_config.out, "reconstruction.json"))
    print(f"  Mode: {result.diagnostics['mode']}, trace(rho_hat) = {result.diagnostics['trace_hat']:.9f}")

    print("\n[4/4] Comparing with ground truth...")
    truth_path = os.path.join(source, GROUND_TRUTH_FILE)
    summary = {"mode": result.diagnostics["mode"]}
    if os.path.exists(truth_path):
        # non-strict runs may store a plain truncation whose trace is below 1
        truth = density_matrix_from_json(
            truth_path, trace_tol=math.inf, eig_tol=tol["min_eigenvalue"], hermitian_tol=tol["hermitian"]
        )
        report = compare_to_truth(result, truth)
        _write_json(report, os.path.join(run_config.out, "report.json"))
        print(f"  Fidelity: {report['fidelity']:.9f}")
        print(f"  Trace distance: {report['trace_distance']:.3e}")
        summary.update(report)
    else:
        print("  No ground truth found; skipped")
    return summary


def run_verify(run_config: RunConfig, settings: Dict) -> Dict:
    print("\n[2/4] Preparing suites...")
    tol = resolve_tolerances(settings, run_config.tolerances)
    gh_order = get_section(settings, "fock").get("gh_order", 256)
    evaluator = _evaluator(settings, tol)
    print(f"  dim={run_config.dim}, gh_order={gh_order}, lemma5 states={run_config.lemma5_states}")

    print("\n[3/4] Running suites...")
    results = run_all_suites(
        dim=run_config.dim, gh_order=gh_order, evaluator=evaluator,
        seed=run_config.seed, lemma5_states=run_config.lemma5_states,
        rel_tol=tol["closed_form_relative"],
        abs_tol=tol["closed_form_absolute"],
        doubling_tol=tol["quadrature_doubling"],
    )
    table = suite_table(results)
    print(table.to_string(index=False))

    print("\n[4/4] Saving results...")
    table.to_csv(os.path.join(run_config.out, "suites.csv"), index=False, float_format="%.6e")
    _write_json({"suites": [r.to_dict() for r in results]}, os.path.join(run_config.out, "suites.json"))

    failed = [r.name for r in results if not r.passed]
    if failed:
        raise CertificationError(f"Verification suites failed: {', '.join(failed)}", {"failed": failed})
    return {"suites": len(results), "failed": 0}


def run_compare(run_config: RunConfig, settings: Dict) -> Dict:
    print("\n[2/4] Building state...")
    tol = resolve_tolerances(settings, run_config.tolerances)
    spec, rho = _build_state(run_config, tol)
    print(f"  State: {spec.label}")

    print("\n[3/4] Computing phase-space surfaces...")
    section = get_section(settings, "phase_space")
    radon = RadonConfig.from_dict({**section.get("radon", {}), "angle_count": run_config.angles})
    radon.check_dim(rho.dim)
    grid = grid_for_dim(rho.dim, section.get("grid_points", 256))
    paths = compare_wigner_paths(rho, radon, grid, boundary_tol=tol["boundary_support"])
    q_surface = husimi(rho, grid, edge_tol=tol["edge_mass"], negativity_tol=tol["pdf_negativity"])
    smoothed = smoothed_wigner(paths["direct"])
    scan = weyl_condition_scan(
        rho, grid,
        zero_tol=tol["weyl_zero"],
        suspect_fraction=tol["weyl_suspect_fraction"],
    )

    print("\n[4/4] Saving surfaces...")
    grid_to_csv(paths["direct"], os.path.join(run_config.out, "wigner_direct.csv"))
    grid_to_csv(paths["radon"], os.path.join(run_config.out, "wigner_radon.csv"))
    grid_to_csv(q_surface, os.path.join(run_config.out, "husimi.csv"))

    report = {
        "state": spec.label,
        "filter": radon.filter,
        "angles": radon.angle_count,
        "sup_error": paths["sup_error"],
        "center_direct": paths["center_direct"],
        "center_radon": paths["center_radon"],
        "wigner_integral": paths["direct"].integral(),
        "husimi_integral": q_surface.integral(),
        "husimi_vs_smoothed_wigner": float(abs(q_surface.values - smoothed.values).max()),
        "weyl_scan": scan.to_dict(),
    }
    _write_json(report, os.path.join(run_config.out, "phase_space_report.json"))
    print(f"  sup |W_radon - W_direct| = {report['sup_error']:.4f}")
    print(f"  W(0,0): direct {report['center_direct']:.5f}, radon {report['center_radon']:.5f}")
    return report


HANDLERS = {
    "simulate": run_simulate,
    "reconstruct": run_reconstruct,
    "verify-lemmas": run_verify,
    "compare-phase-space": run_compare,
}


def run(run_config: RunConfig, config_file: Optional[str] = None) -> int:
    """
    Execute one command.

    Args:
        run_config: The run
        config_file: RunConfig file the run came from; copied verbatim into the output directory

    Returns:
        Exit status: 0 success, 2 validation error, 3 certification failure, 1 anything else
    """
    print("=" * 70)
    print(f"QUADRATURE TOMOGRAPHY - {run_config.command.upper()}")
    print("=" * 70)

    try:
        print("\n[1/4] Loading configuration...")
        run_config.validate()
        settings = _load_settings(run_config)
        setup_logging(settings)
        run_config.save(os.path.join(run_config.out, RUN_CONFIG_FILE))
        if config_file:
            shutil.copyfile(config_file, os.path.join(run_config.out, "run_config_input" + Path(config_file).suffix))
        print(f"  Output directory: {run_config.out}")

        summary = HANDLERS[run_config.command](run_config, settings)
    except TomographyError as e:
        payload = e.to_dict()
        if os.path.isdir(run_config.out):
            _write_json(payload, os.path.join(run_config.out, ERROR_FILE))
        print(json.dumps(payload), file=sys.stderr)
        return e.exit_code
    except Exception as e:
        print(f"\nERROR: {str(e)}")
        traceback.print_exc()
        return 1

    print("\n" + "=" * 70)
    print("RUN COMPLETE!")
    print("=" * 70)
    for key, value in summary.items():
        if not isinstance(value, dict):
            print(f"  - {key}: {value}")
    return 0


def build_parser():
    import argparse

    parser = argparse.ArgumentParser(description='Quadrature pattern-function tomography')
    parser.add_argument('--command', type=str, choices=COMMANDS, default=None, help='What to run')
    parser.add_argument('--state', type=str, default=None,
                        help='vacuum, number:N, coherent:A, thermal:NBAR, cat:A, cat-:A, random:R')
    parser.add_argument('--dim', type=int, default=None, help='Truncation dimension')
    parser.add_argument('--angles', type=int, default=None, help='Number of angles')
    parser.add_argument('--samples', type=int, default=None, help='Samples per angle (0 = exact densities)')
    parser.add_argument('--seed', type=int, default=None, help='Base seed')
    parser.add_argument('--out', type=str, default=None, help='Output directory')
    parser.add_argument('--input', type=str, default=None, help='Data directory for reconstruct (default: --out)')
    parser.add_argument('--config', type=str, default=None, help='RunConfig file (JSON); flags override it')
    parser.add_argument('--settings', type=str, default=None,
                        help=f'Library settings YAML (default: {DEFAULT_CONFIG_PATH})')
    parser.add_argument('--no-strict', action='store_true', help='Warn instead of failing on truncation-edge mass')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        run_config = RunConfig.load(args.config) if args.config else RunConfig()
    except TomographyError as e:
        print(json.dumps(e.to_dict()), file=sys.stderr)
        return e.exit_code

    for name in ("command", "state", "dim", "angles", "samples", "seed", "out", "input", "settings"):
        value = getattr(args, name)
        if value is not None:
            setattr(run_config, name, value)
    if args.no_strict:
        run_config.strict = False

    return run(run_config, config_file=args.config)


if __name__ == "__main__":
    """
    Run from the command line.

    Usage:
        python src/app/run_tomography.py --command verify-lemmas --dim 25
    """
    sys.exit(main())
