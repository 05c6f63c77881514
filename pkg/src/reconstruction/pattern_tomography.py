"""
Pattern-Function Tomography Module

Recovers <n|T|n+k> from rotated-quadrature statistics:
- E_theta[f^(k+2l)] per angle (exact integral against p_theta, or sample mean)
- c_{k,l} = mean over angles of exp(-ik theta) E_theta[f^(k+2l)]
- forward substitution through the lower-triangular system
  c_{k,l} = sum_{n<=l} <n|T|n+k> <n+k|f^(k+2l)(Q)|n>

On a uniform grid of J >= 2(dim-1) + 1 + k angles the angular mean is exact,
because E_theta[g] is a trigonometric polynomial in theta of degree <= dim-1.
"""

import glob
import json
import logging
import os
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
from scipy.linalg import eigh, solve_triangular

from core.errors import (
    ClosedFormMismatchError,
    GridTooCoarseError,
    InsufficientSamplesWarning,
    ValidationError,
)
from core.fock_core import (
    TWO_PI,
    DensityMatrix,
    FockConfig,
    QuadratureDistribution,
    fidelity,
    operator_matrix,
    trace_distance,
)
from core.special_functions import (
    DEFAULT_EVALUATOR,
    DawsonEvaluator,
    lemma4_diagonal,
    pattern_functions,
    pattern_kernel,
)
from simulation.measurement_sim import SampleBatch, read_sample_batches

logger = logging.getLogger(__name__)

UNIFORM_TOL = 1e-12


# ---------------------------------------------------------------------------
# Angle grids
# ---------------------------------------------------------------------------

def required_angle_count(dim: int, k_max: int) -> int:
    """Smallest J for which the uniform angular mean is exact: 2(dim-1) + 1 + k_max."""
    return 2 * (dim - 1) + 1 + k_max


@dataclass(frozen=True)
class AngleGrid:
    """
    Increasing angles in [0, 2pi) with angular-mean weights summing to 1.

    Uniform grids get weights 1/J; others get periodic trapezoid weights.
    """

    angles: np.ndarray
    uniform: bool
    weights: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return int(self.angles.size)

    def is_exact_for(self, dim: int, k_max: int) -> bool:
        return self.uniform and self.count >= required_angle_count(dim, k_max)

    def mean(self, k: int, values: np.ndarray) -> complex:
        """sum_j w_j exp(-ik theta_j) values_j."""
        return complex(np.sum(self.weights * np.exp(-1j * k * self.angles) * values))


def make_uniform_angle_grid(count: int) -> AngleGrid:
    """
    theta_j = 2 pi j / J.

    Example:
        >>> bool(np.isclose(make_uniform_angle_grid(4).angles[1], np.pi / 2))
        True
    """
    if count < 1:
        raise ValidationError(f"Angle count must be >= 1, got {count}")
    angles = TWO_PI * np.arange(count) / count
    return AngleGrid(angles=angles, uniform=True, weights=np.full(count, 1.0 / count))


def make_angle_grid(angles: Sequence[float]) -> AngleGrid:
    """
    Wrap arbitrary angles; detects the uniform case.

    Raises:
        ValidationError: If angles are not strictly increasing inside [0, 2pi)
    """
    theta = np.asarray(angles, dtype=float)
    if theta.ndim != 1 or theta.size < 1:
        raise ValidationError("At least one angle is required")
    if np.any(theta < 0) or np.any(theta >= TWO_PI):
        raise ValidationError("Angles must lie in [0, 2pi)")
    if np.any(np.diff(theta) <= 0):
        raise ValidationError("Angles must be strictly increasing")

    count = theta.size
    uniform_angles = TWO_PI * np.arange(count) / count
    if np.max(np.abs(theta - uniform_angles)) <= UNIFORM_TOL:
        return AngleGrid(angles=theta, uniform=True, weights=np.full(count, 1.0 / count))

    gaps = np.diff(np.concatenate([theta, [theta[0] + TWO_PI]]))
    weights = 0.5 * (gaps + np.roll(gaps, 1)) / TWO_PI
    return AngleGrid(angles=theta, uniform=False, weights=weights)


def jittered_angle_grid(count: int, jitter: float, seed: int = 0) -> AngleGrid:
    """Uniform grid with each angle moved by up to +-jitter (order preserved)."""
    rng = np.random.default_rng(seed)
    base = TWO_PI * np.arange(count) / count
    moved = base + rng.uniform(-jitter, jitter, size=count)
    moved[0] = abs(moved[0])
    return make_angle_grid(np.mod(moved, TWO_PI))


# ---------------------------------------------------------------------------
# Angular coefficients and the direct oracle
# ---------------------------------------------------------------------------

def angular_coefficient(
    k: int,
    expectations: Mapping[float, float],
    dim: Optional[int] = None
) -> complex:
    """
    (1/2pi) * integral of exp(-ik theta) E_theta[g] d theta as a discrete angular mean.

    Args:
        k: Offset (Fourier index)
        expectations: Angle -> E_theta[g]
        dim: Declared truncation; when given, the grid must satisfy the exactness bound

    Returns:
        Complex coefficient

    Raises:
        GridTooCoarseError: If dim is given and there are too few angles

    Example:
        >>> grid = make_uniform_angle_grid(8)
        >>> angular_coefficient(0, {float(t): 1.0 for t in grid.angles})
        (1+0j)
    """
    if k < 0:
        raise ValidationError(f"Offset must be >= 0, got {k}")
    angles = sorted(expectations)
    grid = make_angle_grid(angles)
    if dim is not None:
        _require_exact_grid(grid, dim, k)
    values = np.array([expectations[a] for a in angles], dtype=float)
    return grid.mean(k, values)


def _require_exact_grid(grid: AngleGrid, dim: int, k_max: int) -> None:
    needed = required_angle_count(dim, k_max)
    if grid.count < needed:
        raise GridTooCoarseError(
            f"{grid.count} angles cannot resolve dim={dim}, k={k_max}; need at least {needed}",
            {"angles": grid.count, "required": needed, "dim": dim, "k": k_max},
        )
    if not grid.uniform:
        logger.warning("Non-uniform angle grid: angular means use trapezoid weights and are not exact")


def lemma5_trace(
    rho: DensityMatrix,
    k: int,
    g: Union[Callable, np.ndarray],
    cfg: FockConfig
) -> complex:
    """
    sum_n <n|T|n+k> <n+k|g(Q)|n>, straight from rho and Gauss-Hermite matrix elements.

    Equals angular_coefficient(k, E[g]) on an exact angle grid.

    Args:
        rho: State
        k: Offset
        g: Kernel callable, or its matrix <m|g(Q)|n> already computed (at least dim x dim)
        cfg: Quadrature settings
    """
    if k < 0:
        raise ValidationError(f"Offset must be >= 0, got {k}")
    dim = rho.dim
    if k >= dim:
        return 0j
    G = np.asarray(g) if isinstance(g, np.ndarray) else operator_matrix(g, cfg, size=dim)
    if G.shape[0] < dim or G.shape[1] < dim:
        raise ValidationError(f"Operator matrix {G.shape} smaller than dim {dim}")
    n = np.arange(dim - k)
    return complex(np.sum(rho.entries[n, n + k] * G[n + k, n]))


# ---------------------------------------------------------------------------
# Pattern systems
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _pattern_operator(order: int, size: int, cfg: FockConfig, evaluator: DawsonEvaluator) -> np.ndarray:
    matrix = operator_matrix(pattern_kernel(order, evaluator), cfg, size=size)
    matrix.flags.writeable = False
    return matrix


@dataclass
class PatternSystem:
    """
    Lower-triangular system for one offset k.

    Attributes:
        k: Offset
        l_max: Highest ladder index
        raw: M[l][n] = <n+k|f^(k+2l)(Q)|n> as measured by quadrature (upper part zeroed)
        scale: Row scales M[l][l]
        scaled: raw / scale[:, None], unit diagonal; this is what gets solved
        zero_residual: max over n > l of |M[l][n]| / |M[l][l]|
        diagonal_residual: max relative deviation of M[l][l] from its closed form
        c: Measured coefficients c_{k,l}, once attached
    """

    k: int
    l_max: int
    raw: np.ndarray = field(repr=False)
    scale: np.ndarray = field(repr=False)
    scaled: np.ndarray = field(repr=False)
    zero_residual: float = 0.0
    diagonal_residual: float = 0.0
    c: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def M(self) -> np.ndarray:
        return self.raw

    def solve(self, c: np.ndarray) -> np.ndarray:
        """
        Forward substitution for x_l = <l|T|l+k> given c_{k,l}.

        Returns:
            Complex vector of length l_max + 1
        """
        c = np.asarray(c, dtype=complex)
        if c.shape != (self.l_max + 1,):
            raise ValidationError(f"Expected {self.l_max + 1} coefficients, got {c.shape}")
        self.c = c
        rhs = np.column_stack([c.real, c.imag]) / self.scale[:, None]
        solution = solve_triangular(self.scaled, rhs, lower=True, check_finite=True)
        return solution[:, 0] + 1j * solution[:, 1]

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Per-row |scaled M x - c / scale|."""
        if self.c is None:
            raise ValidationError("No coefficients attached")
        return np.abs(self.scaled @ x - self.c / self.scale)


def build_pattern_system(
    k: int,
    l_max: int,
    cfg: FockConfig,
    evaluator: Optional[DawsonEvaluator] = None,
    rel_tol: float = 1e-7,
    zero_tol: float = 1e-9
) -> PatternSystem:
    """
    Fill M[l][n] = <n+k|f^(k+2l)(Q)|n> for l, n <= l_max and certify it.

    Entries above the diagonal must vanish (within zero_tol times the row
    diagonal) and the diagonal must match 2^l (-1)^k sqrt(2^k l! (l+k)!).

    Args:
        k: Offset
        l_max: Highest ladder index
        cfg: Quadrature settings
        evaluator: Dawson evaluator (orders up to k + 2 l_max + 1 must be available)
        rel_tol: Diagonal tolerance
        zero_tol: Zero-structure tolerance, relative to the row diagonal

    Returns:
        PatternSystem

    Raises:
        ClosedFormMismatchError: If the diagonal or zero structure is off
        OrderOverflowError: If k + 2 l_max + 1 exceeds the evaluator's order cap
    """
    if k < 0 or l_max < 0:
        raise ValidationError(f"Need k >= 0 and l_max >= 0, got k={k}, l_max={l_max}")
    ev = evaluator or DEFAULT_EVALUATOR
    size = l_max + k + 1
    n = np.arange(l_max + 1)

    full = np.empty((l_max + 1, l_max + 1))
    for l in range(l_max + 1):
        G = _pattern_operator(k + 2 * l, size, cfg, ev)
        full[l] = G[n + k, n]

    expected = np.array([lemma4_diagonal(k, l) for l in range(l_max + 1)])
    diag = np.diag(full).copy()
    diagonal_residual = float(np.max(np.abs(diag - expected) / np.abs(expected)))
    if diagonal_residual > rel_tol:
        l_bad = int(np.argmax(np.abs(diag - expected) / np.abs(expected)))
        raise ClosedFormMismatchError(
            f"Pattern system k={k}: diagonal entry l={l_bad} is {diag[l_bad]:.12g}, "
            f"closed form {expected[l_bad]:.12g}",
            {"k": k, "l": l_bad, "value": float(diag[l_bad]), "expected": float(expected[l_bad])},
        )

    upper = np.triu(np.abs(full), 1) / np.abs(diag)[:, None]
    zero_residual = float(np.max(upper)) if l_max > 0 else 0.0
    if zero_residual > zero_tol:
        l_bad, n_bad = np.unravel_index(int(np.argmax(upper)), upper.shape)
        raise ClosedFormMismatchError(
            f"Pattern system k={k}: M[{l_bad}][{n_bad}] should vanish, relative size {zero_residual:.3e}",
            {"k": k, "l": int(l_bad), "n": int(n_bad), "relative": zero_residual},
        )

    raw = np.tril(full)
    logger.debug("Pattern system k=%d l_max=%d: diag residual %.2e, zero residual %.2e",
                 k, l_max, diagonal_residual, zero_residual)
    return PatternSystem(
        k=k,
        l_max=l_max,
        raw=raw,
        scale=diag,
        scaled=raw / diag[:, None],
        zero_residual=zero_residual,
        diagonal_residual=diagonal_residual,
    )


# ---------------------------------------------------------------------------
# Expectations from data
# ---------------------------------------------------------------------------

QuadratureData = Union[QuadratureDistribution, SampleBatch]


def expectations_from_data(
    data: Sequence[QuadratureData],
    max_order: int,
    evaluator: Optional[DawsonEvaluator] = None
) -> np.ndarray:
    """
    E_theta[f^(m)] for m = 0..max_order and each data item.

    Exact densities are integrated by the trapezoid rule on their grid; sample
    batches use plain sample means.

    Returns:
        Array of shape (max_order + 1, len(data))
    """
    ev = evaluator or DEFAULT_EVALUATOR
    out = np.empty((max_order + 1, len(data)))
    grid_cache: Dict[tuple, np.ndarray] = {}

    for j, item in enumerate(data):
        if isinstance(item, QuadratureDistribution):
            key = (item.x.size, float(item.x[0]), float(item.x[-1]))
            if key not in grid_cache:
                grid_cache[key] = pattern_functions(max_order, item.x, ev)
            values = grid_cache[key]
            out[:, j] = np.trapezoid(values * item.p[None, :], item.x, axis=1)
        elif isinstance(item, SampleBatch):
            out[:, j] = np.mean(pattern_functions(max_order, item.values, ev), axis=1)
        else:
            raise ValidationError(f"Unsupported quadrature data item: {type(item).__name__}")
    return out


# ---------------------------------------------------------------------------
# Reconstruction
# ---------------------------------------------------------------------------

@dataclass
class ReconstructionResult:
    """
    Attributes:
        rho_hat: Raw estimate, complex (dim x dim), before any projection
        rho_phys: Hermitized, eigenvalue-clipped, unit-trace state
        diagnostics: Residuals, certificates and counts
    """

    rho_hat: np.ndarray = field(repr=False)
    rho_phys: DensityMatrix = field(repr=False)
    diagnostics: Dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.rho_hat.shape[0]


def project_to_physical(rho_hat: np.ndarray, clip_negative: bool = True) -> DensityMatrix:
    """
    Nearest physical state: Hermitian part, negative eigenvalues clipped, trace renormalized.

    Raises:
        ValidationError: If nothing positive is left to renormalize
    """
    herm = 0.5 * (rho_hat + rho_hat.conj().T)
    vals, vecs = eigh(herm)
    if clip_negative:
        vals = np.clip(vals, 0.0, None)
    total = float(np.sum(vals))
    if total <= 0:
        raise ValidationError("Estimate has no positive spectrum to renormalize")
    vals = vals / total
    projected = (vecs * vals) @ vecs.conj().T
    return DensityMatrix(projected)


def reconstruct(
    data: Sequence[QuadratureData],
    dim: int,
    cfg: FockConfig,
    evaluator: Optional[DawsonEvaluator] = None,
    clip_negative: bool = True,
    min_samples: int = 1000,
    rel_tol: float = 1e-7,
    zero_tol: float = 1e-9,
    normalization_tol: float = 1e-8,
    negativity_tol: float = -1e-12
) -> ReconstructionResult:
    """
    Reconstruct the density matrix from per-angle quadrature data.

    Args:
        data: Exact densities or sample batches, one per angle (not mixed)
        dim: Target dimension
        cfg: Quadrature settings for the pattern systems
        evaluator: Dawson evaluator
        clip_negative: Clip negative eigenvalues in rho_phys
        min_samples: Batches smaller than this trigger InsufficientSamplesWarning
        rel_tol: Diagonal tolerance for the pattern systems
        zero_tol: Zero-structure tolerance for the pattern systems
        normalization_tol: Allowed |integral - 1| of exact densities
        negativity_tol: Lowest allowed value of exact densities

    Returns:
        ReconstructionResult

    Raises:
        GridTooCoarseError: Exact data on too few angles
        OrderOverflowError: dim too large for the evaluator's derivative cap

    Example:
        >>> cfg = make_fock_config(4)
        >>> table = build_hermite_table(3, cfg.x_grid)
        >>> grid = make_uniform_angle_grid(required_angle_count(4, 3))
        >>> vac = pure_state([1, 0, 0, 0])
        >>> result = reconstruct([quadrature_pdf(vac, t, table) for t in grid.angles], 4, cfg)
        >>> round(result.rho_hat[0, 0].real, 9)
        1.0
    """
    if dim < 1:
        raise ValidationError(f"dim must be >= 1, got {dim}")
    if not data:
        raise ValidationError("No quadrature data given")
    ev = evaluator or DEFAULT_EVALUATOR

    exact = all(isinstance(d, QuadratureDistribution) for d in data)
    empirical = all(isinstance(d, SampleBatch) for d in data)
    if not (exact or empirical):
        raise ValidationError("Data must be all exact densities or all sample batches")

    ordered = sorted(data, key=lambda d: d.theta)
    grid = make_angle_grid([d.theta for d in ordered])
    k_max = dim - 1
    if exact:
        _require_exact_grid(grid, dim, k_max)
        for d in ordered:
            d.check(normalization_tol, negativity_tol)
    elif grid.count < required_angle_count(dim, k_max):
        logger.warning("Only %d angles for dim=%d; angular means will alias", grid.count, dim)

    sample_counts = [int(d.count) for d in ordered] if empirical else []
    if empirical and min(sample_counts) < min_samples:
        warnings.warn(
            f"Smallest sample batch has {min(sample_counts)} samples (< {min_samples})",
            InsufficientSamplesWarning,
            stacklevel=2,
        )

    max_order = 2 * (dim - 1)
    logger.info("Reconstructing dim=%d from %d angles (%s data)", dim, grid.count,
                "exact" if exact else "sampled")
    E = expectations_from_data(ordered, max_order, ev)

    rho_hat = np.zeros((dim, dim), dtype=complex)
    residuals: Dict[str, List[float]] = {}
    systems: Dict[str, Dict] = {}
    for k in range(dim):
        l_max = dim - 1 - k
        system = build_pattern_system(k, l_max, cfg, ev, rel_tol=rel_tol, zero_tol=zero_tol)
        c = np.array([grid.mean(k, E[k + 2 * l]) for l in range(l_max + 1)])
        x = system.solve(c)
        idx = np.arange(l_max + 1)
        rho_hat[idx, idx + k] = x
        if k > 0:
            rho_hat[idx + k, idx] = np.conj(x)
        residuals[str(k)] = system.residuals(x).tolist()
        systems[str(k)] = {
            "zero_residual": system.zero_residual,
            "diagonal_residual": system.diagonal_residual,
            "row_scale": system.scale.tolist(),
        }

    hermitian_defect = float(np.max(np.abs(rho_hat - 0.5 * (rho_hat + rho_hat.conj().T))))
    rho_phys = project_to_physical(rho_hat, clip_negative=clip_negative)

    diagnostics = {
        "mode": "exact" if exact else "sampled",
        "dim": dim,
        "angles": grid.count,
        "uniform_grid": grid.uniform,
        "exactness_certified": grid.is_exact_for(dim, k_max),
        "required_angles": required_angle_count(dim, k_max),
        "sample_counts": sample_counts,
        "hermitian_defect": hermitian_defect,
        "trace_hat": float(np.trace(rho_hat).real),
        "min_eigenvalue_hat": float(np.linalg.eigvalsh(0.5 * (rho_hat + rho_hat.conj().T))[0]),
        "residuals": residuals,
        "systems": systems,
    }
    logger.info("Reconstruction done: trace %.6f, Hermitian defect %.2e",
                diagnostics["trace_hat"], hermitian_defect)
    return ReconstructionResult(rho_hat=rho_hat, rho_phys=rho_phys, diagnostics=diagnostics)


def compare_to_truth(result: ReconstructionResult, truth: DensityMatrix) -> Dict:
    """Fidelity, trace distance and entrywise error of rho_phys / rho_hat against a known state."""
    if truth.dim != result.dim:
        raise ValidationError(f"Ground truth has dim {truth.dim}, reconstruction {result.dim}")
    return {
        "fidelity": fidelity(result.rho_phys, truth),
        "trace_distance": trace_distance(result.rho_phys, truth),
        "max_entry_error_hat": float(np.max(np.abs(result.rho_hat - truth.entries))),
        "max_entry_error_phys": float(np.max(np.abs(result.rho_phys.entries - truth.entries))),
    }


# ---------------------------------------------------------------------------
# I/O
# ---------------------------------------------------------------------------

def _complex_to_json(matrix: np.ndarray) -> Dict:
    return {"dim": int(matrix.shape[0]), "re": matrix.real.tolist(), "im": matrix.imag.tolist()}


def result_to_json(result: ReconstructionResult, path: Optional[str] = None) -> Dict:
    """
    {"rho_hat": {...}, "rho_phys": {...}, "diagnostics": {...}}; written to path when given.
    """
    payload = {
        "rho_hat": _complex_to_json(result.rho_hat),
        "rho_phys": _complex_to_json(result.rho_phys.entries),
        "diagnostics": result.diagnostics,
    }
    if path:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w') as f:
            json.dump(payload, f, indent=2)
        logger.info("Saved reconstruction to %s", path)
    return payload


def result_from_json(data: Union[Dict, str]) -> ReconstructionResult:
    """Inverse of result_to_json (dict or file path)."""
    if isinstance(data, str):
        with open(data, 'r') as f:
            data = json.load(f)
    rho_hat = np.asarray(data["rho_hat"]["re"]) + 1j * np.asarray(data["rho_hat"]["im"])
    rho_phys = np.asarray(data["rho_phys"]["re"]) + 1j * np.asarray(data["rho_phys"]["im"])
    return ReconstructionResult(
        rho_hat=rho_hat,
        rho_phys=DensityMatrix(rho_phys),
        diagnostics=data.get("diagnostics", {}),
    )


def load_quadrature_data(source: Union[str, Sequence[str]]) -> List[QuadratureData]:
    """
    Read per-angle data files.

    Accepts a directory (every samples_*.csv, else every *.json density), a
    single file, or a list of files. CSV files hold columns theta_radians,
    x_value; JSON files hold {"theta", "x", "p"}.

    Raises:
        FileNotFoundError: If nothing matches
    """
    if isinstance(source, str) and os.path.isdir(source):
        csv_files = sorted(glob.glob(os.path.join(source, "samples_*.csv")))
        if csv_files:
            return list(read_sample_batches(source))
        paths = sorted(glob.glob(os.path.join(source, "density_*.json")))
    elif isinstance(source, str):
        paths = [source]
    else:
        paths = list(source)

    if not paths:
        raise FileNotFoundError(f"No quadrature data found at {source}")

    items: List[QuadratureData] = []
    for path in paths:
        if not os.path.exists(path):
            raise FileNotFoundError(f"Quadrature data file not found: {path}")
        if path.endswith(".json"):
            with open(path, 'r') as f:
                items.append(QuadratureDistribution.from_json(json.load(f)))
        elif path.endswith(".csv"):
            items.append(SampleBatch.from_csv(path))
        else:
            raise ValidationError(f"Unrecognized data file type: {path}")
    logger.info("Loaded %d quadrature data items", len(items))
    return items


def write_densities(distributions: Sequence[QuadratureDistribution], out_dir: str) -> List[str]:
    """Write exact densities as density_{j:03d}.json, one per angle."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for j, dist in enumerate(sorted(distributions, key=lambda d: d.theta)):
        path = os.path.join(out_dir, f"density_{j:03d}.json")
        with open(path, 'w') as f:
            json.dump(dist.to_json(), f)
        paths.append(path)
    return paths


if __name__ == "__main__":
    """
    Reconstruct a small superposition state from exact data.

    Usage:
        PYTHONPATH=src python -m reconstruction.pattern_tomography
    """
    from core.fock_core import build_hermite_table, make_fock_config, pure_state, quadrature_pdf

    dim = 4
    cfg = make_fock_config(dim)
    table = build_hermite_table(dim - 1, cfg.x_grid)
    state = pure_state([1, 1, 0, 0])
    grid = make_uniform_angle_grid(required_angle_count(dim, dim - 1))

    result = reconstruct([quadrature_pdf(state, t, table) for t in grid.angles], dim, cfg)
    print("rho_hat (real part):")
    print(np.round(result.rho_hat.real, 9))
    print(f"fidelity: {fidelity(result.rho_phys, state):.12f}")
