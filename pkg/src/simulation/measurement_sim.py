"""
Measurement Simulation Module

Synthetic homodyne data:
- Canonical states (number, coherent, thermal, cat, random mixed) on a truncated Fock space
- Inverse-CDF sampling of rotated-quadrature outcomes, one seeded substream per angle
- Per-angle CSV files with JSON sidecars
- First-moment report tr[T Q_theta], which cannot tell number states apart
"""

import cmath
import glob
import json
import logging
import math
import os
import re
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import PchipInterpolator

from core.errors import TruncationError, TruncationWarning, ValidationError
from core.fock_core import (
    DensityMatrix,
    FockConfig,
    build_hermite_table,
    make_density_matrix,
    make_fock_config,
    quadrature_pdf,
    rotated_quadrature_matrix,
)

logger = logging.getLogger(__name__)

RNG_NAME = "Philox"
STATE_KINDS = ("number", "coherent", "thermal", "cat", "random")
CSV_COLUMNS = ["theta_radians", "x_value"]


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateSpec:
    """
    Recipe for a canonical state.

    Attributes:
        kind: One of number, coherent, thermal, cat, random
        dim: Truncation dimension
        n: Photon number (number states)
        alpha: Complex amplitude (coherent, cat)
        nbar: Mean photon number (thermal)
        rank: Rank (random mixed states)
        parity: +1 or -1 superposition sign (cat)
        seed: Generator seed (random mixed states)
    """

    kind: str
    dim: int
    n: int = 0
    alpha: complex = 0j
    nbar: float = 0.0
    rank: int = 1
    parity: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ValidationError(f"Unknown state kind '{self.kind}'; expected one of {STATE_KINDS}")
        if self.dim < 1:
            raise ValidationError(f"dim must be >= 1, got {self.dim}")
        object.__setattr__(self, "alpha", complex(self.alpha))

    @property
    def label(self) -> str:
        if self.kind == "number":
            return f"number:{self.n}"
        if self.kind in ("coherent", "cat"):
            return f"{self.kind}:{_format_complex(self.alpha)}"
        if self.kind == "thermal":
            return f"thermal:{self.nbar:g}"
        return f"random:{self.rank}:{self.seed}"

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "n": self.n,
            "alpha": [self.alpha.real, self.alpha.imag],
            "nbar": self.nbar,
            "rank": self.rank,
            "parity": self.parity,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "StateSpec":
        values = dict(data)
        alpha = values.get("alpha", 0j)
        if isinstance(alpha, (list, tuple)):
            values["alpha"] = complex(alpha[0], alpha[1])
        return cls(**values)


def _format_complex(z: complex) -> str:
    return f"{z.real:g}" if z.imag == 0 else f"{z.real:g}{z.imag:+g}j"


def parse_state_spec(text: str, dim: int, seed: int = 0) -> StateSpec:
    """
    Parse a command-line state description.

    Forms: vacuum, number:N, coherent:A, thermal:NBAR, cat:A, cat-:A (odd cat),
    random:R. Amplitudes accept Python complex syntax (1.5, 1+0.5j).

    Example:
        >>> parse_state_spec("coherent:1+0.5j", dim=12).alpha
        (1+0.5j)
    """
    name, _, arg = text.strip().partition(":")
    name = name.lower()
    try:
        if name == "vacuum":
            return StateSpec("number", dim, n=0)
        if name == "number":
            return StateSpec("number", dim, n=int(arg))
        if name == "coherent":
            return StateSpec("coherent", dim, alpha=complex(arg.replace(" ", "")))
        if name == "thermal":
            return StateSpec("thermal", dim, nbar=float(arg))
        if name in ("cat", "cat+", "cat-"):
            parity = -1 if name == "cat-" else 1
            return StateSpec("cat", dim, alpha=complex(arg.replace(" ", "")), parity=parity)
        if name == "random":
            return StateSpec("random", dim, rank=int(arg or 1), seed=seed)
    except ValueError as e:
        raise ValidationError(f"Bad state description '{text}': {e}")
    raise ValidationError(f"Unknown state '{text}'")


def _coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """exp(-|alpha|^2/2) alpha^n / sqrt(n!) for n < dim, by ratio updates."""
    amps = np.empty(dim, dtype=complex)
    amps[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / np.sqrt(n)
    return amps


def make_state(
    spec: StateSpec,
    edge_tol: float = 1e-6,
    strict: bool = True,
    trace_tol: float = 1e-12,
    eig_tol: float = -1e-10,
    hermitian_tol: float = 1e-12
) -> DensityMatrix:
    """
    Fock-basis density matrix for a canonical state.

    Coherent and thermal matrices are the plain truncations of the
    infinite-dimensional ones (trace slightly below 1). Cat states are
    normalized inside the truncated space. Number and random mixed states are
    exact in the truncated space; the others are checked for the norm the
    truncation drops (see truncation_loss).

    Args:
        spec: State recipe
        edge_tol: Largest allowed norm lost to truncation
        strict: Raise on edge-mass violations (otherwise warn)
        trace_tol: Allowed |trace - 1| for states exact in the truncated space
        eig_tol: Smallest allowed eigenvalue
        hermitian_tol: Allowed Hermiticity defect, relative to max(1, max|entry|)

    Returns:
        DensityMatrix

    Raises:
        TruncationError: If truncation drops more than edge_tol of the norm (strict)
        DensityMatrixError: If the state fails the trace or positivity check

    Example:
        >>> rho = make_state(StateSpec("thermal", 30, nbar=1.0))
        >>> round(rho.trace(), 12) == round(1 - 2 ** -30, 12)
        True
    """
    dim = spec.dim
    kind = spec.kind
    trace_limit = trace_tol

    if kind == "number":
        if not 0 <= spec.n < dim:
            raise ValidationError(f"Number state n={spec.n} needs 0 <= n < dim={dim}")
        entries = np.zeros((dim, dim), dtype=complex)
        entries[spec.n, spec.n] = 1.0
    elif kind == "coherent":
        amps = _coherent_amplitudes(spec.alpha, dim)
        entries = np.outer(amps, amps.conj())
        trace_limit = max(trace_tol, edge_tol)
    elif kind == "thermal":
        if spec.nbar < 0:
            raise ValidationError(f"Mean photon number must be >= 0, got {spec.nbar}")
        n = np.arange(dim)
        if spec.nbar == 0:
            populations = (n == 0).astype(float)
        else:
            ratio = spec.nbar / (1.0 + spec.nbar)
            populations = ratio ** n / (1.0 + spec.nbar)
        entries = np.diag(populations).astype(complex)
        trace_limit = max(trace_tol, edge_tol)
    elif kind == "cat":
        if spec.parity not in (1, -1):
            raise ValidationError(f"Cat parity must be +1 or -1, got {spec.parity}")
        n = np.arange(dim)
        amps = _coherent_amplitudes(spec.alpha, dim) * (1.0 + spec.parity * (-1.0) ** n)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValidationError("Cat state vanishes for this amplitude and parity")
        amps = amps / norm
        entries = np.outer(amps, amps.conj())
    else:
        if not 1 <= spec.rank <= dim:
            raise ValidationError(f"Rank must lie in [1, {dim}], got {spec.rank}")
        rng = np.random.default_rng(spec.seed)
        g = rng.standard_normal((dim, spec.rank)) + 1j * rng.standard_normal((dim, spec.rank))
        entries = g @ g.conj().T
        entries = entries / np.trace(entries).real
        return make_density_matrix(entries, trace_tol=trace_tol, eig_tol=eig_tol, hermitian_tol=hermitian_tol)

    rho = make_density_matrix(entries, check_physical=False, hermitian_tol=hermitian_tol)
    lost = truncation_loss(spec)
    if lost >= edge_tol:
        message = f"State {spec.label} loses {lost:.3e} of its norm to truncation at dim={dim}"
        if strict:
            raise TruncationError(message, {"truncation_loss": lost, "dim": dim, "state": spec.label})
        warnings.warn(message, TruncationWarning, stacklevel=2)
        # the plain truncations lose trace along with the tail; only positivity is checked then
        trace_limit = math.inf
    rho.validate_physical(trace_tol=trace_limit, eig_tol=eig_tol)
    logger.debug("Built state %s (dim=%d, trace=%.15f)", spec.label, dim, rho.trace())
    return rho


def truncation_loss(spec: StateSpec) -> float:
    """
    Norm of the infinite-dimensional state that falls on levels n >= dim.

    Zero for number and random states. Coherent: 1 - sum_{n<dim} |<n|alpha>|^2.
    Thermal: (nbar/(1+nbar))^dim. Cat: 1 - N_dim/N with N = 2(1 + parity e^{-2|alpha|^2}).

    Example:
        >>> truncation_loss(StateSpec("number", 2, n=1))
        0.0
    """
    dim = spec.dim
    if spec.kind in ("number", "random"):
        return 0.0
    if spec.kind == "thermal":
        return float((spec.nbar / (1.0 + spec.nbar)) ** dim) if spec.nbar > 0 else 0.0
    amps = _coherent_amplitudes(spec.alpha, dim)
    if spec.kind == "coherent":
        return max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    n = np.arange(dim)
    kept = float(np.sum(np.abs(amps * (1.0 + spec.parity * (-1.0) ** n)) ** 2))
    full = 2.0 * (1.0 + spec.parity * math.exp(-2.0 * abs(spec.alpha) ** 2))
    return max(0.0, 1.0 - kept / full) if full > 0 else 0.0


def random_density_matrix(dim: int, rank: Optional[int] = None, seed: int = 0) -> DensityMatrix:
    """Ginibre random state of the given rank (full rank by default)."""
    return make_state(StateSpec("random", dim, rank=rank or dim, seed=seed))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

@dataclass
class SampleBatch:
    """
    Quadrature outcomes at one angle.

    Attributes:
        theta: Angle in [0, 2pi)
        values: Outcomes
        seed: Run seed
        angle_index: Substream index the batch was drawn with
        rng: Bit-generator name
    """

    theta: float
    values: np.ndarray = field(repr=False)
    seed: int = 0
    angle_index: int = 0
    rng: str = RNG_NAME

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValidationError("Sample values must be one-dimensional")

    @property
    def count(self) -> int:
        return int(self.values.size)

    def metadata(self) -> Dict:
        return {
            "theta": self.theta,
            "count": self.count,
            "seed": self.seed,
            "angle_index": self.angle_index,
            "rng": self.rng,
        }

    def to_csv(self, path: str) -> str:
        """Write theta_radians,x_value rows (17 significant digits) plus a .json sidecar."""
        frame = pd.DataFrame({
            "theta_radians": np.full(self.count, self.theta),
            "x_value": self.values,
        })
        frame.to_csv(path, index=False, float_format="%.17g")
        with open(os.path.splitext(path)[0] + ".json", 'w') as f:
            json.dump(self.metadata(), f, indent=2)
        return path

    @classmethod
    def from_csv(cls, path: str) -> "SampleBatch":
        """
        Read a batch; seed and substream come from the sidecar when present.

        Raises:
            FileNotFoundError: If path does not exist
            ValidationError: If columns are wrong or the file mixes angles
        """
        if not os.path.exists(path):
            raise FileNotFoundError(f"Sample file not found: {path}")
        frame = pd.read_csv(path, dtype=float, float_precision="round_trip")
        if list(frame.columns) != CSV_COLUMNS:
            raise ValidationError(f"{path}: expected columns {CSV_COLUMNS}, got {list(frame.columns)}")
        if frame.empty:
            raise ValidationError(f"{path}: no samples")
        thetas = frame["theta_radians"].to_numpy()
        if np.any(thetas != thetas[0]):
            raise ValidationError(f"{path}: more than one angle in a single batch file")

        meta = {}
        sidecar = os.path.splitext(path)[0] + ".json"
        if os.path.exists(sidecar):
            with open(sidecar, 'r') as f:
                meta = json.load(f)
        return cls(
            theta=float(thetas[0]),
            values=frame["x_value"].to_numpy(),
            seed=int(meta.get("seed", 0)),
            angle_index=int(meta.get("angle_index", 0)),
            rng=meta.get("rng", RNG_NAME),
        )


def substream(seed: int, angle_index: int) -> np.random.Generator:
    """Philox generator for (seed, angle_index); independent across angle indices."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, angle_index])))


def _sampling_grid(rho: DensityMatrix, cfg: Optional[FockConfig], grid_points: int) -> np.ndarray:
    cfg = cfg or make_fock_config(rho.dim)
    return np.linspace(cfg.x_grid[0], cfg.x_grid[-1], grid_points)


def inverse_cdf(x: np.ndarray, p: np.ndarray) -> PchipInterpolator:
    """
    Monotone interpolant u -> x of the CDF of a gridded density.

    The density is clamped at 0 and renormalized; flat stretches of the CDF are
    dropped so the inverse is single-valued.
    """
    density = np.clip(p, 0.0, None)
    cdf = cumulative_trapezoid(density, x, initial=0.0)
    if cdf[-1] <= 0:
        raise ValidationError("Density has no positive mass on the sampling grid")
    cdf = cdf / cdf[-1]
    levels, first = np.unique(cdf, return_index=True)
    return PchipInterpolator(levels, x[first], extrapolate=False)


def sample_quadrature(
    rho: DensityMatrix,
    theta: float,
    count: int,
    seed: int,
    angle_index: int = 0,
    cfg: Optional[FockConfig] = None,
    grid_points: int = 4096,
    edge_tol: float = 1e-6
) -> SampleBatch:
    """
    Draw count i.i.d. outcomes of Q_theta by inverse-CDF sampling.

    Args:
        rho: State
        theta: Angle
        count: Number of samples (>= 1)
        seed: Run seed
        angle_index: Substream index; (seed, angle_index) fixes the stream
        cfg: Supplies the grid range (defaults to make_fock_config(rho.dim))
        grid_points: Grid resolution for the CDF
        edge_tol: Truncation-warning threshold passed to quadrature_pdf

    Returns:
        SampleBatch

    Example:
        >>> vac = make_state(StateSpec("number", 4))
        >>> batch = sample_quadrature(vac, 0.0, 1000, seed=7)
        >>> batch.count, batch.rng
        (1000, 'Philox')
    """
    if count < 1:
        raise ValidationError(f"Sample count must be >= 1, got {count}")
    x = _sampling_grid(rho, cfg, grid_points)
    table = build_hermite_table(rho.dim - 1, x)
    dist = quadrature_pdf(rho, theta, table, edge_tol=edge_tol)

    inverse = inverse_cdf(dist.x, dist.p)
    u = substream(seed, angle_index).random(count)
    values = inverse(u)
    return SampleBatch(theta=dist.theta, values=values, seed=seed, angle_index=angle_index)


def sample_all_angles(
    rho: DensityMatrix,
    angles: Sequence[float],
    count: int,
    seed: int,
    cfg: Optional[FockConfig] = None,
    grid_points: int = 4096,
    edge_tol: float = 1e-6
) -> List[SampleBatch]:
    """One batch per angle, angle j drawn from substream (seed, j)."""
    batches = [
        sample_quadrature(rho, float(theta), count, seed, angle_index=j, cfg=cfg,
                          grid_points=grid_points, edge_tol=edge_tol)
        for j, theta in enumerate(angles)
    ]
    logger.info("Sampled %d angles x %d outcomes (seed=%d, rng=%s)", len(batches), count, seed, RNG_NAME)
    return batches


def write_sample_batches(batches: Sequence[SampleBatch], out_dir: str) -> List[str]:
    """Write samples_{j:03d}.csv (+ .json sidecar) per batch, ordered by angle_index."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for batch in sorted(batches, key=lambda b: b.angle_index):
        path = os.path.join(out_dir, f"samples_{batch.angle_index:03d}.csv")
        paths.append(batch.to_csv(path))
    logger.info("Wrote %d sample files to %s", len(paths), out_dir)
    return paths


def read_sample_batches(directory: str) -> List[SampleBatch]:
    """
    Read every samples_*.csv in a directory.

    Raises:
        FileNotFoundError: If the directory holds no sample files
    """
    paths = sorted(
        p for p in glob.glob(os.path.join(directory, "samples_*.csv"))
        if re.search(r"samples_\d+\.csv$", p)
    )
    if not paths:
        raise FileNotFoundError(f"No samples_*.csv files in {directory}")
    return [SampleBatch.from_csv(p) for p in paths]


# ---------------------------------------------------------------------------
# Statistical checks
# ---------------------------------------------------------------------------

def exact_cdf(rho: DensityMatrix, theta: float, cfg: Optional[FockConfig] = None, grid_points: int = 4096):
    """Callable CDF of Q_theta from the gridded exact density."""
    x = _sampling_grid(rho, cfg, grid_points)
    dist = quadrature_pdf(rho, theta, build_hermite_table(rho.dim - 1, x), edge_tol=np.inf)
    cdf = cumulative_trapezoid(np.clip(dist.p, 0.0, None), x, initial=0.0)
    cdf = cdf / cdf[-1]
    return lambda v: np.interp(v, x, cdf, left=0.0, right=1.0)


def empirical_cdf_ks(batch: SampleBatch, rho: DensityMatrix, cfg: Optional[FockConfig] = None):
    """Kolmogorov-Smirnov test of a batch against the exact quadrature CDF."""
    return stats.kstest(batch.values, exact_cdf(rho, batch.theta, cfg))


def histogram_chi2(
    batch: SampleBatch,
    rho: DensityMatrix,
    bins: int = 200,
    cfg: Optional[FockConfig] = None,
    min_expected: float = 5.0
):
    """
    Chi-square goodness of fit of a histogram against exact bin probabilities.

    Bins with fewer than min_expected expected counts are merged into their
    neighbours so the statistic stays valid.
    """
    cdf = exact_cdf(rho, batch.theta, cfg)
    lo, hi = float(np.min(batch.values)), float(np.max(batch.values))
    edges = np.linspace(lo, hi, bins + 1)
    observed, _ = np.histogram(batch.values, bins=edges)
    probs = np.diff(cdf(edges))
    expected = probs / probs.sum() * batch.count

    obs_merged, exp_merged = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            obs_merged.append(acc_o)
            exp_merged.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 and exp_merged:
        obs_merged[-1] += acc_o
        exp_merged[-1] += acc_e
    obs_arr = np.asarray(obs_merged)
    exp_arr = np.asarray(exp_merged)
    exp_arr = exp_arr * obs_arr.sum() / exp_arr.sum()
    return stats.chisquare(obs_arr, exp_arr)


# ---------------------------------------------------------------------------
# First-moment report
# ---------------------------------------------------------------------------

def expectation_report(states: Sequence[StateSpec], angles, strict: bool = True) -> pd.DataFrame:
    """
    tr[T Q_theta] for every (state, angle).

    Args:
        states: State recipes
        angles: AngleGrid-like object (with .angles) or a sequence of angles
        strict: Passed to make_state

    Returns:
        DataFrame with columns state, dim, theta, expectation

    Example:
        >>> report = expectation_report([StateSpec("number", 8, n=3)], [0.0, 1.0])
        >>> float(report["expectation"].abs().max()) < 1e-12
        True
    """
    thetas = np.asarray(getattr(angles, "angles", angles), dtype=float)
    rows = []
    for spec in states:
        rho = make_state(spec, strict=strict)
        for theta in thetas:
            q_theta = rotated_quadrature_matrix(float(theta), rho.dim)
            value = np.trace(rho.entries @ q_theta)
            rows.append({
                "state": spec.label,
                "dim": rho.dim,
                "theta": float(theta),
                "expectation": float(value.real),
            })
    return pd.DataFrame(rows, columns=["state", "dim", "theta", "expectation"])


def coherent_mean(alpha: complex, theta: float) -> float:
    """Closed form sqrt(2) |alpha| cos(theta - arg alpha) for the untruncated coherent state."""
    return float(np.sqrt(2.0) * abs(alpha) * np.cos(theta - cmath.phase(alpha)))


if __name__ == "__main__":
    """
    Sample the vacuum and print first moments of a few states.

    Usage:
        PYTHONPATH=src python -m simulation.measurement_sim
    """
    vacuum = make_state(StateSpec("number", 8))
    batch = sample_quadrature(vacuum, 0.0, 100000, seed=7)
    print(f"vacuum sample variance: {np.var(batch.values):.5f} (exact 0.5)")

    report = expectation_report(
        [StateSpec("number", 8, n=n) for n in range(3)] + [StateSpec("coherent", 16, alpha=1.0)],
        [0.0, np.pi / 2],
    )
    print(report.to_string(index=False))
