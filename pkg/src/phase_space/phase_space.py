"""
Phase-Space Module

Comparison path for the pattern-function reconstruction:
- Wigner function from the density matrix (Fock-basis Laguerre kernel)
- Wigner function from quadrature data by filtered back-projection
- Husimi function <z|T|z>/pi with z = (q + ip)/sqrt(2)
- Weyl-operator scan |tr[W_qp D]| for phase-space observables generated by D

Convention: integrating W along q cos(theta) + p sin(theta) = x gives the
density of Q_theta produced by core.fock_core.quadrature_pdf.
"""

import json
import logging
import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.ndimage import gaussian_filter, map_coordinates
from scipy.special import eval_genlaguerre, gammaln

from core.errors import AngleCoverageError, DensityWarning, SupportWarning, TruncationWarning, ValidationError
from core.fock_core import DensityMatrix, QuadratureDistribution, build_hermite_table, pure_state, quadrature_pdf

logger = logging.getLogger(__name__)

FILTERS = ("ram-lak", "shepp-logan")


@dataclass
class PhaseSpaceGrid:
    """
    Values on a rectangular (q, p) grid, indexed values[i, j] = F(q_i, p_j).

    Attributes:
        q_values, p_values: Uniform grids
        values: Real surface (zeros until filled)
        measure: Area element in units of dq dp; 1 for Wigner surfaces, 1/2 for
            Husimi surfaces, whose density is per d^2z with z = (q + ip)/sqrt(2)
        label: Free-form description
    """

    q_values: np.ndarray
    p_values: np.ndarray
    values: Optional[np.ndarray] = field(default=None, repr=False)
    measure: float = 1.0
    label: str = ""

    def __post_init__(self):
        self.q_values = np.asarray(self.q_values, dtype=float)
        self.p_values = np.asarray(self.p_values, dtype=float)
        for name, axis in (("q", self.q_values), ("p", self.p_values)):
            if axis.ndim != 1 or axis.size < 1:
                raise ValidationError(f"{name} grid must be a non-empty 1-D array")
            if axis.size > 1:
                steps = np.diff(axis)
                if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * max(1.0, abs(steps[0])):
                    raise ValidationError(f"{name} grid must be uniform and increasing")
        if self.values is None:
            self.values = np.zeros((self.q_values.size, self.p_values.size))
        elif self.values.shape != (self.q_values.size, self.p_values.size):
            raise ValidationError(
                f"values shape {self.values.shape} does not match grid "
                f"({self.q_values.size}, {self.p_values.size})"
            )

    @property
    def dq(self) -> float:
        return float(self.q_values[1] - self.q_values[0]) if self.q_values.size > 1 else 0.0

    @property
    def dp(self) -> float:
        return float(self.p_values[1] - self.p_values[0]) if self.p_values.size > 1 else 0.0

    def mesh(self):
        return np.meshgrid(self.q_values, self.p_values, indexing="ij")

    def integral(self) -> float:
        """Trapezoid integral of the surface in its own measure."""
        inner = np.trapezoid(self.values, self.p_values, axis=1)
        return float(self.measure * np.trapezoid(inner, self.q_values))

    def value_at(self, q: float, p: float) -> float:
        """Value at the grid node nearest to (q, p)."""
        i = int(np.argmin(np.abs(self.q_values - q)))
        j = int(np.argmin(np.abs(self.p_values - p)))
        return float(self.values[i, j])

    def with_values(self, values: np.ndarray, measure: float = 1.0, label: str = "") -> "PhaseSpaceGrid":
        return PhaseSpaceGrid(self.q_values, self.p_values, np.asarray(values, dtype=float), measure, label)


def make_phase_space_grid(half_width: float, points: int = 256) -> PhaseSpaceGrid:
    """Square grid [-half_width, half_width]^2 with points nodes per axis."""
    if half_width <= 0 or points < 1:
        raise ValidationError(f"Need half_width > 0 and points >= 1, got {half_width}, {points}")
    axis = np.linspace(-half_width, half_width, points) if points > 1 else np.zeros(1)
    return PhaseSpaceGrid(axis, axis.copy())


def support_radius(dim: int) -> float:
    """Radius sqrt(2 dim) + 3 that a grid must cover for a dim-level state."""
    return math.sqrt(2.0 * dim) + 3.0


def grid_for_dim(dim: int, points: int = 256) -> PhaseSpaceGrid:
    return make_phase_space_grid(support_radius(dim), points)


# ---------------------------------------------------------------------------
# Wigner function
# ---------------------------------------------------------------------------

def _wigner_kernel(m: int, n: int, q: np.ndarray, p: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """Wigner function of |m><n| for m >= n."""
    k = m - n
    coeff = math.exp(0.5 * (k * math.log(2.0) + gammaln(n + 1.0) - gammaln(m + 1.0)))
    return (
        np.exp(-r2) / math.pi
        * (-1.0) ** n
        * (q - 1j * p) ** k
        * coeff
        * eval_genlaguerre(n, k, 2.0 * r2)
    )


def wigner_direct(
    rho: DensityMatrix,
    grid: PhaseSpaceGrid,
    boundary_tol: float = 1e-6
) -> PhaseSpaceGrid:
    """
    W(q, p) = sum_{m,n} rho[m][n] W_mn(q, p).

    For m >= n, W_mn = exp(-r^2)/pi (-1)^n (q - ip)^(m-n) sqrt(2^(m-n) n!/m!) L_n^(m-n)(2 r^2)
    and W_nm = conj(W_mn).

    Args:
        rho: State
        grid: Target grid (values ignored)
        boundary_tol: SupportWarning when |W| on the grid boundary exceeds this

    Returns:
        PhaseSpaceGrid with the Wigner surface

    Example:
        >>> grid = make_phase_space_grid(6.0, 121)
        >>> w = wigner_direct(pure_state([1, 0, 0]), grid)
        >>> round(w.value_at(0, 0) * math.pi, 12)
        1.0
    """
    q, p = grid.mesh()
    r2 = q * q + p * p
    rho_m = rho.entries
    total = np.zeros(q.shape, dtype=complex)
    for m in range(rho.dim):
        for n in range(m + 1):
            if rho_m[m, n] == 0 and rho_m[n, m] == 0:
                continue
            kernel = _wigner_kernel(m, n, q, p, r2)
            if m == n:
                total += rho_m[m, m] * kernel
            else:
                total += rho_m[m, n] * kernel + rho_m[n, m] * np.conj(kernel)

    values = total.real
    result = grid.with_values(values, measure=1.0, label="wigner_direct")
    _check_support(result, rho.dim, boundary_tol)
    return result


def _check_support(result: PhaseSpaceGrid, dim: int, boundary_tol: float) -> None:
    if result.values.size <= 1:
        return
    edges = np.concatenate([
        result.values[0], result.values[-1], result.values[:, 0], result.values[:, -1]
    ])
    worst = float(np.max(np.abs(edges)))
    if worst > boundary_tol:
        warnings.warn(
            f"Phase-space surface reaches {worst:.3e} on the grid boundary; "
            f"cover radius {support_radius(dim):.2f}",
            SupportWarning,
            stacklevel=3,
        )


def radon_projection(surface: PhaseSpaceGrid, theta: float, x_values: np.ndarray) -> np.ndarray:
    """
    Line integrals of a surface along q cos(theta) + p sin(theta) = x.

    Cubic-spline interpolation on the grid, trapezoid along each line, with
    zero outside the grid.

    Returns:
        Array matching x_values
    """
    x_values = np.asarray(x_values, dtype=float)
    dq, dp = surface.dq, surface.dp
    step = min(dq, dp)
    reach = math.hypot(surface.q_values[-1] - surface.q_values[0],
                       surface.p_values[-1] - surface.p_values[0]) / 2.0
    s = np.arange(-reach, reach + 0.5 * step, step)

    c, sn = math.cos(theta), math.sin(theta)
    qq = x_values[:, None] * c - s[None, :] * sn
    pp = x_values[:, None] * sn + s[None, :] * c
    rows = (qq - surface.q_values[0]) / dq
    cols = (pp - surface.p_values[0]) / dp
    samples = map_coordinates(surface.values, [rows.ravel(), cols.ravel()], order=3, mode="constant", cval=0.0)
    return np.trapezoid(samples.reshape(qq.shape), s, axis=1)


# ---------------------------------------------------------------------------
# Filtered back-projection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RadonConfig:
    """
    Filtered back-projection settings.

    Attributes:
        filter: "ram-lak" or "shepp-logan"
        cutoff: Fraction of the Nyquist frequency kept, in (0, 1]
        angle_count: Number of projection angles over [0, pi)
        x_bins: Bins per projection
    """

    filter: str = "shepp-logan"
    cutoff: float = 1.0
    angle_count: int = 64
    x_bins: int = 256

    def __post_init__(self):
        if self.filter not in FILTERS:
            raise ValidationError(f"Unknown filter '{self.filter}'; expected one of {FILTERS}")
        if not 0 < self.cutoff <= 1:
            raise ValidationError(f"cutoff must lie in (0, 1], got {self.cutoff}")
        if self.angle_count < 2 or self.x_bins < 8:
            raise ValidationError("Need angle_count >= 2 and x_bins >= 8")

    def check_dim(self, dim: int) -> None:
        if self.angle_count < 2 * dim:
            raise ValidationError(f"angle_count {self.angle_count} < 2*dim = {2 * dim}")

    @classmethod
    def from_dict(cls, section: Dict) -> "RadonConfig":
        keys = cls.__dataclass_fields__.keys()
        return cls(**{k: v for k, v in (section or {}).items() if k in keys})


def half_circle_angles(count: int) -> np.ndarray:
    """theta_j = pi j / count."""
    return math.pi * np.arange(count) / count


def ramp_kernel(n_bins: int, spacing: float) -> np.ndarray:
    """
    Band-limited ramp filter in space, h(n tau) for n = -(N-1)..N-1:
    1/(4 tau^2) at 0, -1/(n pi tau)^2 at odd n, 0 at even n.
    """
    n = np.arange(-(n_bins - 1), n_bins)
    h = np.zeros(n.size)
    h[n == 0] = 1.0 / (4.0 * spacing ** 2)
    odd = n % 2 == 1
    h[odd] = -1.0 / (n[odd] * math.pi * spacing) ** 2
    return h


def filter_projection(profile: np.ndarray, spacing: float, cfg: RadonConfig) -> np.ndarray:
    """
    tau * (profile conv h), with the frequency window of cfg, via zero-padded FFT.
    """
    n_bins = profile.size
    size = 1 << int(math.ceil(math.log2(2 * n_bins)))
    h = ramp_kernel(n_bins, spacing)

    kernel = np.zeros(size)
    kernel[:n_bins] = h[n_bins - 1:]
    kernel[size - n_bins + 1:] = h[:n_bins - 1]
    response = np.fft.fft(kernel).real

    freqs = np.fft.fftfreq(size)
    window = (np.abs(freqs) <= 0.5 * cfg.cutoff).astype(float)
    if cfg.filter == "shepp-logan":
        window = window * np.sinc(freqs / cfg.cutoff)

    padded = np.zeros(size)
    padded[:n_bins] = profile
    filtered = np.fft.ifft(np.fft.fft(padded) * response * window).real
    return spacing * filtered[:n_bins]


def _profile(item, x_bins: np.ndarray) -> np.ndarray:
    if isinstance(item, QuadratureDistribution):
        return np.interp(x_bins, item.x, item.p, left=0.0, right=0.0)
    values = getattr(item, "values", None)
    if values is None:
        raise ValidationError(f"Unsupported projection data: {type(item).__name__}")
    spacing = x_bins[1] - x_bins[0]
    edges = np.concatenate([x_bins - 0.5 * spacing, [x_bins[-1] + 0.5 * spacing]])
    counts, _ = np.histogram(values, bins=edges)
    return counts / (len(values) * spacing)


def _fold_to_half_circle(distributions: Sequence) -> Dict[float, List]:
    """Map theta in [pi, 2pi) to theta - pi (profile reflected) and group by angle."""
    groups: Dict[float, List] = {}
    for item in distributions:
        theta = float(item.theta) % (2 * math.pi)
        reflect = theta >= math.pi - 1e-12
        if reflect:
            theta = max(theta - math.pi, 0.0)
        key = round(theta, 12)
        groups.setdefault(key, []).append((item, reflect))
    return groups


def wigner_inverse_radon(
    distributions: Sequence,
    cfg: Optional[RadonConfig] = None,
    grid: Optional[PhaseSpaceGrid] = None,
    x_range: Optional[float] = None
) -> PhaseSpaceGrid:
    """
    Filtered back-projection estimate of W from per-angle quadrature data.

    W(q, p) = (pi / J) sum_j Q_j(q cos theta_j + p sin theta_j), Q_j the
    ramp-filtered projection. Angles in [pi, 2pi) are folded onto [0, pi) with
    the profile reflected; the folded angles must be uniform over [0, pi).

    Args:
        distributions: QuadratureDistributions or sample batches with .theta
        cfg: Filter settings
        grid: Output grid (default: square grid spanning the projection range)
        x_range: Half-width of the projection bins (default: from the data)

    Returns:
        PhaseSpaceGrid

    Raises:
        AngleCoverageError: If the angles do not cover [0, pi) uniformly
    """
    cfg = cfg or RadonConfig()
    groups = _fold_to_half_circle(distributions)
    angles = np.array(sorted(groups))
    count = angles.size
    if count < 2:
        raise AngleCoverageError(
            f"Back-projection needs angles covering [0, pi); got {count} distinct angle(s)",
            {"angles": count},
        )
    expected = half_circle_angles(count)
    if np.max(np.abs(angles - expected)) > 1e-9:
        raise AngleCoverageError(
            "Angles must be uniform over [0, pi) after folding",
            {"angles": angles.tolist()},
        )

    if x_range is None:
        x_range = 0.0
        for item in distributions:
            support = item.x if isinstance(item, QuadratureDistribution) else item.values
            x_range = max(x_range, float(np.max(np.abs(support))))
    x_bins = np.linspace(-x_range, x_range, cfg.x_bins)
    spacing = float(x_bins[1] - x_bins[0])

    if grid is None:
        grid = make_phase_space_grid(x_range / math.sqrt(2.0), cfg.x_bins)
    q, p = grid.mesh()
    total = np.zeros(q.shape)

    for theta in angles:
        profiles = []
        for item, reflect in groups[theta]:
            prof = _profile(item, x_bins)
            profiles.append(prof[::-1] if reflect else prof)
        filtered = filter_projection(np.mean(profiles, axis=0), spacing, cfg)
        coordinate = q * math.cos(theta) + p * math.sin(theta)
        total += np.interp(coordinate, x_bins, filtered, left=0.0, right=0.0)

    logger.info("Back-projected %d angles (%s, cutoff %.2f)", count, cfg.filter, cfg.cutoff)
    return grid.with_values(total * math.pi / count, measure=1.0, label="wigner_inverse_radon")


# ---------------------------------------------------------------------------
# Husimi function
# ---------------------------------------------------------------------------

def husimi(
    rho: DensityMatrix,
    grid: PhaseSpaceGrid,
    edge_tol: float = 1e-6,
    negativity_tol: float = -1e-12
) -> PhaseSpaceGrid:
    """
    H(q, p) = <z|T|z>/pi with z = (q + ip)/sqrt(2), as a density per d^2z.

    The returned grid carries measure 1/2 so that integral() is the total
    probability. Values in [negativity_tol, 0) are set to zero; anything lower
    is kept and reported with a DensityWarning.

    Example:
        >>> grid = make_phase_space_grid(8.0, 161)
        >>> h = husimi(pure_state([1, 0, 0]), grid)
        >>> round(h.value_at(0, 0) * math.pi, 12)
        1.0
    """
    edge = rho.edge_mass()
    if edge > edge_tol:
        warnings.warn(
            f"Truncation-edge mass {edge:.3e} exceeds {edge_tol:g}; Husimi surface may be unreliable",
            TruncationWarning,
            stacklevel=2,
        )
    q, p = grid.mesh()
    z = (q + 1j * p) / math.sqrt(2.0)

    amps = np.empty((rho.dim,) + z.shape, dtype=complex)
    amps[0] = np.exp(-0.5 * np.abs(z) ** 2)
    for n in range(1, rho.dim):
        amps[n] = amps[n - 1] * z / math.sqrt(n)

    value = np.einsum("mij,mn,nij->ij", amps.conj(), rho.entries, amps)
    values = value.real / math.pi
    lowest = float(np.min(values))
    if lowest < negativity_tol:
        warnings.warn(
            f"Husimi surface dips to {lowest:.3e} (below {negativity_tol:g}); the state is not positive",
            DensityWarning,
            stacklevel=2,
        )
    values = np.where((values < 0.0) & (values >= negativity_tol), 0.0, values)
    return grid.with_values(values, measure=0.5, label="husimi")


def smoothed_wigner(wigner: PhaseSpaceGrid) -> PhaseSpaceGrid:
    """
    Wigner surface convolved with the vacuum Gaussian (variance 1/2 per axis),
    expressed per d^2z like husimi().
    """
    if wigner.q_values.size < 2 or wigner.p_values.size < 2:
        raise ValidationError("Smoothing needs at least a 2x2 grid")
    sigma = (math.sqrt(0.5) / wigner.dq, math.sqrt(0.5) / wigner.dp)
    smoothed = gaussian_filter(wigner.values, sigma=sigma, mode="constant", cval=0.0, truncate=8.0)
    return wigner.with_values(smoothed / 0.5, measure=0.5, label="smoothed_wigner")


# ---------------------------------------------------------------------------
# Weyl-operator scan
# ---------------------------------------------------------------------------

def displacement_elements(alpha: np.ndarray, dim: int) -> np.ndarray:
    """
    <m|D(alpha)|n> for m, n < dim, on an array of alpha.

    m >= n: sqrt(n!/m!) alpha^(m-n) exp(-|alpha|^2/2) L_n^(m-n)(|alpha|^2)
    m <  n: sqrt(m!/n!) (-conj alpha)^(n-m) exp(-|alpha|^2/2) L_m^(n-m)(|alpha|^2)

    Returns:
        Complex array of shape (dim, dim) + alpha.shape
    """
    alpha = np.asarray(alpha, dtype=complex)
    a2 = np.abs(alpha) ** 2
    gauss = np.exp(-0.5 * a2)
    out = np.empty((dim, dim) + alpha.shape, dtype=complex)
    for m in range(dim):
        for n in range(dim):
            lo, hi = min(m, n), max(m, n)
            k = hi - lo
            coeff = math.exp(0.5 * (gammaln(lo + 1.0) - gammaln(hi + 1.0)))
            base = alpha if m >= n else -np.conj(alpha)
            out[m, n] = coeff * base ** k * gauss * eval_genlaguerre(lo, k, a2)
    return out


@dataclass
class WeylScanReport:
    """
    Grid scan of |tr[W_qp D]|.

    A zero fraction above suspect_fraction flags D as completeness-suspect. The
    scan is a heuristic witness on a finite grid, not a proof about the
    continuum: a zero set of measure zero (e.g. a ring) shows up as
    zero_set_detected without making D suspect.
    """

    values: PhaseSpaceGrid = field(repr=False)
    zero_fraction: float
    zero_set_detected: bool
    completeness_suspect: bool
    min_abs: float
    max_abs: float
    note: str = "finite-grid heuristic; a zero set of measure zero is not a completeness failure"

    def to_dict(self) -> Dict:
        return {
            "zero_fraction": self.zero_fraction,
            "zero_set_detected": self.zero_set_detected,
            "completeness_suspect": self.completeness_suspect,
            "min_abs": self.min_abs,
            "max_abs": self.max_abs,
            "note": self.note,
        }


def weyl_condition_scan(
    D: DensityMatrix,
    grid: PhaseSpaceGrid,
    zero_tol: float = 1e-10,
    suspect_fraction: float = 1e-3
) -> WeylScanReport:
    """
    Evaluate tr[W_qp D] with W_qp = D(alpha), alpha = (q + ip)/sqrt(2), over the grid.

    Example:
        >>> report = weyl_condition_scan(pure_state([1, 0]), make_phase_space_grid(4.0, 41))
        >>> report.zero_fraction
        0.0
    """
    q, p = grid.mesh()
    alpha = (q + 1j * p) / math.sqrt(2.0)
    elements = displacement_elements(alpha, D.dim)
    chi = np.einsum("mnij,nm->ij", elements, D.entries)

    magnitude = np.abs(chi)
    max_abs = float(np.max(magnitude))
    zero_fraction = float(np.mean(magnitude < zero_tol))

    zero_set = zero_fraction > 0
    if not zero_set and chi.size > 1:
        if float(np.max(np.abs(chi.imag))) <= 1e-12 * max(max_abs, 1e-300):
            re = chi.real
            flips = []
            if re.shape[0] > 1:
                flips.append(np.any(np.signbit(re[1:, :]) != np.signbit(re[:-1, :])))
            if re.shape[1] > 1:
                flips.append(np.any(np.signbit(re[:, 1:]) != np.signbit(re[:, :-1])))
            zero_set = bool(any(flips))
        else:
            zero_set = float(np.min(magnitude)) < 1e-6 * max_abs

    report = WeylScanReport(
        values=grid.with_values(magnitude, label="weyl_abs"),
        zero_fraction=zero_fraction,
        zero_set_detected=bool(zero_set),
        completeness_suspect=zero_fraction > suspect_fraction,
        min_abs=float(np.min(magnitude)),
        max_abs=max_abs,
    )
    logger.info("Weyl scan: zero fraction %.3e, zero set %s, suspect %s",
                report.zero_fraction, report.zero_set_detected, report.completeness_suspect)
    return report


# ---------------------------------------------------------------------------
# Cross-check and export
# ---------------------------------------------------------------------------

def compare_wigner_paths(
    rho: DensityMatrix,
    cfg: Optional[RadonConfig] = None,
    grid: Optional[PhaseSpaceGrid] = None,
    x_points: int = 4097,
    distributions: Optional[Sequence] = None,
    boundary_tol: float = 1e-6
) -> Dict:
    """
    Direct Wigner surface against the back-projection of exact (or given) projections.

    Returns:
        {"direct", "radon": PhaseSpaceGrid, "sup_error", "center_direct", "center_radon"}
    """
    cfg = cfg or RadonConfig()
    grid = grid or grid_for_dim(rho.dim)
    if distributions is None:
        half = support_radius(rho.dim) * math.sqrt(2.0)
        table = build_hermite_table(rho.dim - 1, np.linspace(-half, half, x_points))
        distributions = [
            quadrature_pdf(rho, float(t), table, edge_tol=np.inf)
            for t in half_circle_angles(cfg.angle_count)
        ]

    direct = wigner_direct(rho, grid, boundary_tol=boundary_tol)
    radon = wigner_inverse_radon(distributions, cfg, grid=grid)
    return {
        "direct": direct,
        "radon": radon,
        "sup_error": float(np.max(np.abs(radon.values - direct.values))),
        "center_direct": direct.value_at(0.0, 0.0),
        "center_radon": radon.value_at(0.0, 0.0),
    }


def grid_to_csv(grid: PhaseSpaceGrid, path: str) -> str:
    """Write (q, p, value) rows, q-major, 17 significant digits."""
    q, p = grid.mesh()
    frame = pd.DataFrame({"q": q.ravel(), "p": p.ravel(), "value": grid.values.ravel()})
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    return path


def grid_to_json(grid: PhaseSpaceGrid, path: Optional[str] = None) -> Dict:
    payload = {
        "label": grid.label,
        "measure": grid.measure,
        "q": grid.q_values.tolist(),
        "p": grid.p_values.tolist(),
        "values": grid.values.tolist(),
    }
    if path:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w') as f:
            json.dump(payload, f)
    return payload


def grid_from_json(data: Union[Dict, str]) -> PhaseSpaceGrid:
    if isinstance(data, str):
        with open(data, 'r') as f:
            data = json.load(f)
    return PhaseSpaceGrid(
        np.asarray(data["q"]), np.asarray(data["p"]), np.asarray(data["values"], dtype=float),
        measure=float(data.get("measure", 1.0)), label=data.get("label", ""),
    )


if __name__ == "__main__":
    """
    Direct vs back-projected Wigner function for the one-photon state.

    Usage:
        PYTHONPATH=src python -m phase_space.phase_space
    """
    one_photon = pure_state([0, 1, 0, 0])
    report = compare_wigner_paths(one_photon, RadonConfig(filter="ram-lak"))
    print(f"W(0,0) direct: {report['center_direct']:.5f} (exact {-1 / math.pi:.5f})")
    print(f"W(0,0) radon:  {report['center_radon']:.5f}")
    print(f"sup error:     {report['sup_error']:.4f}")
