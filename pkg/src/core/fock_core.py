"""
Fock Core Module

Truncated Fock-space linear algebra in the coordinate representation:
- Hermite functions h_n(x) by a scaled, overflow-free recursion
- Ladder, number, position and rotated-quadrature matrices
- Density matrices (validation, JSON form, fidelity / trace distance)
- Exact rotated-quadrature densities p_theta(x)
- Gauss-Hermite matrix elements <m|g(Q)|n> with order-doubling certification

Conventions: Q = (a* + a)/sqrt(2), P = i(a* - a)/sqrt(2), [Q, P] = i, and
Q_theta = exp(i theta N) Q exp(-i theta N) = Q cos(theta) + P sin(theta).
"""

import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Optional, Union

import numpy as np
from scipy import linalg
from scipy.special import gammaln, roots_hermite

from core.errors import (
    DensityMatrixError,
    DensityWarning,
    InsufficientQuadratureError,
    TruncationWarning,
    ValidationError,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
PI_QUARTER = np.pi ** -0.25

# Rescale the recursion whenever values pass this magnitude.
_RESCALE_AT = 1e150

# Certification evaluates at twice the configured order.
MAX_GH_ORDER = 2048


@dataclass(frozen=True)
class FockConfig:
    """
    Truncation and quadrature settings shared by the whole library.

    Attributes:
        dim: Truncation dimension d (basis indices 0..d-1)
        x_grid: Strictly increasing quadrature grid, symmetric about 0
        gh_order: Gauss-Hermite order for <m|g(Q)|n> integrals
        doubling_tol: Allowed change of a matrix element when the order is doubled
    """

    dim: int
    x_grid: np.ndarray = field(compare=False, repr=False)
    gh_order: int = 256
    doubling_tol: float = 1e-9

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError(f"dim must be >= 1, got {self.dim}")
        if self.gh_order < 2 * self.dim:
            raise ValidationError(
                f"gh_order must be >= 2*dim ({2 * self.dim}), got {self.gh_order}"
            )
        if self.gh_order > MAX_GH_ORDER:
            raise ValidationError(
                f"gh_order must be <= {MAX_GH_ORDER}, got {self.gh_order}",
                {"gh_order": self.gh_order, "max": MAX_GH_ORDER},
            )
        if not self.doubling_tol > 0:
            raise ValidationError(f"doubling_tol must be positive, got {self.doubling_tol}")

        x = np.asarray(self.x_grid, dtype=float)
        if x.ndim != 1 or x.size < 3:
            raise ValidationError("x_grid must be a 1-D array with at least 3 points")
        if np.any(np.diff(x) <= 0):
            raise ValidationError("x_grid must be strictly increasing")
        if np.max(np.abs(x + x[::-1])) > 1e-10:
            raise ValidationError("x_grid must be symmetric about 0")

        required = math.sqrt(2 * self.dim) + 3.0
        if x[-1] < required:
            raise ValidationError(
                f"x_grid must span at least [-{required:.3f}, {required:.3f}], "
                f"got [{x[0]:.3f}, {x[-1]:.3f}]"
            )
        x.flags.writeable = False
        object.__setattr__(self, "x_grid", x)

    @property
    def dx(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0])


def make_fock_config(
    dim: int,
    gh_order: int = 256,
    x_margin: float = 5.0,
    x_points: int = 4097,
    doubling_tol: float = 1e-9
) -> FockConfig:
    """
    Build a FockConfig with a uniform symmetric grid.

    Args:
        dim: Truncation dimension
        gh_order: Gauss-Hermite order (raised to 2*dim if smaller)
        x_margin: Extra half-width beyond the classical turning point sqrt(2*dim)
        x_points: Number of grid points (odd keeps x = 0 on the grid)
        doubling_tol: Certification tolerance for Gauss-Hermite matrix elements

    Returns:
        FockConfig

    Example:
        >>> cfg = make_fock_config(8)
        >>> cfg.x_grid[0], cfg.x_grid[-1]
        (-9.0, 9.0)
    """
    half_width = math.sqrt(2 * dim) + max(x_margin, 3.0)
    x_grid = np.linspace(-half_width, half_width, x_points)
    return FockConfig(dim=dim, x_grid=x_grid, gh_order=max(gh_order, 2 * dim), doubling_tol=doubling_tol)


def fock_config_from_dict(section: Dict, dim: Optional[int] = None, doubling_tol: float = 1e-9) -> FockConfig:
    """Build a FockConfig from the `fock:` config section; doubling_tol comes from the tolerances."""
    return make_fock_config(
        dim=dim if dim is not None else section.get("dim", 8),
        gh_order=section.get("gh_order", 256),
        x_margin=section.get("x_margin", 5.0),
        x_points=section.get("x_points", 4097),
        doubling_tol=doubling_tol,
    )


# ---------------------------------------------------------------------------
# Hermite functions
# ---------------------------------------------------------------------------

def _scaled_hermite_recursion(n_max: int, x: np.ndarray, log_start: np.ndarray) -> np.ndarray:
    """
    Run h_{n+1} = x sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1} from
    h_0 = pi^(-1/4) exp(log_start), keeping a per-point log scale so that
    neither the prefactor nor the polynomial growth can overflow.
    """
    out = np.zeros((n_max + 1,) + x.shape)
    log_scale = np.array(log_start, dtype=float, copy=True)

    prev = np.zeros_like(x)
    cur = np.full_like(x, PI_QUARTER)
    out[0] = cur * np.exp(log_scale)

    for n in range(n_max):
        nxt = x * math.sqrt(2.0 / (n + 1)) * cur - math.sqrt(n / (n + 1)) * prev
        prev, cur = cur, nxt

        big = np.abs(cur) > _RESCALE_AT
        if np.any(big):
            cur = np.where(big, cur / _RESCALE_AT, cur)
            prev = np.where(big, prev / _RESCALE_AT, prev)
            log_scale = np.where(big, log_scale + math.log(_RESCALE_AT), log_scale)

        with np.errstate(over="ignore", under="ignore"):
            out[n + 1] = cur * np.exp(log_scale)

    return out


def hermite_functions(n_max: int, x) -> np.ndarray:
    """
    Evaluate h_0..h_{n_max} at x.

    Args:
        n_max: Highest index (>= 0)
        x: Scalar or array of points

    Returns:
        Array of shape (n_max + 1,) + shape(x)
    """
    if n_max < 0:
        raise ValidationError(f"Hermite index must be >= 0, got {n_max}")
    x = np.asarray(x, dtype=float)
    return _scaled_hermite_recursion(n_max, x, -0.5 * x * x)


def weightless_hermite_functions(n_max: int, t) -> np.ndarray:
    """
    Evaluate u_n(t) = h_n(t) exp(t^2/2), the normalized polynomials.

    Gauss-Hermite integrands h_m h_n g exp(t^2) are formed as u_m u_n g,
    so the weight factor is never exponentiated on its own.
    """
    t = np.asarray(t, dtype=float)
    return _scaled_hermite_recursion(n_max, t, np.zeros_like(t))


def hermite_function(n: int, x: float) -> float:
    """
    The n-th Hermite function h_n(x) = (2^n n! sqrt(pi))^(-1/2) H_n(x) exp(-x^2/2).

    Args:
        n: Index (>= 0)
        x: Point

    Returns:
        h_n(x)

    Example:
        >>> round(hermite_function(0, 0.0), 10)
        0.7511255444
        >>> hermite_function(3, 0.0)
        0.0
    """
    return float(hermite_functions(n, x)[n])


def hermite_polynomials(n_max: int, x) -> np.ndarray:
    """Physicists' Hermite polynomials H_0..H_{n_max} by the three-term recursion."""
    x = np.asarray(x, dtype=float)
    out = np.zeros((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * x
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_max):
            out[n + 1] = 2.0 * x * out[n] - 2.0 * n * out[n - 1]
    return out


@dataclass(frozen=True)
class HermiteTable:
    """
    Hermite functions h_n tabulated on a grid.

    Attributes:
        order: Maximum index n
        x: Grid points
        values: Array (order + 1, len(x)) of h_n(x)
    """

    order: int
    x: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def polynomials(self) -> np.ndarray:
        """Weight-stripped H_n(x) on the same grid (may overflow for large order)."""
        return hermite_polynomials(self.order, self.x)

    def recursion_residual(self) -> float:
        """
        Max relative defect of H_{n+1} = 2x H_n - 2n H_{n-1}, with H_n
        recovered from the tabulated h_n, over finite entries.
        """
        n = np.arange(self.order + 1)
        log_norm = 0.5 * (n * math.log(2.0) + _log_factorials(self.order) + 0.5 * math.log(math.pi))
        with np.errstate(over="ignore", invalid="ignore"):
            poly = self.values * np.exp(log_norm[:, None] + 0.5 * self.x[None, :] ** 2)
            worst = 0.0
            for k in range(1, self.order):
                lhs = poly[k + 1]
                rhs = 2.0 * self.x * poly[k] - 2.0 * k * poly[k - 1]
                scale = np.abs(2.0 * self.x * poly[k]) + np.abs(2.0 * k * poly[k - 1]) + 1e-300
                ok = np.isfinite(lhs) & np.isfinite(rhs) & (np.abs(self.values[k + 1]) > 1e-250)
                if np.any(ok):
                    worst = max(worst, float(np.max(np.abs(lhs - rhs)[ok] / scale[ok])))
        return worst

    def orthonormality_residual(self, gh_order: int) -> float:
        """Max |<h_m, h_n> - delta_mn| by Gauss-Hermite quadrature."""
        t, w = gauss_hermite_rule(gh_order)
        u = weightless_hermite_functions(self.order, t)
        gram = (u * w) @ u.T
        return float(np.max(np.abs(gram - np.eye(self.order + 1))))


def build_hermite_table(order: int, x_grid) -> HermiteTable:
    """Tabulate h_0..h_order on x_grid."""
    x = np.asarray(x_grid, dtype=float)
    return HermiteTable(order=order, x=x, values=hermite_functions(order, x))


def _log_factorials(n_max: int) -> np.ndarray:
    return gammaln(np.arange(n_max + 1) + 1.0)


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderOperators:
    """Truncated a, a* and N = diag(0..dim-1)."""

    a_matrix: np.ndarray = field(repr=False)
    a_dagger_matrix: np.ndarray = field(repr=False)
    number_matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.a_matrix.shape[0]

    @property
    def position(self) -> np.ndarray:
        return (self.a_dagger_matrix + self.a_matrix) / math.sqrt(2.0)

    @property
    def momentum(self) -> np.ndarray:
        return 1j * (self.a_dagger_matrix - self.a_matrix) / math.sqrt(2.0)


def build_ladder_operators(dim: int) -> LadderOperators:
    """
    Build the truncated ladder operators.

    Args:
        dim: Truncation dimension

    Returns:
        LadderOperators with a[n-1][n] = sqrt(n); N is built directly as diag(n)
    """
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    return LadderOperators(
        a_matrix=a,
        a_dagger_matrix=a.T.copy(),
        number_matrix=np.diag(np.arange(dim, dtype=float)),
    )


def rotated_quadrature_matrix(theta: float, dim: int) -> np.ndarray:
    """Q_theta = Q cos(theta) + P sin(theta) in the truncated basis."""
    ops = build_ladder_operators(dim)
    return math.cos(theta) * ops.position + math.sin(theta) * ops.momentum


# ---------------------------------------------------------------------------
# Density matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityMatrix:
    """
    Fock-basis matrix rho[m][n] = <m|T|n>.

    Hermiticity is checked on construction (relative tolerance) and then
    enforced exactly by symmetrization. Physicality (unit trace, positive
    spectrum) is checked separately by validate_physical().
    """

    entries: np.ndarray = field(repr=False)
    hermitian_tol: float = 1e-12

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
            raise DensityMatrixError(f"Density matrix must be square, got shape {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise DensityMatrixError("Density matrix has non-finite entries")

        defect = float(np.max(np.abs(rho - rho.conj().T)))
        scale = max(1.0, float(np.max(np.abs(rho))))
        if defect > self.hermitian_tol * scale:
            raise DensityMatrixError(
                f"Density matrix is not Hermitian (defect {defect:.3e})",
                {"hermitian_defect": defect},
            )

        rho = 0.5 * (rho + rho.conj().T)
        rho.flags.writeable = False
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def eigenvalues(self) -> np.ndarray:
        return linalg.eigvalsh(self.entries)

    def edge_mass(self) -> float:
        """Population of the two highest levels, sum of rho[n][n] for n >= dim-2."""
        return float(np.sum(np.diag(self.entries).real[max(self.dim - 2, 0):]))

    def validate_physical(self, trace_tol: float = 1e-12, eig_tol: float = -1e-10) -> "DensityMatrix":
        """
        Check unit trace and positivity.

        Raises:
            DensityMatrixError: If trace or smallest eigenvalue is out of tolerance
        """
        tr = self.trace()
        if abs(tr - 1.0) > trace_tol:
            raise DensityMatrixError(
                f"Trace {tr:.15f} differs from 1 by more than {trace_tol:g}",
                {"trace": tr},
            )
        smallest = float(self.eigenvalues()[0])
        if smallest < eig_tol:
            raise DensityMatrixError(
                f"Smallest eigenvalue {smallest:.3e} below {eig_tol:g}",
                {"min_eigenvalue": smallest},
            )
        return self


def make_density_matrix(
    entries,
    trace_tol: float = 1e-12,
    eig_tol: float = -1e-10,
    check_physical: bool = True,
    hermitian_tol: float = 1e-12
) -> DensityMatrix:
    """
    Build a DensityMatrix and (optionally) check that it is a physical state.

    Args:
        entries: Square complex array
        trace_tol: Allowed |trace - 1|
        eig_tol: Smallest allowed eigenvalue
        check_physical: Skip the trace / positivity check when False
        hermitian_tol: Allowed Hermiticity defect, relative to max(1, max|entry|)

    Returns:
        DensityMatrix
    """
    rho = DensityMatrix(np.asarray(entries), hermitian_tol=hermitian_tol)
    if check_physical:
        rho.validate_physical(trace_tol=trace_tol, eig_tol=eig_tol)
    return rho


def pure_state(vector) -> DensityMatrix:
    """|psi><psi| for a (normalized here) Fock-coefficient vector."""
    psi = np.asarray(vector, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return make_density_matrix(np.outer(psi, psi.conj()))


def density_matrix_to_json(rho: DensityMatrix) -> Dict:
    """
    JSON form {"dim": d, "re": [[...]], "im": [[...]]}, row-major.
    """
    return {
        "dim": rho.dim,
        "re": rho.entries.real.tolist(),
        "im": rho.entries.imag.tolist(),
    }


def density_matrix_from_json(
    data: Union[Dict, str],
    trace_tol: float = 1e-12,
    eig_tol: float = -1e-10,
    hermitian_tol: float = 1e-12
) -> DensityMatrix:
    """
    Read a density matrix from its JSON form (dict or file path).

    Raises:
        DensityMatrixError: On shape mismatch, non-Hermitian input or bad trace
    """
    if isinstance(data, str):
        with open(data, 'r') as f:
            data = json.load(f)

    try:
        dim = int(data["dim"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise DensityMatrixError(f"Malformed density-matrix JSON: {e}")

    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise DensityMatrixError(
            f"Expected {dim}x{dim} arrays, got re {re.shape} and im {im.shape}"
        )
    return make_density_matrix(re + 1j * im, trace_tol=trace_tol, eig_tol=eig_tol, hermitian_tol=hermitian_tol)


def _as_array(rho) -> np.ndarray:
    return rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    vals, vecs = linalg.eigh(0.5 * (matrix + matrix.conj().T))
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    a, b = _as_array(rho), _as_array(sigma)
    root = _psd_sqrt(a)
    inner = root @ b @ root
    vals = linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sum(np.sqrt(np.clip(vals, 0.0, None))) ** 2)


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of rho - sigma."""
    diff = _as_array(rho) - _as_array(sigma)
    return float(0.5 * np.sum(np.abs(linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))


# ---------------------------------------------------------------------------
# Quadrature distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureDistribution:
    """
    Density p_theta(x) of the rotated quadrature on a grid.

    Attributes:
        theta: Angle in [0, 2pi)
        x: Grid
        p: Density values
        imag_residue: Largest imaginary part discarded from the double sum
    """

    theta: float
    x: np.ndarray = field(repr=False)
    p: np.ndarray = field(repr=False)
    imag_residue: float = 0.0
    exact: bool = True

    def normalization(self) -> float:
        return float(np.trapezoid(self.p, self.x))

    def expectation(self, values: np.ndarray) -> float:
        """Trapezoid integral of values(x) * p(x)."""
        return float(np.trapezoid(values * self.p, self.x))

    def check(self, normalization_tol: float = 1e-8, negativity_tol: float = -1e-12) -> bool:
        """
        Warn (DensityWarning) when |integral - 1| > normalization_tol or min p < negativity_tol.

        Returns:
            True when both hold
        """
        ok = True
        norm = self.normalization()
        if abs(norm - 1.0) > normalization_tol:
            warnings.warn(
                f"Density at theta={self.theta:.6f} integrates to {norm:.12f}",
                DensityWarning,
                stacklevel=2,
            )
            ok = False
        lowest = float(np.min(self.p)) if self.p.size else 0.0
        if lowest < negativity_tol:
            warnings.warn(
                f"Density at theta={self.theta:.6f} dips to {lowest:.3e}",
                DensityWarning,
                stacklevel=2,
            )
            ok = False
        return ok

    def to_json(self) -> Dict:
        return {"theta": self.theta, "x": self.x.tolist(), "p": self.p.tolist()}

    @classmethod
    def from_json(cls, data: Dict) -> "QuadratureDistribution":
        x = np.asarray(data["x"], dtype=float)
        p = np.asarray(data["p"], dtype=float)
        if x.shape != p.shape:
            raise ValidationError(f"x and p lengths differ: {x.shape} vs {p.shape}")
        return cls(theta=float(data["theta"]) % TWO_PI, x=x, p=p)


def reduce_angle(theta: float) -> float:
    """Map an angle into [0, 2pi)."""
    if not math.isfinite(theta):
        raise ValidationError(f"Angle must be finite, got {theta}")
    reduced = math.fmod(theta, TWO_PI)
    if reduced < 0:
        reduced += TWO_PI
    return 0.0 if reduced >= TWO_PI else reduced


def quadrature_pdf(
    rho: DensityMatrix,
    theta: float,
    table: HermiteTable,
    edge_tol: float = 1e-6,
    imag_tol: float = 1e-12
) -> QuadratureDistribution:
    """
    Exact density of Q_theta in state rho on the table grid.

    p(x) = sum_{m,n} rho[m][n] exp(-i theta (m - n)) h_m(x) h_n(x)

    Args:
        rho: State
        theta: Angle (reduced mod 2pi)
        table: Hermite table with order >= rho.dim - 1
        edge_tol: Edge-mass threshold for the truncation warning
        imag_tol: Imaginary residue of the double sum above which a warning is logged

    Returns:
        QuadratureDistribution (never clamped; tiny negative values stay visible)

    Example:
        >>> cfg = make_fock_config(4)
        >>> table = build_hermite_table(3, cfg.x_grid)
        >>> vac = pure_state([1, 0, 0, 0])
        >>> dist = quadrature_pdf(vac, 0.3, table)
        >>> abs(dist.normalization() - 1) < 1e-8
        True
    """
    if table.order < rho.dim - 1:
        raise ValidationError(
            f"Hermite table order {table.order} too small for dim {rho.dim}"
        )

    edge = rho.edge_mass()
    if edge > edge_tol:
        warnings.warn(
            f"Truncation-edge mass {edge:.3e} exceeds {edge_tol:g}; density may be unreliable",
            TruncationWarning,
            stacklevel=2,
        )

    theta = reduce_angle(theta)
    n = np.arange(rho.dim)
    amplitudes = np.exp(-1j * theta * n)[:, None] * table.values[:rho.dim]
    p = np.einsum("mx,mn,nx->x", amplitudes, rho.entries, amplitudes.conj())

    imag_residue = float(np.max(np.abs(p.imag))) if p.size else 0.0
    if imag_residue > imag_tol:
        logger.warning("quadrature_pdf imaginary residue %.3e at theta=%.6f exceeds %g", imag_residue, theta, imag_tol)

    return QuadratureDistribution(theta=theta, x=table.x, p=p.real.copy(), imag_residue=imag_residue)


# ---------------------------------------------------------------------------
# Gauss-Hermite matrix elements
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16)
def gauss_hermite_rule(order: int):
    """
    Nodes and weights for weight exp(-t^2), cached per order.

    Nodes whose weights underflow to zero are dropped; they contribute
    nothing and the weightless polynomials can overflow there.

    Raises:
        ValidationError: If order is outside [1, 2 * MAX_GH_ORDER]
        InsufficientQuadratureError: If the rule comes back non-finite
    """
    if not 1 <= order <= 2 * MAX_GH_ORDER:
        raise ValidationError(
            f"Gauss-Hermite order must lie in [1, {2 * MAX_GH_ORDER}], got {order}",
            {"order": order},
        )
    nodes, weights = roots_hermite(order)
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
        raise InsufficientQuadratureError(f"Gauss-Hermite rule of order {order} is not finite", {"order": order})
    keep = weights > 0.0
    nodes, weights = nodes[keep], weights[keep]
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def _evaluate(g: Callable, t: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(g(t), dtype=float), t.shape)


def _gh_operator_matrix(g: Callable, size: int, order: int):
    """Matrix <m|g(Q)|n> and the matching integral of |integrand| (roundoff scale)."""
    t, w = gauss_hermite_rule(order)
    u = weightless_hermite_functions(size - 1, t)
    gw = w * _evaluate(g, t)
    matrix = (u * gw) @ u.T
    mass = (np.abs(u) * np.abs(gw)) @ np.abs(u).T
    return matrix, mass


def operator_matrix(
    g: Callable,
    cfg: FockConfig,
    size: Optional[int] = None,
    certify: bool = True,
    tol: Optional[float] = None
) -> np.ndarray:
    """
    Full matrix <m|g(Q)|n> for m, n < size.

    Args:
        g: Vectorized real function
        cfg: Supplies the Gauss-Hermite order
        size: Matrix size (defaults to cfg.dim)
        certify: Recompute at doubled order and compare
        tol: Allowed change under doubling, relative to max(1, integral of |integrand|);
            defaults to cfg.doubling_tol

    Returns:
        Real symmetric (size x size) array

    Raises:
        InsufficientQuadratureError: If doubling the order moves any entry too far
    """
    size = cfg.dim if size is None else size
    tol = cfg.doubling_tol if tol is None else tol
    matrix, _ = _gh_operator_matrix(g, size, cfg.gh_order)

    if certify:
        doubled, mass = _gh_operator_matrix(g, size, 2 * cfg.gh_order)
        excess = np.abs(doubled - matrix) / (tol * np.maximum(1.0, mass))
        excess[~np.isfinite(excess)] = np.inf
        if np.max(excess) > 1.0:
            m, n = np.unravel_index(int(np.argmax(excess)), excess.shape)
            change = float(abs(doubled[m, n] - matrix[m, n]))
            raise InsufficientQuadratureError(
                f"Gauss-Hermite order {cfg.gh_order} insufficient: doubling changed "
                f"<{m}|g(Q)|{n}> by {change:.3e}",
                {"gh_order": cfg.gh_order, "m": int(m), "n": int(n), "change": change},
            )
    return matrix


def matrix_element(
    g: Callable,
    m: int,
    n: int,
    cfg: FockConfig,
    certify: bool = True,
    tol: Optional[float] = None
) -> float:
    """
    <m|g(Q)|n> = integral of h_m(x) g(x) h_n(x) dx by Gauss-Hermite quadrature.

    Args:
        g: Real function, vectorized over numpy arrays
        m, n: Fock indices
        cfg: Supplies the Gauss-Hermite order
        certify: Recompute at doubled order and compare
        tol: Allowed change under doubling, relative to max(1, integral of |integrand|);
            defaults to cfg.doubling_tol

    Returns:
        The matrix element

    Example:
        >>> cfg = make_fock_config(4)
        >>> round(matrix_element(lambda x: x, 1, 0, cfg), 12) == round(2 ** -0.5, 12)
        True
    """
    if m < 0 or n < 0:
        raise ValidationError(f"Fock indices must be >= 0, got ({m}, {n})")
    tol = cfg.doubling_tol if tol is None else tol

    lo, hi = sorted((m, n))

    def element(order: int):
        t, w = gauss_hermite_rule(order)
        u = weightless_hermite_functions(hi, t)
        terms = w * u[lo] * u[hi] * _evaluate(g, t)
        return float(np.sum(terms)), float(np.sum(np.abs(terms)))

    value, _ = element(cfg.gh_order)
    if certify:
        doubled, mass = element(2 * cfg.gh_order)
        change = abs(doubled - value)
        if not math.isfinite(change) or change > tol * max(1.0, mass):
            raise InsufficientQuadratureError(
                f"<{m}|g(Q)|{n}>: doubling gh_order {cfg.gh_order} changed the value by {change:.3e}",
                {"m": m, "n": n, "gh_order": cfg.gh_order, "change": change},
            )
    return value


def commutator_residual(
    g: Callable,
    g_prime: Callable,
    phi,
    cfg: FockConfig,
    relation: int = 1
) -> float:
    """
    Norm of the defect in the commutation relations with a bounded g(Q).

    relation=1: (g(Q) a* - a* g(Q)) phi - g'(Q) phi / sqrt(2)
    relation=2: (g(Q) a  - a  g(Q)) phi + g'(Q) phi / sqrt(2)

    Args:
        g, g_prime: Smooth bounded function and its derivative
        phi: Normalized coefficient vector supported on indices < dim/2
        cfg: Truncation and quadrature settings
        relation: 1 or 2

    Returns:
        Euclidean norm of the residual vector
    """
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (cfg.dim,):
        raise ValidationError(f"phi must have length {cfg.dim}, got {phi.shape}")
    if abs(np.linalg.norm(phi) - 1.0) > 1e-12:
        raise ValidationError("phi must be normalized")
    if np.any(np.abs(phi[(cfg.dim + 1) // 2:]) > 0):
        raise ValidationError("phi must be supported on indices < dim/2")
    if relation not in (1, 2):
        raise ValidationError(f"relation must be 1 or 2, got {relation}")

    ops = build_ladder_operators(cfg.dim)
    G = operator_matrix(g, cfg)
    G_prime = operator_matrix(g_prime, cfg)

    if relation == 1:
        lhs = (G @ ops.a_dagger_matrix - ops.a_dagger_matrix @ G) @ phi
        rhs = G_prime @ phi / math.sqrt(2.0)
    else:
        lhs = (G @ ops.a_matrix - ops.a_matrix @ G) @ phi
        rhs = -G_prime @ phi / math.sqrt(2.0)
    return float(np.linalg.norm(lhs - rhs))


if __name__ == "__main__":
    """
    Quick look at the Fock core.

    Usage:
        PYTHONPATH=src python -m core.fock_core
    """
    cfg = make_fock_config(6)
    print(f"h_0(0) = {hermite_function(0, 0.0):.10f}")
    print(f"h_1(1) = {hermite_function(1, 1.0):.10f}")
    print(f"<1|Q|0> = {matrix_element(lambda x: x, 1, 0, cfg):.12f}")

    table = build_hermite_table(cfg.dim - 1, cfg.x_grid)
    one_photon = pure_state([0, 1, 0, 0, 0, 0])
    dist = quadrature_pdf(one_photon, 0.0, table)
    print(f"|1> density normalization: {dist.normalization():.12f}")
