"""
Special Functions Module

Dawson's integral daw(x) = exp(-x^2) * integral_0^x exp(t^2) dt, its derivative
ladder daw^(k), and the pattern functions f^(m) = 2 daw^(m+1) used for
reconstruction.

Evaluation bands for daw:
- |x| < switch_small: MacLaurin series
- switch_small <= |x| < switch_large: scipy.special.dawsn
- |x| >= switch_large: asymptotic expansion, optimally truncated

Derivatives near the origin come from the recurrence
    daw^(1) = 1 - 2x daw,   daw^(k+1) = -2x daw^(k) - 2k daw^(k-1)  (k >= 1)
cross-checked against the term-wise differentiated MacLaurin series for high
orders. Away from the origin the differentiated asymptotic expansion or a
Fourier-integral form takes over (see DawsonEvaluator).

Also here: the Hermite-series form of f, the tabulated Gradshteyn integral
used for <n|f(Q)|n>, and the closed forms for <n+k|f^(k+2l)(Q)|n>.
"""

import logging
import math
import os
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from scipy.special import dawsn, gammaln, roots_legendre

from core.errors import (
    ClosedFormMismatchError,
    DomainError,
    OrderOverflowError,
    ValidationError,
)
from core.fock_core import FockConfig, hermite_functions, matrix_element

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
LOG4 = math.log(4.0)


def _scalar_or_array(values: np.ndarray, like):
    return float(values) if np.ndim(like) == 0 else values


def dawson_maclaurin(x) -> np.ndarray:
    """
    daw(x) = sum_m (-1)^m m! 4^m / (2m+1)! x^(2m+1).

    Consecutive terms have ratio -2x^2/(2m+3); accurate for |x| up to ~2.
    """
    x = np.asarray(x, dtype=float)
    x2 = x * x
    term = x.copy()
    total = x.copy()
    for m in range(400):
        term = term * (-2.0 * x2 / (2 * m + 3))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def dawson_asymptotic(x, max_terms: int = 200) -> np.ndarray:
    """
    daw(x) ~ 1/(2x) sum_j (2j-1)!! / (2x^2)^j, truncated at the smallest term.

    Only meaningful for large |x| (the series diverges); the truncation error is
    about exp(-x^2) relative.
    """
    x = np.asarray(x, dtype=float)
    inv = 1.0 / (2.0 * x * x)
    term = np.ones_like(x)
    total = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for j in range(1, max_terms):
        nxt = term * (2 * j - 1) * inv
        active = active & (np.abs(nxt) < np.abs(term))
        if not np.any(active):
            break
        total = np.where(active, total + nxt, total)
        term = np.where(active, nxt, term)
    return total / (2.0 * x)


def _series_terms(k: int, flat: np.ndarray, extra_terms: int) -> np.ndarray:
    m0 = k // 2
    n_terms = extra_terms + int(4.0 * float(np.max(flat * flat)))
    m = np.arange(m0, m0 + n_terms)
    power = (2 * m + 1 - k).astype(float)
    log_coeff = gammaln(m + 1.0) + m * LOG4 - gammaln(power + 1.0)
    sign = np.where(m % 2 == 0, 1.0, -1.0)

    zero = flat == 0.0
    log_abs = np.log(np.where(zero, 1.0, np.abs(flat)))
    terms = np.exp(log_coeff[None, :] + power[None, :] * log_abs[:, None])
    odd = (power % 2 == 1)[None, :]
    terms = terms * sign[None, :] * np.where(odd, np.sign(flat)[:, None], 1.0)
    terms[zero] = np.where(power == 0, sign * np.exp(log_coeff), 0.0)
    return terms


def dawson_derivative_series(k: int, x, extra_terms: int = 160) -> np.ndarray:
    """
    k-th derivative of daw from the term-wise differentiated MacLaurin series:

        daw^(k)(x) = sum_{2m+1 >= k} (-1)^m m! 4^m / (2m+1-k)! * x^(2m+1-k)

    Coefficients are formed in log space (log-gamma), so no factorial overflows.
    Terms grow like exp(x^2) before they decay; keep |x| modest.
    """
    values, _ = dawson_derivative_series_bound(k, x, extra_terms)
    return values


def dawson_derivative_series_bound(k: int, x, extra_terms: int = 160):
    """
    The differentiated MacLaurin series together with its roundoff bound.

    Returns:
        (values, roundoff) where roundoff is eps * sqrt(n_terms) * sum|terms|,
        the size of the cancellation error in the summed series
    """
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    if flat.size == 0:
        return np.zeros_like(x), np.zeros_like(x)
    terms = _series_terms(k, flat, extra_terms)
    roundoff = np.finfo(float).eps * math.sqrt(terms.shape[1]) * np.abs(terms).sum(axis=1)
    return terms.sum(axis=1).reshape(x.shape), roundoff.reshape(x.shape)


def dawson_derivative_asymptotic(k: int, x, max_terms: int = 400):
    """
    Differentiated large-|x| expansion of daw, term by term:

        daw^(k)(x) ~ (-1)^k sum_j (2j-1)!!/2^(j+1) * (2j+k)!/(2j)! * x^-(2j+k+1)

    Summation stops at the smallest term.

    Returns:
        (values, converged) where converged marks points whose last kept term
        fell below 1e-16 of the running sum. x must be nonzero.
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    term = np.exp(gammaln(k + 1.0) - (k + 1) * np.log(ax) - LOG2)
    total = term.copy()
    converged = term == 0.0
    active = ~converged
    for j in range(max_terms):
        ratio = (2 * j + k + 2) * (2 * j + k + 1) / (2.0 * (2 * j + 2) * ax * ax)
        active &= ratio < 1.0
        if not np.any(active):
            break
        nxt = term * ratio
        total = np.where(active, total + nxt, total)
        term = np.where(active, nxt, term)
        done = active & (np.abs(nxt) <= 1e-16 * np.abs(total))
        converged |= done
        active &= ~done

    values = (-1.0) ** k * total
    values = np.where(x < 0, (-1.0) ** (k + 1) * values, values)
    return values, converged


@lru_cache(maxsize=32)
def _legendre_rule(order: int):
    nodes, weights = roots_legendre(order)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def dawson_derivative_integral(k_max: int, x, chunk: int = 1024) -> np.ndarray:
    """
    daw^(0)..daw^(k_max) from the Fourier form

        daw^(k)(x) = 1/2 * integral_0^inf t^k exp(-t^2/4) sin(xt + k pi/2) dt

    by Gauss-Legendre on [0, sqrt(2 k_max) + 14]. The error is absolute, at
    roundoff relative to sup|daw^(k)|, and stays there at every x.

    Raises:
        DomainError: If any x is not finite

    Returns:
        Array of shape (k_max + 1,) + shape(x)
    """
    x = np.asarray(x, dtype=float)
    flat = np.abs(np.atleast_1d(x).ravel())
    out = np.empty((k_max + 1, flat.size))
    if flat.size == 0:
        return out.reshape((k_max + 1,) + x.shape)
    if not np.all(np.isfinite(flat)):
        raise DomainError(
            "Derivatives of daw need finite arguments",
            {"non_finite": int(np.count_nonzero(~np.isfinite(flat)))},
        )

    upper = math.sqrt(2.0 * k_max) + 14.0
    order = 80 + int(math.ceil(float(np.max(flat)) * upper))
    nodes, weights = _legendre_rule(order)
    t = 0.5 * upper * (nodes + 1.0)
    w = 0.5 * upper * weights * np.exp(-0.25 * t * t)
    kernel = w[None, :] * t[None, :] ** np.arange(k_max + 1)[:, None]

    for start in range(0, flat.size, chunk):
        phase = np.outer(flat[start:start + chunk], t)
        s = np.sin(phase) @ kernel.T
        c = np.cos(phase) @ kernel.T
        for k in range(k_max + 1):
            out[k, start:start + chunk] = 0.5 * (s, c, -s, -c)[k % 4][:, k]

    orders = np.arange(k_max + 1)[:, None]
    negative = (np.atleast_1d(x).ravel() < 0)[None, :]
    out = np.where(negative, (-1.0) ** (orders + 1) * out, out)
    return out.reshape((k_max + 1,) + x.shape)


@dataclass(frozen=True)
class DawsonEvaluator:
    """
    Dawson's integral and its derivative ladder.

    daw itself switches between three methods by |x|. Orders k >= 2 come from
    the forward recurrence for |x| <= recurrence_radius (checked against the
    MacLaurin series for high orders inside series_radius), from the
    differentiated asymptotic expansion where it converges, and from the
    Fourier integral elsewhere. The forward recurrence amplifies the error in
    daw by |H_k(x)|, which rules it out away from the origin.

    Attributes:
        switch_small: |x| below which the MacLaurin series is used
        switch_large: |x| from which the asymptotic expansion is used
        max_derivative_order: Highest derivative order served
        series_radius: |x| inside which high orders are cross-checked against the series
        recurrence_check_order: Lowest order that gets the cross-check
        mismatch_tol: Relative recurrence/series mismatch that triggers the series path,
            taken only where the mismatch also exceeds the series roundoff bound
        recurrence_radius: |x| up to which the forward recurrence is trusted
    """

    switch_small: float = 1.0
    switch_large: float = 6.0
    max_derivative_order: int = 40
    series_radius: float = 3.0
    recurrence_check_order: int = 16
    mismatch_tol: float = 1e-9
    recurrence_radius: float = 4.0

    def __post_init__(self):
        if not 0 < self.switch_small < self.switch_large:
            raise ValidationError("Need 0 < switch_small < switch_large")
        if self.max_derivative_order < 1:
            raise ValidationError("max_derivative_order must be >= 1")
        if self.series_radius > self.recurrence_radius:
            raise ValidationError("series_radius must not exceed recurrence_radius")

    def method_for(self, x: float) -> str:
        ax = abs(x)
        if ax < self.switch_small:
            return "maclaurin"
        if ax < self.switch_large:
            return "rational_core"
        return "asymptotic"

    def dawson(self, x):
        """daw(x) with automatic method switchover."""
        xa = np.asarray(x, dtype=float)
        ax = np.abs(xa)
        out = np.empty_like(xa)

        small = ax < self.switch_small
        large = ax >= self.switch_large
        core = ~small & ~large

        if np.any(small):
            out[small] = dawson_maclaurin(xa[small])
        if np.any(core):
            out[core] = dawsn(xa[core])
        if np.any(large):
            out[large] = dawson_asymptotic(xa[large])
        return _scalar_or_array(out, x)

    def derivatives(self, k_max: int, x, check: bool = True) -> np.ndarray:
        """
        daw^(0)..daw^(k_max) at x.

        Args:
            k_max: Highest order
            x: Point(s)
            check: Cross-check high recurrence orders against the series

        Returns:
            Array of shape (k_max + 1,) + shape(x)

        Raises:
            OrderOverflowError: If k_max exceeds max_derivative_order
        """
        if k_max < 0:
            raise ValidationError(f"Derivative order must be >= 0, got {k_max}")
        if k_max > self.max_derivative_order:
            raise OrderOverflowError(
                f"Derivative order {k_max} exceeds max_derivative_order {self.max_derivative_order}",
                {"order": k_max, "max": self.max_derivative_order},
            )

        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        out = np.empty((k_max + 1, flat.size))
        out[0] = self.dawson(flat)
        if k_max >= 1:
            out[1] = 1.0 - 2.0 * flat * out[0]

        if k_max >= 2:
            near = np.abs(flat) <= self.recurrence_radius
            if np.any(near):
                xn = flat[near]
                ladder = out[:, near]
                for k in range(1, k_max):
                    ladder[k + 1] = -2.0 * xn * ladder[k] - 2.0 * k * ladder[k - 1]
                if check and k_max >= self.recurrence_check_order:
                    self._cross_check(ladder, xn)
                out[:, near] = ladder
            if not np.all(near):
                out[:, ~near] = self._far_ladder(k_max, flat[~near], out[:, ~near])

        return out.reshape((k_max + 1,) + x.shape)

    def _far_ladder(self, k_max: int, xf: np.ndarray, block: np.ndarray) -> np.ndarray:
        pending = np.zeros((k_max + 1, xf.size), dtype=bool)
        for k in range(2, k_max + 1):
            values, converged = dawson_derivative_asymptotic(k, xf)
            block[k] = values
            pending[k] = ~converged

        columns = np.any(pending, axis=0)
        if np.any(columns):
            integral = dawson_derivative_integral(k_max, xf[columns])
            sub = block[:, columns]
            sub[pending[:, columns]] = integral[pending[:, columns]]
            block[:, columns] = sub
        return block

    def _cross_check(self, ladder: np.ndarray, x: np.ndarray) -> None:
        inside = np.abs(x) <= self.series_radius
        if not np.any(inside):
            return
        xs = x[inside]
        replaced = 0
        for k in range(self.recurrence_check_order, ladder.shape[0]):
            series, roundoff = dawson_derivative_series_bound(k, xs)
            recurrence = ladder[k][inside]
            scale = np.maximum(np.abs(series), 1e-300)
            mismatch = np.abs(recurrence - series)
            # the series wins only where its own cancellation error cannot explain the gap
            bad = (mismatch > self.mismatch_tol * scale) & (mismatch > 10.0 * roundoff)
            if np.any(bad):
                row = ladder[k]
                row[inside] = np.where(bad, series, recurrence)
                replaced += int(np.count_nonzero(bad))
        if replaced:
            logger.debug("Derivative ladder: %d values switched to the series path", replaced)

    def derivative(self, k: int, x):
        """daw^(k)(x)."""
        return _scalar_or_array(self.derivatives(k, x)[k], x)


DEFAULT_EVALUATOR = DawsonEvaluator()


def evaluator_from_dict(section: Dict) -> DawsonEvaluator:
    """Build a DawsonEvaluator from the `dawson:` config section."""
    keys = DawsonEvaluator.__dataclass_fields__.keys()
    return DawsonEvaluator(**{k: v for k, v in (section or {}).items() if k in keys})


def dawson(x, evaluator: Optional[DawsonEvaluator] = None):
    """
    Dawson's integral.

    Example:
        >>> round(dawson(1.0), 10)
        0.5380795069
    """
    return (evaluator or DEFAULT_EVALUATOR).dawson(x)


def dawson_derivative(k: int, x, evaluator: Optional[DawsonEvaluator] = None):
    """
    k-th derivative of Dawson's integral.

    Example:
        >>> dawson_derivative(1, 0.0), dawson_derivative(3, 0.0)
        (1.0, -4.0)
    """
    return (evaluator or DEFAULT_EVALUATOR).derivative(k, x)


def dawson_derivatives(k_max: int, x, evaluator: Optional[DawsonEvaluator] = None) -> np.ndarray:
    """daw^(0)..daw^(k_max) at x, shape (k_max + 1,) + shape(x)."""
    return (evaluator or DEFAULT_EVALUATOR).derivatives(k_max, x)


def pattern_function(m: int, x, evaluator: Optional[DawsonEvaluator] = None):
    """f^(m)(x) = 2 daw^(m+1)(x); f(0) = 2."""
    if m < 0:
        raise ValidationError(f"Pattern-function order must be >= 0, got {m}")
    return 2.0 * dawson_derivative(m + 1, x, evaluator)


def pattern_functions(m_max: int, x, evaluator: Optional[DawsonEvaluator] = None) -> np.ndarray:
    """f^(0)..f^(m_max) at x, shape (m_max + 1,) + shape(x)."""
    return 2.0 * (evaluator or DEFAULT_EVALUATOR).derivatives(m_max + 1, x)[1:]


def pattern_kernel(m: int, evaluator: Optional[DawsonEvaluator] = None):
    """A vectorized callable x -> f^(m)(x)."""
    ev = evaluator or DEFAULT_EVALUATOR

    def kernel(x):
        return 2.0 * ev.derivatives(m + 1, x)[m + 1]

    return kernel


def maclaurin_f_coefficient(m: int) -> float:
    """
    f^(m)(0) from the MacLaurin series of daw: 2 (-1)^j j! 4^j for m = 2j, else 0.

    Example:
        >>> maclaurin_f_coefficient(0), maclaurin_f_coefficient(2)
        (2.0, -8.0)
    """
    if m < 0:
        raise ValidationError(f"Order must be >= 0, got {m}")
    if m % 2:
        return 0.0
    j = m // 2
    return float(2 * (-1) ** j * math.factorial(j) * 4 ** j)


@dataclass
class PatternFunctionSet:
    """
    Pattern functions f^(m) for a set of orders with sup-norm bounds.

    Bounds are the max of |f^(m)| on a dense grid covering [-x_range, x_range];
    every f^(m) is bounded on the real line and decays outside that range.
    """

    orders: List[int]
    evaluator: DawsonEvaluator = field(default_factory=DawsonEvaluator)
    x_range: float = 25.0
    bounds: Dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.bounds and self.orders:
            grid = np.linspace(-self.x_range, self.x_range, 20001)
            values = pattern_functions(max(self.orders), grid, self.evaluator)
            self.bounds = {m: float(np.max(np.abs(values[m]))) for m in self.orders}

    def __call__(self, m: int, x):
        if m not in self.bounds:
            raise ValidationError(f"Order {m} not in this pattern-function set")
        return pattern_function(m, x, self.evaluator)

    def bound(self, m: int) -> float:
        return self.bounds[m]


# ---------------------------------------------------------------------------
# Hermite-series representation of f
# ---------------------------------------------------------------------------

def hermite_series_f(x, n_terms: int):
    """
    Partial sum of f(x) = sum_n (-1)^n n! / (2^n (2n)!) H_{2n}(x).

    Each term is rewritten as (-1)^n n!/sqrt((2n)!) * pi^(1/4) exp(x^2/2) h_{2n}(x)
    with the coefficient updated by ratios, so no factorial is ever formed.

    Args:
        x: Point(s)
        n_terms: Number of terms (>= 1)

    Returns:
        Partial sum at x

    Example:
        >>> hermite_series_f(0.0, 1)
        1.0
    """
    return hermite_series_f_derivative(0, x, n_terms)


def hermite_series_f_derivative(m: int, x, n_terms: int):
    """
    m-th term-wise derivative of the Hermite series of f.

    d^m/dx^m H_{2n} = 2^m (2n)!/(2n-m)! H_{2n-m}, so term n becomes
    (-1)^n n! 2^(m/2) / sqrt((2n-m)!) * pi^(1/4) exp(x^2/2) h_{2n-m}(x).
    """
    if n_terms < 1:
        raise ValidationError(f"n_terms must be >= 1, got {n_terms}")
    if m < 0:
        raise ValidationError(f"Derivative order must be >= 0, got {m}")

    xa = np.asarray(x, dtype=float)
    h = hermite_functions(2 * (n_terms - 1), xa)
    total = np.zeros_like(xa)
    for n in range(n_terms):
        j = 2 * n - m
        if j < 0:
            continue
        log_coeff = gammaln(n + 1.0) + 0.5 * m * LOG2 - 0.5 * gammaln(j + 1.0)
        sign = -1.0 if n % 2 else 1.0
        total = total + sign * math.exp(log_coeff) * h[j]
    with np.errstate(over="ignore"):
        result = math.pi ** 0.25 * np.exp(0.5 * xa * xa) * total
    return _scalar_or_array(result, x)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def gradshteyn_7_375_2(k: int, n: int) -> float:
    """
    Integral of H_{2k}(x) H_n(x)^2 exp(-x^2) over the real line, for k <= n:

        2^(k+n) sqrt(pi) (2k)! (n!)^2 / ((n-k)! (k!)^2)

    Raises:
        DomainError: If k > n (the integral vanishes there; callers handle that regime)

    Example:
        >>> round(gradshteyn_7_375_2(1, 1) / math.sqrt(math.pi), 12)
        8.0
    """
    if k < 0 or n < 0:
        raise DomainError(f"Indices must be >= 0, got k={k}, n={n}")
    if k > n:
        raise DomainError(
            f"gradshteyn_7_375_2 needs k <= n, got k={k}, n={n}",
            {"k": k, "n": n},
        )
    log_value = (
        (k + n) * LOG2
        + 0.5 * math.log(math.pi)
        + gammaln(2 * k + 1.0)
        + 2.0 * gammaln(n + 1.0)
        - gammaln(n - k + 1.0)
        - 2.0 * gammaln(k + 1.0)
    )
    return float(math.exp(log_value))


def lemma4_closed_form(k: int, l: int, n: int) -> float:
    """
    <n+k|f^(k+2l)(Q)|n> for n >= l:  2^l (-1)^k sqrt(2^k l! (l+k)!) if n == l, else 0.

    Raises:
        DomainError: If n < l (no closed form)
    """
    if min(k, l, n) < 0:
        raise DomainError(f"Indices must be >= 0, got k={k}, l={l}, n={n}")
    if n < l:
        raise DomainError(f"No closed form for n < l (k={k}, l={l}, n={n})")
    if n != l:
        return 0.0
    return lemma4_diagonal(k, l)


def lemma4_diagonal(k: int, l: int) -> float:
    """Diagonal value 2^l (-1)^k sqrt(2^k l! (l+k)!) via log-gamma."""
    log_mag = l * LOG2 + 0.5 * (k * LOG2 + gammaln(l + 1.0) + gammaln(l + k + 1.0))
    return (-1.0) ** k * math.exp(log_mag)


def lemma_matrix_element(
    k: int,
    l: int,
    n: int,
    cfg: FockConfig,
    evaluator: Optional[DawsonEvaluator] = None,
    check: bool = True,
    rel_tol: float = 1e-7,
    abs_tol: float = 1e-9
) -> float:
    """
    <n+k|f^(k+2l)(Q)|n> by Gauss-Hermite quadrature.

    For n >= l the value is compared with the closed form; a zero closed form
    is checked against abs_tol scaled by the row diagonal |<l+k|f^(k+2l)|l>|.

    Args:
        k: Off-diagonal offset
        l: Ladder index (derivative order k + 2l)
        n: Fock index
        cfg: Quadrature settings
        evaluator: Dawson evaluator
        check: Compare with the closed form when one exists
        rel_tol, abs_tol: Comparison tolerances

    Returns:
        The matrix element

    Raises:
        ClosedFormMismatchError: If check fails

    Example:
        >>> cfg = make_fock_config(4)
        >>> round(lemma_matrix_element(1, 0, 0, cfg), 6)
        -1.414214
    """
    if min(k, l, n) < 0:
        raise ValidationError(f"Indices must be >= 0, got k={k}, l={l}, n={n}")

    value = matrix_element(pattern_kernel(k + 2 * l, evaluator), n + k, n, cfg)

    if check and n >= l:
        expected = lemma4_closed_form(k, l, n)
        if expected != 0.0:
            ok = abs(value - expected) <= rel_tol * abs(expected)
        else:
            ok = abs(value) <= abs_tol * max(1.0, abs(lemma4_diagonal(k, l)))
        if not ok:
            raise ClosedFormMismatchError(
                f"<{n + k}|f^({k + 2 * l})(Q)|{n}> = {value:.12g}, closed form {expected:.12g}",
                {"k": k, "l": l, "n": n, "value": value, "expected": expected},
            )
    return value


# ---------------------------------------------------------------------------
# Certification and export
# ---------------------------------------------------------------------------

def certify_derivative_ladder(
    max_order: int = 30,
    x_values: Optional[np.ndarray] = None,
    evaluator: Optional[DawsonEvaluator] = None
) -> List[Dict]:
    """
    Compare the raw recurrence with the term-wise series on [-3, 3].

    Returns:
        One row per order with "max_relative_error" (points away from zeros of
        the series) and "max_scaled_error" (relative to the largest |daw^(k)|
        on the points). Growth of these with k bounds the usable recurrence range.
    """
    ev = evaluator or DEFAULT_EVALUATOR
    x = np.linspace(-3.0, 3.0, 121) if x_values is None else np.asarray(x_values, dtype=float)
    if np.max(np.abs(x)) > ev.recurrence_radius:
        raise ValidationError(
            f"Certification points must lie within recurrence_radius {ev.recurrence_radius}"
        )

    raw_evaluator = replace(ev, max_derivative_order=max(ev.max_derivative_order, max_order))
    raw = raw_evaluator.derivatives(max_order, x, check=False)

    rows = []
    for k in range(max_order + 1):
        series = dawson_derivative_series(k, x)
        sup = float(np.max(np.abs(series)))
        nonzero = np.abs(series) > 1e-12 * sup
        diff = np.abs(raw[k] - series)
        rel = diff[nonzero] / np.abs(series[nonzero])
        rows.append({
            "order": k,
            "max_relative_error": float(np.max(rel)) if rel.size else 0.0,
            "max_scaled_error": float(np.max(diff)) / sup if sup > 0 else 0.0,
        })
    return rows


def dump_dawson_table(
    path: str,
    x_values,
    max_order: int,
    evaluator: Optional[DawsonEvaluator] = None
) -> str:
    """
    Write (x, daw(x), daw^(1..K)(x)) rows to CSV with 17 significant digits.

    Returns:
        The path written
    """
    ev = evaluator or DEFAULT_EVALUATOR
    x = np.asarray(x_values, dtype=float)
    table = ev.derivatives(max_order, x)

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    header = ["x", "daw"] + [f"daw_{k}" for k in range(1, max_order + 1)]
    frame = pd.DataFrame(np.column_stack([x, table[: max_order + 1].T]), columns=header)
    frame.to_csv(path, index=False, float_format="%.17g")

    logger.info("Wrote Dawson table with %d rows to %s", x.size, path)
    return path


if __name__ == "__main__":
    """
    Print a few reference values.

    Usage:
        PYTHONPATH=src python -m core.special_functions
    """
    print(f"daw(1)        = {dawson(1.0):.12f}")
    print(f"f(0)          = {pattern_function(0, 0.0):.12f}")
    print(f"series f(0)   = {hermite_series_f(0.0, 40):.12f}")
    print(f"daw'''(0)     = {dawson_derivative(3, 0.0):.12f}")
    for row in certify_derivative_ladder(12):
        print(f"  order {row['order']:2d}: max rel error {row['max_relative_error']:.2e}")
