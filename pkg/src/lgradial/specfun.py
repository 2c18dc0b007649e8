"""Scalar and vectorized special-function kernels.

Every ratio of factorials is evaluated in the log domain so orders of a few
hundred stay inside double range. The kernels are pure and thread-safe.
"""
from __future__ import annotations

import math
from typing import overload

import numpy as np
from scipy.special import gammaln

from ._logging import Internal
from .exceptions import DomainError, KernelError
from .typing import ArrayLike, RealArray

__all__ = (
    "laguerre",
    "laguerre_function",
    "laguerre_positive_zeros",
    "hermite",
    "bessel_i",
    "bessel_j",
    "ln_factorial",
    "binomial",
    "laguerre_genfun_residual",
)

SERIES_CUTOFF = 1e-17
SERIES_CAP = 10000
BISECTION_TOL = 1e-12
MILLER_THRESHOLD = 10.0
# mantissa rescaling threshold for the normalized recurrence
_RESCALE = 1e150
_LN_RESCALE = math.log(_RESCALE)


def _require_order(name: str, value: int) -> None:
    if int(value) != value or value < 0:
        raise DomainError(f"{name} must be a non-negative integer, got {value!r}")


@overload
def laguerre(p: int, a: int, x: float) -> float:
    ...


@overload
def laguerre(p: int, a: int, x: RealArray) -> RealArray:
    ...


def laguerre(p: int, a: int, x: ArrayLike) -> ArrayLike:
    """Generalized Laguerre polynomial L_p^a(x).

    Args:
        p: Degree.
        a: Non-negative integer order.
        x: Point or array of points.

    Uses (p+1)L_{p+1} = (2p+1+a-x)L_p - (p+a)L_{p-1}."""
    _require_order("p", p)
    _require_order("a", a)
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)

    prev = np.ones_like(x)
    if p == 0:
        return float(prev) if scalar else prev

    cur = (1.0 + a) - x
    for n in range(1, p):
        prev, cur = cur, ((2 * n + 1 + a - x) * cur - (n + a) * prev) / (n + 1)

    return float(cur) if scalar else cur


def laguerre_function(p_max: int, a: int, x: RealArray) -> RealArray:
    """Normalized Laguerre functions sqrt(p!/(p+a)!) e^{-x/2} x^{a/2} L_p^a(x).

    Args:
        p_max: Highest degree; rows 0..p_max are returned.
        a: Non-negative integer order.
        x: Non-negative sample points.

    The normalized three-term recurrence runs on mantissas with a running
    log-scale per point, so neither the seed e^{-x/2} nor the growth of
    high-degree terms leaves double range."""
    _require_order("p_max", p_max)
    _require_order("a", a)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("laguerre_function needs x >= 0")

    out = np.empty((p_max + 1, *x.shape))
    with np.errstate(divide="ignore"):
        log_x = np.log(x)
    if a == 0:
        scale = -0.5 * x
    else:
        scale = np.where(x > 0, -0.5 * x + 0.5 * a * log_x, -np.inf)
    scale = scale - 0.5 * math.lgamma(a + 1)

    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    out[0] = np.exp(scale)

    for n in range(p_max):
        nxt = ((2 * n + 1 + a - x) * cur - math.sqrt(n * (n + a)) * prev) / math.sqrt(
            (n + 1) * (n + a + 1)
        )
        big = np.abs(nxt) > _RESCALE
        if np.any(big):
            nxt = np.where(big, nxt / _RESCALE, nxt)
            cur = np.where(big, cur / _RESCALE, cur)
            scale = np.where(big, scale + _LN_RESCALE, scale)
        prev, cur = cur, nxt
        with np.errstate(divide="ignore"):
            out[n + 1] = np.sign(cur) * np.exp(scale + np.log(np.abs(cur)))

    return out


def laguerre_positive_zeros(p: int, a: int) -> list[float]:
    """The p positive roots of L_p^a, ascending.

    Roots are bracketed by sign changes on [0, 4p + 2a + 2] and refined by
    bisection."""
    _require_order("p", p)
    _require_order("a", a)
    if p == 0:
        return []

    upper = 4.0 * p + 2.0 * a + 2.0
    grid = np.linspace(0.0, upper, 400 * (p + 1) + 1000)
    values = laguerre(p, a, grid)
    crossings = np.nonzero(np.signbit(values[:-1]) != np.signbit(values[1:]))[0]

    roots: list[float] = []
    for i in crossings:
        lo, hi = float(grid[i]), float(grid[i + 1])
        f_lo = laguerre(p, a, lo)
        while hi - lo > BISECTION_TOL * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            f_mid = laguerre(p, a, mid)
            if (f_mid < 0) == (f_lo < 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))

    if len(roots) != p:
        raise KernelError(
            f"bracketing isolated {len(roots)} roots of L_{p}^{a}, expected {p}"
        )

    Internal.debug(f"zeros of L_{p}^{a}: {roots}")
    return roots


@overload
def hermite(n: int, x: float) -> float:
    ...


@overload
def hermite(n: int, x: RealArray) -> RealArray:
    ...


def hermite(n: int, x: ArrayLike) -> ArrayLike:
    """Physicists' Hermite polynomial H_n(x)."""
    _require_order("n", n)
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)

    prev = np.ones_like(x)
    if n == 0:
        return float(prev) if scalar else prev

    cur = 2.0 * x
    for m in range(1, n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * m * prev

    return float(cur) if scalar else cur


def _ascending_series(nu: int, x: float, sign: int) -> float:
    half = 0.5 * x
    if half == 0.0:
        return 1.0 if nu == 0 else 0.0

    term = math.exp(nu * math.log(abs(half)) - math.lgamma(nu + 1))
    if half < 0 and nu % 2:
        term = -term
    q = sign * half * half
    terms = [term]
    largest = abs(term)

    for m in range(SERIES_CAP):
        term *= q / ((m + 1) * (m + 1 + nu))
        terms.append(term)
        largest = max(largest, abs(term))
        # the terms only shrink once m exceeds |x|/2
        if m + 1 > abs(half) and abs(term) <= SERIES_CUTOFF * largest:
            break
    else:
        Internal.warning(f"bessel series hit the {SERIES_CAP}-term cap at x={x}")

    return math.fsum(terms)


def _miller_j(nu: int, x: float) -> float:
    # x > 0; start where J is negligible and normalize by J_0 + 2 sum J_2m = 1
    top = max(nu, int(x))
    start = 2 * ((top + 20 + int(math.sqrt(40 * top))) // 2 + 1)
    tox = 2.0 / x
    above, cur = 0.0, 1.0
    result = evens = 0.0
    for m in range(start, 0, -1):
        above, cur = cur, m * tox * cur - above
        if abs(cur) > _RESCALE:
            above /= _RESCALE
            cur /= _RESCALE
            result /= _RESCALE
            evens /= _RESCALE
        if m - 1 == nu:
            result = cur
        if m - 1 > 0 and (m - 1) % 2 == 0:
            evens += cur
    return result / (2.0 * evens + cur)


def bessel_i(nu: int, x: float) -> float:
    """Modified Bessel function I_nu(x) of integer order, by ascending series."""
    _require_order("nu", nu)
    if x < 0:
        raise DomainError(f"bessel_i needs x >= 0, got {x}")
    return _ascending_series(nu, float(x), 1)


def bessel_j(nu: int, x: float) -> float:
    """Bessel function J_nu(x) of integer order.

    The alternating ascending series is used for |x| <= 10. Past that its
    rounding grows like e^|x| ulps, so Miller's backward recurrence takes
    over, with J_nu(-x) = (-1)^nu J_nu(x) for negative arguments."""
    _require_order("nu", nu)
    x = float(x)
    if abs(x) <= MILLER_THRESHOLD:
        return _ascending_series(nu, x, -1)
    value = _miller_j(int(nu), abs(x))
    return -value if x < 0 and nu % 2 else value


@overload
def ln_factorial(n: float) -> float:
    ...


@overload
def ln_factorial(n: RealArray) -> RealArray:
    ...


def ln_factorial(n: ArrayLike) -> ArrayLike:
    """ln(n!) = ln Gamma(n+1), for real n >= 0."""
    if np.any(np.asarray(n) < 0):
        raise DomainError(f"ln_factorial needs n >= 0, got {n!r}")
    result = gammaln(np.asarray(n, dtype=float) + 1.0)
    return float(result) if np.ndim(n) == 0 else result


def binomial(n: float, r: int) -> float:
    """Binomial coefficient C(n, r).

    Integer arguments are exact; real n (as in C(2k+p-1, p) for half-integer
    k) goes through ln Gamma."""
    _require_order("r", r)
    if n < 0:
        raise DomainError(f"binomial needs n >= 0, got {n}")
    if float(n).is_integer():
        if r > n:
            raise DomainError(f"binomial needs r <= n, got n={n}, r={r}")
        return float(math.comb(int(n), int(r)))
    if r >= n + 1:
        # the log form needs Gamma(n - r + 1) > 0, which holds while n - r + 1 > 0
        raise DomainError(f"binomial needs r < n + 1 for real n, got n={n}, r={r}")
    return math.exp(gammaln(n + 1.0) - gammaln(r + 1.0) - gammaln(n - r + 1.0))


def laguerre_genfun_residual(gamma: float, x: float, ell: int, terms: int) -> float:
    """|exp(gamma x/(gamma-1)) - (1-gamma)^{1+ell} sum_{p<terms} gamma^p L_p^ell(x)|.

    Self-test of the identity used to close the coherent-state field."""
    if not -1.0 < gamma < 1.0:
        raise DomainError(f"gamma must lie in (-1, 1), got {gamma}")
    _require_order("ell", ell)
    _require_order("terms", terms)

    prev, cur = 1.0, 1.0 + ell - x
    acc = [1.0]
    power = 1.0
    for p in range(1, terms):
        power *= gamma
        acc.append(power * cur)
        prev, cur = cur, ((2 * p + 1 + ell - x) * cur - (p + ell) * prev) / (p + 1)

    partial = math.fsum(acc) if terms else 0.0
    exact = math.exp(gamma * x / (gamma - 1.0))
    return abs(exact - (1.0 - gamma) ** (1 + ell) * partial)
