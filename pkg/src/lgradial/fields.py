"""Position-space synthesis and analysis of Laguerre-Gauss superpositions.

All fields share one inner product: integral of conj(A) B over the plane,
so Psi_{p,l} = A_{p,l}(r) e^{i l phi} / sqrt(2 pi) is unit normalized.

Barut-Girardello closed form. With y = alpha r the adopted field is

    Psi = sqrt(alpha^2 / (pi I_|l|(2|zeta|))) |zeta|^{|l|/2} zeta^{-|l|/2}
          e^{zeta - y^2/2} J_|l|(2 y sqrt(zeta)) e^{i l phi}

It agrees with the basis expansion of barut_girardello(zeta) to rounding.
The printed form with J(2 zeta r) and I(2|zeta|^2) is this expression in the
variable w = sqrt(zeta) at alpha = 1, which is why its Bessel argument
carries no alpha.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.special import gammaln, jv

from ._logging import Internal, Service
from .exceptions import DomainError, GridError, NonFactorizedFieldError, TruncationError
from .specfun import hermite, laguerre_function, laguerre_positive_zeros
from .states import RadialState, bg_prefactor, intelligent_state
from .su11 import IrrepLabel, Truncation
from .typing import ComplexArray, RealArray

__all__ = (
    "PolarGrid",
    "CartesianGrid",
    "Grid",
    "FieldMap",
    "eval_lg",
    "eval_hg",
    "eval_state",
    "eval_perelomov_closed",
    "eval_bg_closed",
    "quadrature_norm2",
    "overlap",
    "count_dark_rings",
    "count_dark_rings_field",
    "radial_operator_rayleigh",
    "intelligent_field",
    "intelligent_ring_radii",
    "count_visible_rings",
    "radial_spread",
)

ALPHA_BEAM = math.sqrt(2.0)
TAIL_TOL = 1e-10
_CHUNK = 4096


@dataclass(frozen=True)
class PolarGrid:
    """Staggered polar grid r_j = (j + 1/2) r_max / n_r, phi_m = 2 pi m / n_phi."""

    r_max: float
    n_r: int = 2048
    n_phi: int = 64
    alpha: float = ALPHA_BEAM

    def __post_init__(self) -> None:
        if not (math.isfinite(self.r_max) and self.r_max > 0):
            raise GridError(f"r_max must be positive, got {self.r_max}")
        if self.n_r < 64:
            raise GridError(f"n_r must be at least 64, got {self.n_r}")
        if self.n_phi < 8:
            raise GridError(f"n_phi must be at least 8, got {self.n_phi}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise GridError(f"alpha must be positive, got {self.alpha}")

    @classmethod
    def default(
        cls,
        p_max: int,
        ell: int,
        *,
        alpha: float = ALPHA_BEAM,
        n_r: int = 2048,
        n_phi: int = 64,
        decay_lengths: float = 6.0,
    ) -> PolarGrid:
        """Classical turning point of the highest level plus `decay_lengths`."""
        r_max = (math.sqrt(2 * (2 * p_max + abs(ell)) + 1) + decay_lengths) / alpha
        return cls(r_max, n_r, n_phi, alpha)

    @property
    def dr(self) -> float:
        return self.r_max / self.n_r

    @property
    def dphi(self) -> float:
        return 2 * math.pi / self.n_phi

    @property
    def r(self) -> RealArray:
        return (np.arange(self.n_r) + 0.5) * self.dr

    @property
    def phi(self) -> RealArray:
        return np.arange(self.n_phi) * self.dphi

    def polar_nodes(self) -> tuple[RealArray, RealArray]:
        r, phi = np.meshgrid(self.r, self.phi, indexing="ij")
        return r, phi


@dataclass(frozen=True)
class CartesianGrid:
    """Square grid of n x n cell midpoints on [-half_width, half_width]^2."""

    half_width: float
    n: int = 256
    alpha: float = ALPHA_BEAM

    def __post_init__(self) -> None:
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise GridError(f"half_width must be positive, got {self.half_width}")
        if self.n < 16:
            raise GridError(f"n must be at least 16, got {self.n}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise GridError(f"alpha must be positive, got {self.alpha}")

    @property
    def dx(self) -> float:
        return 2 * self.half_width / self.n

    @property
    def x(self) -> RealArray:
        return -self.half_width + (np.arange(self.n) + 0.5) * self.dx

    def cartesian_nodes(self) -> tuple[RealArray, RealArray]:
        x, y = np.meshgrid(self.x, self.x, indexing="ij")
        return x, y

    def polar_nodes(self) -> tuple[RealArray, RealArray]:
        x, y = self.cartesian_nodes()
        return np.hypot(x, y), np.arctan2(y, x)


Grid = Union[PolarGrid, CartesianGrid]


@dataclass(frozen=True)
class FieldMap:
    """Sampled complex field.

    `amplitudes` is [n_r, n_phi] on a polar grid and [n_x, n_y] on a
    Cartesian one. `ell` is set when the field is R(r) e^{i ell phi}."""

    grid: Grid
    amplitudes: ComplexArray
    label: str = ""
    ell: Optional[int] = None

    def __post_init__(self) -> None:
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if isinstance(self.grid, PolarGrid):
            shape = (self.grid.n_r, self.grid.n_phi)
        else:
            shape = (self.grid.n, self.grid.n)
        if amplitudes.shape != shape:
            raise GridError(f"amplitudes have shape {amplitudes.shape}, grid needs {shape}")
        if not np.all(np.isfinite(amplitudes)):
            raise GridError(f"field {self.label!r} has non-finite samples")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def intensity(self) -> RealArray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm2(self) -> float:
        return quadrature_norm2(self)


def _on_grid(
    grid: Grid,
    ell: int,
    radial: Callable[[RealArray], ComplexArray],
    label: str,
) -> FieldMap:
    """Assemble R(r) e^{i ell phi} on any grid."""
    if isinstance(grid, PolarGrid):
        profile = radial(grid.r)
        amplitudes = profile[:, None] * np.exp(1j * ell * grid.phi)[None, :]
    else:
        r, phi = grid.polar_nodes()
        amplitudes = radial(r.reshape(-1)).reshape(r.shape) * np.exp(1j * ell * phi)
    return FieldMap(grid, amplitudes, label, ell)


def _laguerre_sum(coeffs: ComplexArray, a: int, x: RealArray) -> ComplexArray:
    """sum_p c_p f_p(x) over normalized Laguerre functions, in chunks of points."""
    out = np.empty(x.shape[0], dtype=complex)
    p_max = coeffs.shape[0] - 1
    for start in range(0, x.shape[0], _CHUNK):
        block = x[start : start + _CHUNK]
        out[start : start + _CHUNK] = coeffs @ laguerre_function(p_max, a, block)
    return out


def eval_lg(p: int, ell: int, grid: Grid) -> FieldMap:
    """Laguerre-Gauss mode Psi_{p,l} = A_{p,l}(r) e^{i l phi} / sqrt(2 pi)."""
    if int(p) != p or p < 0:
        raise DomainError(f"p must be a non-negative integer, got {p!r}")
    a = abs(ell)
    alpha = grid.alpha
    scale = alpha / math.sqrt(math.pi)

    def radial(r: RealArray) -> ComplexArray:
        x = (alpha * r) ** 2
        coeffs = np.zeros(p + 1, dtype=complex)
        coeffs[p] = scale
        return _laguerre_sum(coeffs, a, x)

    return _on_grid(grid, ell, radial, f"LG p={p} ell={ell}")


def eval_hg(n_x: int, n_y: int, grid: Grid) -> FieldMap:
    """Hermite-Gauss product mode.

    sqrt(alpha^2 / (pi 2^{nx+ny} nx! ny!)) H_nx(alpha x) H_ny(alpha y) e^{-alpha^2 (x^2+y^2)/2}"""
    for name, n in (("n_x", n_x), ("n_y", n_y)):
        if int(n) != n or n < 0:
            raise DomainError(f"{name} must be a non-negative integer, got {n!r}")
    alpha = grid.alpha
    if isinstance(grid, PolarGrid):
        r, phi = grid.polar_nodes()
        x, y = r * np.cos(phi), r * np.sin(phi)
    else:
        x, y = grid.cartesian_nodes()

    log_norm = 0.5 * (
        2 * math.log(alpha)
        - math.log(math.pi)
        - (n_x + n_y) * math.log(2.0)
        - gammaln(n_x + 1)
        - gammaln(n_y + 1)
    )
    u, v = alpha * x, alpha * y
    amplitudes = (
        math.exp(log_norm) * hermite(n_x, u) * hermite(n_y, v) * np.exp(-(u * u + v * v) / 2)
    )
    return FieldMap(grid, amplitudes + 0j, f"HG nx={n_x} ny={n_y}")


def eval_state(state: RadialState, grid: Grid) -> FieldMap:
    """Pointwise superposition sum_p c_p Psi_{p,l}."""
    if state.tail_mass > TAIL_TOL:
        raise TruncationError(
            f"state declares tail mass {state.tail_mass:.3g}, above {TAIL_TOL:.1g}",
            hint="build the state with a larger p_max",
        )
    alpha = grid.alpha
    coeffs = state.coeffs * (alpha / math.sqrt(math.pi))

    def radial(r: RealArray) -> ComplexArray:
        return _laguerre_sum(coeffs, state.irrep.abs_ell, (alpha * r) ** 2)

    return _on_grid(grid, state.irrep.ell, radial, f"state ell={state.irrep.ell} p_max={state.p_max}")


def eval_perelomov_closed(zeta: complex, ell: int, grid: Grid) -> FieldMap:
    """Polynomial-Gauss field of a Perelomov coherent state.

    sqrt(alpha^2/(pi |l|!)) (1-|zeta|^2)^k (1-zeta)^{-(|l|+1)}
    exp(((zeta+1)/(zeta-1)) y^2/2) y^|l| e^{i l phi},  y = alpha r"""
    if not abs(zeta) < 1:
        raise DomainError(f"|zeta| must be < 1, got |zeta|={abs(zeta)}")
    zeta = complex(zeta)
    a = abs(ell)
    alpha = grid.alpha
    prefactor = (
        alpha
        / math.sqrt(math.pi * math.factorial(a))
        * (1 - abs(zeta) ** 2) ** ((a + 1) / 2)
        * (1 - zeta) ** (-(a + 1))
    )
    gauss = (zeta + 1) / (zeta - 1)

    def radial(r: RealArray) -> ComplexArray:
        y = alpha * r
        return prefactor * np.exp(gauss * y * y / 2) * y**a

    return _on_grid(grid, ell, radial, f"perelomov zeta={zeta} ell={ell}")


def eval_bg_closed(zeta: complex, ell: int, grid: Grid) -> FieldMap:
    """Bessel-Gauss field of a Barut-Girardello state (form in the module docstring)."""
    zeta = complex(zeta)
    if not np.isfinite(zeta):
        raise DomainError(f"zeta must be finite, got {zeta}")
    a = abs(ell)
    alpha = grid.alpha
    norm = alpha / math.sqrt(math.pi) * bg_prefactor(IrrepLabel(ell), zeta)

    def radial(r: RealArray) -> ComplexArray:
        y = alpha * r
        envelope = np.exp(zeta - y * y / 2)
        if abs(zeta) < 1e-3:
            # entire series in zeta y^2; the Bessel route divides by zeta^{|l|/2}
            total = np.zeros_like(y, dtype=complex)
            term = y**a / math.factorial(a) + 0j
            for m in range(64):
                total += term
                term = term * (-zeta * y * y) / ((m + 1) * (m + 1 + a))
            return norm * envelope * total
        root = np.sqrt(zeta)
        return norm * envelope * zeta ** (-a / 2) * jv(a, 2 * y * root)

    return _on_grid(grid, ell, radial, f"barut-girardello zeta={zeta} ell={ell}")


def overlap(a: FieldMap, b: FieldMap) -> complex:
    """Quadrature of conj(A) B over the plane.

    Cartesian grids use the plain midpoint rule. On polar grids the midpoint
    rule in r carries an h^2/24 error from the origin whenever the field does
    not vanish there; it is removed with the Euler-Maclaurin end term."""
    if a.grid != b.grid:
        raise GridError(f"fields live on different grids: {a.grid} and {b.grid}")
    product = np.conj(a.amplitudes) * b.amplitudes
    grid = a.grid
    if isinstance(grid, CartesianGrid):
        return complex(np.sum(product) * grid.dx**2)

    angular = np.sum(product, axis=1) * grid.dphi
    midpoint = np.sum(angular * grid.r) * grid.dr
    # angular is even in r, so its value at r = 0 follows from r_0 and r_1 = 3 r_0
    at_origin = (9 * angular[0] - angular[1]) / 8
    return complex(midpoint - grid.dr**2 * at_origin / 24)


def quadrature_norm2(field: FieldMap) -> float:
    return overlap(field, field).real


def count_dark_rings(p: int, ell: int) -> int:
    """Number of dark rings of Psi_{p,l}: the positive zeros of L_p^|l|."""
    return len(laguerre_positive_zeros(p, abs(ell)))


def _radial_profile(field: FieldMap) -> RealArray:
    if not isinstance(field.grid, PolarGrid):
        raise GridError("ring counting needs a polar grid")
    if field.ell is None:
        raise NonFactorizedFieldError(f"field {field.label!r} carries no azimuthal index")
    profile = field.amplitudes[:, 0]
    expected = profile[:, None] * np.exp(1j * field.ell * field.grid.phi)[None, :]
    peak = float(np.max(np.abs(field.amplitudes)))
    if float(np.max(np.abs(field.amplitudes - expected))) > 1e-10 * peak:
        raise NonFactorizedFieldError(
            f"field {field.label!r} is not of the form R(r) e^(i {field.ell} phi)"
        )
    anchor = profile[int(np.argmax(np.abs(profile)))]
    rotated = profile * np.conj(anchor) / abs(anchor)
    # dark rings are sign changes, so R(r) must be real up to one global phase
    if float(np.max(np.abs(rotated.imag))) > 1e-8 * abs(anchor):
        raise NonFactorizedFieldError(
            f"radial profile of {field.label!r} has an r-dependent phase; ring counting needs a real profile"
        )
    return rotated.real


def _sign_changes(profile: RealArray, floor: float) -> list[int]:
    """Indices j with a sign change between significant samples j and the next one."""
    peak = float(np.max(np.abs(profile)))
    significant = np.nonzero(np.abs(profile) > floor * peak)[0]
    signs = np.signbit(profile[significant])
    flips = np.nonzero(signs[:-1] != signs[1:])[0]
    return [int(significant[i]) for i in flips]


def count_dark_rings_field(field: FieldMap, *, floor: float = 1e-12) -> int:
    """Sign changes of the real radial profile strictly inside (0, r_max).

    The profile must be real up to a constant phase, as for Fock states and
    real-coefficient superpositions. Samples below `floor` times the peak
    amplitude are skipped."""
    return len(_sign_changes(_radial_profile(field), floor))


def count_visible_rings(field: FieldMap, threshold: float = 1e-10) -> int:
    """Dark rings beyond which the intensity still reaches `threshold` of the peak."""
    profile = _radial_profile(field)
    intensity = profile**2
    peak = float(np.max(intensity))
    outer_max = np.maximum.accumulate(intensity[::-1])[::-1]
    visible = [j for j in _sign_changes(profile, 1e-12) if outer_max[j + 1] >= threshold * peak]
    return len(visible)


def radial_spread(field: FieldMap) -> float:
    """std(r^2) / mean(r^2) under the intensity distribution."""
    if not isinstance(field.grid, PolarGrid):
        raise GridError("radial_spread needs a polar grid")
    r = field.grid.r
    weight = np.sum(field.intensity, axis=1) * r
    total = np.sum(weight)
    mean = np.sum(weight * r**2) / total
    second = np.sum(weight * r**4) / total
    return float(math.sqrt(max(second - mean**2, 0.0)) / mean)


def radial_operator_rayleigh(p: int, ell: int, h: float, rho_max: Optional[float] = None) -> float:
    """Rayleigh quotient of the radial-number differential operator on Psi_{p,l}.

    -1/4 (d^2/drho^2 + rho^{-1} d/drho - l^2/rho^2) - |l|/2 + rho^2/4 - 1/2 is
    applied by central differences on rho_j = (j + 1/2) h. The ghost value at
    rho = -h/2 is the profile's analytic continuation, parity (-1)^l, and the
    one past rho_max is evaluated directly. Converges to p as O(h^2)."""
    if int(p) != p or p < 0:
        raise DomainError(f"p must be a non-negative integer, got {p!r}")
    a = abs(ell)
    rho_max = rho_max or math.sqrt(2 * (2 * p + a) + 1) + 6.0
    if not 0 < h < rho_max / 8:
        raise DomainError(f"h must lie in (0, rho_max/8), got h={h}, rho_max={rho_max}")

    n = math.ceil(rho_max / h)
    rho = (np.arange(-1, n + 1) + 0.5) * h
    u = laguerre_function(p, a, rho * rho)[p]
    u[0] = (-1) ** a * u[1]

    inner = slice(1, -1)
    r = rho[inner]
    second = (u[2:] - 2 * u[inner] + u[:-2]) / h**2
    first = (u[2:] - u[:-2]) / (2 * h)
    applied = -0.25 * (second + first / r - a * a * u[inner] / r**2) + (
        -a / 2 + r * r / 4 - 0.5
    ) * u[inner]

    quotient = float(np.sum(u[inner] * applied * r) / np.sum(u[inner] ** 2 * r))
    if abs(quotient - p) > 0.5:
        raise TruncationError(
            f"Rayleigh quotient {quotient:.4g} is not near p={p}; h={h} is too coarse"
        )
    Internal.debug(f"rayleigh p={p} ell={ell} h={h}: {quotient!r}")
    return quotient


def intelligent_field(
    ell: int,
    M: int,
    tau: float,
    grid: Optional[Grid] = None,
    trunc: Optional[Truncation] = None,
) -> FieldMap:
    """Field of intelligent_state(ell, M, tau)."""
    state = intelligent_state(IrrepLabel(ell), M, tau, trunc)
    if grid is None:
        cumulative = np.cumsum(state.probabilities)
        effective = int(np.searchsorted(cumulative, 1 - 1e-14))
        grid = PolarGrid.default(min(effective, state.p_max), ell)
        Service.info(f"intelligent field on default grid r_max={grid.r_max:.4g}")
    return eval_state(state, grid)


def intelligent_ring_radii(ell: int, M: int, tau: float, alpha: float = ALPHA_BEAM) -> list[float]:
    """Dark-ring radii of the intelligent field, sqrt(z_j / sinh tau) / alpha.

    z_j are the zeros of L_M^|l|; the field is
    y^|l| e^{-e^tau y^2/2} L_M^|l|(y^2 sinh tau) up to normalization. For
    tau <= 0 the Laguerre argument is non-positive and there are no rings."""
    if tau <= 0 or M == 0:
        return []
    s = math.sinh(tau)
    return [math.sqrt(z / s) / alpha for z in laguerre_positive_zeros(M, abs(ell))]
