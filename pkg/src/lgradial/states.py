"""Radial states in coefficient space.

A state is a coefficient vector c_p over |p, ell>, p = 0..p_max, together
with the probability it declares lost to truncation. Library constructors
grow p_max by doubling until that loss is at most 1e-10.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Literal, Optional, Tuple

import numpy as np
import ujson
from scipy.special import gammaln, logsumexp

from ._logging import Internal, Service
from .exceptions import DomainError, IrrepMismatchError, TruncationError
from .specfun import bessel_i, binomial
from .su11 import IrrepLabel, Truncation, apply_dmatrix, build_operator, dmatrix
from .typing import ComplexArray, RealArray

__all__ = (
    "RadialState",
    "UncertaintyReport",
    "fock_state",
    "perelomov",
    "mean_rings",
    "wp_distribution",
    "barut_girardello",
    "bg_prefactor",
    "intelligent_seed",
    "intelligent_state",
    "intelligent_eigenvalue",
    "intelligent_residual",
    "expectation",
    "uncertainty_report",
    "state_to_dict",
    "state_from_dict",
    "report_to_dict",
    "dumps",
)

TAIL_TOL = 1e-10
P_CAP = 4096
DEFAULT_P_MAX = 64


@dataclass(frozen=True)
class RadialState:
    irrep: IrrepLabel
    coeffs: ComplexArray
    tail_mass: float = 0.0

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=complex).reshape(-1)
        if coeffs.size == 0:
            raise DomainError("a state needs at least one coefficient")
        norm2 = float(np.sum(np.abs(coeffs) ** 2))
        if not 1 - 10 * self.tail_mass - 1e-12 <= norm2 <= 1 + 1e-12:
            raise DomainError(
                f"norm^2 {norm2!r} is inconsistent with declared tail mass {self.tail_mass:.3g}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def p_max(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def probabilities(self) -> RealArray:
        return np.abs(self.coeffs) ** 2

    def norm2(self) -> float:
        return float(np.sum(self.probabilities))

    def padded(self, p_max: int) -> ComplexArray:
        """Coefficients zero-padded (never cropped) to p_max + 1 levels."""
        if p_max < self.p_max:
            raise DomainError(f"cannot pad a state with p_max={self.p_max} down to {p_max}")
        out = np.zeros(p_max + 1, dtype=complex)
        out[: self.coeffs.shape[0]] = self.coeffs
        return out

    def combine(self, a: complex, other: RadialState, b: complex) -> ComplexArray:
        """Unnormalized coefficients of a*self + b*other."""
        if self.irrep != other.irrep:
            raise IrrepMismatchError(f"cannot add states on {self.irrep} and {other.irrep}")
        p_max = max(self.p_max, other.p_max)
        return a * self.padded(p_max) + b * other.padded(p_max)


@dataclass(frozen=True)
class UncertaintyReport:
    mean_kx: float
    mean_ky: float
    mean_kz: float
    var_kx: float
    var_ky: float
    tol: float = 1e-8

    @property
    def bound(self) -> float:
        return abs(self.mean_kz) / 2

    @property
    def product(self) -> float:
        return math.sqrt(self.var_kx * self.var_ky)

    @property
    def intelligent(self) -> bool:
        return abs(self.product - self.bound) < self.tol

    @property
    def squeezed_x(self) -> bool:
        return self.var_kx < self.bound - self.tol

    @property
    def squeezed_y(self) -> bool:
        return self.var_ky < self.bound - self.tol

    @property
    def squeezed(self) -> bool:
        return self.squeezed_x or self.squeezed_y


def _check_disc(zeta: complex) -> None:
    if not abs(zeta) < 1:
        raise DomainError(
            f"|zeta| must be < 1 for the discrete series, got |zeta|={abs(zeta)}"
        )


def _grow(
    build: Callable[[int], Tuple[ComplexArray, float]],
    p_max: int,
    *,
    label: str,
    tail_tol: float,
    p_cap: int,
) -> Tuple[ComplexArray, float]:
    while True:
        coeffs, tail = build(p_max)
        if tail <= tail_tol:
            return coeffs, tail
        if 2 * p_max > p_cap:
            raise TruncationError(
                f"{label}: tail mass {tail:.3g} still above {tail_tol:.1g} at p_max={p_max}",
                hint=f"the basis cap is {p_cap}",
            )
        Service.info(f"{label}: tail mass {tail:.3g} at p_max={p_max}, doubling")
        p_max *= 2


def _phase_fix(coeffs: ComplexArray) -> ComplexArray:
    mags = np.abs(coeffs)
    first = int(np.argmax(mags > 1e-14 * mags.max()))
    return coeffs * (abs(coeffs[first]) / coeffs[first])


def fock_state(irrep: IrrepLabel, p: int, p_max: int) -> RadialState:
    """The eigenstate |p, ell> of the radial number operator."""
    if not 0 <= p <= p_max:
        raise DomainError(f"p must satisfy 0 <= p <= p_max, got p={p}, p_max={p_max}")
    coeffs = np.zeros(p_max + 1, dtype=complex)
    coeffs[p] = 1.0
    return RadialState(irrep, coeffs)


def _perelomov_logs(irrep: IrrepLabel, r: float, p: RealArray) -> RealArray:
    two_k = irrep.two_k
    return (
        0.5 * two_k * math.log1p(-r * r)
        + 0.5 * (gammaln(two_k + p) - gammaln(p + 1) - gammaln(two_k))
        + p * math.log(r)
    )


def perelomov(
    irrep: IrrepLabel,
    zeta: complex,
    p_max: int = DEFAULT_P_MAX,
    *,
    tail_tol: float = TAIL_TOL,
    p_cap: int = P_CAP,
) -> RadialState:
    """Perelomov coherent state D(xi)|k, k>.

    c_p = (1-|zeta|^2)^k sqrt(Gamma(2k+p)/(p! Gamma(2k))) zeta^p."""
    _check_disc(zeta)
    r, theta = abs(zeta), float(np.angle(zeta))

    def build(n: int) -> Tuple[ComplexArray, float]:
        coeffs = np.zeros(n + 1, dtype=complex)
        if r == 0:
            coeffs[0] = 1.0
            return coeffs, 0.0
        p = np.arange(n + 1, dtype=float)
        coeffs = np.exp(_perelomov_logs(irrep, r, p) + 1j * theta * p)
        return coeffs, max(0.0, 1.0 - float(np.sum(np.abs(coeffs) ** 2)))

    coeffs, tail = _grow(build, p_max, label="perelomov", tail_tol=tail_tol, p_cap=p_cap)
    return RadialState(irrep, coeffs, tail)


def mean_rings(irrep: IrrepLabel, zeta: complex) -> float:
    """Average ring number (|ell|+1)|zeta|^2/(1-|zeta|^2) of a Perelomov state."""
    _check_disc(zeta)
    r2 = abs(zeta) ** 2
    return irrep.two_k * r2 / (1 - r2)


def wp_distribution(
    irrep: IrrepLabel,
    zeta: complex,
    p_max: int = DEFAULT_P_MAX,
    *,
    tail_tol: float = TAIL_TOL,
    p_cap: int = P_CAP,
) -> RealArray:
    """Ring statistics W_p of a Perelomov state, written through pbar.

    W_p = (|l|+1)^{|l|+1} (p+|l|)!/(p! |l|!) pbar^p / (pbar+|l|+1)^{p+|l|+1}"""
    pbar = mean_rings(irrep, zeta)
    a = irrep.abs_ell

    def build(n: int) -> Tuple[ComplexArray, float]:
        w = np.zeros(n + 1)
        if pbar == 0:
            w[0] = 1.0
            return w, 0.0
        p = np.arange(n + 1, dtype=float)
        logs = (
            (a + 1) * math.log(a + 1)
            + gammaln(p + a + 1)
            - gammaln(p + 1)
            - gammaln(a + 1)
            + p * math.log(pbar)
            - (p + a + 1) * math.log(pbar + a + 1)
        )
        w = np.exp(logs)
        return w, max(0.0, 1.0 - float(np.sum(w)))

    w, _ = _grow(build, p_max, label="wp", tail_tol=tail_tol, p_cap=p_cap)
    return w.real


def barut_girardello(
    irrep: IrrepLabel,
    zeta: complex,
    p_max: int = DEFAULT_P_MAX,
    *,
    tail_tol: float = TAIL_TOL,
    p_cap: int = P_CAP,
) -> RadialState:
    """Eigenstate of k_- with eigenvalue zeta.

    c_p is proportional to zeta^p / sqrt(p! (p+|l|)!) and normalized
    numerically over the kept levels."""
    if not np.isfinite(zeta):
        raise DomainError(f"zeta must be finite, got {zeta}")
    r, theta = abs(zeta), float(np.angle(zeta))
    a = irrep.abs_ell

    def build(n: int) -> Tuple[ComplexArray, float]:
        coeffs = np.zeros(n + 1, dtype=complex)
        if r == 0:
            coeffs[0] = 1.0
            return coeffs, 0.0
        extended = 2 * n + 16
        p = np.arange(extended + 1, dtype=float)
        logs = p * math.log(r) - 0.5 * (gammaln(p + 1) + gammaln(p + a + 1))
        total = logsumexp(2 * logs)
        tail = float(np.exp(logsumexp(2 * logs[n + 1 :]) - total))
        if 2 * logs[-1] - total > math.log(1e-30):
            # terms have not started to fall off inside the extended range
            tail = max(tail, 1.0)
        kept = logs[: n + 1]
        coeffs = np.exp(kept - 0.5 * logsumexp(2 * kept) + 1j * theta * p[: n + 1])
        return coeffs, tail

    coeffs, tail = _grow(build, p_max, label="barut-girardello", tail_tol=tail_tol, p_cap=p_cap)
    return RadialState(irrep, coeffs, tail)


def bg_prefactor(irrep: IrrepLabel, zeta: complex) -> float:
    """Closed-form normalization |zeta|^{|l|/2} / sqrt(I_|l|(2|zeta|)).

    Multiplies zeta^p / sqrt(p! (p+|l|)!) into a unit vector; at zeta = 0 the
    limit sqrt(|l|!) is returned."""
    r = abs(zeta)
    if r == 0:
        return math.sqrt(math.factorial(irrep.abs_ell))
    return r ** (irrep.abs_ell / 2) / math.sqrt(bessel_i(irrep.abs_ell, 2 * r))


def intelligent_seed(irrep: IrrepLabel, M: int, tau: float) -> RadialState:
    """Seed |kappa_M^k(tau)> with c_p = C(M,p) tanh^p(tau) / sqrt(C(2k+p-1, p)) c_0."""
    if int(M) != M or M < 0:
        raise DomainError(f"M must be a non-negative integer, got {M!r}")
    t = math.tanh(tau)
    raw = np.array(
        [
            binomial(M, p) * t**p / math.sqrt(binomial(irrep.two_k + p - 1, p))
            for p in range(M + 1)
        ]
    )
    return RadialState(irrep, raw / np.linalg.norm(raw) + 0j)


def intelligent_eigenvalue(irrep: IrrepLabel, M: int, tau: float) -> float:
    """Lambda in (k_x - i cosh(tau) k_y) Psi = Lambda Psi for intelligent_state."""
    return (irrep.k + M) * math.sinh(tau)


def intelligent_state(
    irrep: IrrepLabel,
    M: int,
    tau: float,
    trunc: Optional[Truncation] = None,
    *,
    method: Literal["action", "dense"] = "action",
    tail_tol: float = TAIL_TOL,
    p_cap: int = P_CAP,
) -> RadialState:
    """Intelligent state exp(i tau k_y)|kappa_M^k(tau)>.

    `method` selects between the sparse action of the exponential and the
    dense d-matrix; both give the same coefficients."""
    seed = intelligent_seed(irrep, M, tau)
    trunc = trunc or Truncation(max(DEFAULT_P_MAX, 2 * (M + 8)), 8)
    if M > trunc.p_max - trunc.margin:
        raise DomainError(f"M={M} does not fit inside the interior of {trunc}")
    margin = trunc.margin

    def build(n: int) -> Tuple[ComplexArray, float]:
        current = Truncation(n, margin)
        if method == "dense":
            # only the seed columns are used, so only those rows need to close
            checked = Truncation(n, n - seed.p_max - 1)
            try:
                d = dmatrix(irrep, tau, checked)
            except TruncationError:
                return np.zeros(0, dtype=complex), math.inf
            coeffs = d.apply(seed.padded(n))
            edge = float(np.sum(np.abs(coeffs[current.interior :]) ** 2))
            edge += max(0.0, 1.0 - float(np.sum(np.abs(coeffs) ** 2)))
            return coeffs, edge
        return apply_dmatrix(irrep, tau, seed.coeffs, current)

    coeffs, tail = _grow(
        build, trunc.p_max, label="intelligent", tail_tol=tail_tol, p_cap=p_cap
    )
    Internal.debug(f"intelligent state ell={irrep.ell} M={M} tau={tau}: p_max={coeffs.shape[0] - 1}")
    return RadialState(irrep, _phase_fix(coeffs), tail)


def _padded_operators(state: RadialState) -> Tuple[ComplexArray, Dict[str, ComplexArray]]:
    # one extra level makes A|psi> exact for the tridiagonal generators
    trunc = Truncation(state.p_max + 1, 0)
    ops = {
        tag: build_operator(state.irrep, tag, trunc).entries  # type: ignore[arg-type]
        for tag in ("kx", "ky", "kz")
    }
    return state.padded(state.p_max + 1), ops


def intelligent_residual(
    state: RadialState,
    tau: float,
    eigenvalue: complex,
) -> float:
    """|| (k_x - i cosh(tau) k_y) Psi - eigenvalue Psi ||"""
    psi, ops = _padded_operators(state)
    lhs = ops["kx"] @ psi - 1j * math.cosh(tau) * (ops["ky"] @ psi)
    return float(np.linalg.norm(lhs - eigenvalue * psi))


def expectation(state: RadialState, op: Any) -> complex:
    """<Psi|A|Psi> for an OperatorMatrix on the state's irrep and basis size."""
    if op.irrep != state.irrep:
        raise IrrepMismatchError(f"operator acts on {op.irrep}, state lives on {state.irrep}")
    if op.trunc.dim != state.coeffs.shape[0]:
        raise IrrepMismatchError(
            f"operator has dimension {op.trunc.dim}, state has {state.coeffs.shape[0]} levels"
        )
    return complex(np.vdot(state.coeffs, op.entries @ state.coeffs))


def uncertainty_report(state: RadialState, *, tol: float = 1e-8) -> UncertaintyReport:
    """Means of k_x, k_y, k_z and variances of k_x, k_y."""
    psi, ops = _padded_operators(state)
    norm2 = float(np.vdot(psi, psi).real)
    means: Dict[str, float] = {}
    variances: Dict[str, float] = {}
    for tag, op in ops.items():
        applied = op @ psi
        mean = float(np.vdot(psi, applied).real) / norm2
        means[tag] = mean
        variances[tag] = float(np.sum(np.abs(applied - mean * psi) ** 2)) / norm2

    return UncertaintyReport(
        mean_kx=means["kx"],
        mean_ky=means["ky"],
        mean_kz=means["kz"],
        var_kx=variances["kx"],
        var_ky=variances["ky"],
        tol=tol,
    )


def overlap(a: RadialState, b: RadialState) -> complex:
    """<a|b> in coefficient space."""
    if a.irrep != b.irrep:
        raise IrrepMismatchError(f"states live on {a.irrep} and {b.irrep}")
    p_max = max(a.p_max, b.p_max)
    return complex(np.vdot(a.padded(p_max), b.padded(p_max)))


def state_to_dict(state: RadialState) -> Dict[str, Any]:
    return {
        "irrep": {"ell": state.irrep.ell, "k": state.irrep.k},
        "coeffs": [[float(c.real), float(c.imag)] for c in state.coeffs],
        "tail_mass": state.tail_mass,
    }


def state_from_dict(data: Dict[str, Any]) -> RadialState:
    coeffs = np.array([complex(re, im) for re, im in data["coeffs"]])
    return RadialState(IrrepLabel(int(data["irrep"]["ell"])), coeffs, float(data["tail_mass"]))


def report_to_dict(report: UncertaintyReport) -> Dict[str, Any]:
    return {
        "mean_kx": report.mean_kx,
        "mean_ky": report.mean_ky,
        "mean_kz": report.mean_kz,
        "var_kx": report.var_kx,
        "var_ky": report.var_ky,
        "bound": report.bound,
        "product": report.product,
        "intelligent": report.intelligent,
        "squeezed_x": report.squeezed_x,
        "squeezed_y": report.squeezed_y,
    }


def dumps(obj: RadialState | UncertaintyReport) -> str:
    """JSON document for a state or an uncertainty report."""
    if isinstance(obj, RadialState):
        return ujson.dumps(state_to_dict(obj), indent=2)
    return ujson.dumps(report_to_dict(obj), indent=2)
