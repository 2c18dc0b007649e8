"""Truncated su(1,1) operator matrices on a fixed-ell radial ladder.

Basis states |p, ell> are identified with |k, k+p> of the positive discrete
series with Bargmann index k = (|ell|+1)/2. A truncation keeps 0 <= p <= p_max;
products of ladder operators are wrong in the last rows, so identities are
checked on the interior block p <= p_max - margin.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy import sparse

from ._logging import Internal
from .exceptions import (
    AsymptoticRegimeWarning,
    DomainError,
    IrrepMismatchError,
    TruncationError,
    UnknownOperatorError,
)
from .typing import ComplexArray, OperatorTag, RealArray

__all__ = (
    "IrrepLabel",
    "Truncation",
    "OperatorMatrix",
    "build_operator",
    "commutator_residual",
    "e_unitarity_report",
    "casimir_residual",
    "dmatrix",
    "dmatrix_padding",
    "apply_dmatrix",
    "dmatrix_asymptotic",
    "expm",
)

TAU_CAP = 6.0
ORTHONORMALITY_TOL = 1e-10
# Taylor steps run on generators scaled below this 1-norm
_THETA = 0.5


@dataclass(frozen=True)
class IrrepLabel:
    """One discrete-series irrep, labelled by the OAM index.

    Bargmann index k = (|ell|+1)/2 is stored as the integer 2k."""

    ell: int
    two_k: int = field(init=False)

    def __post_init__(self) -> None:
        if int(self.ell) != self.ell:
            raise DomainError(f"ell must be an integer, got {self.ell!r}")
        object.__setattr__(self, "ell", int(self.ell))
        object.__setattr__(self, "two_k", abs(self.ell) + 1)

    @property
    def k(self) -> float:
        return self.two_k / 2

    @property
    def abs_ell(self) -> int:
        return self.two_k - 1

    def casimir(self) -> float:
        """k(k-1)"""
        return self.k * (self.k - 1)


@dataclass(frozen=True)
class Truncation:
    p_max: int
    margin: int = 8

    def __post_init__(self) -> None:
        if self.p_max < 1:
            raise DomainError(f"p_max must be positive, got {self.p_max}")
        if not 0 <= self.margin < self.p_max:
            raise DomainError(
                f"margin must satisfy 0 <= margin < p_max, got margin={self.margin}, p_max={self.p_max}"
            )

    @property
    def dim(self) -> int:
        return self.p_max + 1

    @property
    def interior(self) -> int:
        """Number of interior levels, p = 0..p_max - margin."""
        return self.p_max - self.margin + 1

    def grown(self) -> Truncation:
        return Truncation(2 * self.p_max, self.margin)


@dataclass(frozen=True)
class OperatorMatrix:
    irrep: IrrepLabel
    trunc: Truncation
    entries: ComplexArray
    tag: str = ""

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (self.trunc.dim, self.trunc.dim):
            raise IrrepMismatchError(
                f"entries have shape {entries.shape}, truncation needs {(self.trunc.dim,) * 2}"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def interior_block(self) -> ComplexArray:
        n = self.trunc.interior
        return self.entries[:n, :n]

    def dagger(self) -> OperatorMatrix:
        return OperatorMatrix(self.irrep, self.trunc, self.entries.conj().T, f"{self.tag}^dag")

    def is_hermitian(self) -> bool:
        return bool(np.array_equal(self.entries, self.entries.conj().T))

    def apply(self, vector: ComplexArray) -> ComplexArray:
        return self.entries @ np.asarray(vector, dtype=complex)

    def _check_compatible(self, other: OperatorMatrix) -> None:
        if self.irrep != other.irrep or self.trunc != other.trunc:
            raise IrrepMismatchError(
                f"cannot combine {self.tag} on {self.irrep}/{self.trunc} with {other.tag} on {other.irrep}/{other.trunc}"
            )

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check_compatible(other)
        return OperatorMatrix(self.irrep, self.trunc, self.entries @ other.entries, f"{self.tag}{other.tag}")

    def __add__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check_compatible(other)
        return OperatorMatrix(self.irrep, self.trunc, self.entries + other.entries, f"({self.tag}+{other.tag})")

    def __sub__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check_compatible(other)
        return OperatorMatrix(self.irrep, self.trunc, self.entries - other.entries, f"({self.tag}-{other.tag})")

    def __rmul__(self, scalar: complex) -> OperatorMatrix:
        return OperatorMatrix(self.irrep, self.trunc, scalar * self.entries, self.tag)


def _raising(two_k: int, dim: int) -> RealArray:
    p = np.arange(dim - 1)
    return np.diag(np.sqrt((two_k + p) * (p + 1.0)), -1)


def _kz(two_k: int, dim: int) -> RealArray:
    return np.diag(two_k / 2 + np.arange(dim, dtype=float))


def _operator_entries(two_k: int, dim: int) -> Dict[str, Callable[[], ComplexArray]]:
    def kx() -> ComplexArray:
        kp = _raising(two_k, dim)
        return (kp + kp.T) / 2 + 0j

    def ky() -> ComplexArray:
        kp = _raising(two_k, dim)
        return (kp - kp.T) / 2j

    def casimir() -> ComplexArray:
        kz = _kz(two_k, dim)
        x, y = kx(), ky()
        return kz @ kz - x @ x - y @ y

    return {
        "kplus": lambda: _raising(two_k, dim) + 0j,
        "kminus": lambda: _raising(two_k, dim).T + 0j,
        "kz": lambda: _kz(two_k, dim) + 0j,
        "kx": kx,
        "ky": ky,
        "p_hat": lambda: np.diag(np.arange(dim, dtype=float)) + 0j,
        "n_hat": lambda: 2 * _kz(two_k, dim) - np.eye(dim) + 0j,
        "e_lower": lambda: np.eye(dim, k=1) + 0j,
        "casimir": casimir,
    }


def build_operator(irrep: IrrepLabel, which: OperatorTag, trunc: Truncation) -> OperatorMatrix:
    """Matrix of one operator on the truncated basis {|p, ell> : p <= p_max}.

    Args:
        irrep: Irrep of the ladder.
        which: One of kplus, kminus, kz, kx, ky, p_hat, n_hat, e_lower, casimir.
        trunc: Truncation of the basis."""
    builders = _operator_entries(irrep.two_k, trunc.dim)
    try:
        builder = builders[which]
    except KeyError:
        raise UnknownOperatorError(
            f"unknown operator {which!r}, expected one of {', '.join(builders)}"
        ) from None

    return OperatorMatrix(irrep, trunc, builder(), which)


def commutator_residual(
    a: OperatorMatrix,
    b: OperatorMatrix,
    expected: Optional[OperatorMatrix],
    sign: complex = 1,
    trunc: Optional[Truncation] = None,
) -> float:
    """max |AB - BA - sign * expected| on the interior block.

    `sign` is the scalar in front of `expected`, e.g. -2 for [k+, k-] = -2 kz.
    A missing `expected` means the commutator should vanish."""
    a._check_compatible(b)
    if expected is not None:
        a._check_compatible(expected)
    trunc = trunc or a.trunc
    if trunc.dim != a.trunc.dim:
        raise IrrepMismatchError(f"truncation {trunc} does not match the operators' {a.trunc}")

    comm = a.entries @ b.entries - b.entries @ a.entries
    if expected is not None:
        comm = comm - sign * expected.entries
    n = trunc.interior
    return float(np.max(np.abs(comm[:n, :n])))


def e_unitarity_report(irrep: IrrepLabel, trunc: Truncation) -> Tuple[float, float]:
    """Residuals of e e^dag = 1 and e^dag e = 1 - P0 on the interior block."""
    e = build_operator(irrep, "e_lower", trunc).entries
    n = trunc.interior
    identity = np.eye(trunc.dim)
    vacuum = np.zeros((trunc.dim, trunc.dim))
    vacuum[0, 0] = 1.0

    ee_dag = e @ e.conj().T - identity
    edag_e = e.conj().T @ e - (identity - vacuum)
    return (
        float(np.max(np.abs(ee_dag[:n, :n]))),
        float(np.max(np.abs(edag_e[:n, :n]))),
    )


def casimir_residual(irrep: IrrepLabel, trunc: Truncation) -> float:
    """max |K^2 - k(k-1)| on the interior block."""
    casimir = build_operator(irrep, "casimir", trunc).entries
    n = trunc.interior
    return float(np.max(np.abs(casimir[:n, :n] - irrep.casimir() * np.eye(n))))


def expm(a: RealArray) -> RealArray:
    """Matrix exponential by scaling and squaring of a Taylor polynomial.

    The matrix is scaled by 2^s until its 1-norm is at most 0.5, the Taylor
    series is summed to double precision, and the result is squared s times."""
    a = np.asarray(a)
    norm = float(np.linalg.norm(a, 1)) if a.size else 0.0
    s = max(0, math.ceil(math.log2(norm / _THETA))) if norm > _THETA else 0
    scaled = a / (2.0**s)

    result = np.eye(a.shape[0], dtype=a.dtype)
    term = np.eye(a.shape[0], dtype=a.dtype)
    for j in range(1, 60):
        term = term @ scaled / j
        result = result + term
        if np.max(np.abs(term)) <= 1e-17 * np.max(np.abs(result)):
            break

    for _ in range(s):
        result = result @ result

    Internal.debug(f"expm: dim={a.shape[0]} norm={norm:.3g} squarings={s}")
    return result


def dmatrix_padding(irrep: IrrepLabel, tau: float, trunc: Truncation) -> int:
    """Extra levels used while exponentiating, discarded afterwards."""
    return max(trunc.margin, 16, math.ceil(4 * math.sinh(abs(tau)) * irrep.k))


def _check_tau(tau: float, tau_cap: float) -> None:
    if not math.isfinite(tau) or abs(tau) > tau_cap:
        raise DomainError(f"|tau| must be at most {tau_cap}, got {tau}")


def _generator(two_k: int, dim: int, tau: float) -> RealArray:
    kp = _raising(two_k, dim)
    # i tau k_y = (tau/2)(k+ - k-)
    return 0.5 * tau * (kp - kp.T)


def dmatrix(
    irrep: IrrepLabel,
    tau: float,
    trunc: Truncation,
    *,
    tau_cap: float = TAU_CAP,
) -> OperatorMatrix:
    """Matrix of exp(i tau k_y); entry [p', p] is d^k_{k+p', k+p}(tau).

    Computed on a padded basis and cropped to p_max + 1 levels. Raises
    TruncationError when the interior rows of the crop are not orthonormal."""
    _check_tau(tau, tau_cap)
    pad = dmatrix_padding(irrep, tau, trunc)
    dim = trunc.dim + pad
    full = expm(_generator(irrep.two_k, dim, tau))
    crop = full[: trunc.dim, : trunc.dim]

    n = trunc.interior
    rows = crop[:n]
    residual = float(np.max(np.abs(rows @ rows.T - np.eye(n))))
    Internal.debug(f"dmatrix: ell={irrep.ell} tau={tau} pad={pad} orthonormality={residual:.3g}")
    if residual > ORTHONORMALITY_TOL:
        raise TruncationError(
            f"d-matrix rows lose orthonormality ({residual:.3g}) at tau={tau}, p_max={trunc.p_max}",
            hint="raise p_max or margin; the basis must grow roughly like e^{|tau|}",
        )

    return OperatorMatrix(irrep, trunc, crop, "dmatrix")


def apply_dmatrix(
    irrep: IrrepLabel,
    tau: float,
    vector: ComplexArray,
    trunc: Truncation,
    *,
    tau_cap: float = TAU_CAP,
) -> Tuple[ComplexArray, float]:
    """exp(i tau k_y) applied to a coefficient vector.

    The vector is embedded in a padded basis, propagated with Taylor steps of
    a sparse tridiagonal generator, and cropped to p_max + 1 levels.

    Returns:
        The cropped coefficients and the probability found in the top
        `margin` levels and the padding, which signals truncation."""
    _check_tau(tau, tau_cap)
    vector = np.asarray(vector, dtype=complex)
    if vector.shape[0] > trunc.dim:
        raise IrrepMismatchError(
            f"vector has {vector.shape[0]} levels, truncation keeps {trunc.dim}"
        )

    pad = dmatrix_padding(irrep, tau, trunc)
    dim = trunc.dim + pad
    p = np.arange(dim - 1)
    off = 0.5 * tau * np.sqrt((irrep.two_k + p) * (p + 1.0))
    generator = sparse.diags([off, -off], [-1, 1], format="csr")

    norm = 2.0 * float(np.max(np.abs(off))) if off.size else 0.0
    steps = max(1, math.ceil(norm / _THETA))
    state = np.zeros(dim, dtype=complex)
    state[: vector.shape[0]] = vector

    for _ in range(steps):
        term = state
        acc = state.copy()
        for j in range(1, 60):
            term = generator @ term / (steps * j)
            acc += term
            if np.max(np.abs(term)) <= 1e-17 * np.max(np.abs(acc)):
                break
        state = acc

    edge = float(np.sum(np.abs(state[trunc.interior :]) ** 2))
    Internal.debug(f"apply_dmatrix: tau={tau} dim={dim} steps={steps} edge_mass={edge:.3g}")
    return state[: trunc.dim], edge


def dmatrix_asymptotic(k: float, p: int, tau: float, *, normalized: bool = False) -> float:
    """Gaussian approximation of d^k_{k+p, k}(tau) for large k and p/k << 1.

    exp(-k (tau - tau_p)^2 / 2) / [(k+p)^2 - k^2]^{1/4} with
    cosh tau_p = (k+p)/k. With `normalized`, the prefactor (k/pi)^{1/4}
    is included, which matches the peak height of the exact function."""
    if not float(2 * k).is_integer() or k < 0.5:
        raise DomainError(f"k must be a positive half-integer, got {k}")
    if int(p) != p or p < 1:
        raise DomainError(f"the asymptotic formula needs an integer p >= 1, got {p}")
    if k < 10 or p > 0.2 * k:
        warnings.warn(
            f"asymptotic d-function used at k={k}, p={p}; it assumes k >> 1 and p << k",
            AsymptoticRegimeWarning,
            stacklevel=2,
        )

    tau_p = math.acosh((k + p) / k)
    value = math.exp(-k * (tau - tau_p) ** 2 / 2) / ((k + p) ** 2 - k**2) ** 0.25
    if normalized:
        value *= (k / math.pi) ** 0.25
    return value
