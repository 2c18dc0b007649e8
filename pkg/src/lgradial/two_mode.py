"""Two-mode Cartesian Fock space |n_x, n_y> with n_x + n_y <= n_max.

Used to check the circular-mode identities the radial ladder is built on:
a_+- = (a_x -+ i a_y)/sqrt(2), ell = n_+ - n_-, and k_+ = a_-^dag a_+^dag.
Ladder operators leave the space from the top shell, so identities are
checked on the interior n <= n_max - 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ._logging import Internal
from .exceptions import DomainError, UnknownOperatorError
from .typing import ComplexArray, RealArray, TwoModeTag

__all__ = (
    "TwoModeBasis",
    "build_two_mode",
    "canonical_residuals",
    "degeneracy_spectrum",
    "radial_link_check",
    "ladder_vector",
    "kplus_ladder_elements",
)

DEFAULT_N_MAX = 24


@dataclass(frozen=True)
class TwoModeBasis:
    n_max: int = DEFAULT_N_MAX
    states: Tuple[Tuple[int, int], ...] = field(init=False, repr=False)
    index: Dict[Tuple[int, int], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise DomainError(f"n_max must be an integer >= 2, got {self.n_max!r}")
        states = tuple((nx, n - nx) for n in range(self.n_max + 1) for nx in range(n + 1))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "index", {s: i for i, s in enumerate(states)})

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * (self.n_max + 2) // 2

    def interior(self) -> np.ndarray:
        """Indices of the states with n_x + n_y <= n_max - 2."""
        return np.array([i for i, (nx, ny) in enumerate(self.states) if nx + ny <= self.n_max - 2])


def _lowering(basis: TwoModeBasis, axis: int) -> RealArray:
    out = np.zeros((basis.dim, basis.dim))
    for col, state in enumerate(basis.states):
        if state[axis] == 0:
            continue
        lowered = list(state)
        lowered[axis] -= 1
        out[basis.index[tuple(lowered)], col] = math.sqrt(state[axis])
    return out


def build_two_mode(which: TwoModeTag, basis: TwoModeBasis) -> ComplexArray:
    """Matrix of ax, ay, aplus, aminus, n or ell on the truncated space."""
    ax = _lowering(basis, 0) + 0j
    ay = _lowering(basis, 1) + 0j
    if which == "ax":
        return ax
    if which == "ay":
        return ay
    if which == "aplus":
        return (ax - 1j * ay) / math.sqrt(2)
    if which == "aminus":
        return (ax + 1j * ay) / math.sqrt(2)
    if which == "n":
        return ax.conj().T @ ax + ay.conj().T @ ay
    if which == "ell":
        return 1j * (ay.conj().T @ ax - ax.conj().T @ ay)
    raise UnknownOperatorError(
        f"unknown two-mode operator {which!r}, expected one of ax, ay, aplus, aminus, n, ell"
    )


def _interior_max(matrix: ComplexArray, basis: TwoModeBasis) -> float:
    keep = basis.interior()
    return float(np.max(np.abs(matrix[np.ix_(keep, keep)])))


def _comm(a: ComplexArray, b: ComplexArray) -> ComplexArray:
    return a @ b - b @ a


def canonical_residuals(basis: TwoModeBasis) -> Dict[str, float]:
    """Interior residuals of the canonical and circular-mode identities."""
    ops = {tag: build_two_mode(tag, basis) for tag in ("ax", "ay", "aplus", "aminus", "n", "ell")}
    dag = {tag: m.conj().T for tag, m in ops.items()}
    identity = np.eye(basis.dim)
    n_plus = dag["aplus"] @ ops["aplus"]
    n_minus = dag["aminus"] @ ops["aminus"]

    checks = {
        "[ax,ax^dag]=1": _comm(ops["ax"], dag["ax"]) - identity,
        "[ay,ay^dag]=1": _comm(ops["ay"], dag["ay"]) - identity,
        "[ax,ay]=0": _comm(ops["ax"], ops["ay"]),
        "[ax,ay^dag]=0": _comm(ops["ax"], dag["ay"]),
        "[a+,a+^dag]=1": _comm(ops["aplus"], dag["aplus"]) - identity,
        "[a-,a-^dag]=1": _comm(ops["aminus"], dag["aminus"]) - identity,
        "[a+,a-^dag]=0": _comm(ops["aplus"], dag["aminus"]),
        "[a+,a-]=0": _comm(ops["aplus"], ops["aminus"]),
        "n=n+ + n-": ops["n"] - n_plus - n_minus,
        "ell=n+ - n-": ops["ell"] - (n_plus - n_minus),
        "[ell,n]=0": _comm(ops["ell"], ops["n"]),
    }
    return {name: _interior_max(m, basis) for name, m in checks.items()}


def degeneracy_spectrum(basis: TwoModeBasis) -> List[Tuple[int, int]]:
    """(n, multiplicity) pairs of the total number operator."""
    eigenvalues = np.linalg.eigvalsh(build_two_mode("n", basis))
    levels, counts = np.unique(np.rint(eigenvalues).astype(int), return_counts=True)
    return [(int(n), int(c)) for n, c in zip(levels, counts)]


def radial_link_check(basis: TwoModeBasis, ell_fixed: int) -> float:
    """Largest residual linking (n - |l|)/2 to n_- (l > 0) or n_+ (l < 0).

    On the ell = ell_fixed eigenspace, (n - |l|)/2 must have spectrum
    0, 1, 2, ... and equal n_- or n_+; [ell, n] must vanish on the interior."""
    if abs(ell_fixed) > basis.n_max:
        raise DomainError(f"|ell| must be at most n_max={basis.n_max}, got {ell_fixed}")
    ell_op = build_two_mode("ell", basis)
    number = build_two_mode("n", basis)
    eigenvalues, vectors = np.linalg.eigh(ell_op)
    q = vectors[:, np.abs(eigenvalues - ell_fixed) < 1e-8]

    a = abs(ell_fixed)
    radial = q.conj().T @ ((number - a * np.eye(basis.dim)) / 2) @ q
    spectrum = np.linalg.eigvalsh(radial)
    expected = np.arange(spectrum.shape[0])
    spectrum_residual = float(np.max(np.abs(spectrum - expected)))

    partner = build_two_mode("aminus" if ell_fixed >= 0 else "aplus", basis)
    partner_number = q.conj().T @ (partner.conj().T @ partner) @ q
    link_residual = float(np.max(np.abs(radial - partner_number)))

    commutator_residual = _interior_max(_comm(ell_op, number), basis)
    Internal.debug(
        f"radial link ell={ell_fixed}: spectrum={spectrum_residual:.3g} "
        f"link={link_residual:.3g} commutator={commutator_residual:.3g}"
    )
    return max(spectrum_residual, link_residual, commutator_residual)


def ladder_vector(basis: TwoModeBasis, n_plus: int, n_minus: int) -> ComplexArray:
    """(a_+^dag)^{n+} (a_-^dag)^{n-} |0,0> / sqrt(n+! n-!)"""
    if n_plus < 0 or n_minus < 0 or n_plus + n_minus > basis.n_max:
        raise DomainError(
            f"need 0 <= n+, n- and n+ + n- <= {basis.n_max}, got n+={n_plus}, n-={n_minus}"
        )
    raise_plus = build_two_mode("aplus", basis).conj().T
    raise_minus = build_two_mode("aminus", basis).conj().T
    vector = np.zeros(basis.dim, dtype=complex)
    vector[0] = 1.0
    for _ in range(n_minus):
        vector = raise_minus @ vector
    for _ in range(n_plus):
        vector = raise_plus @ vector
    return vector / math.sqrt(math.factorial(n_plus) * math.factorial(n_minus))


def kplus_ladder_elements(basis: TwoModeBasis, ell: int) -> RealArray:
    """<p+1| a_-^dag a_+^dag |p> along the fixed-ell ladder.

    The ladder is |p+|l|, p> in (n_+, n_-) for l >= 0 and |p, p+|l|> for
    l < 0; p runs while the image stays inside the space."""
    a = abs(ell)
    kplus = build_two_mode("aminus", basis).conj().T @ build_two_mode("aplus", basis).conj().T

    def vec(p: int) -> ComplexArray:
        return ladder_vector(basis, p + a, p) if ell >= 0 else ladder_vector(basis, p, p + a)

    count = (basis.n_max - a) // 2
    return np.array([np.vdot(vec(p + 1), kplus @ vec(p)).real for p in range(count)])
