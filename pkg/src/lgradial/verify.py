"""Verification suites producing `report-v1` documents.

Each suite yields one record per check: {suite, check, residual, tolerance,
pass}. Informational records carry measurements that are reported but never
fail a run.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Sequence, Union

import numpy as np
from scipy import special

from ._logging import Service
from .exceptions import DomainError
from .fields import (
    PolarGrid,
    count_dark_rings,
    count_dark_rings_field,
    count_visible_rings,
    eval_bg_closed,
    eval_lg,
    eval_perelomov_closed,
    eval_state,
    intelligent_field,
    intelligent_ring_radii,
    overlap as field_overlap,
    radial_operator_rayleigh,
    radial_spread,
)
from .specfun import (
    bessel_i,
    bessel_j,
    hermite,
    laguerre,
    laguerre_genfun_residual,
    laguerre_positive_zeros,
)
from .states import (
    barut_girardello,
    intelligent_eigenvalue,
    intelligent_residual,
    intelligent_state,
    mean_rings,
    overlap as state_overlap,
    perelomov,
    uncertainty_report,
    wp_distribution,
)
from .su11 import (
    IrrepLabel,
    Truncation,
    apply_dmatrix,
    build_operator,
    casimir_residual,
    commutator_residual,
    dmatrix,
    dmatrix_asymptotic,
    e_unitarity_report,
)
from .two_mode import (
    TwoModeBasis,
    canonical_residuals,
    degeneracy_spectrum,
    kplus_ladder_elements,
    radial_link_check,
)
from .typing import SuiteName

__all__ = ("CheckRecord", "Report", "SUITES", "run_verify")

SCHEMA = "report-v1"


@dataclass(frozen=True)
class CheckRecord:
    suite: str
    check: str
    residual: float
    tolerance: float
    passed: bool
    informational: bool = False

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {
            "suite": self.suite,
            "check": self.check,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.informational:
            data["informational"] = True
        return data


@dataclass
class Report:
    tol_scale: float = 1.0
    records: List[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def to_dict(self) -> Dict[str, object]:
        return {
            "schema": SCHEMA,
            "tol_scale": self.tol_scale,
            "passed": self.passed,
            "records": [r.to_dict() for r in self.records],
        }


@dataclass(frozen=True)
class _Context:
    suite: str
    tol_scale: float
    n_r: int

    def check(self, name: str, residual: float, tolerance: float) -> CheckRecord:
        tolerance *= self.tol_scale
        residual = float(residual)
        return CheckRecord(self.suite, name, residual, tolerance, bool(residual <= tolerance))

    def info(self, name: str, value: float) -> CheckRecord:
        return CheckRecord(self.suite, name, float(value), 0.0, True, informational=True)


Suite = Callable[[_Context], Iterator[CheckRecord]]
SUITES: Dict[str, Suite] = {}


def suite(name: SuiteName) -> Callable[[Suite], Suite]:
    def decorator(func: Suite) -> Suite:
        SUITES[name] = func
        return func

    return decorator


@suite("specfun")
def _specfun(ctx: _Context) -> Iterator[CheckRecord]:
    x = np.linspace(0.1, 25.0, 50)
    worst = 0.0
    for p in range(21):
        for a in range(11):
            oracle = special.eval_genlaguerre(p, a, x)
            # L(-x) bounds every partial sum of the series, so it sets the rounding scale
            envelope = np.maximum(1.0, special.eval_genlaguerre(p, a, -x))
            worst = max(worst, float(np.max(np.abs(laguerre(p, a, x) - oracle) / envelope)))
    yield ctx.check("laguerre vs scipy eval_genlaguerre", worst, 1e-10)

    worst = 0.0
    for n in range(16):
        oracle = special.eval_hermite(n, x / 5)
        scale = max(1.0, float(np.max(np.abs(oracle))))
        worst = max(worst, float(np.max(np.abs(hermite(n, x / 5) - oracle))) / scale)
    yield ctx.check("hermite vs scipy eval_hermite", worst, 1e-12)

    worst_i = worst_j = 0.0
    for nu in range(6):
        for value in np.linspace(0.0, 20.0, 41):
            worst_i = max(worst_i, abs(bessel_i(nu, value) - special.iv(nu, value)) / max(1.0, special.iv(nu, value)))
        for value in np.linspace(0.0, 50.0, 101):
            worst_j = max(worst_j, abs(bessel_j(nu, value) - special.jv(nu, value)))
    yield ctx.check("bessel_i vs scipy iv", worst_i, 1e-12)
    yield ctx.check("bessel_j vs scipy jv", worst_j, 1e-12)

    yield ctx.check("laguerre generating function", laguerre_genfun_residual(0.5, 1.3, 2, 200), 1e-12)

    mismatches = sum(
        len(laguerre_positive_zeros(p, a)) != p for p in range(11) for a in range(6)
    )
    yield ctx.check("zero count of L_p^a equals p", mismatches, 0)


ALGEBRA_ELLS = (0, 1, -1, 2, -2, 5, -5, 10, -10)
DMAT_TAUS = (0.25, 0.5, 1.0, 2.0)


def _dmat_truncation(tau: float) -> Truncation:
    # 9 interior rows; the rest of the basis absorbs the spread of exp(i tau k_y)
    p_max = 64 if tau <= 1 else 256
    return Truncation(p_max, p_max - 8)


@suite("algebra")
def _algebra(ctx: _Context) -> Iterator[CheckRecord]:
    trunc = Truncation(64, 8)
    for ell in ALGEBRA_ELLS:
        irrep = IrrepLabel(ell)
        ops = {
            tag: build_operator(irrep, tag, trunc)  # type: ignore[arg-type]
            for tag in ("kplus", "kminus", "kz", "kx", "ky", "p_hat", "n_hat", "e_lower")
        }
        worst = max(
            commutator_residual(ops["kz"], ops["kplus"], ops["kplus"]),
            commutator_residual(ops["kz"], ops["kminus"], ops["kminus"], -1),
            commutator_residual(ops["kplus"], ops["kminus"], ops["kz"], -2),
            commutator_residual(ops["kx"], ops["ky"], ops["kz"], -1j),
            commutator_residual(ops["ky"], ops["kz"], ops["kx"], 1j),
            commutator_residual(ops["kz"], ops["kx"], ops["ky"], 1j),
        )
        yield ctx.check(f"su(1,1) commutators ell={ell}", worst, 1e-12)
        yield ctx.check(f"casimir k(k-1) ell={ell}", casimir_residual(irrep, trunc), 1e-12)

        relation = ops["p_hat"].entries - (ops["n_hat"].entries - irrep.abs_ell * np.eye(trunc.dim)) / 2
        yield ctx.check(f"p = (n - |l|)/2 ell={ell}", float(np.max(np.abs(relation))), 1e-12)
        yield ctx.check(
            f"[e, p] = e ell={ell}",
            commutator_residual(ops["e_lower"], ops["p_hat"], ops["e_lower"]),
            1e-12,
        )
        yield ctx.check(f"e e^dag, e^dag e ell={ell}", max(e_unitarity_report(irrep, trunc)), 1e-12)

    for ell in (0, 1, 2):
        irrep = IrrepLabel(ell)
        identity = dmatrix(irrep, 0.0, Truncation(32, 8)).interior_block()
        yield ctx.check(f"d(0) = 1 ell={ell}", float(np.max(np.abs(identity - np.eye(25)))), 1e-12)

        for tau in DMAT_TAUS:
            trunc = _dmat_truncation(tau)
            n = trunc.interior
            d = dmatrix(irrep, tau, trunc)
            rows = d.entries[:n].real
            yield ctx.check(
                f"d rows orthonormal ell={ell} tau={tau}",
                float(np.max(np.abs(rows @ rows.T - np.eye(n)))),
                1e-10,
            )
            half = dmatrix(irrep, tau / 2, trunc).entries
            product = (half @ half)[:n, :n]
            yield ctx.check(
                f"d(tau/2)^2 = d(tau) ell={ell} tau={tau}",
                float(np.max(np.abs(product - d.entries[:n, :n]))),
                1e-10,
            )
            yield ctx.check(
                f"d is real ell={ell} tau={tau}", float(np.max(np.abs(d.entries.imag))), 1e-13
            )
            if ell == 0:
                vacuum = abs(d.entries[0, 0].real - 1 / math.cosh(tau / 2))
                yield ctx.check(f"d_00 = sech(tau/2) tau={tau}", vacuum, 1e-10)


@suite("states")
def _states(ctx: _Context) -> Iterator[CheckRecord]:
    for ell, zeta in ((0, 0.7071), (1, 0.5 * cmath.exp(1j * math.pi / 6)), (3, 0.8)):
        irrep = IrrepLabel(ell)
        state = perelomov(irrep, zeta, tail_tol=1e-14)
        yield ctx.check(f"perelomov norm ell={ell} zeta={zeta:.4g}", abs(state.norm2() - 1), 1e-12)
        w = wp_distribution(irrep, zeta, state.p_max, tail_tol=1e-14)[: state.p_max + 1]
        yield ctx.check(
            f"W_p = |c_p|^2 ell={ell} zeta={zeta:.4g}",
            float(np.max(np.abs(w - state.probabilities))),
            1e-12,
        )
        pbar = float(np.sum(np.arange(w.shape[0]) * w))
        yield ctx.check(
            f"sum p W_p = pbar ell={ell} zeta={zeta:.4g}", abs(pbar - mean_rings(irrep, zeta)), 1e-10
        )

    for ell, zeta in ((0, 0.5), (1, 1.0), (2, 1.5 - 0.5j)):
        irrep = IrrepLabel(ell)
        state = barut_girardello(irrep, zeta)
        kminus = build_operator(irrep, "kminus", Truncation(state.p_max, 0))
        residual = float(np.linalg.norm(kminus.apply(state.coeffs) - zeta * state.coeffs))
        yield ctx.check(f"k- eigenstate ell={ell} zeta={zeta}", residual, 1e-10)

    for ell in (0, 1, 3, 5):
        for m in (0, 2, 5):
            for tau in (0.5, 1.5):
                irrep = IrrepLabel(ell)
                state = intelligent_state(irrep, m, tau, tail_tol=1e-24)
                residual = intelligent_residual(state, tau, intelligent_eigenvalue(irrep, m, tau))
                yield ctx.check(f"intelligent eigenvalue ell={ell} M={m} tau={tau}", residual, 1e-9)
                report = uncertainty_report(state)
                yield ctx.check(
                    f"intelligent equality ell={ell} M={m} tau={tau}",
                    abs(report.product - report.bound),
                    1e-8,
                )
                yield ctx.check(
                    f"intelligent squeezed ell={ell} M={m} tau={tau}", 0 if report.squeezed else 1, 0
                )

    irrep = IrrepLabel(1)
    mirrored = intelligent_state(irrep, 2, -1.0, tail_tol=1e-24)
    yield ctx.check(
        "mirrored eigenvalue -(k+M) sinh tau",
        intelligent_residual(mirrored, 1.0, -intelligent_eigenvalue(irrep, 2, 1.0)),
        1e-9,
    )
    tau = 0.8
    fidelity = abs(state_overlap(intelligent_state(irrep, 0, tau), perelomov(irrep, math.tanh(tau / 2))))
    yield ctx.check("intelligent M=0 is perelomov tanh(tau/2)", abs(fidelity - 1), 1e-10)

    bg = uncertainty_report(barut_girardello(irrep, 0.9))
    yield ctx.check("barut-girardello real zeta intelligent", abs(bg.product - bg.bound), 1e-8)
    yield ctx.check("barut-girardello real zeta not squeezed", 1 if bg.squeezed else 0, 0)

    coherent = uncertainty_report(perelomov(irrep, 0.5))
    yield ctx.check("perelomov real zeta intelligent", abs(coherent.product - coherent.bound), 1e-8)
    yield ctx.check("perelomov real zeta squeezed in k_y", 0 if coherent.squeezed_y else 1, 0)
    vacuum = uncertainty_report(perelomov(irrep, 0.0))
    yield ctx.check("perelomov zeta=0 not squeezed", 1 if vacuum.squeezed else 0, 0)

    rotated = uncertainty_report(perelomov(irrep, 0.5j + 0.2))
    yield ctx.info("perelomov complex zeta product - bound", rotated.product - rotated.bound)


def _relative_on_support(a: np.ndarray, b: np.ndarray, level: float = 1e-6) -> float:
    magnitude = np.abs(b)
    support = magnitude > level * magnitude.max()
    return float(np.max(np.abs(a[support] - b[support]) / magnitude[support]))


@suite("fields")
def _fields(ctx: _Context) -> Iterator[CheckRecord]:
    for ell, tolerance in ((1, 1e-8), (0, 1e-7)):
        grid = PolarGrid.default(8, ell, n_r=ctx.n_r)
        modes = [eval_lg(p, ell, grid) for p in range(9)]
        gram = np.array([[field_overlap(a, b) for b in modes] for a in modes])
        yield ctx.check(
            f"LG orthonormality p<=8 ell={ell}", float(np.max(np.abs(gram - np.eye(9)))), tolerance
        )

    zeta = 0.5 * cmath.exp(1j * math.pi / 6)
    state = perelomov(IrrepLabel(1), zeta)
    grid = PolarGrid.default(state.p_max, 1, n_r=ctx.n_r)
    closed = eval_perelomov_closed(zeta, 1, grid).amplitudes
    oracle = eval_state(state, grid).amplitudes
    yield ctx.check("perelomov closed form vs expansion", _relative_on_support(closed, oracle), 1e-8)

    state = barut_girardello(IrrepLabel(1), 1.0)
    grid = PolarGrid.default(state.p_max, 1, n_r=ctx.n_r)
    closed = eval_bg_closed(1.0, 1, grid).amplitudes
    oracle = eval_state(state, grid).amplitudes
    yield ctx.check("barut-girardello closed form vs expansion", _relative_on_support(closed, oracle), 1e-6)

    mismatches = 0
    for p in range(11):
        for ell in range(-5, 6):
            grid = PolarGrid.default(p, ell, n_r=ctx.n_r, n_phi=8)
            field_count = count_dark_rings_field(eval_lg(p, ell, grid))
            mismatches += count_dark_rings(p, ell) != p or field_count != p
    yield ctx.check("ring counts equal p for p<=10, |l|<=5", mismatches, 0)

    errors = [abs(radial_operator_rayleigh(2, 1, 10.0 / n, 10.0) - 2) for n in (1024, 2048, 4096)]
    yield ctx.check("rayleigh quotient at h=10/4096", errors[-1], 1e-4)
    orders = [math.log2(errors[i] / errors[i + 1]) for i in range(2)]
    yield ctx.check("rayleigh convergence order 2", max(abs(o - 2) for o in orders), 0.2)


@suite("twomode")
def _twomode(ctx: _Context) -> Iterator[CheckRecord]:
    basis = TwoModeBasis(24)
    for name, residual in canonical_residuals(basis).items():
        yield ctx.check(name, residual, 1e-12)

    spectrum = dict(degeneracy_spectrum(basis))
    wrong = sum(spectrum.get(n) != n + 1 for n in range(21))
    yield ctx.check("degeneracy n+1 for n<=20", wrong, 0)

    for ell in (2, -1, 0, 5):
        yield ctx.check(f"radial number link ell={ell}", radial_link_check(TwoModeBasis(10), ell), 1e-10)

    for ell in (0, 1, 2, -1, -3):
        elements = kplus_ladder_elements(basis, ell)
        irrep = IrrepLabel(ell)
        expected = np.diag(build_operator(irrep, "kplus", Truncation(elements.shape[0], 0)).entries.real, -1)
        yield ctx.check(
            f"k+ = a-^dag a+^dag matrix elements ell={ell}",
            float(np.max(np.abs(elements - expected))),
            1e-12,
        )


@suite("asymptotic")
def _asymptotic(ctx: _Context) -> Iterator[CheckRecord]:
    k = 50.0
    irrep = IrrepLabel(99)
    vacuum = np.array([1.0 + 0j])
    for p in range(1, 6):
        tau_p = math.acosh((k + p) / k)
        exact, _ = apply_dmatrix(irrep, tau_p, vacuum, Truncation(64, 8))
        approx = dmatrix_asymptotic(k, p, tau_p, normalized=True)
        yield ctx.check(f"normalized asymptotic at tau_p k=50 p={p}", abs(approx / exact[p].real - 1), 0.05)

        worst = 0.0
        for tau in np.linspace(tau_p - 0.3, tau_p + 0.3, 13):
            if tau <= 0.05:
                continue
            column, _ = apply_dmatrix(irrep, float(tau), vacuum, Truncation(64, 8))
            approx = dmatrix_asymptotic(k, p, float(tau), normalized=True)
            worst = max(worst, abs(approx / column[p].real - 1))
        yield ctx.info(f"normalized asymptotic window error k=50 p={p}", worst)


@suite("figures")
def _figures(ctx: _Context) -> Iterator[CheckRecord]:
    irrep = IrrepLabel(1)
    modes = []
    for pbar in (1.0, 4.0, 10.0):
        zeta = math.sqrt(pbar / (pbar + 2))
        w = wp_distribution(irrep, zeta)
        peak = int(np.argmax(w))
        unimodal = bool(np.all(np.diff(w[: peak + 1]) >= 0) and np.all(np.diff(w[peak:]) <= 0))
        yield ctx.check(f"W_p unimodal pbar={pbar}", 0 if unimodal else 1, 0)
        modes.append(peak)
    yield ctx.check("W_p mode increases with pbar", 0 if modes[0] < modes[1] < modes[2] else 1, 0)

    spreads, rings = [], []
    for ell in (1, 10, 20):
        field = intelligent_field(ell, 10, 0.5)
        spreads.append(radial_spread(field))
        rings.append(count_visible_rings(field))
        yield ctx.info(f"intelligent M=10 tau=0.5 ell={ell} radial spread", spreads[-1])
        yield ctx.info(f"intelligent M=10 tau=0.5 ell={ell} visible rings", rings[-1])
    yield ctx.check("radial spread shrinks as ell grows", 0 if spreads[0] > spreads[1] > spreads[2] else 1, 0)
    yield ctx.check("visible rings drop as ell grows", 0 if rings[0] > rings[1] > rings[2] else 1, 0)

    alpha = math.sqrt(2.0)
    grid = PolarGrid(12 / alpha, 4096, 8, alpha)
    visible = [count_visible_rings(intelligent_field(3, 11, tau, grid)) for tau in (0.6, 3.2)]
    yield ctx.info("intelligent M=11 ell=3 tau=0.6 visible rings", visible[0])
    yield ctx.info("intelligent M=11 ell=3 tau=3.2 visible rings", visible[1])
    yield ctx.check("more rings at tau=3.2 than at tau=0.6", 0 if visible[1] > visible[0] else 1, 0)

    grid = PolarGrid(8 / alpha, ctx.n_r, 8, alpha)
    rings = count_visible_rings(intelligent_field(1, 3, 1.0, grid))
    yield ctx.check("intelligent M=3 tau=1 shows M dark rings", abs(rings - 3), 0)
    radii = intelligent_ring_radii(1, 3, 1.0, alpha)
    yield ctx.info("intelligent M=3 tau=1 outermost ring radius", radii[-1])


ALL_SUITES: Sequence[str] = ("specfun", "algebra", "states", "fields", "twomode", "asymptotic", "figures")


def run_verify(
    suites: Union[Iterable[str], str] = "all",
    *,
    tol_scale: float = 1.0,
    n_r: int = 2048,
) -> Report:
    """Run the named suites ("all" for every one) into a single report."""
    names = ALL_SUITES if suites == "all" else [suites] if isinstance(suites, str) else list(suites)
    report = Report(tol_scale)
    for name in names:
        if name not in SUITES:
            raise DomainError(f"unknown suite {name!r}, expected one of {', '.join(ALL_SUITES)}")
        Service.info(f"running suite [bold]{name}[/]")
        for record in SUITES[name](_Context(name, tol_scale, n_r)):
            if not record.passed:
                Service.warning(f"{name}: {record.check} residual={record.residual:.3g} > {record.tolerance:.3g}")
            report.records.append(record)
    return report
