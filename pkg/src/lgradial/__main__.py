from __future__ import annotations

import math
import os
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, NoReturn, Optional

import click
import numpy as np

from .__about__ import __version__
from .exceptions import DomainError, RadialError

SUITE_CHOICES = ("specfun", "algebra", "states", "fields", "twomode", "asymptotic", "figures", "all")


def success(msg: str) -> None:
    click.secho(f" - {msg}", fg="green", bold=True, err=True)


def warn(msg: str) -> None:
    click.secho(f" ! {msg}", fg="yellow", bold=True, err=True)


def error(msg: str) -> NoReturn:
    click.secho(f" ! {msg}", fg="red", bold=True, err=True)
    sys.exit(1)


def info(msg: str) -> None:
    click.secho(f" * {msg}", fg="bright_magenta", bold=True, err=True)


def ver() -> None:
    click.echo(f"lgradial {__version__}")


class ComplexParam(click.ParamType):
    """A complex number written as RE,IM."""

    name = "RE,IM"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> complex:
        if isinstance(value, complex):
            return value
        parts = str(value).split(",")
        if len(parts) != 2:
            self.fail(f"expected RE,IM, got {value!r}", param, ctx)
        try:
            re, im = (float(p) for p in parts)
        except ValueError:
            self.fail(f"expected two real numbers, got {value!r}", param, ctx)
        if not (math.isfinite(re) and math.isfinite(im)):
            self.fail(f"{value!r} is not finite", param, ctx)
        return complex(re, im)


COMPLEX = ComplexParam()


@contextmanager
def _guard() -> Iterator[None]:
    """Precondition violations exit with 2, other library failures with 1."""
    try:
        yield
    except DomainError as e:
        raise click.UsageError(str(e)) from e
    except RadialError as e:
        if e.hint:
            info(str(e.hint))
        error(str(e))


def _config(ctx: click.Context):
    return ctx.obj["config"]


def grid_options(func: Callable) -> Callable:
    options = (
        click.option("--alpha", type=float, default=None, help="Beam scale; defaults to sqrt(2)."),
        click.option("--rmax", type=float, default=None, help="Radial extent of the grid."),
        click.option("--nr", type=int, default=None, help="Radial nodes."),
        click.option("--nphi", type=int, default=None, help="Azimuthal nodes."),
        click.option("--side", type=int, default=None, help="Side of PGM images."),
        click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), default=None),
        click.option("--format", "fmt", type=click.Choice(("csv", "pgm")), default="csv"),
    )
    for option in reversed(options):
        func = option(func)
    return func


def _grid(ctx: click.Context, p_max: int, ell: int, params: Dict[str, Any]):
    from .fields import PolarGrid

    conf = _config(ctx).grid
    alpha = params["alpha"] or conf.alpha
    n_r = params["nr"] or conf.n_r
    n_phi = params["nphi"] or conf.n_phi
    if params["rmax"]:
        return PolarGrid(params["rmax"], n_r, n_phi, alpha)
    return PolarGrid.default(
        p_max, ell, alpha=alpha, n_r=n_r, n_phi=n_phi, decay_lengths=conf.decay_lengths
    )


def _emit_field(ctx: click.Context, field, params: Dict[str, Any]) -> None:
    from .export import field_csv, field_pgm, write_output

    if params["fmt"] == "pgm":
        side = params["side"] or _config(ctx).grid.image_side
        write_output(field_pgm(field, side), params["out"])
    else:
        write_output(field_csv(field), params["out"])
    if params["out"]:
        success(f"wrote {field.label} to {params['out']}")


def _emit_sidecar(data: Dict[str, Any], params: Dict[str, Any]) -> None:
    from .export import to_json

    text = to_json(data) + "\n"
    out: Optional[Path] = params["out"]
    if out is None:
        click.echo(text, err=True, nl=False)
        return
    sidecar = out.with_name(out.name + ".json")
    sidecar.write_text(text, encoding="utf-8")
    success(f"wrote sidecar {sidecar}")


@click.group(invoke_without_command=True)
@click.option("--debug", "-d", is_flag=True)
@click.option("--version", "-v", is_flag=True)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
)
@click.pass_context
def main(ctx: click.Context, debug: bool, version: bool, config_path: Optional[Path]) -> None:
    from ._logging import enable_debug, format_warnings, set_level
    from .config import load_config

    conf = load_config(config_path)
    ctx.obj = {"config": conf}
    set_level(conf.log.level)
    if conf.log.fancy_warnings:
        format_warnings()
    if debug:
        enable_debug()
    if version:
        ver()
    elif not ctx.invoked_subcommand:
        click.echo(ctx.get_help())


@main.group()
def logs():
    ...


def _log_paths(path: Path) -> tuple[Path, Path]:
    internal = path / "lgradial_internal.log"
    if not internal.exists():
        error(f"`{internal}` does not exist")

    service = path / "lgradial_service.log"
    if not service.exists():
        error(f"`{service}` does not exist")

    return internal, service


_LOG_DIR = click.option(
    "--path",
    type=click.Path(exists=True, file_okay=False, resolve_path=True, path_type=Path),
    default="./",
)


@logs.command()
@_LOG_DIR
def show(path: Path):
    from rich import print
    from rich.panel import Panel

    for log in _log_paths(path):
        print(Panel(log.read_text(encoding="utf-8"), title=str(log)))


@logs.command()
@_LOG_DIR
def clear(path: Path):
    for log in _log_paths(path):
        os.remove(log)


@main.command("init-config")
@click.option("--type", "tp", type=click.Choice(("toml", "json", "yaml")), default="toml")
@click.option("--path", type=click.Path(file_okay=False, path_type=Path), default=Path("."))
def init_config(tp: str, path: Path):
    from .config import make_preset

    target = path / f"lgradial.{tp}"
    if target.exists():
        error(f"`{target}` already exists")
    target.write_text(make_preset(tp), encoding="utf-8")
    success(f"created {target}")


@main.command()
@click.option("--p", "p", type=click.IntRange(min=0), required=True)
@click.option("--ell", type=int, required=True)
@grid_options
@click.pass_context
def mode(ctx: click.Context, p: int, ell: int, **params: Any):
    """Laguerre-Gauss mode Psi_{p,l}."""
    from .fields import eval_lg

    with _guard():
        field = eval_lg(p, ell, _grid(ctx, p, ell, params))
    _emit_field(ctx, field, params)


@main.command()
@click.option("--nx", type=click.IntRange(min=0), required=True)
@click.option("--ny", type=click.IntRange(min=0), required=True)
@grid_options
@click.pass_context
def hg(ctx: click.Context, nx: int, ny: int, **params: Any):
    """Hermite-Gauss mode (nx, ny)."""
    from .fields import eval_hg

    n = nx + ny
    with _guard():
        field = eval_hg(nx, ny, _grid(ctx, n // 2, n % 2, params))
    _emit_field(ctx, field, params)


@main.command()
@click.option("--zeta", type=COMPLEX, required=True)
@click.option("--ell", type=int, required=True)
@grid_options
@click.pass_context
def coherent(ctx: click.Context, zeta: complex, ell: int, **params: Any):
    """Perelomov coherent state, closed form checked against its expansion."""
    from .fields import eval_perelomov_closed, eval_state
    from .states import mean_rings, perelomov, report_to_dict, uncertainty_report
    from .su11 import IrrepLabel

    trunc = _config(ctx).truncation
    with _guard():
        irrep = IrrepLabel(ell)
        state = perelomov(irrep, zeta, tail_tol=trunc.tail_tol, p_cap=trunc.p_cap)
        grid = _grid(ctx, state.p_max, ell, params)
        field = eval_perelomov_closed(zeta, ell, grid)
        oracle = eval_state(state, grid)
        pbar = mean_rings(irrep, zeta)

    residual = float(np.max(np.abs(field.amplitudes - oracle.amplitudes)) / np.max(np.abs(oracle.amplitudes)))
    _emit_field(ctx, field, params)
    _emit_sidecar(
        {
            "zeta": [zeta.real, zeta.imag],
            "ell": ell,
            "pbar": pbar,
            "p_max": state.p_max,
            "oracle_residual": residual,
            "norm2": field.norm2,
            "uncertainty": report_to_dict(uncertainty_report(state)),
        },
        params,
    )


@main.command()
@click.option("--zeta", type=COMPLEX, required=True)
@click.option("--ell", type=int, required=True)
@grid_options
@click.pass_context
def bg(ctx: click.Context, zeta: complex, ell: int, **params: Any):
    """Barut-Girardello state as a Bessel-Gauss field."""
    from .fields import eval_bg_closed
    from .states import barut_girardello, report_to_dict, uncertainty_report
    from .su11 import IrrepLabel, Truncation, build_operator

    trunc = _config(ctx).truncation
    with _guard():
        irrep = IrrepLabel(ell)
        state = barut_girardello(irrep, zeta, tail_tol=trunc.tail_tol, p_cap=trunc.p_cap)
        field = eval_bg_closed(zeta, ell, _grid(ctx, state.p_max, ell, params))
        kminus = build_operator(irrep, "kminus", Truncation(state.p_max, 0))

    residual = float(np.linalg.norm(kminus.apply(state.coeffs) - zeta * state.coeffs))
    _emit_field(ctx, field, params)
    _emit_sidecar(
        {
            "zeta": [zeta.real, zeta.imag],
            "ell": ell,
            "p_max": state.p_max,
            "eigen_residual": residual,
            "norm2": field.norm2,
            "uncertainty": report_to_dict(uncertainty_report(state)),
        },
        params,
    )


@main.command()
@click.option("--ell", type=int, required=True)
@click.option("--M", "m", type=click.IntRange(min=0), required=True)
@click.option("--tau", type=float, required=True)
@grid_options
@click.pass_context
def intelligent(ctx: click.Context, ell: int, m: int, tau: float, **params: Any):
    """Intelligent state exp(i tau k_y)|kappa_M(tau)>."""
    from .fields import count_visible_rings, eval_state, intelligent_ring_radii
    from .states import (
        intelligent_eigenvalue,
        intelligent_residual,
        intelligent_state,
        report_to_dict,
        uncertainty_report,
    )
    from .su11 import IrrepLabel

    trunc = _config(ctx).truncation
    if abs(tau) > trunc.tau_cap:
        raise click.BadParameter(f"|tau| must be at most {trunc.tau_cap}", param_hint="--tau")

    with _guard():
        irrep = IrrepLabel(ell)
        state = intelligent_state(irrep, m, tau, tail_tol=trunc.tail_tol, p_cap=trunc.p_cap)
        cumulative = np.cumsum(state.probabilities)
        effective = min(int(np.searchsorted(cumulative, 1 - 1e-14)), state.p_max)
        field = eval_state(state, _grid(ctx, effective, ell, params))
        eigenvalue = intelligent_eigenvalue(irrep, m, tau)
        report = uncertainty_report(state)

    _emit_field(ctx, field, params)
    _emit_sidecar(
        {
            "ell": ell,
            "M": m,
            "tau": tau,
            "p_max": state.p_max,
            "tail_mass": state.tail_mass,
            "eigenvalue": eigenvalue,
            "eigen_residual": intelligent_residual(state, tau, eigenvalue),
            "ring_radii": intelligent_ring_radii(ell, m, tau, field.grid.alpha),
            "visible_rings": count_visible_rings(field),
            "uncertainty": report_to_dict(report),
        },
        params,
    )


@main.command()
@click.option("--zeta", type=COMPLEX, required=True)
@click.option("--ell", type=int, required=True)
@click.option("--pmax", type=click.IntRange(min=1), default=64)
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.pass_context
def wp(ctx: click.Context, zeta: complex, ell: int, pmax: int, out: Optional[Path]):
    """Ring-number distribution W_p of a Perelomov state."""
    from .export import fmt, table_csv, write_output
    from .states import mean_rings, wp_distribution
    from .su11 import IrrepLabel

    trunc = _config(ctx).truncation
    with _guard():
        irrep = IrrepLabel(ell)
        w = wp_distribution(irrep, zeta, pmax, tail_tol=trunc.tail_tol, p_cap=trunc.p_cap)
        pbar = mean_rings(irrep, zeta)

    rows = [(p, float(w[p])) for p in range(pmax + 1)]
    write_output(table_csv(("p", "W_p"), rows, comments=[f"pbar={fmt(pbar)}"]), out)


@main.command()
@click.option("--ell", type=int, required=True)
@click.option("--tau", type=float, required=True)
@click.option("--pmax", type=click.IntRange(min=2), default=64)
@click.option("--margin", type=click.IntRange(min=0), default=None)
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.pass_context
def dmat(ctx: click.Context, ell: int, tau: float, pmax: int, margin: Optional[int], out: Optional[Path]):
    """d-matrix exp(i tau k_y) on p = 0..pmax."""
    from .export import table_csv, write_output
    from .su11 import IrrepLabel, Truncation, dmatrix

    trunc = _config(ctx).truncation
    with _guard():
        d = dmatrix(
            IrrepLabel(ell),
            tau,
            Truncation(pmax, trunc.margin if margin is None else margin),
            tau_cap=trunc.tau_cap,
        )

    entries = d.entries.real
    header = ["p", *(str(j) for j in range(pmax + 1))]
    rows = [(i, *(float(v) for v in entries[i])) for i in range(pmax + 1)]
    write_output(table_csv(header, rows), out)


@main.command()
@click.option("--p", "p", type=click.IntRange(min=0), required=True)
@click.option("--ell", type=int, required=True)
def rings(p: int, ell: int):
    """Number of dark rings of Psi_{p,l}."""
    from .fields import count_dark_rings

    with _guard():
        click.echo(count_dark_rings(p, ell))


@main.command()
@click.option("--suite", type=click.Choice(SUITE_CHOICES), default="all")
@click.option("--tol-scale", type=float, default=None)
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.pass_context
def verify(ctx: click.Context, suite: str, tol_scale: Optional[float], out: Optional[Path]):
    """Run verification suites and emit a report-v1 JSON document."""
    from .export import to_json, write_output
    from .verify import run_verify

    conf = _config(ctx).verify
    scale = conf.tol_scale if tol_scale is None else tol_scale
    if not scale > 0:
        raise click.BadParameter("must be positive", param_hint="--tol-scale")

    with _guard():
        report = run_verify(suite, tol_scale=scale, n_r=conf.n_r)

    write_output(to_json(report.to_dict()) + "\n", out)
    failures = report.failures
    if failures:
        for record in failures:
            warn(f"{record.suite}: {record.check} ({record.residual:.3g} > {record.tolerance:.3g})")
        error(f"{len(failures)} of {len(report.records)} checks failed")
    success(f"all {len(report.records)} checks passed")


if __name__ == "__main__":
    main()
