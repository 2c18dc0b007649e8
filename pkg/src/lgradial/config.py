from __future__ import annotations

import importlib.util
import math
import sys
from pathlib import Path
from typing import Literal, Union

from configzen import ConfigField, ConfigModel, field_validator

from .exceptions import ConfigurationError

__all__ = (
    "GridConfig",
    "TruncationConfig",
    "VerifyConfig",
    "LogConfig",
    "Config",
    "load_config",
    "make_preset",
)


class GridConfig(ConfigModel, env_prefix="lgradial_grid_"):
    # beam convention; use 1.0 for oscillator units
    alpha: float = math.sqrt(2.0)
    n_r: int = 2048
    n_phi: int = 64
    decay_lengths: float = 6.0
    image_side: int = 256

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, alpha: float):
        if not alpha > 0:
            raise ConfigurationError(f"alpha must be positive, got {alpha}")
        return alpha

    @field_validator("n_r")
    @classmethod
    def validate_n_r(cls, n_r: int):
        if n_r < 64:
            raise ConfigurationError(f"n_r must be at least 64, got {n_r}")
        return n_r

    @field_validator("n_phi")
    @classmethod
    def validate_n_phi(cls, n_phi: int):
        if n_phi < 8:
            raise ConfigurationError(f"n_phi must be at least 8, got {n_phi}")
        return n_phi


class TruncationConfig(ConfigModel, env_prefix="lgradial_truncation_"):
    margin: int = 8
    tail_tol: float = 1e-10
    p_cap: int = 4096
    tau_cap: float = 6.0


class VerifyConfig(ConfigModel, env_prefix="lgradial_verify_"):
    tol_scale: float = 1.0
    n_r: int = 2048

    @field_validator("tol_scale")
    @classmethod
    def validate_tol_scale(cls, tol_scale: float):
        if not tol_scale > 0:
            raise ConfigurationError(f"tol_scale must be positive, got {tol_scale}")
        return tol_scale


class LogConfig(ConfigModel, env_prefix="lgradial_log_"):
    level: Union[Literal["debug", "info", "warning", "error", "critical"], int] = (
        "warning"
    )
    fancy_warnings: bool = True


class Config(ConfigModel):
    grid: GridConfig = ConfigField(default_factory=GridConfig)
    truncation: TruncationConfig = ConfigField(default_factory=TruncationConfig)
    verify: VerifyConfig = ConfigField(default_factory=VerifyConfig)
    log: LogConfig = ConfigField(default_factory=LogConfig)


def make_preset(tp: str) -> str:
    """Default configuration file contents for the given file type."""
    if tp == "toml":
        return """[grid]
alpha = 1.4142135623730951

[truncation]

[verify]

[log]
"""
    if tp == "json":
        return """{
    "grid": {"alpha": 1.4142135623730951},
    "truncation": {},
    "verify": {},
    "log": {}
}"""
    if tp in {"yml", "yaml"}:
        return """
grid:
    alpha: 1.4142135623730951
"""

    raise ConfigurationError(f"no preset for file type {tp!r}")


def load_config(
    path: Path | None = None,
    *,
    directory: Path | None = None,
) -> Config:
    """Load the configuration file.

    Args:
        path: Path to get the configuration from.
        directory: Where to look for the configuration."""
    paths = (
        "lgradial.toml",
        "lgradial.json",
        "lgradial.ini",
        "lgradial.yaml",
        "lgradial.yml",
        "lgradial_config.py",
    )

    if path:
        if directory:
            return Config.load(directory / path)
        return Config.load(path)

    for i in paths:
        p = Path(i) if not directory else directory / i

        if not p.exists():
            continue

        if p.suffix == ".py":
            spec = importlib.util.spec_from_file_location(p.stem, str(p))
            assert spec, "spec is none"
            mod = importlib.util.module_from_spec(spec)
            assert mod, "mod is none"
            sys.modules[p.stem] = mod
            assert spec.loader, "spec.loader is none"
            spec.loader.exec_module(mod)
            return Config.wrap_module(mod)

        return Config.load(p)

    return Config()
