import json
import math
from pathlib import Path

import pytest

from lgradial import ConfigurationError
from lgradial.config import Config, GridConfig, VerifyConfig, load_config, make_preset


def test_defaults():
    conf = Config()
    assert conf.grid.alpha == pytest.approx(math.sqrt(2))
    assert conf.grid.n_r == 2048
    assert conf.grid.n_phi == 64
    assert conf.truncation.margin == 8
    assert conf.truncation.tail_tol == 1e-10
    assert conf.truncation.p_cap == 4096
    assert conf.truncation.tau_cap == 6.0
    assert conf.verify.tol_scale == 1.0
    assert conf.log.level == "warning"


def test_load_from_path():
    conf = load_config(Path("tests/configs/small.toml"))
    assert conf.grid.alpha == 1.0
    assert conf.grid.n_r == 64
    assert conf.grid.n_phi == 8
    assert conf.grid.image_side == 16
    assert conf.truncation.margin == 4
    assert conf.truncation.p_cap == 4096
    assert conf.verify.tol_scale == 2.0
    assert conf.log.level == "info"


def test_load_from_directory(tmp_path: Path):
    assert load_config(directory=tmp_path).grid.n_r == 2048

    (tmp_path / "lgradial.json").write_text(json.dumps({"grid": {"n_phi": 16}}))
    assert load_config(directory=tmp_path).grid.n_phi == 16

    # toml wins over json
    (tmp_path / "lgradial.toml").write_text("[grid]\nn_phi = 32\n")
    assert load_config(directory=tmp_path).grid.n_phi == 32


@pytest.mark.parametrize("tp", ["toml", "json"])
def test_presets_load(tmp_path: Path, tp: str):
    (tmp_path / f"lgradial.{tp}").write_text(make_preset(tp))
    conf = load_config(directory=tmp_path)
    assert conf.grid.alpha == math.sqrt(2)


def test_unknown_preset():
    with pytest.raises(ConfigurationError):
        make_preset("xml")


def test_validation():
    with pytest.raises(ConfigurationError):
        GridConfig(alpha=-1.0)
    with pytest.raises(ConfigurationError):
        GridConfig(n_r=10)
    with pytest.raises(ConfigurationError):
        GridConfig(n_phi=4)
    with pytest.raises(ConfigurationError):
        VerifyConfig(tol_scale=0.0)
