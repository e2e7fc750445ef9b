from fractions import Fraction

import pytest

from app.core.config import Settings
from app.core.utils import format_cell, format_positions, load_yaml_config
from utils.exceptions import UsageError


def test_defaults():
    config = Settings()
    assert config.exhaustive_bound() == config.MAX_EXHAUSTIVE_N
    assert config.DEFAULT_SEED == 1729
    assert config.DEFAULT_RING_SAMPLES == 1000
    assert config.TORSION_FACTORS == ()


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("KP_MAX_EXHAUSTIVE_N", "4")
    monkeypatch.setenv("KP_DEFAULT_SAMPLES", "12")
    config = Settings()
    assert config.exhaustive_bound() == 4
    assert config.DEFAULT_SAMPLES == 12


def test_torsion_factors_from_environment(monkeypatch):
    monkeypatch.setenv("KP_TORSION_FACTORS", "[2, 4]")
    assert Settings().TORSION_FACTORS == (2, 4)


def test_max_n_overrides_every_bound(monkeypatch):
    monkeypatch.setenv("KP_MAX_N", "7")
    config = Settings()
    assert config.exhaustive_bound() == config.sampled_bound() == config.series_bound() == 7


def test_resolve_jobs():
    config = Settings()
    assert config.resolve_jobs(3) == 3
    assert config.resolve_jobs(0) >= 1


def test_format_cell():
    assert format_cell(Fraction(1, 2)) == "1/2"
    assert format_cell(Fraction(4, 2)) == "2"
    assert format_cell(None) == "-"
    assert format_cell(False) == "no"


def test_format_positions():
    assert format_positions([[0, 0], [2, 1]]) == "(0,0) (2,1)"
    assert format_positions([[d, 0] for d in range(5)], limit=2) == "(0,0) (1,0) +3 more"
    assert format_positions([]) == ""


def test_yaml_loader(tmp_path):
    good = tmp_path / "good.yaml"
    good.write_text("torsion-rank: 2\ntorsion-factors: [2, 4]\n", encoding="utf-8")
    assert load_yaml_config(str(good)) == {"torsion_rank": 2, "torsion_factors": [2, 4]}
    bad = tmp_path / "bad.yaml"
    bad.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(UsageError):
        load_yaml_config(str(bad))
    assert load_yaml_config(None) == {}
