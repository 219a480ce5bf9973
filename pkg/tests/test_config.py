import pytest
from sympy import Rational

from stein_algebra.src.config import load_settings
from stein_algebra.src.constants import DEFAULT_PROBE_POINTS, LOG_LEVEL_ENV_VAR, N_JOBS_ENV_VAR, PRECISION_ENV_VAR
from stein_algebra.src.exceptions import ConfigurationError


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in (PRECISION_ENV_VAR, LOG_LEVEL_ENV_VAR, N_JOBS_ENV_VAR):
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    settings = load_settings()
    assert settings.precision_digits == 30
    assert settings.probe_points == DEFAULT_PROBE_POINTS
    assert settings.g_order_rule == "support"
    assert (settings.n_jobs, settings.show_progress, settings.log_level) == (1, False, "WARNING")


def test_environment_overrides_defaults(monkeypatch):
    monkeypatch.setenv(PRECISION_ENV_VAR, "50")
    monkeypatch.setenv(LOG_LEVEL_ENV_VAR, "debug")
    monkeypatch.setenv(N_JOBS_ENV_VAR, "4")
    settings = load_settings()
    assert (settings.precision_digits, settings.log_level, settings.n_jobs) == (50, "DEBUG", 4)


def test_settings_file(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("probe_points: ['1/2', 3]\nlog_level: info\ng_order_rule: all_lower\n", encoding="utf8")
    settings = load_settings(str(path))
    assert settings.probe_points == (Rational(1, 2), Rational(3))
    assert settings.log_level == "INFO"
    assert settings.g_order_rule == "all_lower"


def test_explicit_overrides_win(tmp_path, monkeypatch):
    path = tmp_path / "settings.yaml"
    path.write_text("precision_digits: 40\n", encoding="utf8")
    monkeypatch.setenv(PRECISION_ENV_VAR, "45")
    assert load_settings(str(path)).precision_digits == 45
    assert load_settings(str(path), precision_digits=60).precision_digits == 60
    assert load_settings(str(path), precision_digits=None).precision_digits == 45


def test_probe_points_from_a_comma_string():
    assert load_settings(probe_points="1, 7/3").probe_points == (Rational(1), Rational(7, 3))


@pytest.mark.parametrize("overrides", [
    {"precision_digits": 10},
    {"relative_tolerance": 0.1},
    {"g_order_rule": "other"},
    {"log_level": "LOUD"},
    {"probe_points": "a,b"},
    {"probe_points": ""},
])
def test_invalid_values(overrides):
    with pytest.raises(ConfigurationError):
        load_settings(**overrides)


def test_settings_file_must_hold_a_mapping(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf8")
    with pytest.raises(ConfigurationError):
        load_settings(str(path))


def test_missing_settings_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_settings(str(tmp_path / "absent.yaml"))
