import pytest
from pydantic import ValidationError

from anti_orbits.config import ConeParams, CriticalPointConfig, Settings, ShadowConfig, get_settings


def test_settings_read_environment(monkeypatch) -> None:
    monkeypatch.setenv("SHADOW_TOLERANCE", "1e-9")
    monkeypatch.setenv("CONE_MU", "3.5")
    monkeypatch.setenv("LOG_LEVEL", " debug ")
    monkeypatch.setenv("TRANSLATION_RADIUS", "-4")
    get_settings.cache_clear()
    try:
        settings = get_settings()
        assert settings.shadow_tolerance == 1e-9
        assert settings.cone_mu == 3.5
        assert settings.log_level == "DEBUG"
        assert settings.translation_radius == 0
        assert ShadowConfig.from_settings(settings).tolerance == 1e-9
        assert ConeParams.from_settings(settings).mu == 3.5
    finally:
        get_settings.cache_clear()


def test_from_settings_overrides() -> None:
    settings = Settings()
    config = ShadowConfig.from_settings(settings, sigma=0.5, max_iterations=7)
    assert config.sigma == 0.5
    assert config.max_iterations == 7
    assert CriticalPointConfig.from_settings(settings, radius_cap=0.25).radius_cap == 0.25


def test_knob_validation() -> None:
    with pytest.raises(ValidationError):
        ShadowConfig(sigma=0.0)
    with pytest.raises(ValidationError):
        ShadowConfig(stall_sweeps=0)
    with pytest.raises(ValidationError):
        ConeParams(alpha_h=1.5)
    with pytest.raises(ValidationError):
        ConeParams(mu=1.0)
    with pytest.raises(ValidationError):
        CriticalPointConfig(lip_safety=0.5)
