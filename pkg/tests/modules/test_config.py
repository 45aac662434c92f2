import pytest

from src.config import DEFAULT_BUDGET, Settings, load_settings
from src.errors import InputError


def test_default_settings():
    settings = load_settings({})

    assert settings == Settings()
    assert settings.budget == DEFAULT_BUDGET == 38760
    assert settings.grid_points == 200


def test_budget_override():
    assert load_settings({"FLP_BUDGET": "500"}).budget == 500
    assert load_settings({"FLP_BUDGET": " 7 "}).budget == 7


def test_budget_override_rejects_garbage():
    for raw in ("lots", "0", "-3", "1.5", ""):
        with pytest.raises(InputError):
            load_settings({"FLP_BUDGET": raw})


def test_budget_read_from_environment(monkeypatch):
    monkeypatch.setenv("FLP_BUDGET", "12")
    assert load_settings().budget == 12
