import pytest
from pydantic import ValidationError

from services.errors import (
    CapExceededError,
    EngineError,
    GluingMismatchError,
    InvariantViolation,
    UnknownLabelError,
    UsageError,
)
from services.settings import DEFAULT_SETTINGS, Settings


def test_defaults():
    settings = Settings.from_env(load=False)
    assert settings == DEFAULT_SETTINGS
    assert settings.threads == 1
    assert settings.cache_dir is None


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("FGMF_STATE_CAP", "1000")
    monkeypatch.setenv("FGMF_THREADS", "4")
    monkeypatch.setenv("FGMF_CACHE_DIR", str(tmp_path))
    settings = Settings.from_env(load=False)
    assert settings.state_cap == 1000
    assert settings.threads == 4
    assert settings.cache_dir == str(tmp_path)


def test_caps_must_be_positive(monkeypatch):
    with pytest.raises(ValidationError):
        Settings(state_cap=0)
    monkeypatch.setenv("FGMF_THREADS", "-2")
    with pytest.raises(UsageError):
        Settings.from_env(load=False)


@pytest.mark.parametrize("name, value", [("FGMF_THREADS", "abc"), ("FGMF_STATE_CAP", "0")])
def test_bad_environment_is_a_usage_error(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(UsageError) as info:
        Settings.from_env(load=False)
    assert info.value.exit_code == 1


@pytest.mark.parametrize(
    "error, code, kind",
    [
        (UsageError("bad flag"), 1, "usage_error"),
        (UnknownLabelError("no such label"), 1, "unknown_label"),
        (CapExceededError("too big"), 2, "cap_exceeded"),
        (InvariantViolation("broken"), 3, "invariant_violation"),
        (GluingMismatchError("broken"), 3, "gluing_mismatch"),
    ],
)
def test_error_taxonomy(error, code, kind):
    assert isinstance(error, EngineError)
    assert error.exit_code == code
    assert error.to_diagnostic() == {"error": kind, "message": error.message, "payload": {}}
