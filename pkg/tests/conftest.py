import pytest

from services.double import DrinfeldDouble
from services.groups import parse_preset
from services.modular_functor import ModularFunctorEngine


@pytest.fixture(scope="session")
def trivial():
    return parse_preset("1")


@pytest.fixture(scope="session")
def z2():
    return parse_preset("Z2")


@pytest.fixture(scope="session")
def z3():
    return parse_preset("Z3")


@pytest.fixture(scope="session")
def s3():
    return parse_preset("S3")


@pytest.fixture(scope="session")
def d4():
    return parse_preset("D4")


@pytest.fixture(scope="session")
def q8():
    return parse_preset("Q8")


@pytest.fixture(scope="session")
def double_z2(z2):
    return DrinfeldDouble(z2)


@pytest.fixture(scope="session")
def double_z3(z3):
    return DrinfeldDouble(z3)


@pytest.fixture(scope="session")
def double_s3(s3):
    return DrinfeldDouble(s3)


@pytest.fixture(scope="session")
def engine_z2(z2):
    return ModularFunctorEngine(z2)


@pytest.fixture(scope="session")
def engine_z3(z3):
    return ModularFunctorEngine(z3)


@pytest.fixture(scope="session")
def engine_s3(s3):
    return ModularFunctorEngine(s3)


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch, tmp_path):
    # keep FGMF_* variables and any .env file of the caller out of the tests
    for key in (
        "FGMF_GROUP_CAP",
        "FGMF_STATE_CAP",
        "FGMF_MATERIALIZE_CAP",
        "FGMF_GRID_CAP",
        "FGMF_PRIME_SEARCH_BOUND",
        "FGMF_CACHE_DIR",
        "FGMF_THREADS",
    ):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
