import pytest
from hypothesis import settings

from gkwseries.recurrence import Variant, build_table

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def gkw10():
    return build_table(Variant.GKW, 10)


@pytest.fixture(scope="session")
def mr10():
    return build_table(Variant.MR, 10)


@pytest.fixture
def cache_env(tmp_path, monkeypatch):
    root = tmp_path / "cache"
    monkeypatch.setenv("GKW_CACHE", str(root))
    return root


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
