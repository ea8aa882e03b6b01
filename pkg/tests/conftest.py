import json
import os
import shutil
import sys

import pytest

from hammerforge.corpus import mini_text
from hammerforge.script import check_script


@pytest.fixture(scope="session")
def corpus_text() -> str:
    return mini_text()


@pytest.fixture(scope="session")
def dev(corpus_text):
    return check_script(corpus_text)


@pytest.fixture()
def mock_registry(tmp_path):
    """Write a prover registry pointing at the bundled mock prover.

    Returns a factory: call it with a verdict table (dict) and optional
    extra prover sections, and get back the registry path. The table path
    is exported through the environment the mock reads.
    """

    def make(table: dict, name: str = "mock", dialect: str = "th0", extra: str = ""):
        table_path = tmp_path / f"{name}_table.json"
        table_path.write_text(json.dumps(table))
        registry = tmp_path / "provers.ini"
        registry.write_text(
            f"[{name}]\n"
            f"path = {sys.executable}\n"
            f"args = -m hammerforge.mockprover --table {table_path} {{file}}\n"
            f"dialect = {dialect}\n" + extra
        )
        return str(registry)

    return make


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_failed = rep.failed
        item.rep_skipped = rep.skipped


@pytest.fixture(autouse=True)
def _no_ambient_registry(monkeypatch):
    monkeypatch.delenv("HAMMERFORGE_PROVERS", raising=False)
    monkeypatch.delenv("HAMMERFORGE_MOCK_TABLE", raising=False)
