import sys

import pytest

from softpi.corpus import load_manifest, typed_terms


@pytest.fixture(scope="session")
def corpus():
    return load_manifest()


@pytest.fixture(scope="session")
def corpus_terms(corpus):
    return typed_terms(corpus)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
