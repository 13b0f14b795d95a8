import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hpopa.harness import CorpusSpec, generate_corpus  # noqa: E402

DATA = Path(__file__).parent / "data"

# The shared random-polynomial corpus: degree <= 6, |f(0)| >= 0.1.
CORPUS_SPEC = CorpusSpec("random_poly", count=100, seed=20240611, degree_range=(0, 6), min_f0=0.1)
BLASCHKE_SPEC = CorpusSpec("blaschke", count=50, seed=42, degree_range=(1, 3), zero_modulus_range=(0.2, 0.8))


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus(CORPUS_SPEC)


@pytest.fixture(scope="session")
def blaschke_corpus():
    return generate_corpus(BLASCHKE_SPEC)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        verdict = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        label = name[len("test_"):] if name.startswith("test_") else name
        crit, _, rest = label.partition("_")
        terminalreporter.write_line(f"{verdict}  {crit.upper()}  {rest}")
