import json
import pathlib

import pytest
from hypothesis import HealthCheck, settings

from hermrank.io import instance_from_json
from hermrank.numeric import Matrix

DATA = pathlib.Path(__file__).parent / "data"

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")


def mat(rows):
    """Exact matrix from nested ints or strings like ``"1/2+i"``."""
    return Matrix.from_rows([[str(x) for x in r] for r in rows])


def load_fixture(name):
    doc = json.loads((DATA / name).read_text())
    return [(entry, instance_from_json(entry["instance"])) for entry in doc["instances"]]


def curated(kind):
    return load_fixture(f"curated_{kind}.json")


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])


@pytest.fixture
def record_criterion():
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE[number] = line
        print(line)
        return ok
    return record


def diag_pair_doc():
    """Pair instance whose solutions are ``[[1, x], [x*, -1]]``; objective ``-X``."""
    return {"kind": "pair", "matrices": {
        "A1": {"rows": 2, "cols": 2, "entries": [["0", "0"], ["0", "0"]]},
        "B1": {"rows": 2, "cols": 2, "entries": [["1", "0"], ["0", "1"]]},
        "A2": {"rows": 1, "cols": 1, "entries": [["1"]]},
        "B2": {"rows": 1, "cols": 2, "entries": [["1", "0"]]},
        "A3": {"rows": 1, "cols": 1, "entries": [["-1"]]},
        "B3": {"rows": 1, "cols": 2, "entries": [["0", "1"]]},
    }}


def triple_infeasible_doc():
    return json.loads((DATA / "triple_infeasible.json").read_text())["instances"][0]["instance"]
