import csv
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

_ACCEPTANCE_KEY = pytest.StashKey[list]()


def load_specfun_oracle():
    with open(DATA / "specfun_oracle.csv", newline="") as fh:
        rows = []
        for row in csv.DictReader(fh):
            rows.append((row["func"], int(row["order"]),
                         complex(float(row["arg_re"]), float(row["arg_im"])),
                         complex(float(row["val_re"]), float(row["val_im"]))))
    return rows


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance_report(request):
    """Record one ``CRITERION n: PASS|FAIL detail`` line, echoed at the end of the run."""
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def report(number, passed, detail):
        line = f"CRITERION {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines.append((number, line))
        print(line)

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
