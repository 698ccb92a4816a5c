"""The full acceptance suite, one test per criterion.

Each test prints a single PASS/FAIL line with the criterion's detail
string so the run log doubles as a certification report.
"""

import pytest

from btk.acceptance import CRITERIA, run_all


@pytest.fixture(scope="module")
def results():
    return run_all(seed=0)


@pytest.mark.parametrize("index", range(len(CRITERIA)), ids=lambda i: f"criterion_{i + 1:02d}")
def test_criterion(results, index, capsys):
    name, ok, detail = results[index]
    with capsys.disabled():
        print(f"{'PASS' if ok else 'FAIL'} {name} - {detail}")
    assert ok, f"{name}: {detail}"
