import pytest

from perturbed_blaschke.suites import SUITES, run_suite


@pytest.mark.parametrize("name", list(SUITES))
def test_suite_passes(name):
    report = run_suite(name)
    assert report.passed, "\n".join(report.lines())
    assert report.lines()[-1].startswith(f"PASS suite {name}")


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
