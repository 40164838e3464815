import pytest

from qotcoh import verify


@pytest.mark.parametrize("suite", verify.SUITES)
def test_each_suite_passes(suite):
    [(name, checks)] = verify.run(suite, trials=2, seed=0)
    assert name == suite and checks
    assert all(c.passed for c in checks), [c.line() for c in checks if not c.passed]


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run("nope")


def test_seeded_runs_repeat():
    a = verify.run("b4", trials=2, seed=9)
    b = verify.run("b4", trials=2, seed=9)
    assert [c.residual for c in a[0][1]] == [c.residual for c in b[0][1]]
