import pytest

from conftest import PLUGIN, PLUGIN_INSTALLED

PLUGIN_ARGS = () if PLUGIN_INSTALLED else ("-p", PLUGIN)


def run(pytester, *args):
    return pytester.runpytest(*PLUGIN_ARGS, *args)


def test_seed_option_reaches_fixtures(pytester):
    pytester.makepyfile(
        """
        def test_seed(hopf_seed, hopf_rng):
            assert hopf_seed == 11
            assert hopf_rng.random() < 1
    """
    )
    result = run(pytester, "--hopf-seed", "11")
    result.assert_outcomes(passed=1)


def test_slow_tests_are_skipped_by_default(pytester):
    pytester.makepyfile(
        """
        import pytest

        @pytest.mark.hopf_slow
        def test_slow():
            pass

        def test_fast():
            pass
    """
    )
    run(pytester).assert_outcomes(passed=1, skipped=1)
    run(pytester, "--hopf-run-slow").assert_outcomes(passed=2)


def test_unknown_marker_is_dropped(pytester):
    pytester.makepyfile(
        """
        import pytest

        @pytest.mark.hopf_turbo
        def test_marked():
            pass
    """
    )
    result = run(pytester)
    result.assert_outcomes(passed=1)
    result.stdout.fnmatch_lines(["*Nothing known about marker hopf_turbo*"])


def test_budget_overrun_warns(pytester):
    pytester.makepyfile(
        """
        import time
        import pytest

        @pytest.mark.hopf_budget(0.01)
        def test_sleepy():
            time.sleep(0.2)
    """
    )
    result = run(pytester)
    result.assert_outcomes(passed=1)
    result.stdout.fnmatch_lines(["*test_sleepy took*over its budget of 0.01s*"])


def test_family_fixture_is_memoised(pytester):
    pytester.makepyfile(
        """
        def test_same(hopf_family):
            first = hopf_family("E", group="Z/2", e="x", chi=["-1"])
            assert hopf_family("E", group="Z/2", e="x", chi=["-1"]) is first
            assert first.dim == 4
    """
    )
    run(pytester).assert_outcomes(passed=1)


@pytest.mark.parametrize("factor", ["0", "-2"])
def test_budget_factor_must_be_positive(pytester, factor):
    pytester.makepyfile("def test_nothing():\n    pass\n")
    result = run(pytester, "--hopf-budget-factor", factor)
    assert result.ret == pytest.ExitCode.USAGE_ERROR
    result.stderr.fnmatch_lines(["*--hopf-budget-factor must be positive!*"])
