import mock
import pytest

from hopf_cohomology.sys_utils import ExecutionContext, collect_ci_info, log, worker_count

CPU_FREQ_PATH = "hopf_cohomology.sys_utils.psutil.cpu_freq"
CI_VARIABLES = (
    "BUILD_NUMBER",
    "BRANCH_NAME",
    "JOB_NAME",
    "CIRCLE_BUILD_NUM",
    "TRAVIS_BUILD_NUMBER",
    "DRONE_BUILD_NUMBER",
    "CI_PIPELINE_ID",
    "BITBUCKET_BUILD_NUMBER",
    "GITHUB_RUN_NUMBER",
    "GITHUB_REF_NAME",
)


@pytest.fixture
def no_ci(monkeypatch):
    for name in CI_VARIABLES:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


def test_worker_count(monkeypatch):
    monkeypatch.setenv("HOPF_THREADS", "3")
    assert worker_count() == 3
    assert worker_count(0) == 1
    monkeypatch.setenv("HOPF_THREADS", "many")
    with pytest.warns(UserWarning, match="Ignoring non integer HOPF_THREADS"):
        assert worker_count() >= 1


def test_no_ci_outside_a_pipeline(no_ci):
    assert collect_ci_info() == {}


def test_jenkins_pipeline(no_ci):
    no_ci.setenv("BUILD_NUMBER", "12")
    no_ci.setenv("JOB_NAME", "nightly")
    assert collect_ci_info() == {"pipeline_branch": "nightly", "pipeline_build_no": "12", "__ci__": "jenkinsci"}


def test_github_actions(no_ci):
    no_ci.setenv("GITHUB_RUN_NUMBER", "40")
    no_ci.setenv("GITHUB_REF_NAME", "main")
    assert collect_ci_info()["__ci__"] == "githubactions"


def test_build_number_alone_is_not_a_pipeline(no_ci):
    no_ci.setenv("BUILD_NUMBER", "12")
    assert collect_ci_info() == {}


def test_forced_cpu_frequency_skips_psutil(monkeypatch):
    monkeypatch.setenv("HOPF_COHOMOLOGY_FORCE_CPU_FREQ", "1")
    monkeypatch.setenv("HOPF_COHOMOLOGY_CPU_FREQ", "3000")
    with mock.patch(CPU_FREQ_PATH) as cpu_freq_mock:
        context = ExecutionContext()
        cpu_freq_mock.assert_not_called()
    assert context.cpu_frequency == 3000.0
    assert context.to_dict()["h"] == context.compute_hash()


def test_missing_cpu_frequency_falls_back_to_environment(monkeypatch):
    monkeypatch.delenv("HOPF_COHOMOLOGY_FORCE_CPU_FREQ", raising=False)
    monkeypatch.setenv("HOPF_COHOMOLOGY_CPU_FREQ", "not a number")
    with mock.patch(CPU_FREQ_PATH, return_value=None):
        with pytest.warns(UserWarning) as record:
            context = ExecutionContext()
    assert context.cpu_frequency == 0.0
    assert any("Forcing to 0.0" in str(w.message) for w in record)


def test_log_goes_to_stderr(capsys):
    log("slice done")
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err == "[hopf-cohomology] slice done\n"
