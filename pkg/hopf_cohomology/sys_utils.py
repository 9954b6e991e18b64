import hashlib
import multiprocessing
import os
import platform
import socket
import subprocess
import sys
import warnings

import psutil
import sympy

LOG_PREFIX = "[hopf-cohomology]"

# (ci name, branch variable(s), build number variable); first match wins.
_CI_PROVIDERS = (
    ("jenkinsci", ("BRANCH_NAME", "JOB_NAME"), "BUILD_NUMBER"),
    ("circleci", ("CIRCLE_JOB",), "CIRCLE_BUILD_NUM"),
    ("travisci", ("TRAVIS_BUILD_ID",), "TRAVIS_BUILD_NUMBER"),
    ("droneci", ("DRONE_REPO_BRANCH",), "DRONE_BUILD_NUMBER"),
    ("gitlabci", ("CI_JOB_NAME",), "CI_PIPELINE_ID"),
    ("bitbucketci", ("BITBUCKET_BRANCH",), "BITBUCKET_BUILD_NUMBER"),
    ("githubactions", ("GITHUB_REF_NAME",), "GITHUB_RUN_NUMBER"),
)


def log(msg):
    """Diagnostics go to stderr so that reports written to stdout stay parseable."""
    print(f"{LOG_PREFIX} {msg}", file=sys.stderr, flush=True)


def worker_count(requested=None):
    """Number of slice workers: ``requested``, else HOPF_THREADS, else the CPU count (never below 1)."""
    if requested is None:
        raw = os.environ.get("HOPF_THREADS")
        if raw:
            try:
                requested = int(raw)
            except ValueError:
                warnings.warn(f"Ignoring non integer HOPF_THREADS={raw!r}.")
    if requested is None:
        requested = multiprocessing.cpu_count()
    return max(1, int(requested))


def collect_ci_info():
    for ci, branch_vars, build_var in _CI_PROVIDERS:
        if build_var not in os.environ:
            continue
        branches = [os.environ[v] for v in branch_vars if v in os.environ]
        if branches:
            return {"pipeline_branch": branches[0], "pipeline_build_no": os.environ[build_var], "__ci__": ci}
    return {}


def determine_scm_revision():
    for scm, cmd in (("git", r"git rev-parse HEAD"), ("p4", r"p4 changes -m1 \#have")):
        p = subprocess.Popen(cmd, shell=True, stderr=subprocess.PIPE, stdout=subprocess.PIPE)
        p_out, _ = p.communicate()
        if p.returncode == 0:
            scm_ref = p_out.decode(errors="ignore").split("\n", maxsplit=1)[0]
            return scm_ref.split()[1] if scm == "p4" else scm_ref
    return ""


def _get_cpu_string():
    if platform.system().lower() == "linux":
        try:
            with open("/proc/cpuinfo", "r", encoding="utf-8") as f:
                lines = [i for i in f if i.startswith("model name")]
        except OSError:
            lines = []
        if lines:
            return lines[0].split(":")[1].strip()
    return platform.processor()


class ExecutionContext:
    """Machine and interpreter description attached to every job session.

    Fields are kept in one ordered mapping; its order fixes both ``to_dict`` and the context hash.
    """

    def __init__(self):
        self.__info = {
            "cpu_count": multiprocessing.cpu_count(),
            "cpu_frequency": self._cpu_frequency(),
            "cpu_vendor": _get_cpu_string(),
            "ram_total": int(psutil.virtual_memory().total / 1024**2),
            "machine_node": socket.getfqdn(),
            "system_info": f"{platform.system()} - {platform.release()}",
            "python_info": sys.version,
            "sympy_version": sympy.__version__,
            "workers": worker_count(),
        }

    @staticmethod
    def _cpu_frequency():
        if not int(os.environ.get("HOPF_COHOMOLOGY_FORCE_CPU_FREQ", "0")):
            try:
                return psutil.cpu_freq().current
            except (AttributeError, NotImplementedError, FileNotFoundError):
                warnings.warn("Unable to fetch CPU frequency. Trying to read it from environment..")
        try:
            return float(os.environ.get("HOPF_COHOMOLOGY_CPU_FREQ", "0."))
        except (ValueError, TypeError):
            warnings.warn("Wrong type/value while reading cpu frequency from environment. Forcing to 0.0.")
            return 0.0

    def to_dict(self):
        return {**self.__info, "h": self.compute_hash()}

    @property
    def cpu_frequency(self):
        return self.__info["cpu_frequency"]

    def compute_hash(self):
        hr = hashlib.md5()
        for value in self.__info.values():
            hr.update(str(value).encode())
        return hr.hexdigest()
