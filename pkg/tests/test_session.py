import json
import sqlite3
from http import HTTPStatus

import mock
import pytest

from hopf_cohomology.session import JobSession

REMOTE = "http://results.local:8050"


def rows(path, query):
    cnx = sqlite3.connect(str(path))
    try:
        return cnx.execute(query).fetchall()
    finally:
        cnx.close()


def test_session_records_jobs_and_entries(tmp_path):
    db = tmp_path / "runs.db"
    session = JobSession(db=str(db))
    session.compute_info("nightly", ["family=E"])
    assert session.run_job("cohomology", "sweedler", "slices", sum, [1, 2, 3]) == 6
    session.add_entries("sweedler", [("x", "1", 1, "1", 1)])
    session.close()

    assert session.job_count == 1
    (description,) = rows(db, "SELECT RUN_DESCRIPTION FROM JOB_SESSIONS")[0]
    assert json.loads(description)["family"] == "E"
    assert rows(db, "SELECT JOB, SPEC_NAME, KIND FROM JOB_METRICS") == [("cohomology", "sweedler", "slices")]
    assert rows(db, "SELECT G, H, N, DEGREE, DIM FROM COHOMOLOGY_ENTRIES") == [("x", "1", 1, "1", 1)]
    assert len(rows(db, "SELECT ENV_H FROM EXECUTION_CONTEXTS")) == 1


def test_no_tracing_skips_bookkeeping(tmp_path):
    db = tmp_path / "runs.db"
    session = JobSession(db=str(db), tracing=False)
    session.compute_info()
    assert session.run_job("build", "sweedler", "build", max, 1, 4) == 4
    session.add_entries("sweedler", [("1", "1", 0, "0", 1)])
    session.close()
    assert session.job_count == 0
    assert session.session_h
    assert rows(db, "SELECT * FROM JOB_METRICS") == []
    assert rows(db, "SELECT * FROM COHOMOLOGY_ENTRIES") == []


def test_remote_server_failure_deactivates_remote():
    with mock.patch("hopf_cohomology.session.requests") as requests_mock:
        requests_mock.get.return_value.status_code = HTTPStatus.NOT_FOUND
        requests_mock.post.return_value.status_code = HTTPStatus.INTERNAL_SERVER_ERROR
        session = JobSession(remote=REMOTE)
        with pytest.warns(UserWarning, match="Deactivating"):
            session.compute_info("remote run")
    assert session.remote == ""
    assert requests_mock.post.call_count == 1


def test_remote_server_receives_the_session():
    with mock.patch("hopf_cohomology.session.requests") as requests_mock:
        requests_mock.get.return_value.status_code = HTTPStatus.NOT_FOUND
        requests_mock.post.return_value.status_code = HTTPStatus.CREATED
        requests_mock.post.return_value.text = json.dumps({"h": "ctx-1"})
        session = JobSession(remote=REMOTE)
        session.compute_info("remote run")
        session.run_job("oracle", "sweedler", "check", len, "abc")
        session.add_entries("sweedler", [("1", "1", 0, "0", 1)])

    assert session.remote == REMOTE
    assert session.remote_env_id == "ctx-1"
    urls = [c.args[0] for c in requests_mock.post.call_args_list]
    assert urls == [f"{REMOTE}/{e}/" for e in ("contexts", "sessions", "metrics", "entries")]
    metrics = requests_mock.post.call_args_list[2].kwargs["json"]
    assert (metrics["job"], metrics["spec_name"], metrics["kind"]) == ("oracle", "sweedler", "check")
