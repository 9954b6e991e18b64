import datetime
import hashlib
import json
import os
import time
import warnings
from http import HTTPStatus

import memory_profiler
import psutil
import requests

from hopf_cohomology.handler import DBHandler
from hopf_cohomology.sys_utils import (
    ExecutionContext,
    collect_ci_info,
    determine_scm_revision,
    log,
)


class JobSession:
    """Bookkeeping for one CLI run: session row, execution context, per-job metrics and results.

    Results go to a local sqlite database, a remote server, both or neither. The remote side is
    dropped (with a warning) on the first failed POST.
    """

    def __init__(self, db=None, remote=None, tracing=True):
        self.__db = DBHandler(db) if db else None
        self.__tracing = tracing
        self.__remote = remote or ""
        self.__session = ""
        self.__eid = (None, None)
        self.__mem_usage_base = 0.0
        self.__process = psutil.Process(os.getpid())
        self.__jobs = 0

    @property
    def tracing(self):
        return self.__tracing

    @property
    def remote(self):
        return self.__remote

    @property
    def db(self):
        return self.__db

    @property
    def remote_env_id(self):
        return self.__eid[1]

    @property
    def db_env_id(self):
        return self.__eid[0]

    @property
    def process(self):
        return self.__process

    @property
    def session_h(self):
        return self.__session

    @property
    def job_count(self):
        return self.__jobs

    def _post(self, endpoint, payload, what):
        url = f"{self.__remote}/{endpoint}/"
        log(f"POST {url}")
        r = requests.post(url, json=payload)
        log(f"POST response: {r.status_code}")
        if r.status_code != HTTPStatus.CREATED:
            self.__remote = ""
            warnings.warn(f"Cannot insert {what} in remote server ({r.status_code})! Deactivating...")
            return None
        return r

    def get_env_id(self, env):
        db, remote = None, None
        if self.__db:
            row = self.__db.query("SELECT ENV_H FROM EXECUTION_CONTEXTS WHERE ENV_H= ?", (env.compute_hash(),))
            db = row[0] if row else None
        if self.__remote:
            url = f"{self.__remote}/contexts/{env.compute_hash()}"
            log(f"GET {url}")
            r = requests.get(url)
            log(f"GET response: {r.status_code}")
            if r.status_code == HTTPStatus.OK:
                found = json.loads(r.text).get("contexts") or []
                remote = found[0]["h"] if found else None
        return db, remote

    @staticmethod
    def build_description(description, tags):
        """CI information, the free-text description and ``key=value`` tags as one JSON object."""
        d = collect_ci_info()
        if description:
            d["description"] = description
        for tag in tags:
            for item in [tag] if isinstance(tag, str) else tag:
                key, _, value = item.partition("=")
                d[key] = value
        return json.dumps(d, sort_keys=True)

    def compute_info(self, description="", tags=()):
        run_date = datetime.datetime.now().isoformat()
        scm = determine_scm_revision()
        h = hashlib.md5()
        h.update(scm.encode())
        h.update(run_date.encode())
        h.update(description.encode())
        self.__session = h.hexdigest()
        text = self.build_description(description, tags)
        if not self.__tracing:
            return
        self.prepare()
        self.set_environment_info(ExecutionContext())
        if self.__db:
            self.__db.insert_session(self.__session, run_date, scm, text)
        if self.__remote:
            payload = {
                "session_h": self.__session,
                "run_date": run_date,
                "scm_ref": scm,
                "description": json.loads(text),
            }
            self._post("sessions", payload, "session")

    def set_environment_info(self, env):
        db_id, remote_id = self.get_env_id(env)
        if self.__db and db_id is None:
            self.__db.insert_execution_context(env)
            db_id = self.__db.query("select ENV_H from EXECUTION_CONTEXTS where ENV_H = ?", (env.compute_hash(),))[0]
        if self.__remote and remote_id is None:
            r = self._post("contexts", env.to_dict(), "execution context")
            if r is not None:
                remote_id = json.loads(r.text)["h"]
        self.__eid = db_id, remote_id

    def prepare(self):
        def dummy():
            return True

        memuse = memory_profiler.memory_usage((dummy,), max_iterations=1, max_usage=True)
        self.__mem_usage_base = memuse[0] if isinstance(memuse, list) else memuse

    def run_job(self, job, spec_name, kind, func, *args, **kwargs):
        """Run ``func`` and record wall/CPU time and memory high-water mark when tracing."""
        if not self.__tracing:
            return func(*args, **kwargs)
        start = time.time()
        times_a = self.__process.cpu_times()
        mem, result = memory_profiler.memory_usage((func, args, kwargs), interval=0.1, max_usage=True, retval=True)
        times_b = self.__process.cpu_times()
        total = time.time() - start
        mem = mem[0] if isinstance(mem, list) else mem
        self.add_job_info(
            job,
            spec_name,
            kind,
            start,
            (total, times_b.user - times_a.user, times_b.system - times_a.system),
            mem,
        )
        return result

    def add_job_info(self, job, spec_name, kind, start_time, timing, mem_usage):
        self.__jobs += 1
        mem_usage = float(mem_usage) - self.__mem_usage_base
        start_text = datetime.datetime.fromtimestamp(start_time).isoformat()
        if self.__db and self.db_env_id is not None:
            self.__db.insert_metric(self.__session, self.db_env_id, start_text, job, spec_name, kind, timing, mem_usage)
        if self.__remote and self.remote_env_id is not None:
            total_time, user_time, kernel_time = timing
            payload = {
                "session_h": self.__session,
                "context_h": self.remote_env_id,
                "job_start_time": start_text,
                "job": job,
                "spec_name": spec_name,
                "kind": kind,
                "total_time": total_time,
                "user_time": user_time,
                "kernel_time": kernel_time,
                "cpu_usage": (user_time + kernel_time) / total_time if total_time else 0.0,
                "mem_usage": mem_usage,
            }
            self._post("metrics", payload, "job metrics")

    def add_entries(self, spec_name, rows):
        """Store ``(g, h, n, degree_text, dim)`` rows of a cohomology report."""
        rows = list(rows)
        if not self.__tracing or not rows:
            return
        if self.__db:
            self.__db.insert_entries(self.__session, spec_name, rows)
        if self.__remote:
            payload = {
                "session_h": self.__session,
                "spec_name": spec_name,
                "entries": [dict(zip(("g", "h", "n", "degree", "dim"), row)) for row in rows],
            }
            self._post("entries", payload, "cohomology entries")

    def close(self):
        if self.__db:
            self.__db.close()
