import sqlite3

# table -> column definitions, in insertion order
SCHEMA = {
    "JOB_SESSIONS": (
        ("SESSION_H", "varchar(64) primary key not null unique"),
        ("RUN_DATE", "varchar(64)"),
        ("SCM_ID", "varchar(128)"),
        ("RUN_DESCRIPTION", "json"),
    ),
    "EXECUTION_CONTEXTS": (
        ("ENV_H", "varchar(64) primary key not null unique"),
        ("CPU_COUNT", "integer"),
        ("CPU_FREQUENCY_MHZ", "integer"),
        ("CPU_VENDOR", "varchar(256)"),
        ("RAM_TOTAL_MB", "integer"),
        ("MACHINE_NODE", "varchar(512)"),
        ("SYSTEM_INFO", "varchar(256)"),
        ("PYTHON_INFO", "varchar(512)"),
        ("SYMPY_VERSION", "varchar(32)"),
        ("WORKERS", "integer"),
    ),
    "JOB_METRICS": (
        ("SESSION_H", "varchar(64) REFERENCES JOB_SESSIONS(SESSION_H)"),
        ("ENV_H", "varchar(64) REFERENCES EXECUTION_CONTEXTS(ENV_H)"),
        ("JOB_START_TIME", "varchar(64)"),
        ("JOB", "varchar(256)"),
        ("SPEC_NAME", "varchar(512)"),
        ("KIND", "varchar(64)"),
        ("TOTAL_TIME", "float"),
        ("USER_TIME", "float"),
        ("KERNEL_TIME", "float"),
        ("CPU_USAGE", "float"),
        ("MEM_USAGE", "float"),
    ),
    "COHOMOLOGY_ENTRIES": (
        ("SESSION_H", "varchar(64) REFERENCES JOB_SESSIONS(SESSION_H)"),
        ("SPEC_NAME", "varchar(512)"),
        ("G", "varchar(128)"),
        ("H", "varchar(128)"),
        ("N", "integer"),
        ("DEGREE", "varchar(128)"),
        ("DIM", "integer"),
    ),
}

# ExecutionContext.to_dict() key for each EXECUTION_CONTEXTS column
CONTEXT_COLUMNS = {
    "ENV_H": "h",
    "CPU_COUNT": "cpu_count",
    "CPU_FREQUENCY_MHZ": "cpu_frequency",
    "CPU_VENDOR": "cpu_vendor",
    "RAM_TOTAL_MB": "ram_total",
    "MACHINE_NODE": "machine_node",
    "SYSTEM_INFO": "system_info",
    "PYTHON_INFO": "python_info",
    "SYMPY_VERSION": "sympy_version",
    "WORKERS": "workers",
}


def _insert_statement(table):
    columns = [name for name, _ in SCHEMA[table]]
    return f"insert into {table}({','.join(columns)}) values ({','.join('?' * len(columns))})"


class DBHandler:
    """sqlite store for job sessions, execution contexts, job metrics and computed cohomology entries."""

    def __init__(self, db_path):
        self.__db = db_path
        self.__cnx = sqlite3.connect(self.__db)
        self.prepare()

    def query(self, what, bind_to, many=False):
        cursor = self.__cnx.cursor()
        cursor.execute(what, bind_to)
        return cursor.fetchall() if many else cursor.fetchone()

    def close(self):
        self.__cnx.close()

    def _insert(self, table, *rows):
        with self.__cnx:
            self.__cnx.executemany(_insert_statement(table), rows)

    def insert_session(self, h, run_date, scm_id, description):
        self._insert("JOB_SESSIONS", (h, run_date, scm_id, description))

    def insert_metric(self, session_h, env_h, start_time, job, spec_name, kind, timing, mem_usage):
        total_time, user_time, kernel_time = timing
        cpu_usage = (user_time + kernel_time) / total_time if total_time else 0.0
        self._insert(
            "JOB_METRICS",
            (session_h, env_h, start_time, job, spec_name, kind, *timing, cpu_usage, mem_usage),
        )

    def insert_entries(self, session_h, spec_name, rows):
        """``rows`` are ``(g, h, n, degree_text, dim)`` tuples."""
        self._insert("COHOMOLOGY_ENTRIES", *[(session_h, spec_name, *row) for row in rows])

    def insert_execution_context(self, exc_context):
        info = exc_context.to_dict()
        row = tuple(info[CONTEXT_COLUMNS[name]] for name, _ in SCHEMA["EXECUTION_CONTEXTS"])
        self._insert("EXECUTION_CONTEXTS", row)

    def prepare(self):
        with self.__cnx:
            for table, columns in SCHEMA.items():
                body = ",\n    ".join(f"{name} {kind}" for name, kind in columns)
                self.__cnx.execute(f"CREATE TABLE IF NOT EXISTS {table} (\n    {body}\n)")
