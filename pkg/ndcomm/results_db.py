import logging
import time
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from sqlite_utils import Database

from .config import RESULTS_DB_DIR

log = logging.getLogger(__name__)

RUN_COLS = {
    "id": int,
    "command": str,
    "config": str,
    "passed": bool,
    "failures": int,
    "durationMs": int,
    "report": str,
    "createdAt": int,
}


def create_results_db(name: str = "runs.db") -> Path:
    """Create the run archive if it doesn't exist."""
    db_path = RESULTS_DB_DIR / name
    if db_path.exists():
        return db_path
    db = Database(db_path, strict=True)
    runs = db["runs"]
    runs.create(
        RUN_COLS,
        pk="id",
        not_null=("command", "config", "passed", "createdAt"),
        if_not_exists=True,
    )
    runs.create_index(("command",))
    runs.create_index(("createdAt",))
    db.close()
    return db_path


def query_results_db(
    sql: str, params: Iterable | dict | None = None, db_name: str = "runs.db"
) -> list[dict[str, Any]]:
    db_path = create_results_db(db_name)
    db = Database(db_path)
    res = list(db.query(sql, params))
    db.close()
    return res


def execute_results_db(
    sql: str, params: Iterable | dict | None = None, db_name: str = "runs.db"
):
    db_path = create_results_db(db_name)
    db = Database(db_path)
    with db.conn:
        db.execute(sql, params)
    db.close()


def add_run(
    command: str,
    config: str,
    passed: bool,
    failures: int,
    duration: float,
    report: str,
    db_name: str = "runs.db",
) -> int:
    """Archive one CLI run and return its row id."""
    row = {
        "command": command,
        "config": config,
        "passed": passed,
        "failures": failures,
        "durationMs": round(duration * 1000),
        "report": report,
        "createdAt": int(time.time()),
    }
    db_path = create_results_db(db_name)
    db = Database(db_path)
    run_id = db["runs"].insert(row).last_pk
    db.close()
    log.info(f"Recorded {command} run {run_id} in {db_path}")
    return run_id


def get_runs(command: str | None = None, db_name: str = "runs.db") -> list[dict]:
    """Archived runs, newest first"""
    sql = "SELECT * FROM runs"
    params = {}
    if command:
        sql += " WHERE command = :command"
        params["command"] = command
    sql += " ORDER BY createdAt DESC, id DESC"
    return query_results_db(sql, params, db_name=db_name)


def remove_old_runs(retro_hours: float = 72.0, db_name: str = "runs.db"):
    """Delete runs archived more than retro_hours ago"""
    cutoff = int(time.time() - retro_hours * 3600)
    sql = "DELETE FROM runs WHERE createdAt < :cutoff"
    execute_results_db(sql, {"cutoff": cutoff}, db_name=db_name)
    db = Database(create_results_db(db_name))
    db.vacuum()
    db.close()
