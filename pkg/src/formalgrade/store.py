"""Embedded transactional key-value store: one keyspace per record type.

A thin layer over sqlite3 storing JSON documents. A single connection guarded
by a re-entrant lock serializes writers; readers share it. Suitable for the
one-process service this package ships.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from contextlib import contextmanager


class Store:
    def __init__(self, path: str = ":memory:"):
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._lock = threading.RLock()
        with self._lock:
            self._conn.execute(
                "CREATE TABLE IF NOT EXISTS kv ("
                " keyspace TEXT NOT NULL, key TEXT NOT NULL, value TEXT NOT NULL,"
                " PRIMARY KEY (keyspace, key))")
            self._conn.execute(
                "CREATE TABLE IF NOT EXISTS counters ("
                " name TEXT PRIMARY KEY, value INTEGER NOT NULL)")
            self._conn.commit()

    def close(self):
        with self._lock:
            self._conn.close()

    @contextmanager
    def transaction(self):
        with self._lock:
            try:
                yield
                self._conn.commit()
            except BaseException:
                self._conn.rollback()
                raise

    def put(self, keyspace: str, key: str, doc) -> None:
        with self.transaction():
            self._conn.execute(
                "INSERT OR REPLACE INTO kv (keyspace, key, value) VALUES (?, ?, ?)",
                (keyspace, key, json.dumps(doc, sort_keys=True)))

    def get(self, keyspace: str, key: str):
        with self._lock:
            row = self._conn.execute(
                "SELECT value FROM kv WHERE keyspace = ? AND key = ?",
                (keyspace, key)).fetchone()
        return json.loads(row[0]) if row else None

    def items(self, keyspace: str) -> list[tuple[str, dict]]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT key, value FROM kv WHERE keyspace = ? ORDER BY key",
                (keyspace,)).fetchall()
        return [(k, json.loads(v)) for k, v in rows]

    def delete(self, keyspace: str, key: str) -> None:
        with self.transaction():
            self._conn.execute("DELETE FROM kv WHERE keyspace = ? AND key = ?",
                               (keyspace, key))

    def next_id(self, name: str) -> int:
        """Monotone counter per name; used for human-friendly record ids."""
        with self.transaction():
            self._conn.execute(
                "INSERT INTO counters (name, value) VALUES (?, 0) "
                "ON CONFLICT (name) DO NOTHING", (name,))
            self._conn.execute(
                "UPDATE counters SET value = value + 1 WHERE name = ?", (name,))
            row = self._conn.execute(
                "SELECT value FROM counters WHERE name = ?", (name,)).fetchone()
        return int(row[0])
