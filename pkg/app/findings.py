import hashlib
import json
import logging
import os
import sqlite3
import threading
import time

from app.config import DATA_DIR, FINDINGS_DB_PATH, MAX_FINDINGS

log = logging.getLogger(__name__)


class FindingsStore:
    """Append-only log of noteworthy computational findings, kept in SQLite.

    Safe to share between worker threads: one connection, one lock.
    """

    def __init__(self, db_path=None, max_rows=MAX_FINDINGS):
        self.db_path = db_path or FINDINGS_DB_PATH or os.path.join(DATA_DIR, "findings.db")
        self.max_rows = max_rows
        self.lock = threading.Lock()
        self._closed = False
        parent = os.path.dirname(os.path.abspath(self.db_path))
        os.makedirs(parent, exist_ok=True)
        self.conn = self._open_or_recreate(self.db_path)
        self.conn.row_factory = sqlite3.Row
        self.conn.execute("PRAGMA journal_mode=WAL")
        self.conn.execute("PRAGMA busy_timeout=3000")
        self._create_tables()

    @staticmethod
    def _open_or_recreate(db_path):
        """Open the database; a corrupted file is kept as <path>.corrupt and a fresh one started."""
        conn = None
        try:
            conn = sqlite3.connect(db_path, check_same_thread=False)
            result = conn.execute("PRAGMA integrity_check").fetchone()[0]
            if result != "ok":
                raise sqlite3.DatabaseError(f"integrity check failed: {result}")
            return conn
        except sqlite3.DatabaseError as exc:
            if conn is not None:
                try:
                    conn.close()
                except sqlite3.Error:
                    pass
            for suffix in ("", "-wal", "-shm"):
                path = db_path + suffix
                if os.path.exists(path):
                    os.replace(path, path + ".corrupt")
            log.warning("Findings database unreadable (%s); moved to %s.corrupt, starting a new one",
                        exc, db_path)
            return sqlite3.connect(db_path, check_same_thread=False)

    def _create_tables(self):
        with self.lock:
            self.conn.execute("""
                CREATE TABLE IF NOT EXISTS findings (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    command TEXT NOT NULL,
                    kind TEXT NOT NULL,
                    message TEXT NOT NULL,
                    payload TEXT,
                    digest TEXT NOT NULL,
                    timestamp REAL NOT NULL
                )
            """)
            self.conn.execute("""
                CREATE INDEX IF NOT EXISTS idx_findings_timestamp
                ON findings(timestamp DESC)
            """)
            self.conn.commit()

    def add(self, command, kind, message, payload=None):
        """Store a finding; an identical repeat of the latest one is skipped."""
        if self._closed:
            return False
        payload_text = json.dumps(payload, sort_keys=True) if payload is not None else None
        digest = hashlib.sha256(f"{command}\0{kind}\0{message}\0{payload_text}".encode()).hexdigest()
        with self.lock:
            if self._closed:
                return False
            row = self.conn.execute(
                "SELECT digest FROM findings ORDER BY id DESC LIMIT 1"
            ).fetchone()
            if row and row["digest"] == digest:
                return False
            self.conn.execute(
                "INSERT INTO findings (command, kind, message, payload, digest, timestamp) VALUES (?, ?, ?, ?, ?, ?)",
                (command, kind, message, payload_text, digest, time.time())
            )
            self.conn.commit()
            self._cleanup_unlocked()
        log.info("Recorded %s finding from %s: %s", kind, command, message)
        return True

    def recent(self, limit=50):
        with self.lock:
            if self._closed:
                return []
            cursor = self.conn.execute(
                "SELECT id, command, kind, message, payload, timestamp FROM findings ORDER BY id DESC LIMIT ?",
                (limit,)
            )
            rows = [dict(row) for row in cursor.fetchall()]
        for row in rows:
            row["payload"] = json.loads(row["payload"]) if row["payload"] else None
        return rows

    def count(self):
        with self.lock:
            if self._closed:
                return 0
            return self.conn.execute("SELECT COUNT(*) AS cnt FROM findings").fetchone()["cnt"]

    def clear(self):
        with self.lock:
            if self._closed:
                return
            self.conn.execute("DELETE FROM findings")
            self.conn.commit()

    def _cleanup_unlocked(self):
        count = self.conn.execute("SELECT COUNT(*) AS cnt FROM findings").fetchone()["cnt"]
        if count > self.max_rows:
            self.conn.execute("""
                DELETE FROM findings WHERE id IN (
                    SELECT id FROM findings ORDER BY id ASC LIMIT ?
                )
            """, (count - self.max_rows,))
            self.conn.commit()

    def close(self):
        with self.lock:
            self._closed = True
            if self.conn:
                try:
                    self.conn.execute("PRAGMA wal_checkpoint(TRUNCATE)")
                except Exception:
                    pass
                self.conn.close()
                self.conn = None
