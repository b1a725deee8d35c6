import sqlite3
import os

from config import PROJECT_ROOT

# Resolve data directory relative to this file (in src/)
DB_PATH = os.path.join(PROJECT_ROOT, "data", "db", "synidx.db")

def get_connection():
    print(f"DEBUG: Connecting to DB at: {DB_PATH}")
    os.makedirs(os.path.dirname(DB_PATH), exist_ok=True)
    conn = sqlite3.connect(DB_PATH)
    conn.execute("PRAGMA foreign_keys = ON;")
    return conn

def init_db():
    conn = get_connection()
    cursor = conn.cursor()

    # Indexed texts, one row per input name
    cursor.execute("""
    CREATE TABLE IF NOT EXISTS texts (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        name TEXT UNIQUE NOT NULL,
        n INTEGER NOT NULL,
        sigma INTEGER NOT NULL
    );
    """)

    # One row per `bench` invocation
    cursor.execute("""
    CREATE TABLE IF NOT EXISTS bench_runs (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        text_id INTEGER NOT NULL,
        created_at DATETIME DEFAULT CURRENT_TIMESTAMP,
        tau INTEGER NOT NULL,
        fallback INTEGER NOT NULL,
        build_seconds REAL NOT NULL,
        index_bytes INTEGER NOT NULL,
        sync_size INTEGER NOT NULL,
        threads INTEGER NOT NULL,
        FOREIGN KEY (text_id) REFERENCES texts(id)
    );
    """)

    # Per-query latencies of a bench run
    cursor.execute("""
    CREATE TABLE IF NOT EXISTS bench_latencies (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        run_id INTEGER NOT NULL,
        query TEXT NOT NULL,
        seconds REAL NOT NULL,
        FOREIGN KEY (run_id) REFERENCES bench_runs(id) ON DELETE CASCADE
    );
    """)

    # Oracle verification outcomes
    cursor.execute("""
    CREATE TABLE IF NOT EXISTS verify_runs (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        text_id INTEGER NOT NULL,
        created_at DATETIME DEFAULT CURRENT_TIMESTAMP,
        seed INTEGER,
        n INTEGER NOT NULL,
        tau INTEGER NOT NULL,
        checks INTEGER NOT NULL,
        mismatches INTEGER NOT NULL,
        detail TEXT,
        FOREIGN KEY (text_id) REFERENCES texts(id)
    );
    """)

    conn.commit()
    conn.close()
    print(f"Database initialized at {DB_PATH}")

def get_or_create_text(name, n, sigma):
    conn = get_connection()
    cursor = conn.cursor()
    cursor.execute("SELECT id FROM texts WHERE name = ?", (name,))
    row = cursor.fetchone()
    if row:
        text_id = row[0]
        cursor.execute("UPDATE texts SET n = ?, sigma = ? WHERE id = ?", (n, sigma, text_id))
    else:
        cursor.execute("INSERT INTO texts (name, n, sigma) VALUES (?, ?, ?)", (name, n, sigma))
        text_id = cursor.lastrowid
    conn.commit()
    conn.close()
    return text_id

def record_bench_run(text_id, stats, build_seconds, index_bytes, threads, latencies):
    """
    Stores one bench run. `latencies` is a list of (query verb, seconds) pairs.
    Returns the new run id.
    """
    conn = get_connection()
    cursor = conn.cursor()
    cursor.execute(
        """INSERT INTO bench_runs
           (text_id, tau, fallback, build_seconds, index_bytes, sync_size, threads)
           VALUES (?, ?, ?, ?, ?, ?, ?)""",
        (text_id, stats["tau"], int(stats["fallback"]), build_seconds, index_bytes,
         stats["sync_size"], threads)
    )
    run_id = cursor.lastrowid
    cursor.executemany(
        "INSERT INTO bench_latencies (run_id, query, seconds) VALUES (?, ?, ?)",
        [(run_id, verb, seconds) for verb, seconds in latencies]
    )
    conn.commit()
    conn.close()
    return run_id

def record_verify_run(text_id, report, seed=None):
    conn = get_connection()
    cursor = conn.cursor()
    cursor.execute(
        """INSERT INTO verify_runs (text_id, seed, n, tau, checks, mismatches, detail)
           VALUES (?, ?, ?, ?, ?, ?, ?)""",
        (text_id, seed, report.n, report.tau, report.checks, len(report.mismatches),
         report.detail() or None)
    )
    run_id = cursor.lastrowid
    conn.commit()
    conn.close()
    return run_id

def get_all_texts():
    """Returns a dict {name: {'id': id, 'n': n, 'sigma': sigma}}."""
    conn = get_connection()
    cursor = conn.cursor()
    cursor.execute("SELECT id, name, n, sigma FROM texts")
    rows = cursor.fetchall()
    conn.close()
    return {row[1]: {'id': row[0], 'n': row[2], 'sigma': row[3]} for row in rows}

if __name__ == "__main__":
    init_db()
