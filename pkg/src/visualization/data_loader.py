import pandas as pd
import sqlite3
import os
import sys

# Add src to path to import database module
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
import database


def _read(query):
    if not os.path.exists(database.DB_PATH):
        return pd.DataFrame()
    conn = sqlite3.connect(database.DB_PATH)
    try:
        return pd.read_sql_query(query, conn)
    finally:
        conn.close()


def load_bench_runs():
    """
    Loads bench runs joined with their text into a DataFrame, with the build
    throughput in symbols per second.
    """
    df = _read("""
    SELECT
        b.id AS run_id,
        b.created_at,
        t.name AS text_name,
        t.n,
        t.sigma,
        b.tau,
        b.fallback,
        b.build_seconds,
        b.index_bytes,
        b.sync_size,
        b.threads
    FROM bench_runs b
    JOIN texts t ON b.text_id = t.id
    """)
    if df.empty:
        return df

    df['created_at'] = pd.to_datetime(df['created_at'])
    df['fallback'] = df['fallback'].astype(bool)
    df['throughput'] = df['n'] / df['build_seconds'].clip(lower=1e-9)
    df['bits_per_symbol'] = 8 * df['index_bytes'] / df['n']
    return df


def load_latencies():
    df = _read("""
    SELECT
        l.run_id,
        l.query,
        l.seconds,
        t.name AS text_name,
        b.threads
    FROM bench_latencies l
    JOIN bench_runs b ON l.run_id = b.id
    JOIN texts t ON b.text_id = t.id
    """)
    if df.empty:
        return df
    df['micros'] = df['seconds'] * 1e6
    return df


def latency_percentiles(latencies, percentiles=(0.5, 0.9, 0.99)):
    """Per-verb latency percentiles in microseconds, one column per percentile."""
    if latencies.empty:
        return pd.DataFrame()
    table = latencies.groupby('query')['micros'].quantile(list(percentiles)).unstack()
    table.columns = [f"p{int(round(q * 100))}" for q in table.columns]
    return table.reset_index()


def load_verify_runs():
    df = _read("""
    SELECT
        v.id AS run_id,
        v.created_at,
        t.name AS text_name,
        v.seed,
        v.n,
        v.tau,
        v.checks,
        v.mismatches,
        v.detail
    FROM verify_runs v
    JOIN texts t ON v.text_id = t.id
    """)
    if df.empty:
        return df
    df['created_at'] = pd.to_datetime(df['created_at'])
    df['passed'] = df['mismatches'] == 0
    return df
