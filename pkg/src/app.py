import streamlit as st
import pandas as pd

# Add src to path
import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from config import DATA_DIR
from database import init_db
from main import run_bench
from visualization.data_loader import load_bench_runs, load_latencies, load_verify_runs
from visualization.visualizer import Visualizer

# --- Config ---
st.set_page_config(
    page_title="synidx Runs",
    page_icon="🔎",
    layout="wide"
)

if "db_ready" not in st.session_state:
    init_db()
    st.session_state["db_ready"] = True

# --- Load Data ---
@st.cache_data
def get_data():
    return load_bench_runs(), load_latencies(), load_verify_runs()

# --- Sidebar ---
st.sidebar.title("synidx Runs")

text_files = sorted(
    f for f in os.listdir(DATA_DIR)
    if os.path.isfile(os.path.join(DATA_DIR, f)) and not f.startswith('.')
) if os.path.isdir(DATA_DIR) else []

with st.sidebar.expander("⏱️ Quick Bench", expanded=not text_files):
    if text_files:
        bench_file = st.selectbox("Text file (in data/)", text_files)
        bench_queries = st.number_input("Queries", min_value=10, max_value=100_000, value=1000, step=100)
        bench_threads = st.number_input("Threads", min_value=1, max_value=32, value=1)
        if st.button("Run Bench"):
            with st.status("Building and querying...", expanded=True) as status:
                try:
                    summary, table = run_bench(os.path.join(DATA_DIR, bench_file),
                                               int(bench_queries), int(bench_threads))
                    st.cache_data.clear()
                    status.update(label=f"Bench done ({summary['build_seconds']:.2f}s build)",
                                  state="complete", expanded=False)
                    st.rerun()
                except Exception as e:
                    status.update(label="Bench failed", state="error")
                    st.error(f"Error: {e}")
    else:
        st.info(f"Drop text files into {DATA_DIR} to benchmark them.")

st.sidebar.markdown("---")

try:
    runs, latencies, verify = get_data()
except Exception as e:
    st.error(f"Error loading data: {e}")
    st.stop()

if runs.empty and verify.empty:
    st.warning("No runs found in database. Run `python src/main.py bench <file>` or `verify --record` first.")
    st.stop()

viz = Visualizer(runs, latencies, verify)

# Text Filter
names = set(runs['text_name']) if not runs.empty else set()
names |= set(verify['text_name']) if not verify.empty else set()
selected_text = st.sidebar.selectbox("Text", ["All"] + sorted(names), index=0)

# Verb Filter
verbs = sorted(latencies['query'].unique().tolist()) if not latencies.empty else []
selected_verb = st.sidebar.selectbox("Query", ["All"] + verbs, index=0)

# --- Main Dashboard ---
st.title("🔎 Index Benchmarks")

filter_summary = f"**Text:** {selected_text}"
if selected_verb != "All":
    filter_summary += f" • **Query:** {selected_verb}"
st.markdown(f"Displaying runs for: {filter_summary}")

# KPI Row
filtered = runs if selected_text == "All" or runs.empty else runs[runs['text_name'] == selected_text]
col1, col2, col3 = st.columns(3)
if not filtered.empty:
    latest = filtered.sort_values('created_at').iloc[-1]
    col1.metric("Latest Build", f"{latest['build_seconds']:.2f}s")
    col2.metric("Throughput", f"{latest['throughput'] / 1e6:.2f} M symbols/s")
    col3.metric("Index Size", f"{latest['bits_per_symbol']:.1f} bits/symbol")
else:
    col1.metric("Latest Build", "N/A")
    col2.metric("Throughput", "N/A")
    col3.metric("Index Size", "N/A")

st.markdown("---")

# --- Visualizations ---

st.subheader("Build Throughput")
fig = viz.plot_build_throughput(text=selected_text)
if fig:
    st.plotly_chart(fig, use_container_width=True)
else:
    st.info("No bench runs for this selection.")

st.subheader("Query Latency Percentiles")
fig = viz.plot_latency_percentiles(text=selected_text, verb=selected_verb)
if fig:
    st.plotly_chart(fig, use_container_width=True)
else:
    st.info("No latencies for this selection.")

st.subheader("Latency Distribution")
fig = viz.plot_latency_distribution(text=selected_text, verb=selected_verb)
if fig:
    st.plotly_chart(fig, use_container_width=True)
else:
    st.info("No latencies for this selection.")

st.subheader("Verification History")
fig = viz.plot_verify_history(text=selected_text)
if fig:
    st.plotly_chart(fig, use_container_width=True)
    failed = verify[~verify['passed']] if not verify.empty else pd.DataFrame()
    if not failed.empty and st.checkbox("Show failed runs"):
        st.dataframe(failed[['created_at', 'text_name', 'n', 'tau', 'mismatches', 'detail']])
else:
    st.info("No verify runs for this selection.")
