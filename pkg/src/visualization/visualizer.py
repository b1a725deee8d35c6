import plotly.express as px
import plotly.graph_objects as go
import pandas as pd

from visualization.data_loader import latency_percentiles


class Visualizer:
    """
    Handles generation of interactive Plotly charts for bench and verify runs.
    """

    # Theme Configuration
    THEME_COLORS = {
        'background': '#0e1117', # Streamlit dark default
        'paper': '#0e1117',
        'text': '#fafafa',
        'grid': '#333333',
    }

    MODE_COLORS = {'succinct': '#26547c', 'plain': '#ef476f'}
    PERCENTILE_COLORS = ['#26547c', '#ffd166', '#ef476f']

    PLOT_WIDTH = 1200
    PLOT_HEIGHT = 500

    def __init__(self, runs: pd.DataFrame, latencies: pd.DataFrame = None,
                 verify: pd.DataFrame = None):
        self.runs = runs
        self.latencies = latencies if latencies is not None else pd.DataFrame()
        self.verify = verify if verify is not None else pd.DataFrame()

    def _style(self, fig, y_title, height=None):
        fig.update_layout(
            paper_bgcolor=self.THEME_COLORS['paper'],
            plot_bgcolor=self.THEME_COLORS['background'],
            font_color=self.THEME_COLORS['text'],
            showlegend=True,
            legend=dict(orientation="h", yanchor="bottom", y=1.02, xanchor="right", x=1),
            width=self.PLOT_WIDTH,
            height=height or self.PLOT_HEIGHT,
            margin=dict(t=50, l=50, r=50, b=50),
            xaxis=dict(showgrid=False, title=None),
            yaxis=dict(showgrid=True, gridcolor=self.THEME_COLORS['grid'], title=y_title)
        )
        return fig

    @staticmethod
    def _filter(df, text=None, verb=None):
        if text and text != "All" and 'text_name' in df:
            df = df[df['text_name'] == text]
        if verb and verb != "All" and 'query' in df:
            df = df[df['query'] == verb]
        return df

    def plot_build_throughput(self, text: str = None):
        """
        Build throughput (symbols per second) of every bench run, coloured by
        index mode.
        """
        df = self._filter(self.runs.copy(), text)
        if df.empty:
            return None

        df['mode'] = df['fallback'].map({True: 'plain', False: 'succinct'})
        df['label'] = df.apply(
            lambda x: f"{x['text_name']} (n={x['n']}, tau={x['tau']})", axis=1
        )
        fig = px.bar(
            df,
            x='created_at',
            y='throughput',
            color='mode',
            custom_data=['label', 'build_seconds', 'index_bytes'],
            color_discrete_map=self.MODE_COLORS
        )
        fig.update_traces(
            marker_line_width=0,
            hovertemplate="<b>%{customdata[0]}</b><br>%{y:,.0f} symbols/s"
                          "<br>%{customdata[1]:.3f}s, %{customdata[2]:,} bytes<extra></extra>",
            hoverlabel=dict(bgcolor="black")
        )
        return self._style(fig, 'Symbols / Second')

    def plot_latency_percentiles(self, text: str = None, verb: str = None):
        """Grouped bars of p50/p90/p99 latency per query verb."""
        df = self._filter(self.latencies, text, verb)
        table = latency_percentiles(df)
        if table.empty:
            return None

        fig = go.Figure()
        for column, color in zip([c for c in table.columns if c != 'query'],
                                 self.PERCENTILE_COLORS):
            fig.add_trace(go.Bar(
                x=table['query'],
                y=table[column],
                name=column,
                marker=dict(color=color),
                hovertemplate=f'{column}: %{{y:.1f}} µs<extra></extra>'
            ))
        fig.update_layout(barmode='group')
        return self._style(fig, 'Latency (µs)')

    def plot_latency_distribution(self, text: str = None, verb: str = None):
        df = self._filter(self.latencies, text, verb)
        if df.empty:
            return None

        fig = px.box(df, x='query', y='micros', points=False, log_y=True)
        fig.update_traces(marker_color=self.MODE_COLORS['succinct'])
        return self._style(fig, 'Latency (µs, log scale)')

    def plot_verify_history(self, text: str = None):
        """
        Scatter of oracle checks per verify run; failed runs are drawn in red
        and sized by their mismatch count.
        """
        df = self._filter(self.verify.copy(), text)
        if df.empty:
            return None

        df['status'] = df['passed'].map({True: 'passed', False: 'failed'})
        df['size'] = df['mismatches'].clip(lower=1)
        fig = px.scatter(
            df,
            x='created_at',
            y='checks',
            color='status',
            size='size',
            custom_data=['text_name', 'n', 'tau', 'mismatches'],
            color_discrete_map={'passed': '#06d6a0', 'failed': '#ef476f'}
        )
        fig.update_traces(
            hovertemplate="<b>%{customdata[0]}</b> n=%{customdata[1]} tau=%{customdata[2]}"
                          "<br>%{y:,} checks, %{customdata[3]} mismatches<extra></extra>"
        )
        return self._style(fig, 'Oracle Checks')
