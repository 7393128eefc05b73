"""
Plotting functions for partial reconstruction tables.
"""

from pathlib import Path
from typing import Dict, Optional, Union

import plotly.graph_objects as go
from plotly.subplots import make_subplots

from .base import BasePlotter


class CurvePlotter(BasePlotter):
    """Uncover ratio and cost when only the most used pathlets are kept."""

    required_columns = ("keep_fraction", "uncover_ratio", "mean_cost")

    @property
    def title(self) -> str:
        return "Partial Reconstruction"

    def get_subplot_descriptions(self) -> Dict[str, str]:
        return {
            "Uncover Ratio": "Share of trajectory edges that cannot be reconstructed when only the given "
            "fraction of pathlets, ranked by usage, is kept.",
            "Mean Cost": "Mean representation cost over the trajectories that remain fully covered.",
        }

    def create_visualization(self, save_path: Optional[Union[str, Path]] = None) -> go.Figure:
        table = self.table.sort_values("keep_fraction")
        fig = make_subplots(rows=1, cols=2, subplot_titles=("Uncover Ratio", "Mean Cost"))
        fig.add_trace(
            go.Scatter(x=table["keep_fraction"], y=table["uncover_ratio"], mode="lines+markers", name="Uncover ratio"),
            row=1,
            col=1,
        )
        fig.add_trace(
            go.Bar(x=table["keep_fraction"], y=table["mean_cost"], name="Mean cost"),
            row=1,
            col=2,
        )
        fig.update_xaxes(title_text="keep fraction")
        fig.update_layout(title_text=self.title, showlegend=False)

        if save_path:
            self.save_html(fig, save_path)
        return fig
