"""
Plotting functions for lambda sweep tables.
"""

from pathlib import Path
from typing import Dict, Optional, Union

import plotly.graph_objects as go
from plotly.subplots import make_subplots

from .base import BasePlotter


class SweepPlotter(BasePlotter):
    """Dictionary size and representation cost against lambda."""

    required_columns = ("lambda", "dictionary_size", "mean_representation_cost")

    @property
    def title(self) -> str:
        return "Lambda Sweep"

    def get_subplot_descriptions(self) -> Dict[str, str]:
        return {
            "Dictionary Size": "Number of selected pathlets, averaged over seeds. Larger lambda weighs "
            "representation cost more, so the dictionary grows.",
            "Representation Cost": "Mean number of pathlets needed per covered trajectory. It falls as "
            "lambda grows and longer pathlets are kept.",
        }

    def create_visualization(self, save_path: Optional[Union[str, Path]] = None) -> go.Figure:
        table = self.table.sort_values("lambda")
        fig = make_subplots(rows=1, cols=2, subplot_titles=("Dictionary Size", "Representation Cost"))
        fig.add_trace(
            go.Scatter(x=table["lambda"], y=table["dictionary_size"], mode="lines+markers", name="Dictionary size"),
            row=1,
            col=1,
        )
        fig.add_trace(
            go.Scatter(
                x=table["lambda"],
                y=table["mean_representation_cost"],
                mode="lines+markers",
                name="Representation cost",
            ),
            row=1,
            col=2,
        )
        fig.update_xaxes(type="log", title_text="lambda")
        fig.update_layout(title_text=self.title, showlegend=False)

        if save_path:
            self.save_html(fig, save_path)
        return fig
