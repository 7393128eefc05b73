"""
Shared plumbing for charts drawn from evaluation tables.
"""

import html
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, Optional, Union

import pandas as pd
import plotly.graph_objects as go

EXPLANATION_STYLE = "font-family: sans-serif; padding: 20px; margin: 20px; border: 1px solid #ddd; border-radius: 5px;"


class BasePlotter(ABC):
    """
    Charts one table written by an evaluation harness.

    Subclasses name the columns they read in ``required_columns``; the table is checked
    against them on construction.
    """

    required_columns: tuple = ()

    def __init__(self, table: pd.DataFrame):
        missing = [c for c in self.required_columns if c not in table.columns]
        if missing:
            raise ValueError(f"{type(self).__name__} needs columns: {', '.join(missing)}")
        self.table = table

    @property
    @abstractmethod
    def title(self) -> str:
        pass

    @abstractmethod
    def get_subplot_descriptions(self) -> Dict[str, str]:
        """Subplot title to a sentence explaining how to read it."""

    @abstractmethod
    def create_visualization(self, save_path: Optional[Union[str, Path]] = None) -> go.Figure:
        """Build the figure; with ``save_path`` it is also written as standalone HTML."""

    def explanation_html(self) -> str:
        sections = "".join(
            f'<h3 style="color: #333;">{html.escape(name)}</h3><p style="color: #555;">{html.escape(text)}</p>'
            for name, text in self.get_subplot_descriptions().items()
        )
        return f'<div style="{EXPLANATION_STYLE}"><h2>Chart Explanations</h2>{sections}</div>' if sections else ""

    def save_html(self, fig: go.Figure, save_path: Union[str, Path]) -> None:
        page = fig.to_html(full_html=True, include_plotlyjs="cdn")
        extra = self.explanation_html()
        page = page.replace("</body>", extra + "</body>") if "</body>" in page else page + extra
        Path(save_path).write_text(page, encoding="utf-8")
