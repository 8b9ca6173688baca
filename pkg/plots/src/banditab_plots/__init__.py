"""Figure rendering for banditab experiment CSVs."""

from .figures import (
    FigureSpec,
    PlotInputError,
    diverging_colors,
    heatmap_grid,
    read_rows,
    render_heatmap,
    render_lines,
)

__version__ = "0.1.0"
