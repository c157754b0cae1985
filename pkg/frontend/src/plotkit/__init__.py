"""Figure rendering for isacsim sweep results."""

from .figures import FigureSpec, load_results, render, render_heatmap, render_lines

__version__ = "0.1.0"
