"""Static figure regeneration for tritronquee run directories."""

from .render import FIGURE_IDS, FigureSpec, RenderError, render

__all__ = ["FIGURE_IDS", "FigureSpec", "RenderError", "render"]
