"""Figure rendering for rigepi experiment CSVs.

Consumes only the CSV/JSON artifacts written by the rigepi CLI; never calls
into the simulation package itself.
"""

from .render import (
    CsvFormatError,
    FigureSpec,
    render_diagnostics,
    render_figure1,
)

__version__ = "0.1.0"

__all__ = [
    "CsvFormatError",
    "FigureSpec",
    "render_diagnostics",
    "render_figure1",
]
