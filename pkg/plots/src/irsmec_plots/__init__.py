"""PNG rendering for the irsmec figure dataset CSVs."""

__version__ = "0.1.0"

from .render import PlotJob, RenderResult, render, render_all  # noqa: F401
from .schema import FIGURE_COLUMNS, SchemaError, read_dataset  # noqa: F401
