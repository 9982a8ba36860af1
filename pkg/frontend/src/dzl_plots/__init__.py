"""dzl-plots: figure generation from dzl report files.

Consumes only the emitted report.json (schema "dzl-report-1"); no
mathematics is recomputed here beyond drawing closed-form reference curves
from constants echoed in the report config.
"""

from .render import ReportFile, load_report, render

__version__ = "0.1.0"
