"""File formats: Touchstone S-parameters, measured port tables, CSV/SVG export."""

from .measured import MeasuredPortTable, parse_measured_table, serialize_measured_table
from .touchstone import export_touchstone, import_touchstone

__all__ = [
    "MeasuredPortTable",
    "parse_measured_table",
    "serialize_measured_table",
    "export_touchstone",
    "import_touchstone",
]
