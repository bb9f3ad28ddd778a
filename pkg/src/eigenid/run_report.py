import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from .constants import REPORT_VERSION

OUTCOMES = ("pass", "fail", "error")


@dataclass
class ReportTable:
    """Rows of equal length under named columns."""

    columns: Sequence[str]
    rows: List[Sequence[Any]] = field(default_factory=list)

    def add_row(self, *values):
        """Append one row, it must match the columns."""
        if len(values) != len(self.columns):
            raise ValueError(
                f"row has {len(values)} values, table has {len(self.columns)} columns"
            )
        self.rows.append(values)


@dataclass
class RunReport:
    """Outcome of one command run, rendered as key-value text or as JSON.

    Nothing that changes between runs (time, host, absolute paths that were not given)
    ends up in a report, so the rendering is byte-deterministic for fixed inputs.
    """

    command: str
    input: str
    outcome: str = "pass"
    tolerances: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, ReportTable] = field(default_factory=dict)
    message: Optional[str] = None

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome '{self.outcome}'")

    def to_dict(self) -> dict:
        """Plain dict with the fields in rendering order."""
        report = {
            "report_version": REPORT_VERSION,
            "command": self.command,
            "input": self.input,
            "outcome": self.outcome,
        }
        if self.message is not None:
            report["message"] = self.message
        report["tolerances"] = dict(self.tolerances)
        report["results"] = dict(self.results)
        report["tables"] = {
            name: {
                "columns": list(table.columns),
                "rows": [list(row) for row in table.rows],
            }
            for name, table in self.tables.items()
        }
        return report

    def to_json(self) -> str:
        """Render the report as indented JSON, with a trailing newline."""
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        """Render the report as line oriented text.

        Scalars become "key: value" lines, tables follow their "[name]" header with a
        line of column names and one whitespace separated line per row.
        """
        lines = [
            f"report_version: {REPORT_VERSION}",
            f"command: {self.command}",
            f"input: {self.input}",
            f"outcome: {self.outcome}",
        ]
        if self.message is not None:
            lines.append(f"message: {self.message}")

        for section, values in (
            ("tolerances", self.tolerances),
            ("results", self.results),
        ):
            if values:
                lines.append(f"[{section}]")
                lines.extend(f"{key}: {format_value(v)}" for key, v in values.items())

        for name, table in self.tables.items():
            lines.append(f"[{name}]")
            lines.append(" ".join(table.columns))
            lines.extend(" ".join(format_value(v) for v in row) for row in table.rows)

        return "\n".join(lines) + "\n"


def format_value(value) -> str:
    """Text form of a report value, floats in their shortest round-trip form."""
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))
    return str(value)
