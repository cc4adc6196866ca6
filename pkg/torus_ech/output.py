"""Output records and renderers for the torus-ech CLI.

Every command builds one OutputRecord and hands it to emit(), which renders it as TSV,
JSON or a Markdown table on stdout. Cell values inside a record are JSON-native: integers,
strings ("num/den" for rationals, "r+cδ" for perturbed values), None, or the powers dict of a
generator.

Provides:
  - ExitCode: stable process exit codes
  - OutputRecord: the pydantic model behind --format json and the schema command
  - generator_cell / rational_cell / perturbed_cell: row value builders
  - render_tsv / render_json / render_md: record renderers
  - resolve_format: --format flag, then ECH_FORMAT, then tsv
  - emit: render and echo a record
"""

import json
from fractions import Fraction
from typing import Any, Iterable, Sequence

import click
from pydantic import BaseModel, Field

from torus_ech.config import DEFAULT_FORMAT, OUTPUT_FORMATS
from torus_ech.core.exact import PerturbedLike, format_perturbed, format_rational
from torus_ech.core.orbits import ORBIT_ORDER, ReebCurrent
from torus_ech.core.reports import VerificationReport
from torus_ech.errors import RejectedInputError

FORMAT_VERSION = "1"


class ExitCode:
    """Process exit codes of the CLI."""

    SUCCESS = 0
    VERIFICATION_FAILED = 1
    USAGE_ERROR = 2

    @classmethod
    def is_success(cls, code: int) -> bool:
        return code == cls.SUCCESS

    @classmethod
    def from_reports(cls, reports: Iterable[VerificationReport]) -> int:
        """VERIFICATION_FAILED if any report failed, SUCCESS otherwise."""
        if all(report.passed for report in reports):
            return cls.SUCCESS
        return cls.VERIFICATION_FAILED


class OutputRecord(BaseModel):
    """One command result.

    Field order is the serialization order.
    """

    format_version: str = Field(default=FORMAT_VERSION, description="record layout version")
    command: str = Field(description="command name, e.g. gens")
    params: dict[str, Any] = Field(default_factory=dict, description="parameters as resolved")
    rows: list[dict[str, Any]] = Field(default_factory=list, description="table rows in order")


# =============================================================================
# Cell builders
# =============================================================================


def generator_cell(current: ReebCurrent) -> dict[str, int | None]:
    """{"b": B, "h": H, "e": E} with zero powers as None."""
    return current.powers()


def rational_cell(value: Fraction | int) -> str:
    return format_rational(value)


def perturbed_cell(value: PerturbedLike) -> str:
    return format_perturbed(value)


def _is_powers(value: Any) -> bool:
    return isinstance(value, dict) and set(value) == {orbit.value for orbit in ORBIT_ORDER}


def format_cell(value: Any) -> str:
    """Text form of one cell for TSV and Markdown."""
    if value is None:
        return ""
    if _is_powers(value):
        return ReebCurrent(*(value[orbit.value] or 0 for orbit in ORBIT_ORDER)).render()
    return str(value)


# =============================================================================
# Renderers
# =============================================================================


def _columns(record: OutputRecord, columns: Sequence[str] | None) -> list[str]:
    if columns:
        return list(columns)
    return list(record.rows[0]) if record.rows else []


def render_tsv(record: OutputRecord, columns: Sequence[str] | None = None) -> str:
    """Header line of column names, then one tab-separated line per row."""
    names = _columns(record, columns)
    lines = ["\t".join(names)]
    lines.extend("\t".join(format_cell(row.get(name)) for name in names) for row in record.rows)
    return "\n".join(lines)


def render_json(record: OutputRecord) -> str:
    """Canonical JSON: fixed field order, two-space indent, UTF-8 preserved."""
    return json.dumps(record.model_dump(mode="json"), ensure_ascii=False, indent=2)


def render_md(record: OutputRecord, columns: Sequence[str] | None = None) -> str:
    """Pipe table with a |---| rule under the header."""
    names = _columns(record, columns)
    lines = [
        "| " + " | ".join(names) + " |",
        "|" + "|".join("---" for _ in names) + "|",
    ]
    for row in record.rows:
        lines.append("| " + " | ".join(format_cell(row.get(name)) for name in names) + " |")
    return "\n".join(lines)


def resolve_format(flag: str | None, default: str = DEFAULT_FORMAT) -> str:
    """The --format flag wins over the configured default.

    Raises:
        RejectedInputError: if the chosen format is unknown
    """
    chosen = (flag or default).strip().lower()
    if chosen not in OUTPUT_FORMATS:
        raise RejectedInputError(f"format must be one of {', '.join(OUTPUT_FORMATS)}")
    return chosen


def render(record: OutputRecord, output_format: str, columns: Sequence[str] | None = None) -> str:
    if output_format == "json":
        return render_json(record)
    if output_format == "md":
        return render_md(record, columns)
    return render_tsv(record, columns)


def emit(record: OutputRecord, output_format: str, columns: Sequence[str] | None = None):
    """Echo the rendered record to stdout."""
    click.echo(render(record, output_format, columns))
