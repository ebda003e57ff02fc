"""Rich output helpers and JSON output schemas for consistent CLI UX."""

from typing import Any, Literal

from pydantic import BaseModel
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from ..finker import FinKernel
from ..laws import LawReport
from ..proker import LevelDifference
from ..rationals import format_rational


def print_success(message: str, console: Console) -> None:
    """Print a success message with green checkmark.

    Example:
        >>> print_success("equal up to depth 3", Console())
        ✓ equal up to depth 3
    """
    console.print(f"[green]✓[/green] {escape(message)}", soft_wrap=True)


def print_error(message: str, console: Console) -> None:
    """Print an error message with red X.

    Example:
        >>> print_error("Program file not found: coins.yaml", Console())
        ✗ Program file not found: coins.yaml
    """
    console.print(f"[red]✗[/red] {escape(message)}", highlight=False, soft_wrap=True)


def print_plain(text: str, console: Console) -> None:
    """Print exact text (matrices, rationals) without markup, highlighting or wrapping."""
    console.print(text, markup=False, highlight=False, soft_wrap=True)


def print_law_reports(reports: list[LawReport], console: Console) -> None:
    """Print one row per suite, then the witnesses of every failing suite."""
    table = Table(show_header=True, header_style="bold", show_edge=False)
    table.add_column("Suite", style="cyan")
    table.add_column("Cases", justify="right")
    table.add_column("Result")
    for report in reports:
        result = "[green]pass[/green]" if report.passed else "[red]FAIL[/red]"
        table.add_row(report.name, str(report.cases), result)
    console.print(table)
    for report in reports:
        for failure in report.failures:
            console.print(f"[red]{report.name}[/red] {escape(failure)}", highlight=False)


# JSON Output Schemas


class WitnessJson(BaseModel):
    """The first differing entry: level, row, column and both values."""

    level: int
    row: int
    column: int
    left: str
    right: str


class EvalOutputJson(BaseModel):
    """JSON output for the eval command."""

    status: Literal["success", "error"]
    term: str | None = None
    depth: int | None = None
    dom: str | None = None
    cod: str | None = None
    matrix: list[list[str]] | None = None
    errors: list[str] | None = None


class CheckOutputJson(BaseModel):
    """JSON output for check-eq and check-det."""

    status: Literal["success", "failure", "error"]
    check: Literal["equality", "determinism"]
    depth: int | None = None
    holds: bool | None = None
    witness: WitnessJson | None = None
    errors: list[str] | None = None


class ConditionalOutputJson(BaseModel):
    """JSON output for the conditional command."""

    status: Literal["success", "failure", "error"]
    term: str | None = None
    depth: int | None = None
    given: str | None = None
    target: str | None = None
    reconstructs: bool | None = None
    output_path: str | None = None
    levels: list[list[list[str]]] | None = None
    errors: list[str] | None = None


class MeasureOutputJson(BaseModel):
    """JSON output for the measure command."""

    status: Literal["success", "error"]
    state: str | None = None
    clopen: str | None = None
    measure: str | None = None
    errors: list[str] | None = None


class SuiteJson(BaseModel):
    """One law suite in the axioms report."""

    name: str
    cases: int
    passed: bool
    failures: list[str]


class AxiomsOutputJson(BaseModel):
    """JSON output for the axioms command."""

    status: Literal["success", "failure", "error"]
    seed: int | None = None
    cases: int | None = None
    max_size: int | None = None
    depth: int | None = None
    suites: list[SuiteJson] | None = None
    errors: list[str] | None = None


class SampleOutputJson(BaseModel):
    """JSON output for the sample command; ``frequency`` is the one float in any output."""

    status: Literal["success", "error"]
    state: str | None = None
    depth: int | None = None
    seed: int | None = None
    count: int | None = None
    counts: dict[str, int] | None = None
    clopen: str | None = None
    hits: int | None = None
    frequency: float | None = None
    exact: str | None = None
    errors: list[str] | None = None


def matrix_json(kernel: FinKernel) -> list[list[str]]:
    """Rows of "p/q" strings."""
    return [[format_rational(v) for v in row] for row in kernel.entries]


def witness_json(diff: LevelDifference | None) -> WitnessJson | None:
    if diff is None:
        return None
    return WitnessJson(
        level=diff.level,
        row=diff.row,
        column=diff.column,
        left=format_rational(diff.left),
        right=format_rational(diff.right),
    )


def suite_json(report: LawReport) -> SuiteJson:
    return SuiteJson(
        name=report.name, cases=report.cases, passed=report.passed, failures=report.failures
    )


def output_json(data: BaseModel | dict[str, Any], console: Console) -> None:
    """Output JSON data to console with pretty formatting.

    Example:
        >>> output_json(MeasureOutputJson(status="success", measure="1/8"), Console())
    """
    if isinstance(data, BaseModel):
        json_data = data.model_dump(mode="json", exclude_none=True)
    else:
        json_data = data
    console.print_json(data=json_data)
