"""Plain-text tables for benchmark, importance and gradient-check results."""

from typing import Optional

from rich.console import Console
from rich.table import Table

from ..neural import GradCheckResult
from .benchmark import BenchmarkReport
from .importance import ImportanceReport
from .methods import MethodFamily


def _render(table: Table, width: int = 120) -> str:
    console = Console(width=width, color_system=None)
    with console.capture() as capture:
        console.print(table)
    return capture.get()


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4f}"


def benchmark_table(report: BenchmarkReport) -> str:
    """Cells grouped Baseline / NN-based / Mimic, followed by the diffs."""
    table = Table(title="Cross-validated AUC")
    table.add_column("Group", style="magenta")
    table.add_column("Method", style="cyan")
    table.add_column("View", style="yellow")
    table.add_column("Task", style="blue")
    table.add_column("AUC mean", justify="right")
    table.add_column("AUC std", justify="right")
    table.add_column("Folds", justify="right")

    for family in MethodFamily:
        for cell in (c for c in report.cells if c.family == family):
            table.add_row(
                family.value,
                cell.method,
                cell.view.value,
                cell.task.value,
                _fmt(cell.auc_mean) if cell.status == "ok" else "[red]failed[/red]",
                _fmt(cell.auc_std),
                str(len(cell.fold_aucs)),
            )
    text = _render(table)

    if report.diffs:
        diffs = Table(title="AUC(diff)")
        diffs.add_column("Method", style="cyan")
        diffs.add_column("Task", style="blue")
        diffs.add_column("Left")
        diffs.add_column("Right")
        diffs.add_column("Diff", justify="right")
        for d in report.diffs:
            diffs.add_row(d.method, d.task.value, d.left, d.right, f"{d.diff:+.4f}")
        text += "\n" + _render(diffs)
    return text


def importance_table(report: ImportanceReport, title: str = "Top features") -> str:
    table = Table(title=title)
    table.add_column("Rank", justify="right")
    table.add_column("Feature", style="cyan")
    table.add_column("Importance", justify="right")
    for rank, entry in enumerate(report.top_k, start=1):
        table.add_row(str(rank), entry.feature, f"{entry.score:.4f}")
    return _render(table)


def gradcheck_table(result: GradCheckResult) -> str:
    """Per-tensor relative errors, worst first."""
    table = Table(title=f"Gradient check ({result.kind.value})")
    table.add_column("Parameter", style="cyan")
    table.add_column("Max relative error", justify="right")
    for name, error in sorted(result.per_parameter.items(), key=lambda kv: -kv[1]):
        table.add_row(name, f"{error:.3e}")
    return _render(table)
