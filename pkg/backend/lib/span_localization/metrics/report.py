"""
Report rendering: aligned text tables for people, `metric<TAB>value` lines
for scripts.
"""

from typing import List, Optional, Sequence, Tuple

from .evaluation import EvalReport, RobustnessRow


def _fmt(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.6f}"


def format_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Left-aligned first column, right-aligned others, two-space gutters."""
    widths = [max(len(str(cell)) for cell in column) for column in zip(header, *rows)]
    lines = []
    for line_cells in [header, *rows]:
        cells = [
            str(cell).ljust(width) if i == 0 else str(cell).rjust(width)
            for i, (cell, width) in enumerate(zip(line_cells, widths))
        ]
        lines.append("  ".join(cells).rstrip())
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"


def report_metrics(report: EvalReport) -> List[Tuple[str, str]]:
    """Flat (metric, value) pairs in a fixed order."""
    items = [
        ("samples", str(report.sample_count)),
        ("pixel_auc", _fmt(report.pixel_auc)),
        ("threshold", f"{report.threshold:g}"),
        ("precision", _fmt(report.precision)),
        ("recall", _fmt(report.recall)),
        ("f1", _fmt(report.f1)),
    ]
    if report.sweep_threshold is not None:
        items.append(("sweep_threshold", f"{report.sweep_threshold:g}"))
        items.append(("sweep_f1", _fmt(report.sweep_f1)))
    for kind, score in report.per_type.items():
        items.append((f"{kind}.samples", str(score.samples)))
        items.append((f"{kind}.pixel_auc", _fmt(score.pixel_auc)))
        items.append((f"{kind}.f1", _fmt(score.f1)))
    return items


def format_report_text(report: EvalReport, robustness: Optional[Sequence[RobustnessRow]] = None) -> str:
    text = format_table(["metric", "value"], report_metrics(report))
    if report.per_type:
        text += "\n" + format_table(
            ["type", "samples", "pixel_auc", "f1"],
            [[kind, str(s.samples), _fmt(s.pixel_auc), _fmt(s.f1)] for kind, s in report.per_type.items()],
        )
    if robustness:
        text += "\n" + format_robustness_text(robustness)
    return text


def format_robustness_text(rows: Sequence[RobustnessRow]) -> str:
    return format_table(["transform", "pixel_auc", "f1"], [[r.transform, _fmt(r.pixel_auc), _fmt(r.f1)] for r in rows])


def format_report_lines(report: EvalReport, robustness: Optional[Sequence[RobustnessRow]] = None) -> str:
    """Machine-readable `metric<TAB>value` lines."""
    items = report_metrics(report)
    for row in robustness or ():
        items.append((f"robustness.{row.transform}.pixel_auc", _fmt(row.pixel_auc)))
        items.append((f"robustness.{row.transform}.f1", _fmt(row.f1)))
    return "".join(f"{metric}\t{value}\n" for metric, value in items)
