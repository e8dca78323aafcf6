"""Comparison tables, report serialization and SVG alert timelines.

Tables render metric values to three decimals and show an em dash for
Undefined values so that a missing denominator never masquerades as a score
of zero. Timelines widen sub-threshold alarms to a configurable minimum
width so that short alarms stay visible at screen resolution; widened lanes
are flagged in the metadata and detectors can be exempted (for a coin-flip
detector, widening would paint the whole lane solid).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable
from xml.sax.saxutils import escape

from .model import (
    AlertKind,
    AlertSeries,
    EvaluationError,
    LabeledSeries,
    MetricReport,
    MetricValue,
    ParameterError,
    alerts_to_intervals,
    extract_scenarios,
)

UNDEFINED_CELL = "—"


def format_cell(value: MetricValue | None, decimals: int = 3) -> str:
    """Display form of one table cell: dash, integer count or fixed decimals."""
    if value is None or value.value is None:
        return UNDEFINED_CELL
    if value.exact is not None and value.exact.denominator == 1:
        return str(value.exact.numerator)
    return f"{value.value:.{decimals}f}"


@dataclass(frozen=True)
class ComparisonTable:
    """Detectors as rows, metric display names as columns, one dataset."""

    dataset: str
    columns: tuple[str, ...]
    detectors: tuple[str, ...]
    cells: tuple[tuple[MetricValue | None, ...], ...]
    rank_by: str | None = None

    def to_markdown(self, decimals: int = 3) -> str:
        header = ["detector", *self.columns]
        lines = [
            "| " + " | ".join(header) + " |",
            "| " + " | ".join("---" for _ in header) + " |",
        ]
        for detector, row in zip(self.detectors, self.cells):
            rendered = [detector, *(format_cell(value, decimals) for value in row)]
            lines.append("| " + " | ".join(rendered) + " |")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        """Machine-readable form: full-precision floats, empty cell if undefined."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["detector", *self.columns])
        for detector, row in zip(self.detectors, self.cells):
            rendered = [
                "" if value is None or value.value is None else repr(value.value)
                for value in row
            ]
            writer.writerow([detector, *rendered])
        return buffer.getvalue()

    def to_json(self) -> str:
        rows = []
        for detector, row in zip(self.detectors, self.cells):
            values: dict[str, float | None] = {}
            exact: dict[str, str] = {}
            for column, value in zip(self.columns, row):
                values[column] = None if value is None else value.value
                if value is not None and value.exact is not None:
                    exact[column] = str(value.exact)
            rows.append({"detector": detector, "values": values, "exact": exact})
        payload = {
            "dataset": self.dataset,
            "columns": list(self.columns),
            "rank_by": self.rank_by,
            "rows": rows,
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"

    def render(self, fmt: str, decimals: int = 3) -> str:
        if fmt == "md":
            return self.to_markdown(decimals)
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ParameterError(f"unknown table format {fmt!r}; expected csv, md or json")


def build_table(reports: Iterable[MetricReport], rank_by: str | None = None) -> ComparisonTable:
    """Merge per-detector reports from one dataset into a comparison table.

    Column order follows first appearance; row order is input order. With
    ``rank_by``, rows are sorted descending on that column and rows where it
    is Undefined sink to the bottom.
    """
    reports = list(reports)
    if not reports:
        raise EvaluationError("nothing to compare: no reports given")
    datasets = {report.dataset for report in reports}
    if len(datasets) > 1:
        raise EvaluationError(
            "cannot compare across datasets: " + ", ".join(sorted(datasets))
        )
    detectors = [report.detector for report in reports]
    if len(set(detectors)) != len(detectors):
        dupes = sorted({d for d in detectors if detectors.count(d) > 1})
        raise EvaluationError(f"duplicate detector names: {', '.join(dupes)}")

    columns: list[str] = []
    for report in reports:
        for metric in report.metrics:
            if metric.display_name not in columns:
                columns.append(metric.display_name)

    if rank_by is not None:
        if rank_by not in columns:
            raise ParameterError(
                f"rank-by metric {rank_by!r} is not in the table; "
                f"columns: {', '.join(columns)}"
            )

        def key(report: MetricReport) -> tuple[bool, float]:
            value = report.get(rank_by)
            if value is None or value.value is None:
                return (True, 0.0)
            return (False, -value.value)

        reports.sort(key=key)

    cells = tuple(
        tuple(report.get(column) for column in columns) for report in reports
    )
    return ComparisonTable(
        dataset=reports[0].dataset,
        columns=tuple(columns),
        detectors=tuple(report.detector for report in reports),
        cells=cells,
        rank_by=rank_by,
    )


def report_to_dict(report: MetricReport) -> dict:
    """JSON-ready form of one detector's full report."""
    metrics = []
    for value in report.metrics:
        entry: dict[str, object] = {
            "name": value.name,
            "display_name": value.display_name,
            "value": value.value,
        }
        if value.params:
            entry["params"] = dict(value.params)
        if value.exact is not None:
            entry["exact"] = str(value.exact)
        metrics.append(entry)
    scenarios = []
    for detail in report.scenario_details:
        scenario = detail.scenario
        scenarios.append(
            {
                "start_time": scenario.start_time,
                "end_time": scenario.end_time,
                "attack_type": scenario.attack_type,
                "detected": detail.detected,
                "first_alert_time": detail.first_alert_time,
                "delay_ticks": detail.delay_ticks,
            }
        )
    return {
        "dataset": report.dataset,
        "detector": report.detector,
        "tick_seconds": float(report.tick_seconds),
        "tick_seconds_exact": str(report.tick_seconds),
        "metrics": metrics,
        "scenarios": scenarios,
    }


def report_to_json(report: MetricReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


@dataclass(frozen=True)
class TimelineLane:
    """One horizontal band of the timeline and what was drawn in it."""

    name: str
    kind: str
    true_spans: tuple[tuple[float, float], ...]
    drawn_spans: tuple[tuple[float, float], ...]
    widened: tuple[bool, ...]


@dataclass(frozen=True)
class TimelineRendering:
    svg: str
    lanes: tuple[TimelineLane, ...]
    min_width_ticks: float

    def save(self, path: Path | str) -> None:
        Path(path).write_text(self.svg, encoding="utf-8")


def _widen(
    spans: list[tuple[float, float]],
    min_width: float,
    lo: float,
    hi: float,
) -> tuple[list[tuple[float, float]], list[bool]]:
    drawn: list[tuple[float, float]] = []
    widened: list[bool] = []
    for start, end in spans:
        width = end - start
        if width >= min_width:
            drawn.append((start, end))
            widened.append(False)
            continue
        center = (start + end) / 2.0
        new_start = max(lo, center - min_width / 2.0)
        new_end = min(hi, new_start + min_width)
        new_start = max(lo, new_end - min_width)
        drawn.append((new_start, new_end))
        widened.append(True)
    return drawn, widened


_GT_COLOR = "#c0392b"
_ALERT_COLOR = "#2e6da4"
_WIDENED_COLOR = "#7aa6d2"


def render_timeline(
    series: LabeledSeries,
    alerts: list[AlertSeries],
    min_width_ticks: float | int | Fraction = 0,
    exempt: Iterable[str] = (),
) -> TimelineRendering:
    """Draw ground truth plus one lane per detector as an SVG timeline.

    Alert runs narrower than ``min_width_ticks`` are drawn centered at that
    minimum width (clipped to the series span); the ground-truth lane and
    detectors named in ``exempt`` always show true widths. The output string
    depends only on the inputs, so identical calls produce identical bytes.
    """
    min_width = float(min_width_ticks)
    if min_width < 0:
        raise ParameterError("min_width_ticks must be non-negative")
    exempt_names = set(exempt)
    for alert_series in alerts:
        if alert_series.kind is not AlertKind.BOOLEAN:
            raise EvaluationError(
                f"timeline requires boolean alerts; detector "
                f"'{alert_series.detector}' produced scores"
            )
    names = [a.detector for a in alerts]
    if len(set(names)) != len(names):
        raise EvaluationError("duplicate detector names in timeline")
    unknown_exempt = exempt_names - set(names)
    if unknown_exempt:
        raise ParameterError(
            "exempt names not among the detectors: " + ", ".join(sorted(unknown_exempt))
        )

    t0 = float(series.timestamps[0])
    t1 = float(series.timestamps[-1]) + 1.0

    def spans_of(intervals: list[tuple[int, int]]) -> list[tuple[float, float]]:
        ts = series.timestamps
        return [(float(ts[i]), float(ts[j]) + 1.0) for i, j in intervals]

    lanes: list[TimelineLane] = []
    gt_spans = spans_of(
        [(s.start_index, s.end_index) for s in extract_scenarios(series)]
    )
    lanes.append(
        TimelineLane(
            name="ground truth",
            kind="labels",
            true_spans=tuple(gt_spans),
            drawn_spans=tuple(gt_spans),
            widened=tuple(False for _ in gt_spans),
        )
    )
    for alert_series in alerts:
        true_spans = spans_of(alerts_to_intervals(alert_series, series))
        if alert_series.detector in exempt_names:
            drawn, widened = list(true_spans), [False] * len(true_spans)
        else:
            drawn, widened = _widen(true_spans, min_width, t0, t1)
        lanes.append(
            TimelineLane(
                name=alert_series.detector,
                kind="alerts",
                true_spans=tuple(true_spans),
                drawn_spans=tuple(drawn),
                widened=tuple(widened),
            )
        )

    margin_left, margin_right = 160.0, 20.0
    lane_height, lane_gap = 26.0, 8.0
    top, bottom = 42.0, 28.0
    plot_width = 720.0
    width = margin_left + plot_width + margin_right
    height = top + len(lanes) * (lane_height + lane_gap) + bottom
    scale = plot_width / (t1 - t0)

    def x(t: float) -> float:
        return margin_left + (t - t0) * scale

    parts: list[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">'
    )
    parts.append(
        '<style>text { font-family: monospace; font-size: 12px; fill: #222; }</style>'
    )
    parts.append(f'<rect x="0" y="0" width="{width:.0f}" height="{height:.0f}" fill="#ffffff"/>')
    title = f"{series.name} (1 tick = {series.tick_seconds}s)"
    parts.append(f'<text x="{margin_left:.1f}" y="20">{escape(title)}</text>')
    axis_y = top - 6.0
    parts.append(
        f'<line x1="{x(t0):.2f}" y1="{axis_y:.2f}" x2="{x(t1):.2f}" y2="{axis_y:.2f}" '
        'stroke="#999" stroke-width="1"/>'
    )
    parts.append(f'<text x="{x(t0):.2f}" y="{axis_y - 4:.2f}">{series.timestamps[0]}</text>')
    end_label = str(int(series.timestamps[-1]) + 1)
    parts.append(
        f'<text x="{x(t1):.2f}" y="{axis_y - 4:.2f}" text-anchor="end">{end_label}</text>'
    )

    for row, lane in enumerate(lanes):
        lane_top = top + row * (lane_height + lane_gap)
        label_y = lane_top + lane_height / 2.0 + 4.0
        parts.append(
            f'<rect x="{margin_left:.1f}" y="{lane_top:.2f}" width="{plot_width:.1f}" '
            f'height="{lane_height:.1f}" fill="#f4f4f4"/>'
        )
        parts.append(f'<text x="8" y="{label_y:.2f}">{escape(lane.name)}</text>')
        base_color = _GT_COLOR if lane.kind == "labels" else _ALERT_COLOR
        for span, flag in zip(lane.drawn_spans, lane.widened):
            color = _WIDENED_COLOR if flag else base_color
            rect_x = x(span[0])
            rect_w = max(0.01, (span[1] - span[0]) * scale)
            parts.append(
                f'<rect x="{rect_x:.2f}" y="{lane_top + 4:.2f}" width="{rect_w:.2f}" '
                f'height="{lane_height - 8:.1f}" fill="{color}"/>'
            )

    parts.append("</svg>")
    return TimelineRendering(
        svg="\n".join(parts) + "\n",
        lanes=tuple(lanes),
        min_width_ticks=min_width,
    )


def roc_to_csv(curve) -> str:
    """CSV form of a ROC sweep: threshold, fpr, tpr per row."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["threshold", "fpr", "tpr"])
    for point in curve.points:
        writer.writerow([repr(point.threshold), repr(point.fpr), repr(point.tpr)])
    return buffer.getvalue()
