"""File formats: label CSV, alert JSONL, dataset manifests, validation.

Labels travel as a two-column CSV (``timestamp,label``); alerts as JSON
Lines, one record per point, either ``{"timestamp": ..., "alert": bool}`` or
``{"timestamp": ..., "score": number}`` with an optional ``"detector"``
field. Timestamps are integer ticks or ISO-8601 instants (converted to epoch
seconds); a file must stick to one style. All malformed-input errors carry
the file path and 1-based line number.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from .model import (
    AlertKind,
    AlertSeries,
    EvaluationError,
    LabeledSeries,
    extract_scenarios,
    require_alignment,
)

LABEL_HEADER = ("timestamp", "label")
_INT_RE = re.compile(r"[+-]?\d+\Z")


class IngestError(EvaluationError):
    """A file could not be parsed or failed validation."""


def _fail(path: Path | str, line: int | None, message: str) -> "IngestError":
    where = f"{path}: line {line}: " if line is not None else f"{path}: "
    return IngestError(where + message)


def _parse_timestamp(raw: object, path: Path | str, line: int) -> int:
    """Integer ticks pass through; ISO-8601 strings become epoch seconds."""
    if isinstance(raw, bool):
        raise _fail(path, line, f"timestamp must be an integer or ISO-8601 string, got {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        text = raw.strip()
        if _INT_RE.match(text):
            return int(text)
        try:
            moment = datetime.fromisoformat(text)
        except ValueError:
            raise _fail(
                path, line, f"timestamp must be an integer or ISO-8601 string, got {raw!r}"
            ) from None
        if moment.tzinfo is None:
            moment = moment.replace(tzinfo=timezone.utc)
        epoch = moment.timestamp()
        if epoch != int(epoch):
            raise _fail(path, line, f"sub-second timestamps are not supported: {raw!r}")
        return int(epoch)
    raise _fail(path, line, f"timestamp must be an integer or ISO-8601 string, got {raw!r}")


def _check_increasing(timestamps: list[int], path: Path | str, first_line: int) -> None:
    for i in range(1, len(timestamps)):
        if timestamps[i] <= timestamps[i - 1]:
            kind = "duplicate" if timestamps[i] == timestamps[i - 1] else "non-increasing"
            raise _fail(
                path,
                first_line + i,
                f"{kind} timestamp {timestamps[i]} (previous was {timestamps[i - 1]})",
            )


def load_labels(
    path: Path | str,
    name: str | None = None,
    tick_seconds: Fraction | int | str = 1,
) -> LabeledSeries:
    """Read a ``timestamp,label`` CSV into a LabeledSeries.

    The label ``benign`` (or ``0``) marks benign points; any other non-empty
    string names an attack type. Timestamps must be strictly increasing.
    """
    path = Path(path)
    timestamps: list[int] = []
    labels: list[str] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise _fail(path, None, "empty file, expected a 'timestamp,label' header") from None
        if tuple(cell.strip() for cell in header) != LABEL_HEADER:
            raise _fail(path, 1, f"expected header 'timestamp,label', got {','.join(header)!r}")
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise _fail(path, line, f"expected 2 fields, got {len(row)}")
            timestamps.append(_parse_timestamp(row[0], path, line))
            label = row[1].strip()
            if not label:
                raise _fail(path, line, "empty label")
            labels.append(label)
    if not timestamps:
        raise _fail(path, None, "no data rows")
    _check_increasing(timestamps, path, first_line=2)
    return LabeledSeries.from_labels(
        name=name or path.stem,
        timestamps=timestamps,
        labels=labels,
        tick_seconds=tick_seconds,
    )


def save_labels(series: LabeledSeries, path: Path | str) -> None:
    """Write a series back out as a ``timestamp,label`` CSV."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(LABEL_HEADER)
        for ts, label in zip(series.timestamps, series.labels_as_strings()):
            writer.writerow((int(ts), label))


def load_alerts(
    path: Path | str,
    series: LabeledSeries,
    detector: str | None = None,
) -> AlertSeries:
    """Read an alert JSONL file and align it against one labeled series.

    Every record needs ``timestamp`` plus exactly one of ``alert`` (bool) or
    ``score`` (number); a file may not mix the two. The timestamps must match
    the dataset's exactly, in order; misalignment errors quote up to ten
    missing and ten unexpected timestamps. The detector name comes from the
    ``detector`` argument, else a consistent ``"detector"`` field, else the
    file stem.
    """
    path = Path(path)
    timestamps: list[int] = []
    payload: list[object] = []
    kind: AlertKind | None = None
    field_detector: str | None = None
    with open(path, encoding="utf-8") as handle:
        for line, raw in enumerate(handle, start=1):
            text = raw.strip()
            if not text:
                continue
            try:
                record = json.loads(text)
            except json.JSONDecodeError as exc:
                raise _fail(path, line, f"invalid JSON: {exc.msg}") from None
            if not isinstance(record, dict):
                raise _fail(path, line, "expected a JSON object")
            unknown = set(record) - {"timestamp", "alert", "score", "detector"}
            if unknown:
                raise _fail(path, line, f"unknown fields: {', '.join(sorted(unknown))}")
            if "timestamp" not in record:
                raise _fail(path, line, "missing 'timestamp'")
            has_alert = "alert" in record
            has_score = "score" in record
            if has_alert == has_score:
                raise _fail(path, line, "each record needs exactly one of 'alert' or 'score'")
            record_kind = AlertKind.BOOLEAN if has_alert else AlertKind.SCORED
            if kind is None:
                kind = record_kind
            elif kind is not record_kind:
                raise _fail(
                    path, line, "file mixes 'alert' and 'score' records; use one throughout"
                )
            if has_alert:
                value = record["alert"]
                if not isinstance(value, bool):
                    raise _fail(path, line, f"'alert' must be true or false, got {value!r}")
            else:
                value = record["score"]
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise _fail(path, line, f"'score' must be a number, got {value!r}")
                value = float(value)
                if not np.isfinite(value):
                    raise _fail(path, line, f"'score' must be finite, got {value!r}")
            name = record.get("detector")
            if name is not None:
                if not isinstance(name, str) or not name:
                    raise _fail(path, line, f"'detector' must be a non-empty string, got {name!r}")
                if field_detector is None:
                    field_detector = name
                elif field_detector != name:
                    raise _fail(
                        path,
                        line,
                        f"conflicting detector names {field_detector!r} and {name!r}",
                    )
            timestamps.append(_parse_timestamp(record["timestamp"], path, line))
            payload.append(value)
    if not timestamps:
        raise _fail(path, None, "no alert records")
    _check_increasing(timestamps, path, first_line=1)

    got = np.asarray(timestamps, dtype=np.int64)
    want = series.timestamps
    if len(got) != len(want) or not np.array_equal(got, want):
        missing = np.setdiff1d(want, got)
        extra = np.setdiff1d(got, want)
        parts = [f"alerts do not align with dataset '{series.name}'"]
        if len(missing):
            shown = ", ".join(str(t) for t in missing[:10])
            parts.append(f"{len(missing)} dataset timestamps missing (first: {shown})")
        if len(extra):
            shown = ", ".join(str(t) for t in extra[:10])
            parts.append(f"{len(extra)} unexpected timestamps (first: {shown})")
        raise _fail(path, None, "; ".join(parts))

    name = detector or field_detector or path.stem
    if kind is AlertKind.BOOLEAN:
        return AlertSeries.from_bool(detector=name, values=payload, aligned_to=series.name)
    return AlertSeries.from_scores(detector=name, values=payload, aligned_to=series.name)


def save_alerts(alerts: AlertSeries, series: LabeledSeries, path: Path | str) -> None:
    """Write an alert series as JSONL, one record per point.

    Output is deterministic: fixed key order, fixed float formatting, one
    line per point in series order.
    """
    require_alignment(series, alerts)
    path = Path(path)
    key = "alert" if alerts.kind is AlertKind.BOOLEAN else "score"
    with open(path, "w", encoding="utf-8") as handle:
        for ts, value in zip(series.timestamps, alerts.values):
            record = {
                "timestamp": int(ts),
                key: bool(value) if key == "alert" else float(value),
                "detector": alerts.detector,
            }
            handle.write(json.dumps(record) + "\n")


@dataclass(frozen=True)
class ValidationReport:
    """Structural facts about a dataset (and optionally one alert series)."""

    dataset: str
    n_points: int
    attack_fraction: Fraction
    n_scenarios: int
    scenarios_by_type: dict[str, int]
    duration_seconds: Fraction
    alert_kind: AlertKind | None = None
    alert_fraction: Fraction | None = None
    warnings: tuple[str, ...] = ()

    def summary_lines(self) -> list[str]:
        lines = [
            f"dataset: {self.dataset}",
            f"points: {self.n_points}",
            f"attack fraction: {float(self.attack_fraction):.6g}"
            f" ({self.attack_fraction.numerator}/{self.attack_fraction.denominator})",
            f"scenarios: {self.n_scenarios}",
        ]
        for attack_type, count in sorted(self.scenarios_by_type.items()):
            lines.append(f"  {attack_type}: {count}")
        lines.append(f"duration: {float(self.duration_seconds):.6g} s")
        if self.alert_kind is not None:
            lines.append(f"alerts: {self.alert_kind.value}")
        if self.alert_fraction is not None:
            lines.append(f"alert fraction: {float(self.alert_fraction):.6g}")
        for warning in self.warnings:
            lines.append(f"warning: {warning}")
        return lines


def validate_pair(
    series: LabeledSeries,
    alerts: AlertSeries | None = None,
    gap_tolerance: int = 0,
) -> ValidationReport:
    """Check a dataset (and optionally an aligned alert series) for pitfalls.

    The attack fraction is exact (a ratio of point counts). Warnings flag
    conditions that make headline metrics misleading or undefined rather
    than wrong: missing scenarios, single-class data, heavy imbalance.
    """
    n = len(series)
    attack_points = int(series.attack_mask.sum())
    attack_fraction = Fraction(attack_points, n)
    scenarios = extract_scenarios(series, gap_tolerance=gap_tolerance)
    by_type: dict[str, int] = {}
    for scenario in scenarios:
        by_type[scenario.attack_type] = by_type.get(scenario.attack_type, 0) + 1
    duration = (int(series.timestamps[-1]) - int(series.timestamps[0]) + 1) * series.tick_seconds

    warnings: list[str] = []
    if not scenarios:
        warnings.append("no attack scenarios; time-aware metrics will be undefined")
    if attack_points == n:
        warnings.append("every point is an attack; FPR, TNR and NPV will be undefined")
    if 0 < attack_points < n and attack_fraction < Fraction(1, 100):
        warnings.append(
            "attacks cover under 1% of points; accuracy will reward detectors that never alarm"
        )

    alert_kind = None
    alert_fraction = None
    if alerts is not None:
        require_alignment(series, alerts)
        alert_kind = alerts.kind
        if alerts.kind is AlertKind.BOOLEAN:
            alert_fraction = Fraction(int(np.count_nonzero(alerts.values)), n)
            if alert_fraction == 0:
                warnings.append("detector never alarms; recall-style metrics will be 0")
            elif alert_fraction == 1:
                warnings.append("detector always alarms; precision equals the attack fraction")
        else:
            warnings.append(
                "scored alerts need a threshold before point metrics apply; see the roc command"
            )

    return ValidationReport(
        dataset=series.name,
        n_points=n,
        attack_fraction=attack_fraction,
        n_scenarios=len(scenarios),
        scenarios_by_type=by_type,
        duration_seconds=duration,
        alert_kind=alert_kind,
        alert_fraction=alert_fraction,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class DatasetManifest:
    """Pointer to a labeled dataset plus its display name and tick duration."""

    name: str
    labels_path: Path
    tick_seconds: Fraction = Fraction(1)
    description: str = ""
    alert_paths: tuple[Path, ...] = ()

    def load(self) -> LabeledSeries:
        return load_labels(self.labels_path, name=self.name, tick_seconds=self.tick_seconds)


def load_manifest(path: Path | str) -> DatasetManifest:
    """Read a dataset manifest (JSON). Relative paths resolve next to it.

    Required keys: ``name``, ``labels``. Optional: ``tick_seconds`` (number
    or string, e.g. ``0.1``), ``description``, ``alerts`` (list of paths).
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise _fail(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise _fail(path, None, "manifest must be a JSON object")
    unknown = set(data) - {"name", "labels", "tick_seconds", "description", "alerts"}
    if unknown:
        raise _fail(path, None, f"unknown manifest keys: {', '.join(sorted(unknown))}")
    for key in ("name", "labels"):
        if key not in data or not isinstance(data[key], str) or not data[key]:
            raise _fail(path, None, f"manifest needs a non-empty string {key!r}")
    tick_raw = data.get("tick_seconds", 1)
    if isinstance(tick_raw, bool) or not isinstance(tick_raw, (int, float, str)):
        raise _fail(path, None, f"tick_seconds must be a number or string, got {tick_raw!r}")
    try:
        tick = Fraction(str(tick_raw))
    except (ValueError, ZeroDivisionError):
        raise _fail(path, None, f"tick_seconds is not a valid duration: {tick_raw!r}") from None
    if tick <= 0:
        raise _fail(path, None, f"tick_seconds must be positive, got {tick_raw!r}")
    description = data.get("description", "")
    if not isinstance(description, str):
        raise _fail(path, None, "description must be a string")
    alerts_raw = data.get("alerts", [])
    if not isinstance(alerts_raw, list) or not all(
        isinstance(item, str) and item for item in alerts_raw
    ):
        raise _fail(path, None, "alerts must be a list of paths")
    base = path.parent
    return DatasetManifest(
        name=data["name"],
        labels_path=base / data["labels"],
        tick_seconds=tick,
        description=description,
        alert_paths=tuple(base / item for item in alerts_raw),
    )
