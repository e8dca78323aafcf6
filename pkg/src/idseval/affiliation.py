"""Affiliation-style precision and recall over per-event zones.

The series span is cut into one zone per attack scenario, bounded by the
midpoints between consecutive scenarios. Within each zone, alerts are judged
by how close they land to the scenario relative to a uniformly random
instant, and the scenario by how close the alerts come to each of its
instants. The zone construction makes every alert count against exactly one
scenario, so a single long alarm cannot claim credit for every attack.

All sets live on a continuous time axis: the inclusive tick interval
``[ts_i, ts_j]`` occupies ``[ts_i, ts_j + 1)``. Every integrand here is
piecewise linear, so integrals are evaluated exactly with the midpoint rule
after splitting at the breakpoints.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from .model import AttackScenario, LabeledSeries
from .timeaware import TimeAwareScores, _check_intervals, harmonic_f1

Span = tuple[float, float]


@dataclass(frozen=True)
class AffiliationZone:
    """Per-scenario zone with its precision and recall contributions."""

    zone_start: float
    zone_end: float
    event_start: float
    event_end: float
    precision: float | None
    recall: float


def _to_spans(intervals: list[tuple[int, int]], series: LabeledSeries) -> list[Span]:
    ts = series.timestamps
    return [(float(ts[i]), float(ts[j]) + 1.0) for i, j in intervals]


def _clip(spans: list[Span], lo: float, hi: float) -> list[Span]:
    return [(max(u, lo), min(v, hi)) for u, v in spans if max(u, lo) < min(v, hi)]


def _dist_to_event(t: float, a: float, b: float) -> float:
    """Distance from an instant to the event span [a, b)."""
    if t < a:
        return a - t
    if t > b:
        return t - b
    return 0.0


def _dist_to_alerts(t: float, starts: list[float], ends: list[float]) -> float:
    """Distance from an instant to a sorted disjoint union of alert spans."""
    i = bisect_right(starts, t) - 1
    best = float("inf")
    if i >= 0:
        if t < ends[i]:
            return 0.0
        best = t - ends[i]
    if i + 1 < len(starts):
        best = min(best, starts[i + 1] - t)
    return best


def _farther_fraction(t: float, a: float, b: float, z0: float, z1: float) -> float:
    """P that a uniform instant of the zone is at least as far from the event."""
    d = _dist_to_event(t, a, b)
    if d == 0.0:
        return 1.0
    closer = max(0.0, min(z1, b + d) - max(z0, a - d))
    return 1.0 - closer / (z1 - z0)


def _zone_precision(
    pieces: list[Span], a: float, b: float, z0: float, z1: float
) -> float | None:
    """Average closeness credit of the alert mass inside one zone.

    Returns None when the zone holds no alert mass; such zones express no
    opinion about precision and are left out of the overall mean.
    """
    mass = sum(v - u for u, v in pieces)
    if mass == 0.0:
        return None
    kinks = (a, b, a + b - z1, a + b - z0)
    total = 0.0
    for u, v in pieces:
        cuts = sorted({u, v} | {x for x in kinks if u < x < v})
        for p, q in zip(cuts, cuts[1:]):
            total += (q - p) * _farther_fraction((p + q) / 2.0, a, b, z0, z1)
    return total / mass


def _zone_recall(pieces: list[Span], a: float, b: float, z0: float, z1: float) -> float:
    """Average closeness credit the zone's alerts earn across the event.

    Each event instant t scores the probability that a uniform instant of the
    zone lies at least as far from t as the nearest alert does. A zone
    without alerts scores 0.
    """
    if not pieces:
        return 0.0
    starts = [u for u, _ in pieces]
    ends = [v for _, v in pieces]
    length = z1 - z0

    cuts = {a, b}
    cuts.update(x for u, v in pieces for x in (u, v) if a < x < b)
    cuts.update(
        mid
        for (_, v1), (u2, _) in zip(pieces, pieces[1:])
        if a < (mid := (v1 + u2) / 2.0) < b
    )
    ordered = sorted(cuts)

    total = 0.0
    for p, q in zip(ordered, ordered[1:]):
        dp = _dist_to_alerts(p, starts, ends)
        dq = _dist_to_alerts(q, starts, ends)
        slope = (dq - dp) / (q - p)
        intercept = dp - slope * p
        inner: set[float] = set()
        if slope != -1.0:
            x = (z1 - intercept) / (1.0 + slope)
            if p < x < q:
                inner.add(x)
        if slope != 1.0:
            x = (z0 + intercept) / (1.0 - slope)
            if p < x < q:
                inner.add(x)
        for pp, qq in zip(fine := sorted({p, q} | inner), fine[1:]):
            mid = (pp + qq) / 2.0
            d = _dist_to_alerts(mid, starts, ends)
            excluded = max(0.0, min(z1, mid + d) - max(z0, mid - d))
            total += (qq - pp) * (1.0 - excluded / length)
    return total / (b - a)


def affiliation(
    scenarios: list[AttackScenario],
    alert_intervals: list[tuple[int, int]],
    series: LabeledSeries,
) -> tuple[TimeAwareScores, list[AffiliationZone]]:
    """Zone-based precision and recall for a set of alert intervals.

    Precision averages the per-zone alert closeness over the zones that
    contain alerts, and is Undefined when no alerts exist at all. Recall
    averages over every zone, counting alert-free zones as 0. Both are
    Undefined when the series has no attack scenarios.
    """
    scenario_spans = [(s.start_index, s.end_index) for s in scenarios]
    _check_intervals(scenario_spans, "scenario")
    _check_intervals(alert_intervals, "alert")
    if not scenarios:
        return TimeAwareScores(None, None, None), []

    events = _to_spans(scenario_spans, series)
    alerts = _to_spans(alert_intervals, series)
    span_start = float(series.timestamps[0])
    span_end = float(series.timestamps[-1]) + 1.0
    bounds = [span_start]
    bounds += [(prev[1] + cur[0]) / 2.0 for prev, cur in zip(events, events[1:])]
    bounds.append(span_end)

    zones: list[AffiliationZone] = []
    for (a, b), z0, z1 in zip(events, bounds, bounds[1:]):
        pieces = _clip(alerts, z0, z1)
        zones.append(
            AffiliationZone(
                zone_start=z0,
                zone_end=z1,
                event_start=a,
                event_end=b,
                precision=_zone_precision(pieces, a, b, z0, z1),
                recall=_zone_recall(pieces, a, b, z0, z1),
            )
        )

    opinions = [z.precision for z in zones if z.precision is not None]
    precision = sum(opinions) / len(opinions) if opinions else None
    recall = sum(z.recall for z in zones) / len(zones)
    scores = TimeAwareScores(
        precision_like=precision,
        recall_like=recall,
        f1_like=harmonic_f1(precision, recall),
    )
    return scores, zones
