"""Time-series-aware metrics: detected scenarios, detection delay, eTaP/eTaR.

Attacks and alarms are treated as inclusive index intervals. Overlap is
inclusive on both endpoints, consistent with AttackScenario indices. Delays
are measured in ticks; conversion to seconds happens at report time.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    AttackScenario,
    LabeledSeries,
    MetricValue,
    ParameterError,
)

Interval = tuple[int, int]


@dataclass(frozen=True)
class ScenarioDetection:
    """Per-scenario detection outcome: flag, first alert instant and delay."""

    scenario: AttackScenario
    detected: bool
    first_alert_time: int | None = None
    delay_ticks: int | None = None

    def __post_init__(self) -> None:
        present = (self.first_alert_time is not None, self.delay_ticks is not None)
        if self.detected and present != (True, True):
            raise ValueError("detected scenarios carry first_alert_time and delay_ticks")
        if not self.detected and present != (False, False):
            raise ValueError("undetected scenarios carry neither alert time nor delay")
        if self.delay_ticks is not None and self.delay_ticks < 0:
            raise ValueError("delay_ticks must be non-negative")


def _check_intervals(intervals: list[Interval], what: str) -> None:
    prev_end = None
    for start, end in intervals:
        if start > end:
            raise ValueError(f"{what} interval ({start}, {end}) has start > end")
        if prev_end is not None and start <= prev_end:
            raise ValueError(f"{what} intervals must be sorted and disjoint")
        prev_end = end


def _overlap_len(a: Interval, b: Interval) -> int:
    return max(0, min(a[1], b[1]) - max(a[0], b[0]) + 1)


def _first_overlap(span: Interval, intervals: list[Interval], ends: list[int]) -> int | None:
    """Index of the earliest of the sorted disjoint ``intervals`` overlapping ``span``."""
    i = bisect_left(ends, span[0])
    if i < len(intervals) and intervals[i][0] <= span[1]:
        return i
    return None


def _union_overlaps(intervals: list[Interval], others: list[Interval]) -> list[int]:
    """Points of each interval covered by the union of ``others`` (both sorted disjoint)."""
    overlaps = [0] * len(intervals)
    j = 0
    for i, interval in enumerate(intervals):
        while j < len(others) and others[j][1] < interval[0]:
            j += 1
        k = j
        while k < len(others) and others[k][0] <= interval[1]:
            overlaps[i] += _overlap_len(interval, others[k])
            k += 1
    return overlaps


def detected_scenarios(
    scenarios: list[AttackScenario],
    alert_intervals: list[Interval],
    group_by_type: bool = False,
) -> tuple[MetricValue, list[bool]]:
    """Fraction of attack instances touched by at least one alert interval.

    A scenario counts as detected as soon as any alert interval overlaps it,
    however briefly. With ``group_by_type`` the ratio is over distinct attack
    types instead: a type is detected iff at least one of its scenarios is.
    Returns the ratio plus the per-scenario detection flags.
    """
    _check_intervals(alert_intervals, "alert")
    ends = [e for _, e in alert_intervals]
    flags = [
        _first_overlap((s.start_index, s.end_index), alert_intervals, ends) is not None
        for s in scenarios
    ]
    name = "detected-scenarios"
    params: dict[str, object] = {"by-type": True} if group_by_type else {}
    if not scenarios:
        return MetricValue.undefined(name, **params), flags
    if group_by_type:
        types = {s.attack_type for s in scenarios}
        detected_types = {s.attack_type for s, flag in zip(scenarios, flags) if flag}
        ratio = Fraction(len(detected_types), len(types))
    else:
        ratio = Fraction(sum(flags), len(scenarios))
    return MetricValue.from_fraction(name, ratio, **params), flags


def detection_delay(
    scenarios: list[AttackScenario],
    alert_intervals: list[Interval],
    series: LabeledSeries,
) -> tuple[list[ScenarioDetection], list[MetricValue]]:
    """Delay from each scenario's start to its first overlapping alert.

    An alert that begins before the scenario but overlaps it means detection
    at attack start: delay 0. Undetected scenarios are excluded from the mean
    and median and reported through the undetected count; mean and median are
    Undefined when nothing was detected.
    """
    _check_intervals(alert_intervals, "alert")
    ends = [e for _, e in alert_intervals]
    details: list[ScenarioDetection] = []
    delays: list[int] = []
    for scenario in scenarios:
        span = (scenario.start_index, scenario.end_index)
        hit = _first_overlap(span, alert_intervals, ends)
        if hit is None:
            details.append(ScenarioDetection(scenario=scenario, detected=False))
            continue
        first = alert_intervals[hit]
        first_alert_time = int(series.timestamps[max(first[0], scenario.start_index)])
        delay = max(0, int(series.timestamps[first[0]]) - scenario.start_time)
        delays.append(delay)
        details.append(
            ScenarioDetection(
                scenario=scenario,
                detected=True,
                first_alert_time=first_alert_time,
                delay_ticks=delay,
            )
        )

    undetected = len(scenarios) - len(delays)
    metrics = [
        MetricValue.from_fraction("undetected-scenarios", Fraction(undetected)),
    ]
    if delays:
        mean = Fraction(sum(delays), len(delays))
        ordered = sorted(delays)
        mid = len(ordered) // 2
        if len(ordered) % 2:
            median = Fraction(ordered[mid])
        else:
            median = Fraction(ordered[mid - 1] + ordered[mid], 2)
        metrics.append(MetricValue.from_fraction("detection-delay-mean", mean))
        metrics.append(MetricValue.from_fraction("detection-delay-median", median))
    else:
        metrics.append(MetricValue.undefined("detection-delay-mean"))
        metrics.append(MetricValue.undefined("detection-delay-median"))
    return details, metrics


def _as_unit_fraction(name: str, value: Fraction | int | float | str) -> Fraction:
    if isinstance(value, float):
        value = str(value)
    result = Fraction(value)
    if not 0 <= result <= 1:
        raise ParameterError(f"{name} must lie in [0, 1], got {result}")
    return result


@dataclass(frozen=True)
class EtaParams:
    """Parameters of the enhanced time-aware precision/recall family.

    ``theta_p``: minimum fraction of an alert interval that must overlap
    ground truth for the alert to count as correct. ``theta_r``: minimum
    fraction of a scenario that must be covered by correct alerts for the
    scenario to count as detected. ``detection_weight``: weight of the binary
    detection component against the overlap-portion component in each score.
    Defaults follow the published parameterization (0.5, 0.1, 0.5).
    """

    theta_p: Fraction = Fraction(1, 2)
    theta_r: Fraction = Fraction(1, 10)
    detection_weight: Fraction = Fraction(1, 2)

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta_p", _as_unit_fraction("theta_p", self.theta_p))
        object.__setattr__(self, "theta_r", _as_unit_fraction("theta_r", self.theta_r))
        object.__setattr__(
            self, "detection_weight", _as_unit_fraction("detection_weight", self.detection_weight)
        )


@dataclass(frozen=True)
class TimeAwareScores:
    """Precision-like, recall-like and F1-like triple of a time-aware metric."""

    precision_like: float | None
    recall_like: float | None
    f1_like: float | None


def harmonic_f1(precision: float | None, recall: float | None) -> float | None:
    """Harmonic mean of a precision/recall pair; 0 when both are 0."""
    if precision is None or recall is None:
        return None
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def etapr(
    scenarios: list[AttackScenario],
    alert_intervals: list[Interval],
    params: EtaParams | None = None,
) -> TimeAwareScores:
    """Enhanced time-aware precision and recall over interval overlaps.

    An alert interval is *correct* when at least ``theta_p`` of it overlaps
    attack scenarios (and the overlap is non-empty); a scenario is *detected*
    when correct alerts cover at least ``theta_r`` of it. Each alert's
    precision score and each scenario's recall score mixes the binary
    detection outcome with the overlap portion:

        score = w * detected + (1 - w) * portion

    eTaP averages alert scores (so every alarm counts once and benign
    overhang only reduces its portion), eTaR averages scenario scores (so
    every attack instance weighs equally regardless of length). eTaP is
    Undefined without alerts, eTaR without scenarios.
    """
    if params is None:
        params = EtaParams()
    scenario_spans = [(s.start_index, s.end_index) for s in scenarios]
    _check_intervals(scenario_spans, "scenario")
    _check_intervals(alert_intervals, "alert")
    w = params.detection_weight

    correct: list[Interval] = []
    precision_scores: list[Fraction] = []
    alert_coverage = _union_overlaps(alert_intervals, scenario_spans)
    for interval, covered in zip(alert_intervals, alert_coverage):
        length = interval[1] - interval[0] + 1
        portion = Fraction(covered, length)
        is_correct = portion > 0 and portion >= params.theta_p
        if is_correct:
            correct.append(interval)
        precision_scores.append(w * int(is_correct) + (1 - w) * portion)

    recall_scores: list[Fraction] = []
    scenario_coverage = _union_overlaps(scenario_spans, correct)
    for span, covered in zip(scenario_spans, scenario_coverage):
        length = span[1] - span[0] + 1
        portion = Fraction(covered, length)
        is_detected = portion > 0 and portion >= params.theta_r
        recall_scores.append(w * int(is_detected) + (1 - w) * portion)

    precision = (
        float(sum(precision_scores) / len(precision_scores)) if precision_scores else None
    )
    recall = float(sum(recall_scores) / len(recall_scores)) if recall_scores else None
    return TimeAwareScores(
        precision_like=precision,
        recall_like=recall,
        f1_like=harmonic_f1(precision, recall),
    )
