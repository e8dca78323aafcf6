"""Slow, independent reference computations for the point-based metrics.

Everything here walks points one by one and computes ratios in exact
rational arithmetic. Deliberately written from the metric definitions in a
different style than the library (per-point loops instead of array ops,
precision/recall composition instead of counts forms) so that shared bugs
are unlikely.
"""

from __future__ import annotations

from fractions import Fraction


def brute_confusion(attack: list[bool], alerted: list[bool]) -> dict[str, int]:
    counts = {"tp": 0, "tn": 0, "fp": 0, "fn": 0}
    for is_attack, is_alert in zip(attack, alerted, strict=True):
        if is_attack and is_alert:
            counts["tp"] += 1
        elif is_attack and not is_alert:
            counts["fn"] += 1
        elif not is_attack and is_alert:
            counts["fp"] += 1
        else:
            counts["tn"] += 1
    return counts


def _div(numerator: int, denominator: int) -> Fraction | None:
    if denominator == 0:
        return None
    return Fraction(numerator, denominator)


def brute_ratios(counts: dict[str, int]) -> dict[str, Fraction | None]:
    """All simple ratio metrics straight from their textbook definitions."""
    tp, tn = counts["tp"], counts["tn"]
    fp, fn = counts["fp"], counts["fn"]
    return {
        "tpr": _div(tp, tp + fn),
        "fnr": _div(fn, tp + fn),
        "tnr": _div(tn, tn + fp),
        "fpr": _div(fp, fp + tn),
        "ppv": _div(tp, tp + fp),
        "npv": _div(tn, tn + fn),
        "accuracy": _div(tp + tn, tp + tn + fp + fn),
        "f1": _div(2 * tp, 2 * tp + fp + fn),
    }


def brute_fbeta_from_pr(
    precision: Fraction | None, recall: Fraction | None, beta: Fraction
) -> Fraction | None:
    """F-beta composed from precision and recall, not from raw counts.

    None when either ingredient is undefined; 0 when both are zero (the
    counts form agrees on that limit).
    """
    if precision is None or recall is None:
        return None
    if precision == 0 and recall == 0:
        return Fraction(0)
    beta_sq = beta * beta
    return (1 + beta_sq) * precision * recall / (beta_sq * precision + recall)


def brute_auc_single(counts: dict[str, int]) -> Fraction | None:
    """Trapezoid over the three-point curve (0,0) -> (FPR,TPR) -> (1,1)."""
    ratios = brute_ratios(counts)
    fpr, tpr = ratios["fpr"], ratios["tpr"]
    if fpr is None or tpr is None:
        return None
    left = fpr * tpr / 2
    right = (1 - fpr) * (tpr + 1) / 2
    return left + right


def brute_roc_points(
    attack: list[bool], scores: list[float], thresholds: list[float]
) -> list[tuple[Fraction, Fraction]]:
    """(FPR, TPR) per threshold via per-point counting; alert iff score >= t."""
    points = []
    for threshold in thresholds:
        alerted = [score >= threshold for score in scores]
        counts = brute_confusion(attack, alerted)
        ratios = brute_ratios(counts)
        points.append((ratios["fpr"], ratios["tpr"]))
    return points


def brute_runs(labels: list[str], benign: tuple[str, ...] = ("benign", "0")) -> list[tuple[int, int, str]]:
    """Maximal same-type attack runs as (start, end, type), inclusive ends."""
    runs: list[tuple[int, int, str]] = []
    current: tuple[int, str] | None = None
    for i, label in enumerate(labels + [benign[0]]):
        is_attack = label not in benign
        if current is not None and (not is_attack or label != current[1]):
            runs.append((current[0], i - 1, current[1]))
            current = None
        if is_attack and current is None:
            current = (i, label)
    return runs


def brute_merge_runs(
    runs: list[tuple[int, int, str]], gap_tolerance: int
) -> list[tuple[int, int, str]]:
    """Merge same-type runs separated by at most gap_tolerance points."""
    merged: list[tuple[int, int, str]] = []
    for start, end, kind in runs:
        if merged and merged[-1][2] == kind and start - merged[-1][1] - 1 <= gap_tolerance:
            merged[-1] = (merged[-1][0], end, kind)
        else:
            merged.append((start, end, kind))
    return merged


def brute_scenario_recall(
    runs: list[tuple[int, int, str]], alerted: list[bool]
) -> Fraction | None:
    """Mean over scenarios of the alerted fraction of their index span."""
    if not runs:
        return None
    total = Fraction(0)
    for start, end, _ in runs:
        span = alerted[start : end + 1]
        total += Fraction(sum(span), len(span))
    return total / len(runs)
