"""Shared construction helpers for the test suite."""

from __future__ import annotations

import random

from idseval import AlertSeries, LabeledSeries


def make_series(
    labels: list[str],
    name: str = "series",
    tick_seconds: int | str = 1,
    timestamps: list[int] | None = None,
) -> LabeledSeries:
    if timestamps is None:
        timestamps = list(range(len(labels)))
    return LabeledSeries.from_labels(name, timestamps, list(labels), tick_seconds)


def make_alerts(values, detector: str = "det", aligned_to: str = "series") -> AlertSeries:
    return AlertSeries.from_bool(detector, list(values), aligned_to)


def random_binary_instance(rng: random.Random, max_len: int = 64) -> tuple[list[str], list[bool]]:
    """Random labels and alerts with occasional degenerate compositions."""
    n = rng.randint(1, max_len)
    attack_rate = rng.choice([0.0, 0.1, 0.3, 0.5, 1.0])
    alert_rate = rng.choice([0.0, 0.1, 0.5, 0.9, 1.0])
    labels = ["attack" if rng.random() < attack_rate else "benign" for _ in range(n)]
    alerts = [rng.random() < alert_rate for _ in range(n)]
    return labels, alerts


def random_intervals(
    rng: random.Random,
    n: int,
    max_count: int,
    max_len: int | None = None,
) -> list[tuple[int, int]]:
    """Sorted, disjoint (gap >= 1) inclusive intervals inside [0, n)."""
    intervals: list[tuple[int, int]] = []
    count = rng.randint(0, max_count)
    if count == 0 or n == 0:
        return intervals
    budget = max(1, n // (count * 2))
    pos = rng.randint(0, budget)
    cap = max_len or max(1, n // count)
    for _ in range(count):
        if pos > n - 1:
            break
        start = pos
        end = min(start + rng.randint(1, cap) - 1, n - 1)
        intervals.append((start, end))
        pos = end + 2 + rng.randint(0, budget)
    return intervals


def labels_from_intervals(n: int, intervals: list[tuple[int, int]], kind: str = "attack") -> list[str]:
    labels = ["benign"] * n
    for start, end in intervals:
        for i in range(start, end + 1):
            labels[i] = kind
    return labels


def alerts_from_intervals(n: int, intervals: list[tuple[int, int]]) -> list[bool]:
    values = [False] * n
    for start, end in intervals:
        for i in range(start, end + 1):
            values[i] = True
    return values
