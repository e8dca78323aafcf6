"""Reference affiliation metrics via exact rational piecewise-linear integration.

Works on continuous spans given as Fraction pairs [start, end). Integrals
use the midpoint rule per piece, which is exact for linear integrands; every
piece is additionally *verified* to be linear by checking seven interior
sample points against the line through the outermost two. If a breakpoint
were ever missed, that check raises instead of silently integrating wrong.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

Span = tuple[Fraction, Fraction]


def dist_to_span(t: Fraction, span: Span) -> Fraction:
    return max(Fraction(0), span[0] - t, t - span[1])


def dist_to_spans(t: Fraction, spans: list[Span]) -> Fraction:
    return min(dist_to_span(t, span) for span in spans)


def _clip(spans: list[Span], lo: Fraction, hi: Fraction) -> list[Span]:
    out = []
    for start, end in spans:
        s, e = max(start, lo), min(end, hi)
        if s < e:
            out.append((s, e))
    return out


def integrate_linear_pieces(
    f: Callable[[Fraction], Fraction],
    lo: Fraction,
    hi: Fraction,
    candidates: list[Fraction],
) -> Fraction:
    """Exact integral of a piecewise-linear f whose kinks are all in candidates."""
    cuts = sorted({lo, hi} | {c for c in candidates if lo < c < hi})
    total = Fraction(0)
    for p, q in zip(cuts, cuts[1:]):
        step = (q - p) / 8
        points = [p + step * k for k in range(1, 8)]
        values = [f(x) for x in points]
        slope = (values[-1] - values[0]) / (points[-1] - points[0])
        for x, v in zip(points, values):
            if v != values[0] + slope * (x - points[0]):
                raise AssertionError(
                    f"integrand is not linear on ({p}, {q}); breakpoint set incomplete"
                )
        total += values[3] * (q - p)
    return total


def _precision_integrand(event: Span, zone: Span) -> Callable[[Fraction], Fraction]:
    z0, z1 = zone
    length = z1 - z0

    def f(t: Fraction) -> Fraction:
        d = dist_to_span(t, event)
        if d == 0:
            return Fraction(1)
        closer_lo = max(z0, event[0] - d)
        closer_hi = min(z1, event[1] + d)
        closer = max(Fraction(0), closer_hi - closer_lo)
        return 1 - closer / length

    return f


def _recall_integrand(pieces: list[Span], zone: Span) -> Callable[[Fraction], Fraction]:
    z0, z1 = zone
    length = z1 - z0

    def f(t: Fraction) -> Fraction:
        d = dist_to_spans(t, pieces)
        excluded = max(Fraction(0), min(z1, t + d) - max(z0, t - d))
        return 1 - excluded / length

    return f


def _recall_candidates(pieces: list[Span], event: Span, zone: Span) -> list[Fraction]:
    z0, z1 = zone
    candidates: set[Fraction] = set()
    for start, end in pieces:
        candidates.add(start)
        candidates.add(end)
    for (_, prev_end), (next_start, _) in zip(pieces, pieces[1:]):
        candidates.add((prev_end + next_start) / 2)
    base = sorted(candidates | {event[0], event[1]})
    for p, q in zip(base, base[1:]):
        dp = dist_to_spans(p, pieces)
        dq = dist_to_spans(q, pieces)
        slope = (dq - dp) / (q - p)
        intercept = dp - slope * p
        if slope != -1:
            candidates.add((z1 - intercept) / (1 + slope))
        if slope != 1:
            candidates.add((z0 + intercept) / (1 - slope))
    return sorted(candidates)


def affiliation_oracle(
    events: list[Span],
    alerts: list[Span],
    span: Span,
) -> tuple[Fraction | None, Fraction | None, Fraction | None]:
    """Returns (precision, recall, f1) over the zone partition of ``span``."""
    if not events:
        return None, None, None
    bounds = [span[0]]
    for prev, cur in zip(events, events[1:]):
        bounds.append((prev[1] + cur[0]) / 2)
    bounds.append(span[1])

    zone_precisions: list[Fraction] = []
    zone_recalls: list[Fraction] = []
    for event, z0, z1 in zip(events, bounds, bounds[1:]):
        zone = (z0, z1)
        pieces = _clip(alerts, z0, z1)

        if pieces:
            integrand = _precision_integrand(event, zone)
            kinks = [
                event[0],
                event[1],
                event[0] + event[1] - z0,
                event[0] + event[1] - z1,
            ]
            mass = sum((end - start for start, end in pieces), Fraction(0))
            total = Fraction(0)
            for start, end in pieces:
                total += integrate_linear_pieces(integrand, start, end, kinks)
            zone_precisions.append(total / mass)

        if not pieces:
            zone_recalls.append(Fraction(0))
        else:
            integrand = _recall_integrand(pieces, zone)
            candidates = _recall_candidates(pieces, event, zone)
            total = integrate_linear_pieces(integrand, event[0], event[1], candidates)
            zone_recalls.append(total / (event[1] - event[0]))

    precision = (
        sum(zone_precisions) / len(zone_precisions) if zone_precisions else None
    )
    recall = sum(zone_recalls) / len(zone_recalls)
    if precision is None:
        f1 = None
    elif precision + recall == 0:
        f1 = Fraction(0)
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return precision, recall, f1
