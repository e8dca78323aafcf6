"""Trivial reference detectors: never alarm, always alarm, coin flip.

These anchor any comparison table. A detector that cannot beat them on the
metric of interest adds nothing, however impressive its headline number
looks on imbalanced data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .model import AlertSeries, LabeledSeries, ParameterError

PREFIX = "baseline"


class BaselineKind(str, Enum):
    NEVER = "never"
    ALWAYS = "always"
    RANDOM = "random"


@dataclass(frozen=True)
class BaselineSpec:
    """Parsed form of a baseline detector name such as ``baseline:random:p=0.5:seed=7``."""

    kind: BaselineKind
    p: float | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind is BaselineKind.RANDOM:
            if self.p is None:
                raise ParameterError("random baseline requires an alert probability p")
            if not 0.0 <= self.p <= 1.0:
                raise ParameterError(f"alert probability must lie in [0, 1], got {self.p!r}")
        elif self.p is not None or self.seed is not None:
            raise ParameterError(f"baseline:{self.kind.value} takes no parameters")

    @property
    def label(self) -> str:
        if self.kind is not BaselineKind.RANDOM:
            return f"{PREFIX}:{self.kind.value}"
        return f"{PREFIX}:random:p={self.p!r}:seed={self.seed!r}"

    def with_seed(self, seed: int) -> "BaselineSpec":
        """Copy with the seed filled in; existing seeds are kept."""
        if self.kind is not BaselineKind.RANDOM or self.seed is not None:
            return self
        return BaselineSpec(kind=self.kind, p=self.p, seed=seed)

    @classmethod
    def parse(cls, text: str) -> "BaselineSpec":
        parts = text.split(":")
        if parts[0] != PREFIX or len(parts) < 2:
            raise ParameterError(f"not a baseline detector name: {text!r}")
        kinds = {k.value: k for k in BaselineKind}
        if parts[1] not in kinds:
            raise ParameterError(
                f"unknown baseline {parts[1]!r}; expected one of {sorted(kinds)}"
            )
        kind = kinds[parts[1]]
        p: float | None = None
        seed: int | None = None
        for part in parts[2:]:
            key, sep, raw = part.partition("=")
            if not sep:
                raise ParameterError(f"malformed baseline parameter {part!r}; expected key=value")
            try:
                if key == "p":
                    p = float(raw)
                elif key == "seed":
                    seed = int(raw)
                else:
                    raise ParameterError(f"unknown baseline parameter {key!r}")
            except ValueError:
                raise ParameterError(f"malformed baseline parameter {part!r}") from None
        return cls(kind=kind, p=p, seed=seed)


def is_baseline_name(text: str) -> bool:
    return text.startswith(PREFIX + ":")


def generate(spec: BaselineSpec, series: LabeledSeries) -> AlertSeries:
    """Materialize a baseline's alert stream for one labeled series.

    The random baseline draws one uniform variate per point from a fresh
    Mersenne Twister seeded with ``spec.seed``, so regeneration with the same
    seed is reproducible across runs and platforms.
    """
    n = len(series)
    if spec.kind is BaselineKind.NEVER:
        values = [False] * n
    elif spec.kind is BaselineKind.ALWAYS:
        values = [True] * n
    else:
        if spec.seed is None:
            raise ParameterError("random baseline requires a seed to be reproducible")
        rng = random.Random(spec.seed)
        values = [rng.random() < spec.p for _ in range(n)]
    return AlertSeries.from_bool(detector=spec.label, values=values, aligned_to=series.name)
