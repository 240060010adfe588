"""Interval hypotheses and the pair (H_P, H_A, threshold, rule) under test.

Superiority, non-inferiority and equivalence designs are not separate code
paths; they differ only in where the two intervals are placed:

* superiority: H_A around the null value, H_P above it
  (``symmetric_pair(0, 1, 1)`` or ``ratio_pair_from_target(1.7)``);
* non-inferiority: H_P covers "not worse than the margin", H_A the values
  below the margin (``make_pair`` with adjacent intervals);
* equivalence: H_P is a band around zero and H_A the two outer bands
  (``band_pair(margin, outer)``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .exceptions import ValidationError

__all__ = [
    "DecisionRule",
    "HypothesisPair",
    "IntervalHypothesis",
    "Label",
    "Scale",
    "band_pair",
    "make_pair",
    "ratio_pair_from_target",
    "symmetric_pair",
]


class Label(str, enum.Enum):
    PRESENT = "present"
    ABSENT = "absent"


class Scale(str, enum.Enum):
    NATURAL = "natural"
    LOG = "log"


class DecisionRule(str, enum.Enum):
    PROBABILITY_THRESHOLD = "probability_threshold"
    CRI_INCLUSION = "cri_inclusion"


def _coerce(enum_cls, value, what):
    try:
        return enum_cls(value)
    except ValueError:
        choices = ", ".join(m.value for m in enum_cls)
        raise ValidationError(f"unknown {what} {value!r}; expected one of: {choices}") from None


@dataclass(frozen=True)
class IntervalHypothesis:
    """Closed interval ``[lower, upper]`` of parameter values.

    ``gap`` optionally removes an open sub-interval, which turns the
    hypothesis into two closed bands ``[lower, gap[0]]`` and
    ``[gap[1], upper]``. This is how two-sided statements such as
    ``|delta| >= 0.1`` are written without resorting to unbounded intervals.

    Bounds are always stored in parameter units. On the log scale lengths
    and containment are measured on log(parameter).
    """

    label: Label
    lower: float
    upper: float
    scale: Scale = Scale.NATURAL
    gap: tuple[float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "label", _coerce(Label, self.label, "label"))
        object.__setattr__(self, "scale", _coerce(Scale, self.scale, "scale"))
        lower, upper = float(self.lower), float(self.upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if not (math.isfinite(lower) and math.isfinite(upper)):
            raise ValidationError(f"interval bounds must be finite, got [{lower}, {upper}]")
        if not lower < upper:
            raise ValidationError(f"interval lower bound must be below upper bound, got [{lower}, {upper}]")
        if self.scale is Scale.LOG and lower <= 0:
            raise ValidationError(f"log-scale interval needs a positive lower bound, got {lower}")
        if self.gap is not None:
            g0, g1 = (float(v) for v in self.gap)
            if not lower < g0 < g1 < upper:
                raise ValidationError(
                    f"gap ({g0}, {g1}) must lie strictly inside [{lower}, {upper}] with g0 < g1"
                )
            object.__setattr__(self, "gap", (g0, g1))

    def bands(self) -> list[tuple[float, float]]:
        """Closed bands in parameter units."""
        if self.gap is None:
            return [(self.lower, self.upper)]
        return [(self.lower, self.gap[0]), (self.gap[1], self.upper)]

    def analysis_bands(self) -> list[tuple[float, float]]:
        """Closed bands on the analysis scale (log of the bounds on the log scale)."""
        if self.scale is Scale.LOG:
            return [(math.log(lo), math.log(hi)) for lo, hi in self.bands()]
        return self.bands()

    @property
    def length(self) -> float:
        return sum(hi - lo for lo, hi in self.analysis_bands())

    def contains_interval(self, lo: float, hi: float) -> bool:
        """True when ``[lo, hi]`` (parameter units) lies inside one band."""
        return any(b_lo <= lo and hi <= b_hi for b_lo, b_hi in self.bands())

    def contains(self, value: float) -> bool:
        return self.contains_interval(value, value)

    def to_dict(self) -> dict:
        out = {"label": self.label.value, "lower": self.lower, "upper": self.upper, "scale": self.scale.value}
        if self.gap is not None:
            out["gap"] = list(self.gap)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "IntervalHypothesis":
        gap = data.get("gap")
        return cls(
            label=data["label"],
            lower=data["lower"],
            upper=data["upper"],
            scale=data.get("scale", Scale.NATURAL),
            gap=tuple(gap) if gap is not None else None,
        )


def _overlap_length(h1: IntervalHypothesis, h2: IntervalHypothesis) -> float:
    total = 0.0
    for a_lo, a_hi in h1.analysis_bands():
        for b_lo, b_hi in h2.analysis_bands():
            total += max(0.0, min(a_hi, b_hi) - max(a_lo, b_lo))
    return total


@dataclass(frozen=True)
class HypothesisPair:
    h_p: IntervalHypothesis
    h_a: IntervalHypothesis
    pi: float = 0.95
    rule: DecisionRule = DecisionRule.PROBABILITY_THRESHOLD
    cri_level: float = 0.95
    disjoint: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "rule", _coerce(DecisionRule, self.rule, "decision rule"))
        if self.h_p.label is not Label.PRESENT or self.h_a.label is not Label.ABSENT:
            raise ValidationError("h_p must be labelled 'present' and h_a 'absent'")
        if self.h_p.scale is not self.h_a.scale:
            raise ValidationError(
                f"both hypotheses must share a scale, got {self.h_p.scale.value} and {self.h_a.scale.value}"
            )
        pi = float(self.pi)
        if not (pi > 0.5 and pi < 1.0):
            raise ValidationError("pi must exceed 0.5" if pi <= 0.5 else f"pi must be below 1, got {pi}")
        object.__setattr__(self, "pi", pi)
        level = float(self.cri_level)
        if not 0.0 < level < 1.0:
            raise ValidationError(f"cri_level must lie in (0, 1), got {level}")
        object.__setattr__(self, "cri_level", level)
        # Sharing an endpoint counts as disjoint: the overlap has zero length.
        object.__setattr__(self, "disjoint", _overlap_length(self.h_p, self.h_a) == 0.0)

    @property
    def scale(self) -> Scale:
        return self.h_p.scale

    def to_dict(self) -> dict:
        return {
            "h_p": self.h_p.to_dict(),
            "h_a": self.h_a.to_dict(),
            "pi": self.pi,
            "rule": self.rule.value,
            "cri_level": self.cri_level,
            "disjoint": self.disjoint,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HypothesisPair":
        return cls(
            h_p=IntervalHypothesis.from_dict(data["h_p"]),
            h_a=IntervalHypothesis.from_dict(data["h_a"]),
            pi=data.get("pi", 0.95),
            rule=data.get("rule", DecisionRule.PROBABILITY_THRESHOLD),
            cri_level=data.get("cri_level", 0.95),
        )


def make_pair(h_p, h_a, pi=0.95, rule=DecisionRule.PROBABILITY_THRESHOLD, cri_level=0.95, scale=Scale.NATURAL):
    """Validated pair; ``h_p`` / ``h_a`` may be hypotheses or ``(lower, upper)`` tuples."""
    if not isinstance(h_p, IntervalHypothesis):
        h_p = IntervalHypothesis(Label.PRESENT, *h_p, scale=scale)
    if not isinstance(h_a, IntervalHypothesis):
        h_a = IntervalHypothesis(Label.ABSENT, *h_a, scale=scale)
    return HypothesisPair(h_p, h_a, pi=pi, rule=rule, cri_level=cri_level)


def ratio_pair_from_target(target_ratio, pi=0.95, rule=DecisionRule.PROBABILITY_THRESHOLD, cri_level=0.95):
    """Log-scale pair for a ratio measure built around a target value.

    H_P spans half a log-target on each side of the target and H_A the same
    half-width on each side of 1, so the two intervals meet at
    ``sqrt(target)``.
    """
    t = float(target_ratio)
    if not (t > 0 and math.isfinite(t)):
        raise ValidationError(f"target ratio must be positive, got {t}")
    if t == 1.0:
        raise ValidationError("target ratio of 1 gives degenerate intervals")
    half = math.log(t) / 2.0
    # sort bounds so that targets below 1 also give lower < upper
    p_bounds = sorted((math.exp(half), math.exp(3.0 * half)))
    a_bounds = sorted((math.exp(-half), math.exp(half)))
    return make_pair(p_bounds, a_bounds, pi=pi, rule=rule, cri_level=cri_level, scale=Scale.LOG)


def symmetric_pair(center_a, center_p, width, pi=0.95, rule=DecisionRule.PROBABILITY_THRESHOLD, cri_level=0.95):
    """Equal-width intervals centred on the two hypothesised values."""
    width = float(width)
    if not width > 0:
        raise ValidationError(f"interval width must be positive, got {width}")
    half = width / 2.0
    return make_pair(
        (center_p - half, center_p + half),
        (center_a - half, center_a + half),
        pi=pi,
        rule=rule,
        cri_level=cri_level,
    )


def band_pair(margin, outer, inside="present", pi=0.95, rule=DecisionRule.PROBABILITY_THRESHOLD, cri_level=0.95):
    """``[-margin, margin]`` against the two outer bands out to ``+-outer``.

    ``inside="present"`` is the equivalence layout (H_P near zero);
    ``inside="absent"`` puts the absence of an effect in the middle, as when
    checking balance between randomised groups.
    """
    margin = float(margin)
    outer = float(outer)
    if not 0 < margin < outer:
        raise ValidationError(f"need 0 < margin < outer, got margin={margin}, outer={outer}")
    inside = _coerce(Label, inside, "label")
    outside = Label.ABSENT if inside is Label.PRESENT else Label.PRESENT
    central = IntervalHypothesis(inside, -margin, margin)
    bands = IntervalHypothesis(outside, -outer, outer, gap=(-margin, margin))
    if inside is Label.PRESENT:
        return HypothesisPair(central, bands, pi=pi, rule=rule, cri_level=cri_level)
    return HypothesisPair(bands, central, pi=pi, rule=rule, cri_level=cri_level)
