"""Input records: weighted unit balls and colored unit disks.

All solvers work with unit radius. The dataclasses keep an explicit radius
field so malformed inputs fail loudly instead of being silently rescaled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["WeightedBall", "ColoredBall", "centers_array", "weights_array", "colors_array"]


def _check_center(center) -> tuple[float, ...]:
    c = tuple(float(v) for v in center)
    if len(c) < 1:
        raise ValueError("center must have at least one coordinate")
    if not all(np.isfinite(c)):
        raise ValueError(f"center coordinates must be finite, got {c}")
    return c


@dataclass(frozen=True)
class WeightedBall:
    """Closed unit ball with a nonnegative weight and an optional id.

    The id only matters to the dynamic structure, which addresses balls by it;
    list-based solvers ignore it.
    """

    center: tuple[float, ...]
    weight: float = 1.0
    id: int | None = None
    radius: float = field(default=1.0)

    def __post_init__(self):
        object.__setattr__(self, "center", _check_center(self.center))
        if self.radius != 1.0:
            raise ValueError(f"only unit balls are supported, got radius {self.radius!r}")
        if not (self.weight >= 0.0 and np.isfinite(self.weight)):
            raise ValueError(f"weight must be nonnegative and finite, got {self.weight!r}")

    @property
    def d(self) -> int:
        return len(self.center)


@dataclass(frozen=True)
class ColoredBall:
    """Closed unit ball carrying a positive integer color label."""

    center: tuple[float, ...]
    color: int
    id: int | None = None
    radius: float = field(default=1.0)

    def __post_init__(self):
        object.__setattr__(self, "center", _check_center(self.center))
        if self.radius != 1.0:
            raise ValueError(f"only unit balls are supported, got radius {self.radius!r}")
        if int(self.color) < 1:
            raise ValueError(f"colors are integers >= 1, got {self.color!r}")

    @property
    def d(self) -> int:
        return len(self.center)


def centers_array(balls) -> np.ndarray:
    """Stack ball centers into an (n, d) float array. Dimensions must agree."""
    if not balls:
        return np.zeros((0, 0))
    d = balls[0].d
    for b in balls:
        if b.d != d:
            raise ValueError(f"mixed dimensions: {d} and {b.d}")
    return np.array([b.center for b in balls], dtype=np.float64)


def weights_array(balls) -> np.ndarray:
    return np.array([b.weight for b in balls], dtype=np.float64)


def colors_array(balls) -> np.ndarray:
    return np.array([b.color for b in balls], dtype=np.int64)
