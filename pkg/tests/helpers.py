"""Instance generators shared across the test modules."""

import numpy as np

from maxrs.balls import ColoredBall, WeightedBall


def random_weighted(rng, n, d, extent=3.0, dyadic=True):
    """Weighted unit balls with centers in [-extent, extent]^d.

    Dyadic weights (multiples of 1/8) make depth sums exactly representable,
    so equality assertions against oracles need no tolerance.
    """
    centers = rng.uniform(-extent, extent, size=(n, d))
    if dyadic:
        weights = rng.integers(4, 17, size=n) / 8.0
    else:
        weights = rng.uniform(0.5, 2.0, size=n)
    return [
        WeightedBall(tuple(c), float(w), id=i)
        for i, (c, w) in enumerate(zip(centers, weights))
    ]


def random_weighted_arrays(rng, n, d, extent=3.0):
    """Center matrix plus dyadic weight vector, for the array-style solvers."""
    centers = rng.uniform(-extent, extent, size=(n, d))
    weights = rng.integers(4, 17, size=n) / 8.0
    return centers, weights


def random_colored(rng, n, m, extent=3.0, d=2):
    centers = rng.uniform(-extent, extent, size=(n, d))
    colors = rng.integers(1, m + 1, size=n)
    return [
        ColoredBall(tuple(c), int(col), id=i)
        for i, (c, col) in enumerate(zip(centers, colors))
    ]


def colored_arrays(balls):
    centers = np.array([b.center for b in balls], dtype=np.float64)
    colors = np.array([b.color for b in balls], dtype=np.int64)
    return centers, colors
