"""Independent reference solvers and planted test instances.

Everything here is deliberately simple and written against different
primitives than the solvers under test: direct candidate enumeration for
exact 2-d optima, double loops for interval sums, and planted instances
whose optimum is known by construction rather than by running any solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from maxrs import depths as dp
from maxrs.balls import ColoredBall, WeightedBall
from maxrs.convolution import Batched1DInstance

__all__ = [
    "brute_depth",
    "brute_colored_depth",
    "brute_maxrs_disks_2d",
    "brute_colored_maxrs_disks",
    "brute_batched_1d",
    "PlantedInstance",
    "make_planted",
]


def brute_depth(point, centers, weights) -> float:
    """Weighted depth of one point: sum of weights of balls containing it."""
    point = np.asarray(point, dtype=np.float64)
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    weights = np.asarray(weights, dtype=np.float64)
    diff = centers - point
    inside = np.einsum("ij,ij->i", diff, diff) <= 1.0
    return float(weights[inside].sum())


def brute_colored_depth(point, centers, colors) -> int:
    point = np.asarray(point, dtype=np.float64)
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    colors = np.asarray(colors)
    diff = centers - point
    inside = np.einsum("ij,ij->i", diff, diff) <= 1.0
    return len(set(colors[inside].tolist()))


def _disk_candidates(centers: np.ndarray) -> np.ndarray:
    """Candidate optima for depth over unit disks: some candidate attains the
    maximum.  A deepest face of the arrangement either contains a full circle
    (its center is a candidate) or has a boundary vertex; vertices are disk
    intersections, nudged slightly inward so closed-disk membership at the
    true face survives rounding."""
    if centers.ndim != 2 or centers.shape[1] != 2:
        raise ValueError("2-d centers required")
    cands = [centers]
    n = len(centers)
    for i in range(n):
        d = centers[i + 1 :] - centers[i]
        dist = np.hypot(d[:, 0], d[:, 1])
        close = (dist > 0.0) & (dist < 2.0)
        if close.any():
            dd = d[close]
            dn = dist[close][:, None]
            mid = centers[i] + 0.5 * dd
            u = dd / dn
            h = np.sqrt(np.maximum(1.0 - 0.25 * dn**2, 0.0))
            perp = np.stack([-u[:, 1], u[:, 0]], axis=1) * h
            for p in (mid + perp, mid - perp):
                cands.append(p)
                # Pull 1e-9 toward the lens midpoint: keeps the point inside
                # every disk whose boundary passes through it.
                cands.append(p + 1e-9 * (mid - p))
        tangent = np.abs(dist - 2.0) <= 1e-9
        if tangent.any():
            cands.append(centers[i] + 0.5 * d[tangent])
    return np.concatenate(cands, axis=0)


def brute_maxrs_disks_2d(centers, weights) -> tuple[float, tuple[float, float]]:
    """Exact max weighted depth over unit disks in the plane."""
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if len(centers) == 0:
        raise ValueError("at least one disk required")
    weights = np.asarray(weights, dtype=np.float64)
    cands = _disk_candidates(centers)
    vals = dp.weighted_depths(cands, centers, weights)
    i = int(np.argmax(vals))
    return float(vals[i]), (float(cands[i, 0]), float(cands[i, 1]))


def brute_colored_maxrs_disks(centers, colors) -> tuple[int, tuple[float, float]]:
    """Exact max distinct-color depth over unit disks in the plane."""
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if len(centers) == 0:
        raise ValueError("at least one disk required")
    colors = np.asarray(colors, dtype=np.int64)
    cands = _disk_candidates(centers)
    vals = dp.colored_depths(cands, centers, colors)
    i = int(np.argmax(vals))
    return int(vals[i]), (float(cands[i, 0]), float(cands[i, 1]))


def brute_batched_1d(inst: Batched1DInstance) -> list[float]:
    """Double-loop reference for the batched 1-d problem: for each length,
    the best closed window anchored at a point on either side."""
    xs = np.asarray(inst.xs)
    ws = np.asarray(inst.ws)
    out = []
    for L in inst.lengths:
        best = 0.0
        for a in np.concatenate([xs, xs - L]):
            m = (xs >= a) & (xs <= a + L)
            best = max(best, float(ws[m].sum()))
        out.append(best)
    return out


@dataclass(frozen=True)
class PlantedInstance:
    """Balls with a known optimum: k cluster balls all containing the origin,
    plus pairwise-disjoint decoys too far out to interact with the cluster or
    each other.  The deepest point has depth exactly k."""

    centers: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    colors: np.ndarray = field(repr=False)
    k: int
    n_decoys: int
    seed: int

    @property
    def n(self) -> int:
        return len(self.centers)

    @property
    def d(self) -> int:
        return self.centers.shape[1]

    @property
    def opt(self) -> int:
        return self.k

    @property
    def point(self) -> tuple[float, ...]:
        return (0.0,) * self.d

    def balls(self) -> list[WeightedBall]:
        return [
            WeightedBall(tuple(c), float(w), id=i)
            for i, (c, w) in enumerate(zip(self.centers, self.weights))
        ]

    def colored_balls(self) -> list[ColoredBall]:
        return [
            ColoredBall(tuple(c), int(col), id=i)
            for i, (c, col) in enumerate(zip(self.centers, self.colors))
        ]


def _decoy_sites(d: int) -> np.ndarray:
    """Lattice sites with pitch 2.4, norm at least 3.2: after jitter of norm
    at most 0.15 these stay pairwise at distance > 2 and at distance > 2 from
    every point within 0.9 of the origin, so decoy balls are disjoint from
    each other and from the cluster."""
    reach = {1: 2500, 2: 24, 3: 4}.get(d, 2)
    axes = [np.arange(-reach, reach + 1)] * d
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    sites = 2.4 * grid.astype(np.float64)
    norms = np.sqrt(np.einsum("ij,ij->i", sites, sites))
    return sites[norms >= 3.2]


def make_planted(d: int, k: int, n_decoys: int, seed: int, colored: bool = False) -> PlantedInstance:
    """Unit-weight instance with optimum exactly k at the origin."""
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = np.random.default_rng(seed)

    dirs = rng.normal(size=(k, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = 0.9 * rng.random(k) ** (1.0 / d)
    cluster = dirs * radii[:, None]

    sites = _decoy_sites(d)
    if n_decoys > len(sites):
        raise ValueError(f"at most {len(sites)} decoys available in dimension {d}")
    pick = rng.permutation(len(sites))[:n_decoys]
    jitter = rng.uniform(-0.15 / np.sqrt(d), 0.15 / np.sqrt(d), size=(n_decoys, d))
    decoys = sites[pick] + jitter

    centers = np.concatenate([cluster, decoys], axis=0)
    weights = np.ones(len(centers))
    if colored:
        colors = np.concatenate(
            [np.arange(1, k + 1), rng.integers(1, k + 1, size=n_decoys)]
        ).astype(np.int64)
    else:
        colors = np.ones(len(centers), dtype=np.int64)

    inst = PlantedInstance(centers, weights, colors, k, n_decoys, seed)
    origin = np.zeros(d)
    if brute_depth(origin, centers, weights) != float(k):
        raise AssertionError("planted construction violated its own invariant")
    if colored and brute_colored_depth(origin, centers, colors) != k:
        raise AssertionError("planted construction violated its own invariant")
    return inst
