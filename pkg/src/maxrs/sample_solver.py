"""Best-sample search over grid circumspheres, exact-equal to full enumeration.

The grid solvers all reduce to one computation: over every cell (of every
shifted grid) whose closed box touches at least one ball, draw t seeded
samples on the cell's circumsphere and return the deepest sample, ties going
to the lowest (grid index, lattice coords, sample index).

Materializing that cell universe explodes at small eps, so the search runs
top-down instead: balls, then coarse grid-0 "parent" boxes, then cells, each
layer ordered by an admissible upper bound on any sample depth beneath it.
A branch is skipped only when its bound proves it cannot beat the incumbent
(or can at most tie it with a larger tie-break key), so the winner is
bitwise identical to the full enumeration, which solve_direct performs for
cross-checks on small inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from maxrs import depths as dp
from maxrs.geometry import (
    CellKey,
    GridCollection,
    box_dist2,
    cell_stream_keys,
    cells_intersecting_ball,
    grid_shift_ints,
    make_grid_collection,
    sphere_samples_keyed,
)

__all__ = [
    "SolveOutcome",
    "samples_per_cell",
    "grid_for",
    "canonical_order",
    "universe_cells",
    "max_weighted_sample",
    "max_colored_sample",
]

# Slack added to enumeration radii; absorbs float drift of coordinates and
# distances, never affects the exact predicates it feeds candidates into.
PAD = 1e-9

_CELL_CHUNK = 128


def samples_per_cell(c_sample: float, eps: float, n: int) -> int:
    """t = ceil(c_sample * eps^-2 * ln(max(n, 2))); the one formula used everywhere."""
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 0.5), got {eps!r}")
    if c_sample <= 0:
        raise ValueError(f"c_sample must be positive, got {c_sample!r}")
    return math.ceil(c_sample * eps**-2 * math.log(max(n, 2)))


def grid_for(d: int, eps: float) -> GridCollection:
    """The solver grid family: cell side 2*eps/sqrt(d), shift target eps^2."""
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 0.5), got {eps!r}")
    return make_grid_collection(d, 2.0 * eps / math.sqrt(d), eps * eps)


@dataclass(frozen=True)
class SolveOutcome:
    """Winning sample of a search: its location, exact depth, and identity."""

    point: tuple[float, ...]
    value: float
    cell: CellKey
    sample_index: int


class _WeightedEval:
    """Depth/mass queries for weighted depth, with an admissible-bound pad."""

    def __init__(self, centers: np.ndarray, weights: np.ndarray):
        self.centers = centers
        self.weights = weights
        self.uniq, self.sums = dp.dedupe_centers(centers, weights)
        self.cpoints = self.uniq
        # Sums of dyadic weights at these magnitudes are exact in float64, so
        # upper bounds computed by summation need no safety margin; arbitrary
        # weights get one covering accumulated rounding.
        scaled = weights * 2.0**20
        if len(weights) and np.all(scaled == np.round(scaled)) and np.max(np.abs(weights), initial=0) <= 2.0**20:
            self.ub_pad = 0.0
        else:
            self.ub_pad = 1e-9 + 1e-12 * float(np.sum(np.abs(weights)))

    def restrict(self, point: np.ndarray, radius: float) -> "_WeightedEval":
        d2 = np.einsum("ij,ij->i", self.uniq - point, self.uniq - point)
        keep = d2 <= radius * radius
        ev = object.__new__(_WeightedEval)
        ev.centers = self.centers
        ev.weights = self.weights
        ev.uniq = self.uniq[keep]
        ev.sums = self.sums[keep]
        ev.cpoints = ev.uniq
        ev.ub_pad = self.ub_pad
        return ev

    def mass_at(self, points: np.ndarray, radius: float) -> np.ndarray:
        return dp.weighted_depths_u(points, self.uniq, self.sums, radius * radius)

    def mass_box(self, lo: np.ndarray, side: float, radius: float) -> np.ndarray:
        return dp.mass_within_box(lo, side, self.uniq, self.sums, radius)

    def depth(self, points: np.ndarray) -> np.ndarray:
        return dp.weighted_depths_u(points, self.uniq, self.sums)


class _ColoredEval:
    """Depth/mass queries for colored depth; counts are exact, pad is zero."""

    ub_pad = 0.0

    def __init__(self, centers: np.ndarray, colors: np.ndarray, _groups=None):
        self.centers = centers
        self.colors = colors
        if _groups is None:
            ucenters, starts = dp.color_groups(centers, colors)
            # Per-row color ids let restrict() rebuild group boundaries.
            gid = np.zeros(len(ucenters), dtype=np.int64)
            gid[starts[1:]] = 1
            gid = np.cumsum(gid)
            _groups = (ucenters, gid)
        self.ucenters, self.gid = _groups
        self.cpoints = self.ucenters

    def restrict(self, point: np.ndarray, radius: float) -> "_ColoredEval":
        d2 = np.einsum("ij,ij->i", self.ucenters - point, self.ucenters - point)
        keep = d2 <= radius * radius
        return _ColoredEval(self.centers, self.colors, (self.ucenters[keep], self.gid[keep]))

    def _starts(self) -> np.ndarray:
        if len(self.gid) == 0:
            return np.zeros(0, dtype=np.int64)
        return np.flatnonzero(np.concatenate([[True], self.gid[1:] != self.gid[:-1]]))

    def mass_at(self, points: np.ndarray, radius: float) -> np.ndarray:
        return dp.colored_depths_u(points, self.ucenters, self._starts(), radius * radius).astype(np.float64)

    def mass_box(self, lo: np.ndarray, side: float, radius: float) -> np.ndarray:
        if len(self.ucenters) == 0:
            return np.zeros(len(np.atleast_2d(lo)))
        starts = self._starts()
        lo = np.atleast_2d(np.asarray(lo, dtype=np.float64))
        out = np.empty(len(lo))
        r2 = radius * radius
        for i in range(0, len(lo), 2048):
            block = lo[i : i + 2048]
            hi = block + side
            gap = np.maximum(
                np.maximum(block[:, None, :] - self.ucenters[None, :, :], self.ucenters[None, :, :] - hi[:, None, :]),
                0.0,
            )
            mask = np.einsum("ijk,ijk->ij", gap, gap) <= r2
            out[i : i + 2048] = np.maximum.reduceat(mask, starts, axis=1).sum(axis=1)
        return out

    def depth(self, points: np.ndarray) -> np.ndarray:
        return dp.colored_depths_u(points, self.ucenters, self._starts()).astype(np.float64)


def _keys_less(gs: np.ndarray, zs: np.ndarray, key: tuple) -> np.ndarray:
    """Elementwise: is (gs, zs) lexicographically before the winner key tuple."""
    less = gs < key[0]
    eq = gs == key[0]
    for ax in range(zs.shape[1]):
        less = less | (eq & (zs[:, ax] < key[1 + ax]))
        eq = eq & (zs[:, ax] == key[1 + ax])
    return less


def canonical_order(gs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Sort permutation by (grid index, lattice coords lexicographically)."""
    keys = [zs[:, ax] for ax in reversed(range(zs.shape[1]))]
    keys.append(gs)
    return np.lexsort(tuple(keys))


class _Search:
    """Incumbent tracking plus chunked cell evaluation shared by both paths."""

    def __init__(self, gc: GridCollection, t: int, seed: int, salt: int):
        self.gc = gc
        self.rho = gc.circumradius
        self.t = t
        self.seed = seed
        self.salt = salt
        self.best = -math.inf
        self.win: SolveOutcome | None = None

    def win_key(self) -> tuple | None:
        if self.win is None:
            return None
        return (self.win.cell.grid_index, *self.win.cell.lattice)

    def keep_mask(self, ubs: np.ndarray, gs: np.ndarray, zs: np.ndarray) -> np.ndarray:
        keep = ubs > self.best
        key = self.win_key()
        if key is not None:
            tie = ubs == self.best
            if tie.any():
                keep = keep | (tie & _keys_less(gs, zs, key))
        return keep

    def consider(self, gs: np.ndarray, zs: np.ndarray, ubs: np.ndarray | None, ev) -> None:
        """Evaluate cells (canonically pre-sorted); ubs None = no pruning."""
        gc = self.gc
        for i in range(0, len(gs), _CELL_CHUNK):
            cgs, czs = gs[i : i + _CELL_CHUNK], zs[i : i + _CELL_CHUNK]
            if ubs is not None:
                # Re-check the chunk: the incumbent may have improved since
                # the caller filtered.
                m = self.keep_mask(ubs[i : i + _CELL_CHUNK], cgs, czs)
                if not m.any():
                    continue
                cgs, czs = cgs[m], czs[m]
            centers = gc.offsets[cgs] + (czs + 0.5) * gc.cell_side
            keys = cell_stream_keys(self.seed, self.salt, cgs, czs)
            pts = sphere_samples_keyed(centers, self.rho, self.t, keys)
            dep = ev.depth(pts.reshape(-1, gc.d)).reshape(len(cgs), self.t)
            self._update(cgs, czs, pts, dep)

    def _update(self, gs: np.ndarray, zs: np.ndarray, pts: np.ndarray, dep: np.ndarray) -> None:
        m = float(dep.max())
        if m < self.best:
            return
        row_max = dep.max(axis=1)
        hit_rows = np.flatnonzero(row_max == m)
        row = int(hit_rows[0])
        key = (int(gs[row]), *(int(v) for v in zs[row]))
        if m == self.best and self.win is not None:
            if not key < self.win_key():
                return
        samp = int(np.argmax(dep[row] == m))
        self.best = m
        self.win = SolveOutcome(
            point=tuple(float(v) for v in pts[row, samp]),
            value=m,
            cell=CellKey(key[0], key[1:]),
            sample_index=samp,
        )


def _children_of(zP: np.ndarray, jvecs: np.ndarray, r: int) -> np.ndarray:
    """Lattice coords (n_grids, d) of each grid's one cell whose center lies in
    the grid-0 cell zP, derived in exact integer arithmetic."""
    num = 2 * r * zP[None, :] - r - 2 * jvecs
    return -(-num // (2 * r))


def _solve_stream(centers: np.ndarray, ev, gc: GridCollection, t: int, seed: int, salt: int) -> SolveOutcome | None:
    rho = gc.circumradius
    s = gc.cell_side
    d = gc.d
    search = _Search(gc, t, seed, salt)
    jvecs = grid_shift_ints(gc)
    r = gc.shifts_per_axis
    off0 = gc.offsets[0]

    ball_ub = ev.mass_at(centers, 2.0 + 2.0 * rho + PAD) + ev.ub_pad
    order = np.lexsort((np.arange(len(centers)), -ball_ub))
    seen: set[tuple[int, ...]] = set()

    for bi in order:
        if ball_ub[bi] < search.best:
            break
        fresh = []
        for k in cells_intersecting_ball(gc, 0, centers[bi], radius=1.0 + rho + PAD):
            if k.lattice not in seen:
                seen.add(k.lattice)
                fresh.append(k.lattice)
        if not fresh:
            continue
        zP = np.array(fresh, dtype=np.int64)
        pub = ev.mass_box(off0 + zP * s, s, 1.0 + rho + PAD) + ev.ub_pad
        porder = np.lexsort((*(zP[:, ax] for ax in reversed(range(d))), -pub))
        for pi in porder:
            if pub[pi] < search.best:
                break
            pcenter = off0 + (zP[pi] + 0.5) * s
            local = ev.restrict(pcenter, 1.0 + 2.0 * rho + PAD)
            zs = _children_of(zP[pi], jvecs, r)
            gs = np.arange(gc.n_grids, dtype=np.int64)
            ubs = local.mass_at(gc.offsets + (zs + 0.5) * s, 1.0 + rho + PAD) + ev.ub_pad
            keep = search.keep_mask(ubs, gs, zs)
            if not keep.any():
                continue
            gs, zs, ubs = gs[keep], zs[keep], ubs[keep]
            # Exact universe membership: the closed cell box must touch a ball.
            lo = gc.offsets[gs] + zs * s
            d2 = box_dist2(lo[:, None, :], lo[:, None, :] + s, local.cpoints[None, :, :])
            nonempty = (d2 <= 1.0).any(axis=1)
            if not nonempty.any():
                continue
            gs, zs, ubs = gs[nonempty], zs[nonempty], ubs[nonempty]
            o = canonical_order(gs, zs)
            search.consider(gs[o], zs[o], ubs[o], local)
    return search.win


def universe_cells(gc: GridCollection, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All (grid, lattice) cells touched by some ball, canonically sorted."""
    cells: set[tuple] = set()
    for g in range(gc.n_grids):
        for c in centers:
            for k in cells_intersecting_ball(gc, g, c):
                cells.add((k.grid_index, k.lattice))
    if not cells:
        return np.zeros(0, dtype=np.int64), np.zeros((0, gc.d), dtype=np.int64)
    gs = np.array([c[0] for c in cells], dtype=np.int64)
    zs = np.array([c[1] for c in cells], dtype=np.int64)
    o = canonical_order(gs, zs)
    return gs[o], zs[o]


def _solve_direct(centers: np.ndarray, ev, gc: GridCollection, t: int, seed: int, salt: int) -> SolveOutcome | None:
    search = _Search(gc, t, seed, salt)
    gs, zs = universe_cells(gc, centers)
    search.consider(gs, zs, None, ev)
    return search.win


def _prep(centers, d: int | None):
    arr = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if arr.size == 0:
        return None
    if d is not None and arr.shape[1] != d:
        raise ValueError(f"expected dimension {d}, got {arr.shape[1]}")
    return arr


def max_weighted_sample(
    centers, weights, d: int, eps: float, c_sample: float = 4.0, seed: int = 0,
    *, salt: int = 0, t: int | None = None, prune: bool = True,
) -> SolveOutcome | None:
    """Deepest circumsphere sample by weighted depth; None on empty input."""
    arr = _prep(centers, d)
    if arr is None:
        return None
    gc = grid_for(d, eps)
    if t is None:
        t = samples_per_cell(c_sample, eps, len(arr))
    ev = _WeightedEval(arr, np.asarray(weights, dtype=np.float64))
    solver = _solve_stream if prune else _solve_direct
    return solver(arr, ev, gc, t, seed, salt)


def max_colored_sample(
    centers, colors, d: int, eps: float, c_sample: float = 4.0, seed: int = 0,
    *, salt: int = 0, t: int | None = None, prune: bool = True,
) -> SolveOutcome | None:
    """Deepest circumsphere sample by distinct-color depth; None on empty input."""
    arr = _prep(centers, d)
    if arr is None:
        return None
    gc = grid_for(d, eps)
    if t is None:
        t = samples_per_cell(c_sample, eps, len(arr))
    ev = _ColoredEval(arr, np.asarray(colors, dtype=np.int64))
    solver = _solve_stream if prune else _solve_direct
    return solver(arr, ev, gc, t, seed, salt)
