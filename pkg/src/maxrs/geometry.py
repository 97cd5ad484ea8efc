"""Shifted grid families, sphere sampling, and boundary-cap area bounds.

The solvers in this package all rest on the same trick: lay down a small family
of axis-aligned grids, shifted so that every point of space sits near the
center of some cell in some grid, and reason about samples drawn on cell
circumspheres.  This module owns that machinery plus the closed-form /
integral bounds on how much of a circumsphere a nearby unit ball covers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

__all__ = [
    "CellKey",
    "GridCollection",
    "make_grid_collection",
    "cell_of",
    "cell_center",
    "cells_intersecting_ball",
    "box_dist2",
    "grid_shift_ints",
    "sample_on_sphere",
    "sphere_samples_keyed",
    "mix_key",
    "cell_stream_key",
    "cell_stream_keys",
    "cap_fraction_2d",
    "cap_fraction_bound",
]

# Padding added to candidate windows before exact predicates filter them.
# Purely a float-safety margin; every returned cell is re-checked exactly.
_PAD = 1e-9


class CellKey(NamedTuple):
    """Identifies one cell: which shifted grid, and its integer lattice coords."""

    grid_index: int
    lattice: tuple[int, ...]


@dataclass(frozen=True)
class GridCollection:
    """A family of r^d uniform grids with cell side s, shifted by step s/r per axis.

    Offsets are chosen so that for any point p some grid has p within delta of
    the center of p's cell (the shifting lemma); the constructor rounds the
    per-axis shift count up, which only shrinks the step and preserves that
    guarantee.
    """

    d: int
    cell_side: float
    delta: float
    shifts_per_axis: int
    shift_step: float
    offsets: np.ndarray = field(repr=False)  # (n_grids, d)

    @property
    def n_grids(self) -> int:
        return self.shifts_per_axis**self.d

    @property
    def circumradius(self) -> float:
        """Radius of a cell's circumscribed sphere: s * sqrt(d) / 2."""
        return self.cell_side * math.sqrt(self.d) / 2.0


def make_grid_collection(d: int, s: float, delta: float) -> GridCollection:
    if not isinstance(d, int) or not 1 <= d <= 8:
        raise ValueError(f"dimension must be an integer in [1, 8], got {d!r}")
    if not (s > 0.0 and math.isfinite(s)):
        raise ValueError(f"cell side must be positive and finite, got {s!r}")
    if not (delta > 0.0 and math.isfinite(delta)):
        raise ValueError(f"delta must be positive and finite, got {delta!r}")
    # The exact ratio s*sqrt(d)/delta is often a whole number that float error
    # nudges just below; the tiny slack keeps r from rounding one too high.
    r = math.ceil(s * math.sqrt(d) / delta - 1e-12)
    r = max(r, 1)
    step = s / r
    axis = np.arange(r, dtype=np.float64) * step
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    offsets = np.stack([g.ravel() for g in grids], axis=1)
    return GridCollection(
        d=d, cell_side=s, delta=delta, shifts_per_axis=r, shift_step=step, offsets=offsets
    )


def _as_point(gc: GridCollection, p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64)
    if arr.shape != (gc.d,):
        raise ValueError(f"expected a point of dimension {gc.d}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def cell_of(gc: GridCollection, grid_index: int, p) -> tuple[CellKey, np.ndarray]:
    """Cell of grid `grid_index` containing p (boxes are half-open [ks, (k+1)s))."""
    if not 0 <= grid_index < gc.n_grids:
        raise ValueError(f"grid index {grid_index} out of range [0, {gc.n_grids})")
    arr = _as_point(gc, p)
    off = gc.offsets[grid_index]
    z = np.floor((arr - off) / gc.cell_side).astype(np.int64)
    center = off + (z + 0.5) * gc.cell_side
    return CellKey(grid_index, tuple(int(v) for v in z)), center


def cell_center(gc: GridCollection, key: CellKey) -> np.ndarray:
    off = gc.offsets[key.grid_index]
    z = np.asarray(key.lattice, dtype=np.float64)
    return off + (z + 0.5) * gc.cell_side


def box_dist2(lo: np.ndarray, hi: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance from point(s) c to closed boxes [lo, hi].

    All universe-membership decisions in the package go through this one
    expression so that float behavior is identical everywhere.
    """
    gap = np.maximum(np.maximum(lo - c, c - hi), 0.0)
    return np.einsum("...i,...i->...", gap, gap)


def cells_intersecting_ball(
    gc: GridCollection, grid_index: int, center, radius: float = 1.0
) -> list[CellKey]:
    """Exactly the cells of one grid whose closed box is within `radius` of center."""
    if not (radius > 0.0 and math.isfinite(radius)):
        raise ValueError(f"radius must be positive and finite, got {radius!r}")
    c = _as_point(gc, center)
    off = gc.offsets[grid_index]
    s = gc.cell_side
    # Window padded by one cell per side: a box touching the ball at distance
    # exactly `radius` can sit just outside the naive floor window.
    lo_k = np.floor((c - radius - off) / s).astype(np.int64) - 1
    hi_k = np.floor((c + radius - off) / s).astype(np.int64) + 1
    axes = [np.arange(lo_k[i], hi_k[i] + 1) for i in range(gc.d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    z = np.stack([m.ravel() for m in mesh], axis=1)
    box_lo = off + z * s
    d2 = box_dist2(box_lo, box_lo + s, c)
    keep = d2 <= radius * radius
    return [CellKey(grid_index, tuple(int(v) for v in row)) for row in z[keep]]


def grid_shift_ints(gc: GridCollection) -> np.ndarray:
    """Integer shift indices j per grid, shape (n_grids, d): offsets = j * shift_step."""
    axis = np.arange(gc.shifts_per_axis, dtype=np.int64)
    mesh = np.meshgrid(*([axis] * gc.d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


# ---------------------------------------------------------------------------
# Sphere sampling.
#
# Two entry points with identical math (normalize a Gaussian vector):
#  * sample_on_sphere takes a numpy Generator, for callers managing their own
#    stream;
#  * sphere_samples_keyed is counter-based (splitmix64 into Box-Muller), so a
#    cell's samples depend only on its key, never on the order cells are
#    visited.  The grid solvers rely on that.
# ---------------------------------------------------------------------------

def sample_on_sphere(center, radius: float, t: int, rng: np.random.Generator) -> np.ndarray:
    """t points uniform on the sphere of given center/radius, shape (t, d)."""
    c = np.asarray(center, dtype=np.float64)
    if c.ndim != 1 or c.size < 1:
        raise ValueError("center must be a 1-d point")
    if not (radius > 0.0 and math.isfinite(radius)):
        raise ValueError(f"radius must be positive and finite, got {radius!r}")
    if t < 1:
        raise ValueError(f"sample count must be >= 1, got {t}")
    g = rng.standard_normal((t, c.size))
    norms = np.linalg.norm(g, axis=1)
    for _ in range(100):
        bad = norms < 1e-12
        if not bad.any():
            break
        g[bad] = rng.standard_normal((int(bad.sum()), c.size))
        norms = np.linalg.norm(g, axis=1)
    else:
        raise RuntimeError("degenerate rng state: could not draw nonzero directions")
    return c + radius * (g / norms[:, None])


_GOLD = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    z = (x + _GOLD).astype(np.uint64)
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


def _fold_u64(parts: list[np.ndarray]) -> np.ndarray:
    """Hash equal-length uint64 arrays columnwise into one key array."""
    k = np.full_like(parts[0], 0x8000000000000000, dtype=np.uint64)
    for p in parts:
        k = _splitmix64(k ^ p)
    return k


_U64_MASK = 0xFFFFFFFFFFFFFFFF


def mix_key(parts: Iterable[int]) -> int:
    """Fold integers (any sign) into one 64-bit stream key."""
    cols = [np.array([int(v) & _U64_MASK], dtype=np.uint64) for v in parts]
    return int(_fold_u64(cols)[0])


def cell_stream_key(master_seed: int, salt: int, grid_index: int, lattice: tuple[int, ...]) -> int:
    return mix_key((master_seed, salt, grid_index, *lattice))


def cell_stream_keys(
    master_seed: int, salt: int, grid_indices: np.ndarray, lattices: np.ndarray
) -> np.ndarray:
    """Vectorized cell_stream_key: grid_indices (K,), lattices (K, d) -> (K,) uint64.

    Bitwise identical to cell_stream_key per row; cells' sample streams depend
    only on these keys, never on evaluation order.
    """
    gs = np.atleast_1d(np.asarray(grid_indices, dtype=np.int64))
    zs = np.atleast_2d(np.asarray(lattices, dtype=np.int64))
    k = len(gs)
    cols = [
        np.full(k, int(master_seed) & _U64_MASK, dtype=np.uint64),
        np.full(k, int(salt) & _U64_MASK, dtype=np.uint64),
        gs.view(np.uint64),
    ]
    cols.extend(zs[:, ax].view(np.uint64) for ax in range(zs.shape[1]))
    return _fold_u64(cols)


def _keyed_uniforms(keys: np.ndarray, n_per_key: int) -> np.ndarray:
    """(len(keys), n_per_key) uniforms in (0, 1), deterministic per key."""
    counters = np.arange(1, n_per_key + 1, dtype=np.uint64)
    raw = _splitmix64(keys[:, None] ^ (counters[None, :] * _GOLD))
    return (raw >> np.uint64(11)).astype(np.float64) * (2.0**-53) + 2.0**-54


def _keyed_normals(keys: np.ndarray, n_per_key: int) -> np.ndarray:
    pairs = (n_per_key + 1) // 2
    u = _keyed_uniforms(keys, 2 * pairs)
    u1 = u[:, :pairs]
    u2 = u[:, pairs:]
    r = np.sqrt(-2.0 * np.log(u1))
    ang = (2.0 * math.pi) * u2
    out = np.empty((keys.size, 2 * pairs), dtype=np.float64)
    out[:, 0::2] = r * np.cos(ang)
    out[:, 1::2] = r * np.sin(ang)
    return out[:, :n_per_key]


def sphere_samples_keyed(centers: np.ndarray, radius: float, t: int, keys: np.ndarray) -> np.ndarray:
    """Per-key sphere samples: centers (C, d), keys (C,) -> samples (C, t, d)."""
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    keys = np.asarray(keys, dtype=np.uint64).ravel()
    n_cells, d = centers.shape
    if keys.size != n_cells:
        raise ValueError("one key per center required")
    g = _keyed_normals(keys, t * d).reshape(n_cells, t, d)
    norms = np.linalg.norm(g, axis=2)
    if np.any(norms < 1e-12):
        # Probability ~0 under 53-bit uniforms; regenerate those rows shifted.
        bad = norms < 1e-12
        g2 = _keyed_normals(_splitmix64(keys), t * d).reshape(n_cells, t, d)
        g = np.where(bad[:, :, None], g2, g)
        norms = np.linalg.norm(g, axis=2)
        if np.any(norms < 1e-12):
            raise RuntimeError("degenerate keyed sample stream")
    return centers[:, None, :] + radius * (g / norms[:, :, None])


# ---------------------------------------------------------------------------
# Boundary-cap coverage bounds.
#
# Setting: a sphere of radius eps (a cell circumsphere) and a unit ball whose
# boundary passes at distance eps^2 from the sphere's center.  The fraction of
# the sphere covered by the ball is bounded below by the closed form (d = 2)
# or via the G_k integrals (d >= 3).
# ---------------------------------------------------------------------------

def cap_fraction_2d(eps: float) -> float:
    """Fraction of a radius-eps circle covered by a unit disk tangent as above."""
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 0.5), got {eps!r}")
    x = (3.0 * eps + eps**3) / (2.0 + 2.0 * eps * eps)
    return math.acos(x) / math.pi


def _simpson(f, a: float, b: float) -> float:
    m = 0.5 * (a + b)
    return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))


def _adaptive_simpson(f, a: float, b: float, tol: float, whole: float, depth: int) -> float:
    m = 0.5 * (a + b)
    left = _simpson(f, a, m)
    right = _simpson(f, m, b)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return _adaptive_simpson(f, a, m, tol / 2.0, left, depth - 1) + _adaptive_simpson(
        f, m, b, tol / 2.0, right, depth - 1
    )


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10) -> float:
    """Adaptive Simpson quadrature with absolute tolerance."""
    if a == b:
        return 0.0
    return _adaptive_simpson(f, a, b, tol, _simpson(f, a, b), 60)


def _g_integral(k: int, x: float) -> float:
    """G_k(x) = integral_0^x (1 - t^2)^((k-1)/2) dt for 0 <= x <= 1."""
    if k == 1:
        return x
    expo = (k - 1) / 2.0
    return adaptive_simpson(lambda t: (1.0 - t * t) ** expo, 0.0, x)


def cap_fraction_bound(d: int, eps: float) -> float:
    """Lower bound on the covered fraction of a radius-eps (d-1)-sphere, d >= 2."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 0.5), got {eps!r}")
    if d == 2:
        return cap_fraction_2d(eps)
    b = (3.0 * eps * eps + eps**4) / (2.0 + 2.0 * eps * eps)
    q = b / eps
    return 0.5 - _g_integral(d - 2, q) / (2.0 * _g_integral(d - 2, 1.0))
