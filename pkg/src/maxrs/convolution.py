"""Min-plus convolution solved through 1-d interval placement problems.

Two pipelines take sequences A, B to C_k = min_{i+j=k}(A_i + B_j):

 * minplus_via_batched: negate, shift nonnegative, build a 4n-point weighted
   line instance whose best length-(2n-1-k) interval has weight max_{i+j=k}
   of the transformed sums, undo the transforms;
 * minplus_via_bsei: subtract a steep ramp so both sequences decrease
   strictly, map them to 2n points on a line, and read the answers off the
   smallest-interval-enclosing-k-points table.

Both reproduce the brute force bit-exactly on integer inputs; every
transform's inverse is applied in the pipelines, never left to callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Batched1DInstance",
    "BSEIInstance",
    "minplus_bruteforce",
    "partition_mask",
    "masked_min_to_max",
    "shift_to_positive",
    "build_batched_instance",
    "solve_batched_1d",
    "minplus_via_batched",
    "make_monotone",
    "build_bsei_instance",
    "solve_bsei",
    "minplus_via_bsei",
]


def _as_seq(a, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    return arr


def _as_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    aa, bb = _as_seq(a, "A"), _as_seq(b, "B")
    if aa.size != bb.size:
        raise ValueError(f"length mismatch: {aa.size} vs {bb.size}")
    return aa, bb


def minplus_bruteforce(A, B) -> np.ndarray:
    """C_k = min_{i+j=k}(A_i + B_j) for k in [0, n-1], by the double loop."""
    a, b = _as_pair(A, B)
    n = a.size
    c = np.full(n, np.inf)
    for i in range(n):
        for j in range(n - i):
            v = a[i] + b[j]
            if v < c[i + j]:
                c[i + j] = v
    return c


def partition_mask(n: int, m: int) -> list[list[int]]:
    """Split {0,..,n-1} into ceil(n/m) consecutive blocks of size at most m."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    return [list(range(s * m, min((s + 1) * m, n))) for s in range(math.ceil(n / m))]


def masked_min_to_max(D, E) -> tuple[np.ndarray, np.ndarray]:
    """Negate both sequences; min-plus of (D, E) is minus max-plus of the result."""
    d, e = _as_pair(D, E)
    return -d, -e


def shift_to_positive(A, B) -> tuple[np.ndarray, np.ndarray, float]:
    """Subtract the joint minimum when negative. Convolutions shift by 2*delta."""
    a, b = _as_pair(A, B)
    delta = float(min(a.min(), b.min()))
    if delta >= 0.0:
        return a, b, 0.0
    return a - delta, b - delta, delta


@dataclass(frozen=True)
class Batched1DInstance:
    """Weighted points on a line plus the interval lengths to query."""

    xs: np.ndarray
    ws: np.ndarray
    lengths: tuple[float, ...]

    def __post_init__(self):
        if self.xs.shape != self.ws.shape or self.xs.ndim != 1:
            raise ValueError("points must be parallel 1-d coordinate/weight arrays")


def build_batched_instance(A, B, M) -> Batched1DInstance:
    """Line instance whose best length-(2n-1-k) interval weight is max_{i+j=k}(A_i+B_j).

    Value points sit at integer coordinates; each is escorted by a guard of
    opposite weight half a step outward, so sliding an interval off the
    integer alignment can only lose weight. Requires nonnegative inputs.
    """
    a, b = _as_pair(A, B)
    if a.min() < 0.0 or b.min() < 0.0:
        raise ValueError("inputs must be nonnegative; run shift_to_positive first")
    n = a.size
    ks = sorted(set(int(k) for k in M))
    if ks and not (0 <= ks[0] and ks[-1] < n):
        raise ValueError(f"mask indices must lie in [0, {n}), got {ks}")
    i = np.arange(n, dtype=np.float64)
    xs = np.concatenate([i, i - 0.5, (2 * n - 1) - i, (2 * n - 1) - i + 0.5])
    ws = np.concatenate([a, -a, b, -b])
    lengths = tuple(float(2 * n - 1 - k) for k in ks)
    return Batched1DInstance(xs=xs, ws=ws, lengths=lengths)


def solve_batched_1d(inst: Batched1DInstance) -> list[float]:
    """Best closed-interval weight per length, over all placements on the line.

    An interval's weight as its position varies is a sum of closed-interval
    indicators, so the max over all placements is attained with an endpoint
    on an input point, or is 0 for a placement covering nothing. Candidates
    are evaluated with a sort, prefix sums, and two binary searches each.
    """
    order = np.argsort(inst.xs, kind="stable")
    xs = inst.xs[order]
    ws = inst.ws[order]
    prefix = np.concatenate([[0.0], np.cumsum(ws)])
    out = []
    for L in inst.lengths:
        if L < 0:
            raise ValueError(f"interval length must be nonnegative, got {L}")
        starts = np.concatenate([xs, xs - L])
        ends = starts + L
        lo = np.searchsorted(xs, starts, side="left")
        hi = np.searchsorted(xs, ends, side="right")
        weights = prefix[hi] - prefix[lo]
        out.append(float(max(0.0, weights.max())))
    return out


def minplus_via_batched(A, B, m: int) -> np.ndarray:
    """Min-plus convolution through the batched interval-placement solver."""
    a, b = _as_pair(A, B)
    n = a.size
    masks = partition_mask(n, m)
    na, nb = masked_min_to_max(a, b)
    sa, sb, delta = shift_to_positive(na, nb)
    # Raise both sequences so any A/B pair outweighs a lone point.  A guard
    # cancels every point an interval fully passes over, but a placement
    # hanging off one end of the construction can still isolate a single
    # point; with values >= boost > any original value, 2*boost beats
    # boost + max and such placements never win.
    boost = float(max(sa.max(), sb.max())) + 1.0
    sa = sa + boost
    sb = sb + boost
    c = np.empty(n)
    for mask in masks:
        ks = sorted(mask)
        inst = build_batched_instance(sa, sb, ks)
        best = solve_batched_1d(inst)
        for k, w in zip(ks, best):
            # Undo the boost and shift (twice each: one per operand), then
            # the negation.
            c[k] = -(w - 2.0 * boost + 2.0 * delta)
    return c


def make_monotone(A, B) -> tuple[np.ndarray, np.ndarray, float]:
    """Subtract i*delta from both so they strictly decrease; C_k = F_k + k*delta.

    delta is one more than the largest consecutive increase in either input,
    floored at 1 so the slope is steep enough even for decreasing inputs.
    """
    a, b = _as_pair(A, B)
    n = a.size
    if n == 1:
        return a.copy(), b.copy(), 0.0
    rise = max(float(np.diff(a).max()), float(np.diff(b).max()))
    delta = max(1.0 + rise, 1.0)
    i = np.arange(n, dtype=np.float64)
    return a - i * delta, b - i * delta, delta


@dataclass(frozen=True)
class BSEIInstance:
    """Sorted points for smallest-enclosing-interval queries; first half negative."""

    points: np.ndarray

    def __post_init__(self):
        if self.points.ndim != 1 or self.points.size % 2 != 0:
            raise ValueError("expected an even number of points in one dimension")


def build_bsei_instance(D, E) -> BSEIInstance:
    """Map strictly decreasing D, E to 2n increasing points, negatives then positives."""
    d, e = _as_pair(D, E)
    n = d.size
    if n > 1 and (np.diff(d).max() >= 0 or np.diff(e).max() >= 0):
        raise ValueError("inputs must be strictly decreasing; run make_monotone first")
    p_neg = -d + (d[n - 1] - 1.0)
    p_pos = e[::-1] + (1.0 - e[n - 1])
    pts = np.concatenate([p_neg, p_pos])
    if not (p_neg.max() < 0.0 < p_pos.min() and np.diff(pts).min() > 0.0):
        raise ValueError("construction invariant violated: points not split and increasing")
    return BSEIInstance(points=pts)


def solve_bsei(points) -> np.ndarray:
    """G[k-1] = length of the smallest interval enclosing k of the points, k=1..N."""
    pts = np.sort(_as_seq(points, "points"))
    N = pts.size
    return np.array([float((pts[k - 1 :] - pts[: N - k + 1]).min()) for k in range(1, N + 1)])


def minplus_via_bsei(A, B) -> np.ndarray:
    """Min-plus convolution through smallest-enclosing-interval queries."""
    a, b = _as_pair(A, B)
    n = a.size
    d, e, delta = make_monotone(a, b)
    g = solve_bsei(build_bsei_instance(d, e).points)
    k = np.arange(n, dtype=np.float64)
    # Enclosing 2n-k points means excluding the k extreme ones, which is
    # where the min over i+j=k hides; the constants fold the two anchors.
    f = g[2 * n - np.arange(n) - 1] + d[n - 1] + e[n - 1] - 2.0
    return f + k * delta
