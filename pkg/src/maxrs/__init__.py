"""Max range-sum solvers over unit balls and colored unit disks.

Exact and sampling-based solvers for the deepest-point problem in an
arrangement of unit balls (weighted) or unit disks (colored), plus the
min-plus convolution reductions that ride on the 1-d special case.
"""

from maxrs.balls import ColoredBall, WeightedBall
from maxrs.colored_approx import approx_colored_maxrs
from maxrs.colored_exact import exact_colored_maxrs
from maxrs.colored_sample import colored_solve
from maxrs.dynamic import DynamicMaxRS, static_solve
from maxrs.geometry import GridCollection, make_grid_collection

__all__ = [
    "WeightedBall",
    "ColoredBall",
    "GridCollection",
    "make_grid_collection",
    "DynamicMaxRS",
    "static_solve",
    "colored_solve",
    "exact_colored_maxrs",
    "approx_colored_maxrs",
]

__version__ = "0.1.0"
