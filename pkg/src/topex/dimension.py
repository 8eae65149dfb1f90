"""Box-counting dimension of rasterized unions of open boxes.

A union is rasterized by cell-centre membership on a square-celled grid over
its bounding box, then occupied boxes are counted at dyadic coarsenings and
``log count`` is regressed on ``log(1/size)`` over the middle scales.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import DomainError
from .stretching import ExpansionTree, Interval, OpenBox

MIN_RESOLUTION = 64
MIN_SCALES = 4


@dataclass(frozen=True, eq=False)
class RasterGrid:
    """Occupancy of square cells of side ``cell`` starting at ``origin``."""

    origin: tuple[float, ...]
    cell: float
    mask: np.ndarray

    def __post_init__(self):
        if not self.cell > 0:
            raise DomainError(f"cell size must be positive, got {self.cell}")
        if self.mask.ndim not in (1, 2) or len(self.origin) != self.mask.ndim:
            raise DomainError("raster grids are one- or two-dimensional")

    @property
    def dim(self) -> int:
        return self.mask.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.mask.shape

    @property
    def occupied(self) -> int:
        return int(np.count_nonzero(self.mask))

    def _planar(self) -> np.ndarray:
        return self.mask if self.mask.ndim == 2 else self.mask[:, None]


def _as_box(b) -> OpenBox:
    if isinstance(b, OpenBox):
        return b
    if isinstance(b, Interval):
        return OpenBox((b,))
    return OpenBox(tuple(b))


def rasterize_union(boxes: Sequence, resolution: int = 1024) -> RasterGrid:
    """Mark every cell whose centre lies in at least one of the open boxes.

    ``resolution`` is the number of cells along the longest side of the
    bounding box.
    """
    boxes = [_as_box(b) for b in boxes]
    if not boxes:
        raise DomainError("cannot rasterize an empty union")
    d = boxes[0].dim
    if d not in (1, 2) or any(b.dim != d for b in boxes):
        raise DomainError("all boxes must share a dimension of 1 or 2")
    if resolution < MIN_RESOLUTION:
        raise DomainError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    lo = [min(b.lo[k] for b in boxes) for k in range(d)]
    hi = [max(b.hi[k] for b in boxes) for k in range(d)]
    cell = max(h - l for l, h in zip(lo, hi)) / resolution
    shape = [max(1, math.ceil((h - l) / cell - 1e-9)) for l, h in zip(lo, hi)]
    centres = [lo[k] + cell * (np.arange(shape[k]) + 0.5) for k in range(d)]
    start = np.zeros((len(boxes), 2), dtype=np.int64)
    stop = np.ones((len(boxes), 2), dtype=np.int64)
    for i, b in enumerate(boxes):
        for k in range(d):
            start[i, k] = np.searchsorted(centres[k], b.lo[k], side="right")
            stop[i, k] = np.searchsorted(centres[k], b.hi[k], side="left")
    ny = shape[1] if d == 2 else 1
    mask = _kernels.fill_boxes(start, stop, shape[0], ny)
    if d == 1:
        mask = mask[:, 0]
    return RasterGrid(tuple(lo), cell, np.ascontiguousarray(mask))


@dataclass(frozen=True)
class BoxCountResult:
    scales: tuple[float, ...]
    counts: tuple[int, ...]
    slope: float
    r2: float
    fit_scales: tuple[float, ...] = ()

    def rows(self) -> list[tuple[float, int]]:
        return list(zip(self.scales, self.counts))


def default_sizes(grid: RasterGrid) -> list[int]:
    """Dyadic box sizes in cells, ``1 .. 2**K`` with ``2**K <= longest side / 4``."""
    longest = max(grid.shape)
    sizes = [1]
    while sizes[-1] * 2 <= longest / 4:
        sizes.append(sizes[-1] * 2)
    return sizes


def box_count(grid: RasterGrid, sizes: Sequence[int] | None = None) -> BoxCountResult:
    """Occupied-box counts at each size and the fitted log-log slope.

    The finest and coarsest size are excluded from the fit.
    """
    sizes = default_sizes(grid) if sizes is None else [int(s) for s in sizes]
    if len(sizes) < MIN_SCALES:
        raise DomainError(f"need at least {MIN_SCALES} scales, got {len(sizes)} "
                          f"(grid {grid.shape} is too small)")
    if any(s < 1 or s & (s - 1) for s in sizes):
        raise DomainError("box sizes must be powers of two")
    sizes = sorted(sizes)
    counts = _kernels.box_counts(np.ascontiguousarray(grid._planar()), np.asarray(sizes, dtype=np.int64))
    scales = [s * grid.cell for s in sizes]
    if np.any(counts <= 0):
        raise DomainError("empty raster: no occupied cells")
    xs = np.log(1.0 / np.asarray(scales[1:-1]))
    ys = np.log(counts[1:-1].astype(np.float64))
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return BoxCountResult(tuple(scales), tuple(int(c) for c in counts), float(slope), r2, tuple(scales[1:-1]))


def cantor_intervals(depth: int) -> list[Interval]:
    """The ``2**depth`` intervals left after removing middle thirds ``depth`` times from ]0,1[."""
    if depth < 0:
        raise DomainError("depth must be non-negative")
    k = 3 ** depth
    starts = [0]
    for level in range(depth):
        w = 3 ** (depth - level - 1)
        starts = [s + off for s in starts for off in (0, 2 * w)]
    return [Interval(s / k, (s + 1) / k) for s in starts]


def cantor_set(depth: int = 8, resolution: int | None = None) -> RasterGrid:
    """Raster of the middle-thirds construction; by default one cell per remaining interval."""
    resolution = 3 ** depth if resolution is None else resolution
    return rasterize_union([OpenBox((iv,)) for iv in cantor_intervals(depth)], resolution)


def segment_grid(resolution: int = 1024) -> RasterGrid:
    """Diagonal of the unit square, one occupied cell per row."""
    if resolution < MIN_RESOLUTION:
        raise DomainError(f"resolution must be at least {MIN_RESOLUTION}")
    return RasterGrid((0.0, 0.0), 1.0 / resolution, np.eye(resolution, dtype=bool))


def stretched_union_dimension(tree: ExpansionTree, n: int, resolution: int = 1024) -> BoxCountResult:
    """Box-counting estimate for the union of the level-``n`` boxes of a planar tree."""
    if tree.base.dim != 2:
        raise DomainError(f"stretched-union dimension needs a planar tree, got dimension {tree.base.dim}")
    return box_count(rasterize_union([b for _, b in tree.level(n)], resolution))
