"""Plant lattice layout and a uniform-grid spatial index for neighbor queries.

Plants sit on a rectangular lattice: position (i * dx, j * dy) for
i in [0, floor(W/dx)], j in [0, floor(H/dy)], stored row-major with the
x index outermost. Both boundary rows are included (a plant at coordinate
0 and at floor(W/dx) * dx <= W are both inside the field).

The spatial index buckets plants into square cells keyed by integer cell
coordinates; `neighbors_within` scans only the cells overlapping the query
disk and then filters by exact Euclidean distance, so results are identical
to a brute-force all-pairs scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import FieldSpec, SeedingStrategy, ValidationError

# Snap tolerance for length/spacing ratios: 100 m at 0.2 m spacing must give
# 501 lattice positions per axis even though 100/0.2 rounds just below 500.
_SNAP = 1e-9


def _axis_points(length: float, spacing: float) -> int:
    return int(math.floor(length / spacing + _SNAP)) + 1


def lattice_shape(field: FieldSpec, strategy: SeedingStrategy) -> tuple[int, int]:
    """Lattice dimensions (points along x, points along y)."""
    return (
        _axis_points(field.width_m, strategy.dx_m),
        _axis_points(field.height_m, strategy.dy_m),
    )


def lattice_capacity(field: FieldSpec, strategy: SeedingStrategy) -> int:
    nx, ny = lattice_shape(field, strategy)
    return nx * ny


@dataclass(frozen=True, eq=False)
class PlantGrid:
    """Immutable plant positions plus the cell index for neighbor queries."""

    positions: np.ndarray  # (count, 2) float64, row-major lattice order
    count: int
    cutoff_radius_m: float
    cell_size_m: float
    cell_stride: int
    cells: dict  # int cell key -> np.ndarray of plant indices (ascending)
    span_m: float  # diagonal of the occupied bounding box (max pair distance)

    def neighbor_arrays(self, index: int, radius_m: float):
        """Indices and exact distances of plants within radius_m of plant
        `index` (self excluded). Fast path used by the epidemic engine;
        the index order follows cell-scan order, not plant order."""
        if not 0 <= index < self.count:
            raise IndexError(f"plant index {index} out of range [0, {self.count})")
        if radius_m <= 0:
            empty = np.empty(0)
            return empty.astype(np.int64), empty
        # No pair is farther apart than the bounding-box diagonal, so huge
        # (even infinite) cutoffs reduce to a full scan with finite cell math.
        radius_m = min(radius_m, self.span_m)
        x, y = self.positions[index]
        cell = self.cell_size_m
        cx0 = max(int((x - radius_m) // cell), 0)
        cx1 = int((x + radius_m) // cell)
        cy0 = max(int((y - radius_m) // cell), 0)
        cy1 = int((y + radius_m) // cell)
        chunks = []
        for cx in range(cx0, cx1 + 1):
            base = cx * self.cell_stride
            for cy in range(cy0, cy1 + 1):
                hit = self.cells.get(base + cy)
                if hit is not None:
                    chunks.append(hit)
        if not chunks:
            empty = np.empty(0)
            return empty.astype(np.int64), empty
        cand = np.concatenate(chunks)
        dx = self.positions[cand, 0] - x
        dy = self.positions[cand, 1] - y
        dist = np.hypot(dx, dy)
        keep = (dist <= radius_m) & (cand != index)
        return cand[keep], dist[keep]


def _build_cells(positions: np.ndarray, cell_size: float):
    cx = (positions[:, 0] // cell_size).astype(np.int64)
    cy = (positions[:, 1] // cell_size).astype(np.int64)
    stride = int(cy.max()) + 2 if len(cy) else 1
    keys = cx * stride + cy
    order = np.argsort(keys, kind="stable")
    uniq, starts = np.unique(keys[order], return_index=True)
    bounds = np.append(starts, len(order))
    cells = {
        int(key): order[starts[i] : bounds[i + 1]] for i, key in enumerate(uniq)
    }
    return cells, stride


def layout_grid(
    field: FieldSpec,
    strategy: SeedingStrategy,
    explicit_count: int | None = None,
    cutoff_radius_m: float | None = None,
) -> PlantGrid:
    """Materialize the planting lattice for a field and spacing.

    explicit_count keeps only the first explicit_count positions in
    row-major order. cutoff_radius_m sizes the spatial-index cells; it
    defaults to the field diagonal (every pair reachable).
    """
    nx, ny = lattice_shape(field, strategy)
    capacity = nx * ny
    if explicit_count is not None:
        if explicit_count < 1:
            raise ValidationError("invariant violated: explicit_count >= 1")
        if explicit_count > capacity:
            raise ValidationError(
                f"explicit_count {explicit_count} exceeds grid capacity {capacity}"
            )

    # Clamp the boundary row back into the field; i * dx can overshoot the
    # width by an ulp or two.
    xs = np.minimum(np.arange(nx, dtype=np.float64) * strategy.dx_m, field.width_m)
    ys = np.minimum(np.arange(ny, dtype=np.float64) * strategy.dy_m, field.height_m)
    positions = np.empty((capacity, 2), dtype=np.float64)
    positions[:, 0] = np.repeat(xs, ny)
    positions[:, 1] = np.tile(ys, nx)
    if explicit_count is not None:
        positions = positions[:explicit_count]
    count = len(positions)

    diagonal = math.hypot(field.width_m, field.height_m)
    if cutoff_radius_m is None:
        cutoff_radius_m = diagonal
    # Cell size only affects query speed, never results: small cutoffs get
    # matching cells, huge cutoffs degrade gracefully to a coarse grid.
    max_dim = max(field.width_m, field.height_m)
    cell_size = min(max(cutoff_radius_m, max_dim / 64.0), max_dim)
    cells, stride = _build_cells(positions, cell_size)
    span = math.hypot(
        float(positions[:, 0].max() - positions[:, 0].min()),
        float(positions[:, 1].max() - positions[:, 1].min()),
    )
    return PlantGrid(
        positions=positions,
        count=count,
        cutoff_radius_m=cutoff_radius_m,
        cell_size_m=cell_size,
        cell_stride=stride,
        cells=cells,
        span_m=span,
    )


def spacing_from_count(field: FieldSpec, n: int) -> SeedingStrategy:
    """Square spacing such that a ceil(sqrt(n)) x ceil(sqrt(n)) lattice
    spans the field; pair with explicit_count=n to seed exactly n plants."""
    if n < 4:
        raise ValidationError("invariant violated: n >= 4")
    side = math.isqrt(n)
    if side * side < n:
        side += 1
    return SeedingStrategy(
        dx_m=field.width_m / (side - 1),
        dy_m=field.height_m / (side - 1),
    )


def neighbors_within(
    grid: PlantGrid, index: int, radius_m: float
) -> list[tuple[int, float]]:
    """All plants at Euclidean distance <= radius_m from plant `index`,
    excluding the plant itself, as (index, distance) sorted by index."""
    if radius_m <= 0:
        raise ValidationError("invariant violated: radius_m > 0")
    idx, dist = grid.neighbor_arrays(index, radius_m)
    order = np.argsort(idx)
    return [(int(i), float(d)) for i, d in zip(idx[order], dist[order])]
