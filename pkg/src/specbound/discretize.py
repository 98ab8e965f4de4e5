"""Uniform-lattice discretization of -Laplacian with Dirichlet conditions.

The lattice is anchored at the corner of the domain's bounding box.  A
lattice point becomes an unknown iff it lies strictly inside the domain;
omitted neighbors contribute nothing to the stencil, which imposes the
homogeneous Dirichlet condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sparse

from .geometry import Domain

__all__ = ["Grid", "GridError", "OperatorMatrix", "build_grid", "assemble"]


class GridError(ValueError):
    """Raised when a grid cannot be built from the given spacing."""


@dataclass(frozen=True)
class Grid:
    """Interior lattice points of a domain at spacing h.

    `interior_flat` holds flat lattice indices (row-major over `shape`) of
    the interior points in ascending order; `index_of` maps a flat lattice
    index to the 0..N-1 interior numbering, with -1 for omitted points.
    """

    domain: Domain
    spacing: float
    origin: np.ndarray
    shape: tuple
    interior_flat: np.ndarray
    index_of: np.ndarray

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def point_count(self) -> int:
        return int(self.interior_flat.shape[0])

    def points(self) -> np.ndarray:
        """Coordinates of the interior points, shape (N, dim)."""
        multi = np.array(np.unravel_index(self.interior_flat, self.shape)).T
        return self.origin + multi * self.spacing

    def neighbor_pairs(self, axis: int, step: int):
        """Interior-index pairs (src, dst) with dst = src shifted by `step`
        lattice cells along `axis`; pairs whose target is omitted are
        dropped."""
        multi = np.array(np.unravel_index(self.interior_flat, self.shape)).T
        multi[:, axis] += step
        valid = (multi[:, axis] >= 0) & (multi[:, axis] < self.shape[axis])
        flat = np.ravel_multi_index(tuple(multi[valid].T), self.shape)
        dst = self.index_of[flat]
        src = np.nonzero(valid)[0][dst >= 0]
        return src, dst[dst >= 0]


@dataclass(frozen=True)
class OperatorMatrix:
    """Sparse symmetric positive-definite discretization of -Laplacian."""

    matrix: sparse.csr_matrix = field(repr=False)
    spacing: float
    dim: int

    @property
    def shape(self):
        return self.matrix.shape

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x

    def quadratic_form(self, x: np.ndarray) -> float:
        return float(x @ (self.matrix @ x))

    def to_coordinate_text(self) -> str:
        """Coordinate dump: one '<i> <j> <value>' line per stored entry,
        0-based, sorted by (i, j)."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        lines = [
            f"{coo.row[k]} {coo.col[k]} {coo.data[k]:.17g}" for k in order
        ]
        return "\n".join(lines) + "\n"


def build_grid(domain: Domain, h: float) -> Grid:
    """Lay a lattice of spacing h over the bounding box and keep the points
    strictly inside the domain.

    Raises GridError when h is nonpositive, too coarse relative to the
    bounding box, or leaves no interior point.
    """
    if not h > 0:
        raise GridError(f"spacing must be positive, got {h}")
    box = domain.bounding_box
    edges = box[:, 1] - box[:, 0]
    if h >= float(edges.min()) / 2.0:
        raise GridError(
            f"spacing {h} must be below half the shortest bounding-box edge "
            f"({float(edges.min()) / 2.0})"
        )
    origin = box[:, 0].copy()
    shape = tuple(int(np.floor(e / h + 1e-9)) + 1 for e in edges)
    axes = [origin[a] + np.arange(shape[a]) * h for a in range(domain.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    inside = domain.membership(points, strict=True)
    interior_flat = np.nonzero(inside)[0].astype(np.int64)
    if interior_flat.shape[0] == 0:
        raise GridError(f"no interior lattice point at spacing {h}; refine h")
    index_of = np.full(points.shape[0], -1, dtype=np.int64)
    index_of[interior_flat] = np.arange(interior_flat.shape[0])
    return Grid(
        domain=domain,
        spacing=float(h),
        origin=origin,
        shape=shape,
        interior_flat=interior_flat,
        index_of=index_of,
    )


def assemble(grid: Grid) -> OperatorMatrix:
    """Assemble the (2*dim+1)-point stencil matrix for -Laplacian.

    Diagonal entries are 2*dim/h^2; each pair of adjacent interior points
    contributes -1/h^2 symmetrically.  Omitted neighbors contribute nothing.
    """
    n = grid.point_count
    h2 = grid.spacing * grid.spacing
    rows, cols = [], []
    for axis in range(grid.dim):
        for step in (-1, 1):
            src, dst = grid.neighbor_pairs(axis, step)
            rows.append(src)
            cols.append(dst)
    rows = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cols = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    off = sparse.coo_matrix(
        (np.full(rows.shape[0], -1.0 / h2), (rows, cols)), shape=(n, n)
    )
    diag = sparse.dia_matrix(
        (np.full(n, 2.0 * grid.dim / h2)[None, :], [0]), shape=(n, n)
    )
    matrix = (off + diag).tocsr()
    matrix.sort_indices()
    return OperatorMatrix(matrix=matrix, spacing=grid.spacing, dim=grid.dim)
