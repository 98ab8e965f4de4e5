"""Compact domains in R^n (n = 1, 2, 3): membership tests and exact metrics.

Every shape is immutable after construction and all operations are pure
functions of the shape parameters, so instances are safe to share across
threads.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Ball",
    "Box",
    "Domain",
    "DomainError",
    "DomainMetrics",
    "Ellipse",
    "Interval",
    "Polygon",
    "RasterMask",
    "domain_from_spec",
    "unit_ball_volume",
]

CLOSED_FORM = "closed-form"
ESTIMATED = "estimated"


class DomainError(ValueError):
    """Raised for malformed shape parameters or misuse of a domain."""


def _gamma_half(z: float) -> float:
    # Exact recursion off Gamma(1) = 1 and Gamma(1/2) = sqrt(pi).  Only
    # positive integer and half-integer arguments occur for n in {1,2,3}.
    two_z = round(2 * z)
    if z <= 0 or two_z != 2 * z:
        raise ValueError(f"need a positive half-integer argument, got {z}")
    if two_z % 2:
        value, base = math.sqrt(math.pi), 0.5
    else:
        value, base = 1.0, 1.0
    while base < z - 0.25:
        value *= base
        base += 1.0
    return value


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n: pi^(n/2) / Gamma(n/2 + 1).

    Evaluates to 2, pi and 4*pi/3 for n = 1, 2, 3.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return math.pi ** (n / 2) / _gamma_half(n / 2 + 1)


@dataclass(frozen=True)
class DomainMetrics:
    """Exact or certified size measures of a domain.

    `exactness` maps a field name to "closed-form" or "estimated"; estimated
    fields carry an absolute error bound in `error_bounds`.
    """

    volume: float
    diameter: float
    perimeter: float | None = None
    exactness: dict = field(default_factory=dict)
    error_bounds: dict = field(default_factory=dict)

    @property
    def area(self) -> float:
        """Two-dimensional alias of `volume`."""
        return self.volume


class Domain(ABC):
    """A compact region of R^n with an inclusive (closed) membership test."""

    kind = "domain"

    def __init__(self, dim: int, bounding_box: np.ndarray):
        if dim not in (1, 2, 3):
            raise DomainError(f"dim must be 1, 2 or 3, got {dim}")
        box = np.asarray(bounding_box, dtype=float).reshape(dim, 2)
        if not np.all(np.isfinite(box)):
            raise DomainError("bounding box must be finite")
        if not np.all(box[:, 1] > box[:, 0]):
            raise DomainError("bounding box must have positive extent on every axis")
        self.dim = int(dim)
        self.bounding_box = box

    def contains(self, point) -> bool:
        """Inclusive membership: boundary points report True."""
        return bool(self.membership(self._check_point(point), strict=False)[0])

    def strictly_contains(self, point) -> bool:
        """Open-interior membership: boundary points report False."""
        return bool(self.membership(self._check_point(point), strict=True)[0])

    def membership(self, points: np.ndarray, strict: bool = False) -> np.ndarray:
        """Vectorized membership test for an (M, dim) array of points."""
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.dim:
            raise DomainError(
                f"points must have shape (M, {self.dim}), got {points.shape}"
            )
        return self._membership(points, strict)

    def _check_point(self, point) -> np.ndarray:
        point = np.atleast_1d(np.asarray(point, dtype=float))
        if point.shape != (self.dim,):
            raise DomainError(
                f"point has {point.shape[0]} coordinates, domain has dim {self.dim}"
            )
        return point.reshape(1, self.dim)

    @abstractmethod
    def _membership(self, points: np.ndarray, strict: bool) -> np.ndarray: ...

    @abstractmethod
    def metrics(self) -> DomainMetrics:
        """Volume, diameter and (in 2-D) perimeter with exactness flags."""

    @abstractmethod
    def to_spec(self) -> dict:
        """JSON-serializable description; inverse of `domain_from_spec`."""

    def __eq__(self, other):
        return type(other) is type(self) and other.to_spec() == self.to_spec()

    def __hash__(self):
        return hash(repr(self.to_spec()))

    def __repr__(self):
        return f"{type(self).__name__}({self.to_spec()['params']})"


class Interval(Domain):
    """The segment [a, b] on the line."""

    kind = "interval"

    def __init__(self, a: float, b: float):
        if not b > a:
            raise DomainError(f"need b > a, got a={a}, b={b}")
        self.a = float(a)
        self.b = float(b)
        super().__init__(1, [[self.a, self.b]])

    def _membership(self, points, strict):
        x = points[:, 0]
        if strict:
            return (x > self.a) & (x < self.b)
        return (x >= self.a) & (x <= self.b)

    def metrics(self):
        length = self.b - self.a
        return DomainMetrics(
            volume=length,
            diameter=length,
            exactness={"volume": CLOSED_FORM, "diameter": CLOSED_FORM},
        )

    def to_spec(self):
        return {"kind": self.kind, "dim": 1, "params": {"a": self.a, "b": self.b}}


class Box(Domain):
    """An axis-aligned box given by per-axis bounds [[lo, hi], ...]."""

    kind = "box"

    def __init__(self, bounds):
        bounds = np.asarray(bounds, dtype=float)
        if bounds.ndim != 2 or bounds.shape[1] != 2:
            raise DomainError(f"bounds must be (dim, 2), got {bounds.shape}")
        if not np.all(bounds[:, 1] > bounds[:, 0]):
            raise DomainError("each axis needs hi > lo")
        self.bounds = bounds
        super().__init__(bounds.shape[0], bounds)

    def _membership(self, points, strict):
        lo, hi = self.bounds[:, 0], self.bounds[:, 1]
        if strict:
            return np.all((points > lo) & (points < hi), axis=1)
        return np.all((points >= lo) & (points <= hi), axis=1)

    def metrics(self):
        sides = self.bounds[:, 1] - self.bounds[:, 0]
        perimeter = 2.0 * float(sides.sum()) if self.dim == 2 else None
        exact = {"volume": CLOSED_FORM, "diameter": CLOSED_FORM}
        if perimeter is not None:
            exact["perimeter"] = CLOSED_FORM
        return DomainMetrics(
            volume=float(np.prod(sides)),
            diameter=float(np.linalg.norm(sides)),
            perimeter=perimeter,
            exactness=exact,
        )

    def to_spec(self):
        return {
            "kind": self.kind,
            "dim": self.dim,
            "params": {"bounds": self.bounds.tolist()},
        }


class Ball(Domain):
    """A solid ball (segment / disk / ball for n = 1, 2, 3)."""

    kind = "ball"

    def __init__(self, center, radius: float):
        center = np.atleast_1d(np.asarray(center, dtype=float))
        if radius <= 0:
            raise DomainError(f"radius must be positive, got {radius}")
        self.center = center
        self.radius = float(radius)
        box = np.stack([center - radius, center + radius], axis=1)
        super().__init__(center.shape[0], box)

    def _membership(self, points, strict):
        r2 = np.sum((points - self.center) ** 2, axis=1)
        return r2 < self.radius**2 if strict else r2 <= self.radius**2

    def metrics(self):
        volume = unit_ball_volume(self.dim) * self.radius**self.dim
        perimeter = 2.0 * math.pi * self.radius if self.dim == 2 else None
        exact = {"volume": CLOSED_FORM, "diameter": CLOSED_FORM}
        if perimeter is not None:
            exact["perimeter"] = CLOSED_FORM
        return DomainMetrics(
            volume=volume,
            diameter=2.0 * self.radius,
            perimeter=perimeter,
            exactness=exact,
        )

    def to_spec(self):
        return {
            "kind": self.kind,
            "dim": self.dim,
            "params": {"center": self.center.tolist(), "radius": self.radius},
        }


def _agm_ellipse_perimeter(a: float, b: float) -> float:
    # Complete elliptic integral of the second kind via the
    # arithmetic-geometric mean; quadratically convergent.
    big, small = max(a, b), min(a, b)
    x, y = 1.0, small / big
    c2_sum = 0.5 * (1.0 - y * y)  # 2^(n-1) * c_n^2 accumulator, n = 0 term
    power = 0.5
    for _ in range(40):  # quadratic convergence; 40 is far beyond need
        if abs(x - y) <= 4e-16 * x:
            break
        c = 0.5 * (x - y)
        x, y = 0.5 * (x + y), math.sqrt(x * y)
        power *= 2.0
        c2_sum += power * c * c
    k_complete = math.pi / (x + y)  # = pi / (2 * agm)
    e_complete = k_complete * (1.0 - c2_sum)
    return 4.0 * big * e_complete


class Ellipse(Domain):
    """An axis-aligned ellipse (n = 2) or ellipsoid (n = 3)."""

    kind = "ellipse"

    def __init__(self, center, semi_axes):
        center = np.atleast_1d(np.asarray(center, dtype=float))
        semi = np.atleast_1d(np.asarray(semi_axes, dtype=float))
        if center.shape != semi.shape:
            raise DomainError("center and semi_axes must have the same length")
        if semi.shape[0] not in (2, 3):
            raise DomainError("ellipse supports dim 2 or 3")
        if not np.all(semi > 0):
            raise DomainError("semi-axes must be positive")
        self.center = center
        self.semi_axes = semi
        box = np.stack([center - semi, center + semi], axis=1)
        super().__init__(semi.shape[0], box)

    def _membership(self, points, strict):
        q = np.sum(((points - self.center) / self.semi_axes) ** 2, axis=1)
        return q < 1.0 if strict else q <= 1.0

    def metrics(self):
        volume = unit_ball_volume(self.dim) * float(np.prod(self.semi_axes))
        diameter = 2.0 * float(np.max(self.semi_axes))
        exact = {"volume": CLOSED_FORM, "diameter": CLOSED_FORM}
        bounds = {}
        perimeter = None
        if self.dim == 2:
            perimeter = _agm_ellipse_perimeter(*self.semi_axes)
            exact["perimeter"] = ESTIMATED
            bounds["perimeter"] = 1e-12 * perimeter
        return DomainMetrics(
            volume=volume,
            diameter=diameter,
            perimeter=perimeter,
            exactness=exact,
            error_bounds=bounds,
        )

    def to_spec(self):
        return {
            "kind": self.kind,
            "dim": self.dim,
            "params": {
                "center": self.center.tolist(),
                "semi_axes": self.semi_axes.tolist(),
            },
        }


class Polygon(Domain):
    """A simple polygon with counterclockwise vertices (n = 2)."""

    kind = "polygon"

    def __init__(self, vertices):
        verts = np.asarray(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or verts.shape[0] < 3:
            raise DomainError("vertices must be an (m >= 3, 2) array")
        signed = _shoelace(verts)
        if signed <= 0:
            raise DomainError("vertices must be in counterclockwise order")
        if _self_intersects(verts):
            raise DomainError("polygon must be simple (non-self-intersecting)")
        self.vertices = verts
        box = np.stack([verts.min(axis=0), verts.max(axis=0)], axis=1)
        super().__init__(2, box)
        self._scale = float(np.max(box[:, 1] - box[:, 0]))

    def _membership(self, points, strict):
        on_edge = np.zeros(points.shape[0], dtype=bool)
        inside = np.zeros(points.shape[0], dtype=bool)
        eps = 1e-12 * max(self._scale, 1.0)
        px, py = points[:, 0], points[:, 1]
        verts = self.vertices
        m = verts.shape[0]
        for i in range(m):
            ax, ay = verts[i]
            bx, by = verts[(i + 1) % m]
            # boundary test: zero cross product and within the segment span
            cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
            dot = (px - ax) * (bx - ax) + (py - ay) * (by - ay)
            seg2 = (bx - ax) ** 2 + (by - ay) ** 2
            on_edge |= (
                (np.abs(cross) <= eps * math.sqrt(seg2))
                & (dot >= -eps)
                & (dot <= seg2 + eps)
            )
            # even-odd ray casting, half-open in y to be vertex-safe
            crosses = (ay <= py) != (by <= py)
            with np.errstate(divide="ignore", invalid="ignore"):
                x_int = ax + (py - ay) * (bx - ax) / (by - ay)
            inside ^= crosses & (px < x_int)
        return (inside & ~on_edge) if strict else (inside | on_edge)

    def metrics(self):
        verts = self.vertices
        area = 0.5 * _shoelace(verts)
        edge = np.roll(verts, -1, axis=0) - verts
        perimeter = float(np.sum(np.hypot(edge[:, 0], edge[:, 1])))
        diff = verts[:, None, :] - verts[None, :, :]
        diameter = float(np.sqrt(np.max(np.sum(diff**2, axis=-1))))
        return DomainMetrics(
            volume=float(area),
            diameter=diameter,
            perimeter=perimeter,
            exactness={
                "volume": CLOSED_FORM,
                "diameter": CLOSED_FORM,
                "perimeter": CLOSED_FORM,
            },
        )

    def to_spec(self):
        return {
            "kind": self.kind,
            "dim": 2,
            "params": {"vertices": self.vertices.tolist()},
        }


def _shoelace(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _self_intersects(verts: np.ndarray) -> bool:
    m = verts.shape[0]

    def orient(p, q, r):
        v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        return 0 if abs(v) < 1e-14 else (1 if v > 0 else -1)

    for i in range(m):
        a, b = verts[i], verts[(i + 1) % m]
        for j in range(i + 1, m):
            if j == i or (j + 1) % m == i or (i + 1) % m == j:
                continue  # adjacent edges share a vertex by construction
            c, d = verts[j], verts[(j + 1) % m]
            if (
                orient(a, b, c) != orient(a, b, d)
                and orient(c, d, a) != orient(c, d, b)
            ):
                return True
    return False


class RasterMask(Domain):
    """A union of grid cells given by a 0/1 occupancy array.

    The mask array is indexed mask[i][j] (row-major); axis 0 is the first
    coordinate.  The represented region is the closed union of occupied
    cells of side `cell_size`, anchored at `origin`.
    """

    kind = "raster-mask"

    def __init__(self, mask, cell_size: float, origin=None):
        occ = np.asarray(mask)
        if occ.ndim not in (2, 3):
            raise DomainError("mask must be a 2-D or 3-D array")
        if cell_size <= 0:
            raise DomainError(f"cell_size must be positive, got {cell_size}")
        self.occupied = occ.astype(bool)
        if not self.occupied.any():
            raise DomainError("mask has no occupied cells")
        self.cell_size = float(cell_size)
        dim = occ.ndim
        self.origin = (
            np.zeros(dim) if origin is None else np.asarray(origin, dtype=float)
        )
        hi = self.origin + np.array(occ.shape) * self.cell_size
        super().__init__(dim, np.stack([self.origin, hi], axis=1))

    def _cells_covering(self, points, offset):
        idx = np.floor((points - self.origin) / self.cell_size + offset).astype(int)
        return idx

    def _membership(self, points, strict):
        eps = 1e-9  # in cell units; lattice points sit exactly on cell faces
        lo = self._cells_covering(points, -eps)
        hi = self._cells_covering(points, +eps)
        shape = np.array(self.occupied.shape)
        result = np.ones(points.shape[0], dtype=bool) if strict else np.zeros(
            points.shape[0], dtype=bool
        )
        # enumerate the up-to-2^dim cells whose closure touches each point
        for corner in np.ndindex(*(2,) * self.dim):
            idx = lo + (hi - lo) * np.array(corner)
            in_range = np.all((idx >= 0) & (idx < shape), axis=1)
            clipped = np.clip(idx, 0, shape - 1)
            occ = self.occupied[tuple(clipped.T)] & in_range
            if strict:
                result &= occ
            else:
                result |= occ
        return result

    def metrics(self):
        cell_vol = self.cell_size**self.dim
        count = int(self.occupied.sum())
        boundary = int(self._boundary_cells().sum())
        volume = count * cell_vol
        corners = self._occupied_corners()
        diameter = _max_pairwise_distance(corners)
        perimeter = None
        exact = {"volume": ESTIMATED, "diameter": CLOSED_FORM}
        bounds = {"volume": boundary * cell_vol}
        if self.dim == 2:
            perimeter = self._exposed_edges() * self.cell_size
            exact["perimeter"] = CLOSED_FORM
        return DomainMetrics(
            volume=volume,
            diameter=diameter,
            perimeter=perimeter,
            exactness=exact,
            error_bounds=bounds,
        )

    def _boundary_cells(self) -> np.ndarray:
        # occupied cells with at least one non-occupied axis neighbor
        occ = self.occupied
        pad = np.pad(occ, 1, constant_values=False)
        interior = np.ones_like(occ)
        for axis in range(self.dim):
            for shift in (-1, 1):
                sl = tuple(
                    slice(1 + (shift if a == axis else 0), s + 1 + (shift if a == axis else 0))
                    for a, s in enumerate(occ.shape)
                )
                interior &= pad[sl]
        return occ & ~interior

    def _exposed_edges(self) -> int:
        occ = self.occupied
        pad = np.pad(occ, 1, constant_values=False)
        edges = 0
        for axis in range(self.dim):
            for shift in (-1, 1):
                sl = tuple(
                    slice(1 + (shift if a == axis else 0), s + 1 + (shift if a == axis else 0))
                    for a, s in enumerate(occ.shape)
                )
                edges += int(np.sum(occ & ~pad[sl]))
        return edges

    def _occupied_corners(self) -> np.ndarray:
        idx = np.argwhere(self._boundary_cells())
        corners = set()
        for cell in idx:
            for corner in np.ndindex(*(2,) * self.dim):
                corners.add(tuple(cell + np.array(corner)))
        pts = np.array(sorted(corners), dtype=float)
        return self.origin + pts * self.cell_size

    def has_holes(self) -> bool:
        """True when unoccupied cells are fully enclosed by occupied ones."""
        occ = self.occupied
        shape = occ.shape
        seen = np.zeros(shape, dtype=bool)
        queue = deque()
        for cell in np.argwhere(~occ):
            if any(c in (0, s - 1) for c, s in zip(cell, shape)):
                cell = tuple(cell)
                if not seen[cell]:
                    seen[cell] = True
                    queue.append(cell)
        while queue:
            cell = queue.popleft()
            for axis in range(self.dim):
                for shift in (-1, 1):
                    nb = list(cell)
                    nb[axis] += shift
                    nb = tuple(nb)
                    if all(0 <= c < s for c, s in zip(nb, shape)):
                        if not occ[nb] and not seen[nb]:
                            seen[nb] = True
                            queue.append(nb)
        return bool(np.any(~occ & ~seen))

    def to_spec(self):
        return {
            "kind": self.kind,
            "dim": self.dim,
            "params": {
                "mask": self.occupied.astype(int).tolist(),
                "cell_size": self.cell_size,
                "origin": self.origin.tolist(),
            },
        }


def _max_pairwise_distance(points: np.ndarray, chunk: int = 512) -> float:
    best = 0.0
    for start in range(0, points.shape[0], chunk):
        block = points[start : start + chunk]
        diff = block[:, None, :] - points[None, :, :]
        best = max(best, float(np.max(np.sum(diff**2, axis=-1))))
    return math.sqrt(best)


_KINDS = {}


def _register(cls):
    _KINDS[cls.kind] = cls
    return cls


for _cls in (Interval, Box, Ball, Ellipse, Polygon, RasterMask):
    _register(_cls)


def domain_from_spec(spec: dict) -> Domain:
    """Build a Domain from its JSON description.

    Expected shape: {"kind": ..., "dim": n, "params": {...}} with parameter
    names as produced by `Domain.to_spec`.
    """
    if not isinstance(spec, dict):
        raise DomainError("domain spec must be a JSON object")
    try:
        kind = spec["kind"]
    except KeyError:
        raise DomainError("domain spec is missing the 'kind' field") from None
    if kind not in _KINDS:
        raise DomainError(
            f"unknown domain kind '{kind}' (expected one of {sorted(_KINDS)})"
        )
    params = spec.get("params")
    if not isinstance(params, dict):
        raise DomainError("domain spec is missing the 'params' object")
    try:
        if kind == "interval":
            domain = Interval(params["a"], params["b"])
        elif kind == "box":
            domain = Box(params["bounds"])
        elif kind == "ball":
            domain = Ball(params["center"], params["radius"])
        elif kind == "ellipse":
            domain = Ellipse(params["center"], params["semi_axes"])
        elif kind == "polygon":
            domain = Polygon(params["vertices"])
        else:
            domain = RasterMask(
                params["mask"], params["cell_size"], params.get("origin")
            )
    except KeyError as exc:
        raise DomainError(f"domain spec params are missing field {exc}") from None
    declared = spec.get("dim")
    if declared is not None and int(declared) != domain.dim:
        raise DomainError(
            f"declared dim {declared} does not match shape dim {domain.dim}"
        )
    return domain
