"""Geometric kernel: points, exact orientation/in-sphere tests, smallest
enclosing balls and squared distances, dimension-generic up to DIM_CAP.

Predicate signs are exact: a floating-point filter answers the easy cases
and an arbitrary-precision rational fallback decides the rest, so zero
really means degenerate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .predicates import det_sign_exact, filtered_det_sign

DIM_CAP = 6

# Scale-aware containment tolerance used by enclosing-ball post-checks.
MEB_TOL = 1e-9


class InputError(ValueError):
    """Invalid input data (maps to CLI exit code 2)."""


def _coords(p) -> tuple[float, ...]:
    if isinstance(p, Point):
        return p.coords
    return tuple(float(x) for x in p)


@dataclass(frozen=True)
class Point:
    """A point of R^m; coordinates must be finite."""

    coords: tuple[float, ...]

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(float(x) for x in coords))
        if not self.coords:
            raise InputError("point must have at least one coordinate")
        if not all(math.isfinite(x) for x in self.coords):
            raise InputError(f"non-finite coordinate in point {self.coords}")

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


class PointCloud:
    """An ordered, duplicate-free collection of points of equal dimension.

    Duplicates (exact coordinate equality) are rejected: Voronoi cells of
    repeated sites are ill-defined.  An empty cloud needs an explicit
    `dimension`.
    """

    def __init__(self, points, dimension: int | None = None):
        pts = [p if isinstance(p, Point) else Point(p) for p in points]
        if pts:
            dim = pts[0].dimension
            if dimension is not None and dimension != dim:
                raise InputError(f"declared dimension {dimension} != point dimension {dim}")
        else:
            if dimension is None:
                raise InputError("empty cloud requires an explicit dimension")
            dim = dimension
        if dim > DIM_CAP:
            raise InputError(f"dimension {dim} exceeds cap {DIM_CAP}")
        if dim < 1:
            raise InputError("dimension must be positive")
        seen = set()
        for p in pts:
            if p.dimension != dim:
                raise InputError(f"mixed dimensions: {p.dimension} vs {dim}")
            if p.coords in seen:
                raise InputError(f"duplicate point {p.coords}")
            seen.add(p.coords)
        self.points: tuple[Point, ...] = tuple(pts)
        self.dimension: int = dim

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i) -> Point:
        return self.points[i]

    def array(self) -> np.ndarray:
        return np.array([p.coords for p in self.points], dtype=float).reshape(len(self.points), self.dimension)

    def __repr__(self):
        return f"PointCloud({len(self.points)} points, dim={self.dimension})"


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise InputError("negative radius")

    def contains(self, p, tol: float | None = None) -> bool:
        if tol is None:
            tol = MEB_TOL * (1.0 + self.radius)
        d = math.dist(self.center.coords, _coords(p))
        return d <= self.radius + tol


def squared_distance(a, b) -> float:
    ca, cb = _coords(a), _coords(b)
    if len(ca) != len(cb):
        raise InputError(f"dimension mismatch: {len(ca)} vs {len(cb)}")
    return sum((x - y) ** 2 for x, y in zip(ca, cb))


def orientation(simplex_points) -> int:
    """Sign of the determinant of edge vectors from the first point.

    Takes m+1 points of R^m; returns +1/-1/0, with 0 exactly when the points
    are affinely dependent.  The decision is exact.
    """
    pts = [_coords(p) for p in simplex_points]
    m = len(pts[0])
    if m > DIM_CAP:
        raise InputError(f"dimension {m} exceeds cap {DIM_CAP}")
    if len(pts) != m + 1 or any(len(p) != m for p in pts):
        raise InputError(f"orientation needs {m + 1} points of dimension {m}")
    rows_f = [[pts[i][c] - pts[0][c] for c in range(m)] for i in range(1, m + 1)]
    s = filtered_det_sign(rows_f)
    if s is not None:
        return s
    rows_e = [
        [Fraction(pts[i][c]) - Fraction(pts[0][c]) for c in range(m)]
        for i in range(1, m + 1)
    ]
    return det_sign_exact(rows_e)


def in_sphere(simplex_points, query) -> int:
    """+1 if `query` is strictly inside the circumsphere of the given m+1
    points, -1 if strictly outside, 0 if on it.

    The sign is normalized to be independent of the order of
    `simplex_points`.  Exact decision; the simplex must be nondegenerate.
    """
    pts = [_coords(p) for p in simplex_points]
    q = _coords(query)
    m = len(q)
    if len(pts) != m + 1 or any(len(p) != m for p in pts):
        raise InputError(f"in_sphere needs {m + 1} simplex points of dimension {m}")
    orient = orientation(simplex_points)
    if orient == 0:
        raise InputError("degenerate simplex has no circumsphere")
    # Lifted difference form: rows [p_i - q, |p_i - q|^2].
    rows_f = []
    for p in pts:
        d = [p[c] - q[c] for c in range(m)]
        rows_f.append(d + [sum(x * x for x in d)])
    s = filtered_det_sign(rows_f)
    if s is None:
        rows_e = []
        for p in pts:
            d = [Fraction(p[c]) - Fraction(q[c]) for c in range(m)]
            rows_e.append(d + [sum(x * x for x in d)])
        s = det_sign_exact(rows_e)
    return s * orient * (1 if m % 2 == 0 else -1)


# -- smallest enclosing ball --------------------------------------------------

_MEB_SEED = 0x5EB


def _solve_spd(g: list[list[float]], b: list[float]) -> list[float] | None:
    """Gaussian elimination with partial pivoting; None when near-singular."""
    n = len(b)
    a = [g[i] + [b[i]] for i in range(n)]
    scale = max(max(abs(x) for x in row[:-1]) for row in a)
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(a[i][k]))
        if abs(a[p][k]) <= 1e-14 * max(scale, 1.0):
            return None
        if p != k:
            a[k], a[p] = a[p], a[k]
        inv = 1.0 / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f != 0.0:
                for j in range(k + 1, n + 1):
                    a[i][j] -= f * a[k][j]
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        s = a[i][n] - sum(a[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / a[i][i]
    return x


def _circumball(support: list[tuple[float, ...]]) -> tuple[tuple[float, ...], float]:
    """Center and radius of the smallest ball with all of `support` on its
    boundary (their circumball within the affine hull)."""
    q0 = support[0]
    if len(support) == 1:
        return q0, 0.0
    dim = len(q0)
    u = [[s[c] - q0[c] for c in range(dim)] for s in support[1:]]
    k = len(u)
    g = [[sum(u[i][c] * u[j][c] for c in range(dim)) for j in range(k)] for i in range(k)]
    b = [0.5 * g[i][i] for i in range(k)]
    alpha = _solve_spd([row[:] for row in g], b)
    if alpha is None:  # affinely dependent support
        alpha = np.linalg.lstsq(np.array(g), np.array(b), rcond=None)[0].tolist()
    center = tuple(q0[c] + sum(alpha[i] * u[i][c] for i in range(k)) for c in range(dim))
    r = max(math.dist(center, s) for s in support)
    return center, r


def _welzl(pts: list[tuple[float, ...]], support: list[tuple[float, ...]], dim: int):
    if not pts or len(support) == dim + 1:
        if not support:
            return None, -1.0, []
        center, r = _circumball(support)
        return center, r, support
    p = pts[0]
    center, r, sup = _welzl(pts[1:], support, dim)
    if center is not None and math.dist(center, p) <= r + MEB_TOL * (1.0 + r):
        return center, r, sup
    return _welzl(pts[1:], support + [p], dim)


def smallest_enclosing_ball(points) -> Ball:
    """Unique smallest ball containing all the points (Welzl recursion with
    boundary sets of size <= dim + 1)."""
    pts = [_coords(p) for p in points]
    if not pts:
        raise InputError("smallest_enclosing_ball of empty set")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise InputError("mixed dimensions in smallest_enclosing_ball")
    # Canonical processing order: result independent of input order.
    pts = sorted(set(pts))
    rng = random.Random(_MEB_SEED)
    rng.shuffle(pts)
    _, _, support = _welzl(pts, [], dim)
    # Recompute from the sorted support so that any point set sharing this
    # boundary set gets a bit-identical ball.
    center, r = _circumball(sorted(support)) if support else ((0.0,) * dim, 0.0)
    return Ball(Point(center), float(r))
