"""Dimension-generic Delaunay triangulation via the paraboloid lift.

Points of R^m are lifted to (x, |x|^2) in R^(m+1); the lower convex hull of
the lifted set, computed by a randomized incremental algorithm with conflict
lists, projects back to the Delaunay top simplices.  Predicate ties are
broken by a symbolic moment-curve perturbation ordered by vertex index, so
construction is deterministic and no zero signs escape.  Inputs whose affine
hull is lower-dimensional are triangulated inside exact rational coordinates
of that hull (with the induced metric), so flat configurations are fine.

Vertical hull facets (whose supporting hyperplane contains the lift
direction) are discarded by an exact, unperturbed test: they project to
degenerate simplices and are not Delaunay cells.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import DIM_CAP, InputError, PointCloud
from .predicates import _FILTER_C, _det_float, det_sign_exact, filtered_det_sign, sos_sign

_DEFAULT_SEED = 0x9E3779B9
_SEED_ENV = "RELDEL_SEED"


@dataclass(frozen=True, order=True)
class Simplex:
    """Sorted, duplicate-free tuple of vertex indices into a point cloud."""

    vertices: tuple[int, ...]

    def __init__(self, vertices):
        vs = tuple(int(v) for v in vertices)
        if not vs:
            raise InputError("empty simplex")
        if any(b <= a for a, b in zip(vs, vs[1:])):
            raise InputError(f"simplex vertices must be strictly increasing: {vs}")
        object.__setattr__(self, "vertices", vs)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def boundary(self) -> list["Simplex"]:
        """Codimension-1 faces, in lexicographic order."""
        if self.dim == 0:
            return []
        vs = self.vertices
        return sorted(Simplex(vs[:i] + vs[i + 1 :]) for i in range(len(vs)))

    def faces(self) -> list["Simplex"]:
        """All nonempty faces including the simplex itself."""
        out = []
        for k in range(1, len(self.vertices) + 1):
            out.extend(Simplex(c) for c in itertools.combinations(self.vertices, k))
        return out

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)


# -- exact affine-hull coordinates --------------------------------------------


def _exact_points(cloud: PointCloud) -> list[tuple[Fraction, ...]]:
    return [tuple(Fraction(c) for c in p.coords) for p in cloud]


def _affine_basis(pts: list[tuple[Fraction, ...]]):
    """Greedy exact rank detection: returns (rank, basis vectors, pivot cols).

    Basis vectors are differences p_i - p_0, scanned in index order."""
    m = len(pts[0])
    echelon: list[tuple[int, list[Fraction]]] = []  # (pivot col, reduced vector)
    basis: list[list[Fraction]] = []
    for i in range(1, len(pts)):
        v = [pts[i][c] - pts[0][c] for c in range(m)]
        w = list(v)
        for col, e in echelon:
            if w[col] != 0:
                f = w[col] / e[col]
                for c in range(m):
                    w[c] -= f * e[c]
        pivot = next((c for c in range(m) if w[c] != 0), None)
        if pivot is not None:
            echelon.append((pivot, w))
            basis.append(v)
            if len(basis) == m:
                break
    pivot_cols = [col for col, _ in echelon]
    return len(basis), basis, pivot_cols


def _solve_square(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Exact solve of a small nonsingular square system."""
    n = len(b)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for k in range(n):
        p = next(i for i in range(k, n) if m[i][k] != 0)
        m[k], m[p] = m[p], m[k]
        inv = m[k][k]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k] / inv
                for j in range(k, n + 1):
                    m[i][j] -= f * m[k][j]
    return [m[i][n] / m[i][i] for i in range(n)]


# -- lifted hull space ---------------------------------------------------------


class _HullSpace:
    """Coordinates and exact predicates for the lifted hull of one cloud.

    Points live in R^P with the lift value as last coordinate.  Float rows
    feed the static filter; exact integer rows (each column scaled by a
    positive constant, which preserves all predicate signs) decide the rest,
    with symbolic perturbation ranked by vertex index as tie-breaker.
    """

    def __init__(self, float_rows: np.ndarray, int_rows: list[tuple[int, ...]]):
        self.float_rows = float_rows
        self.frows: list[tuple[float, ...]] = [tuple(r) for r in float_rows.tolist()]
        self.P = float_rows.shape[1]
        self.int_rows = int_rows  # homogeneous: P scaled coordinates + 1
        self._orient_cache: dict[tuple[int, ...], int] = {}

    def orient(self, ids: tuple[int, ...]) -> int:
        """Perturbed orientation sign of P+1 lifted points; never 0."""
        cached = self._orient_cache.get(ids)
        if cached is not None:
            return cached
        p = self.P
        r0 = self.frows[ids[0]]
        edge = [
            [a - b for a, b in zip(self.frows[i], r0)]
            for i in ids[1:]
        ]
        s = filtered_det_sign(edge)
        if s is not None:
            s = -s if p % 2 else s
        else:
            s = sos_sign([self.int_rows[i] for i in ids], list(ids))
        self._orient_cache[ids] = s
        return s

    def infdown_sign(self, verts: tuple[int, ...]) -> int:
        """Exact homogeneous sign of (verts..., direction -e_P); 0 = vertical."""
        p = self.P
        rows_f = [list(self.float_rows[v]) + [1.0] for v in verts]
        rows_f.append([0.0] * (p - 1) + [-1.0, 0.0])
        s = filtered_det_sign(rows_f)
        if s is not None:
            return s
        rows_e = [list(self.int_rows[v]) for v in verts]
        rows_e.append([0] * (p - 1) + [-1, 0])
        return det_sign_exact(rows_e)

    def visibility(self, verts: tuple[int, ...], inside_sign: int, cand_ids) -> list[int]:
        """Subset of cand_ids strictly beyond the facet's hyperplane."""
        if not cand_ids:
            return []
        p = self.P
        frows = self.frows
        v0 = frows[verts[0]]
        block = [[frows[i][c] - v0[c] for c in range(p)] for i in verts[1:]]
        # Cofactors of the query row: det(edge matrix with query last) is
        # their dot product with (x - v0).
        cof = []
        for c in range(p):
            minor = [row[:c] + row[c + 1 :] for row in block]
            d = _det_float(minor)
            cof.append(-d if (p - 1 + c) % 2 else d)
        scale = max(1.0, max(abs(x) for row in block for x in row))
        filt = _FILTER_C[p]
        edge_to_homog = -1 if p % 2 else 1
        out = []
        for pid in cand_ids:
            row = frows[pid]
            val = 0.0
            m = scale
            for c in range(p):
                dc = row[c] - v0[c]
                val += dc * cof[c]
                if dc > m:
                    m = dc
                elif -dc > m:
                    m = -dc
            if abs(val) > filt * m**p:
                s = edge_to_homog * (1 if val > 0 else -1)
            else:
                s = self.orient(verts + (pid,))
            if s == -inside_sign:
                out.append(pid)
        return out


@dataclass
class _Facet:
    verts: tuple[int, ...]
    inside_sign: int
    conflicts: set[int] = field(default_factory=set)


class _Hull:
    """Incremental convex hull in R^P with conflict lists."""

    def __init__(self, space: _HullSpace, order: list[int]):
        self.space = space
        self.facets: dict[int, _Facet] = {}
        self.ridge_map: dict[tuple[int, ...], set[int]] = {}
        self._next_id = 0
        self._point_conflicts: dict[int, set[int]] = {}
        self._build(order)

    def _add_facet(self, verts: tuple[int, ...], witness: int) -> int:
        inside = self.space.orient(verts + (witness,))
        fid = self._next_id
        self._next_id += 1
        self.facets[fid] = _Facet(verts, inside)
        for i in range(len(verts)):
            ridge = verts[:i] + verts[i + 1 :]
            self.ridge_map.setdefault(ridge, set()).add(fid)
        return fid

    def _remove_facet(self, fid: int):
        f = self.facets.pop(fid)
        for i in range(len(f.verts)):
            ridge = f.verts[:i] + f.verts[i + 1 :]
            owners = self.ridge_map[ridge]
            owners.discard(fid)
            if not owners:
                del self.ridge_map[ridge]
        for pid in f.conflicts:
            s = self._point_conflicts.get(pid)
            if s is not None:
                s.discard(fid)
        return f

    def _set_conflicts(self, fid: int, cand_ids: list[int]):
        f = self.facets[fid]
        vis = self.space.visibility(f.verts, f.inside_sign, cand_ids)
        f.conflicts.update(vis)
        for pid in vis:
            self._point_conflicts[pid].add(fid)

    def _build(self, order: list[int]):
        p = self.space.P
        init, rest = order[: p + 1], order[p + 1 :]
        for k, witness in enumerate(init):
            verts = tuple(sorted(init[:k] + init[k + 1 :]))
            self._add_facet(verts, witness)
        for pid in rest:
            self._point_conflicts[pid] = set()
        for fid in list(self.facets):
            self._set_conflicts(fid, rest)
        for q in rest:
            vis = self._point_conflicts.pop(q)
            if not vis:
                raise AssertionError("lifted point inside hull: duplicate input?")
            horizon = []
            for fid in vis:
                f = self.facets[fid]
                for i in range(len(f.verts)):
                    ridge = f.verts[:i] + f.verts[i + 1 :]
                    others = self.ridge_map[ridge] - vis
                    if others:
                        (other,) = others
                        horizon.append((ridge, fid, other))
            removed = {fid: self._remove_facet(fid) for fid in vis}
            for ridge, fvis_id, fhid_id in horizon:
                fvis = removed[fvis_id]
                fhid = self.facets[fhid_id]
                witness = next(v for v in fvis.verts if v not in ridge)
                new_verts = tuple(sorted(ridge + (q,)))
                fid = self._add_facet(new_verts, witness)
                cands = (fvis.conflicts | fhid.conflicts) - {q}
                self._set_conflicts(fid, sorted(cands))
        for ridge, owners in self.ridge_map.items():
            if len(owners) != 2:
                raise AssertionError(f"open ridge {ridge} on finished hull")


# -- public triangulation ------------------------------------------------------


class Triangulation:
    """Delaunay triangulation: top simplices plus their downward closure."""

    def __init__(self, cloud: PointCloud, tops: list[Simplex], top_dim: int, space: _HullSpace):
        self.cloud = cloud
        self.top_simplices: tuple[Simplex, ...] = tuple(sorted(tops))
        self.top_dim = top_dim
        self._space = space
        by_dim: dict[int, set[Simplex]] = {d: set() for d in range(top_dim + 1)}
        for top in self.top_simplices:
            for k in range(1, len(top.vertices) + 1):
                for comb in itertools.combinations(top.vertices, k):
                    by_dim[k - 1].add(Simplex(comb))
        self.simplices_by_dim: dict[int, tuple[Simplex, ...]] = {
            d: tuple(sorted(s)) for d, s in by_dim.items()
        }

    def simplices(self):
        for d in range(self.top_dim + 1):
            yield from self.simplices_by_dim[d]

    def faces(self, dim: int) -> list[Simplex]:
        if dim < 0 or dim > self.top_dim:
            raise InputError(f"dimension {dim} out of range 0..{self.top_dim}")
        return list(self.simplices_by_dim[dim])

    def has_simplex(self, s: Simplex) -> bool:
        d = s.dim
        return d in self.simplices_by_dim and s in set(self.simplices_by_dim[d])

    def insphere_sign(self, top: Simplex, query: int) -> int:
        """Perturbed in-circumsphere sign of a cloud vertex against a top
        simplex: +1 strictly inside under the symbolic perturbation, else -1.
        """
        if query in top.vertices:
            raise InputError("query vertex belongs to the simplex")
        s_inf = self._space.infdown_sign(top.vertices)
        if s_inf == 0:
            raise InputError("vertical simplex has no oriented circumsphere")
        o1 = self._space.orient(top.vertices + (query,))
        return 1 if o1 == s_inf else -1


def _int_columns(rows: list[list[Fraction]]) -> list[tuple[int, ...]]:
    """Scale every column by the lcm of its denominators (positive factors
    preserve all determinant signs used here)."""
    if not rows:
        return []
    ncols = len(rows[0])
    scaled: list[list[int]] = [[0] * ncols for _ in rows]
    for c in range(ncols):
        mul = 1
        for row in rows:
            mul = math.lcm(mul, row[c].denominator)
        for i, row in enumerate(rows):
            scaled[i][c] = int(row[c] * mul)
    return [tuple(r) for r in scaled]


def _hull_space(cloud: PointCloud):
    """Lifted coordinates of the cloud inside its exact affine hull."""
    pts = _exact_points(cloud)
    m = cloud.dimension
    rank, basis, pivot_cols = _affine_basis(pts)
    n = len(pts)
    if rank == m:
        coords = [pts[i] for i in range(n)]
        lifts = [sum(c * c for c in pts[i]) for i in range(n)]
    else:
        a = [[basis[j][c] for j in range(rank)] for c in pivot_cols]  # (r x r), column j = basis j
        gram = [[sum(bi * bj for bi, bj in zip(basis[i], basis[j])) for j in range(rank)] for i in range(rank)]
        coords = []
        lifts = []
        for i in range(n):
            rhs = [pts[i][c] - pts[0][c] for c in pivot_cols]
            u = _solve_square(a, rhs) if rank else []
            coords.append(tuple(u))
            lifts.append(sum(u[j] * gram[j][k] * u[k] for j in range(rank) for k in range(rank)))
    float_rows = np.array(
        [[float(c) for c in coords[i]] + [float(lifts[i])] for i in range(n)], dtype=float
    ).reshape(n, rank + 1)
    int_rows = _int_columns(
        [[Fraction(c) for c in coords[i]] + [Fraction(lifts[i]), Fraction(1)] for i in range(n)]
    )
    return rank, _HullSpace(float_rows, int_rows)


def delaunay(cloud: PointCloud) -> Triangulation:
    """Delaunay triangulation of a point cloud (affine rank <= 5).

    Deterministic for a fixed input ordering; the insertion order of the
    incremental hull is drawn from a fixed seed (override with the
    RELDEL_SEED environment variable; the output does not depend on it).
    """
    if len(cloud) == 0:
        raise InputError("cannot triangulate an empty cloud")
    if cloud.dimension + 1 > DIM_CAP:
        raise InputError(f"dimension {cloud.dimension} exceeds triangulation cap {DIM_CAP - 1}")
    rank, space = _hull_space(cloud)
    n = len(cloud)
    if n == rank + 1:
        tops = [Simplex(range(n))]
        return Triangulation(cloud, tops, rank, space)
    seed = int(os.environ.get(_SEED_ENV, _DEFAULT_SEED))
    order = list(range(n))
    tail = order[space.P + 1 :]
    random.Random(seed).shuffle(tail)
    order[space.P + 1 :] = tail
    hull = _Hull(space, order)
    tops = []
    for f in hull.facets.values():
        s = space.infdown_sign(f.verts)
        if s != 0 and s == -f.inside_sign:
            tops.append(Simplex(f.verts))
    if not tops:
        raise AssertionError("hull produced no lower facets")
    return Triangulation(cloud, tops, rank, space)


def faces(t: Triangulation, dim: int) -> list[Simplex]:
    """All simplices of the given dimension, lexicographically ordered."""
    return t.faces(dim)
