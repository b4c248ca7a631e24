"""Relative Delaunay-Cech complex of a pair (X1 union X2, X1).

The two clouds are embedded in one dimension higher at heights +s and -s,
the lifted set is Delaunay-triangulated, cells whose vertices all sit at
height +s form the subcomplex, and every other cell is filtered by the
smallest enclosing ball of its projected (height-dropped) vertices.  The
resulting filtered complex has size linear in the Delaunay triangulation of
the lifted set instead of exponential in |X|.
"""

from __future__ import annotations

from dataclasses import dataclass

from .delaunay import Simplex, Triangulation, delaunay
from .filtered_complex import Cell, FilteredComplex, build
from .geometry import InputError, Point, PointCloud, smallest_enclosing_ball

DEFAULT_FACTOR = 2.0
_FLOOR = 1.0


@dataclass(frozen=True)
class LiftedConfiguration:
    """The lifted point set Z and the bookkeeping back to (X1, X2).

    labels[i] is "plus" or "minus" by the sign of the added coordinate of
    z[i]; back_map[i] is ("x1", j) or ("x2", j), the origin of z[i].
    """

    x1: PointCloud
    x2: PointCloud
    s: float
    z: PointCloud
    labels: tuple[str, ...]
    back_map: tuple[tuple[str, int], ...]

    def plus_count(self) -> int:
        return len(self.x1)


def max_filtration_value(cloud: PointCloud) -> float:
    """Largest enclosing-ball radius over the simplices of del(cloud)."""
    if len(cloud) == 0:
        return 0.0
    if len(cloud) == 1:
        return 0.0
    tri = delaunay(cloud)
    best = 0.0
    for top in tri.top_simplices:
        r = smallest_enclosing_ball([cloud[v] for v in top.vertices]).radius
        if r > best:
            best = r
    return best


def choose_s(x1: PointCloud, x2: PointCloud, factor: float = DEFAULT_FACTOR) -> float:
    """Lift height: factor times the larger of the two clouds' maximal
    filtration values, with a unit floor when both vanish."""
    if factor <= 1:
        raise InputError("s factor must exceed 1")
    peak = max(max_filtration_value(x1), max_filtration_value(x2))
    return factor * (peak if peak > 0 else _FLOOR)


def lift(x1: PointCloud, x2: PointCloud, s: float) -> LiftedConfiguration:
    """Embed x1 at height +s and x2 at height -s; x1 vertices come first."""
    if s <= 0:
        raise InputError("lift height must be positive")
    if len(x1) and len(x2) and x1.dimension != x2.dimension:
        raise InputError("x1 and x2 must share a dimension")
    d = x1.dimension if len(x1) else x2.dimension
    zpts = [Point(p.coords + (s,)) for p in x1] + [Point(p.coords + (-s,)) for p in x2]
    labels = ("plus",) * len(x1) + ("minus",) * len(x2)
    back = tuple(("x1", i) for i in range(len(x1))) + tuple(("x2", i) for i in range(len(x2)))
    z = PointCloud(zpts, dimension=d + 1)
    return LiftedConfiguration(x1, x2, float(s), z, labels, back)


def _projected_meb(cfg: LiftedConfiguration, verts: tuple[int, ...]) -> float:
    pts = {cfg.z[v].coords[:-1] for v in verts}
    return smallest_enclosing_ball(sorted(pts)).radius


def _monotone_values(cells: dict[Simplex, tuple[float, bool]]) -> dict[Simplex, tuple[float, bool]]:
    """Push face values up to cofaces (fixes sub-ulp float noise only)."""
    out: dict[Simplex, tuple[float, bool]] = {}
    for s in sorted(cells, key=lambda s: (s.dim, s.vertices)):
        value, sub = cells[s]
        if not sub:
            for f in s.boundary():
                fv = out[f][0]
                if fv > value:
                    value = fv
        out[s] = (value, sub)
    return out


@dataclass
class Pipeline:
    """All intermediate artifacts of one relative Delaunay-Cech run."""

    cfg: LiftedConfiguration
    triangulation: Triangulation
    complex: FilteredComplex


def build_pipeline(
    x1: PointCloud,
    x2: PointCloud,
    factor: float = DEFAULT_FACTOR,
    s: float | None = None,
) -> Pipeline:
    """Lift, triangulate and filter; `s` overrides choose_s (testing hook)."""
    if len(x1) and x1.dimension > 3 or len(x2) and x2.dimension > 3:
        raise InputError("ambient dimension must be at most 3")
    if len(x1) + len(x2) == 0:
        raise InputError("x1 and x2 are both empty")
    if s is None:
        s = choose_s(x1, x2, factor)
    cfg = lift(x1, x2, s)
    tri = delaunay(cfg.z)
    cells: dict[Simplex, tuple[float, bool]] = {}
    for simp in tri.simplices():
        sub = all(cfg.labels[v] == "plus" for v in simp.vertices)
        value = 0.0 if sub else _projected_meb(cfg, simp.vertices)
        cells[simp] = (value, sub)
    if len(x1) > 1:
        # The lifted copy of del(x1) is expected to already be present as the
        # all-plus part; add anything missing rather than assume it.
        tri1 = delaunay(x1)
        for simp in tri1.simplices():
            if simp not in cells:
                cells[simp] = (0.0, True)
    elif len(x1) == 1 and Simplex((0,)) not in cells:
        cells[Simplex((0,))] = (0.0, True)
    cells = _monotone_values(cells)
    fc = build(
        [Cell(s_, v, sub) for s_, (v, sub) in cells.items()],
        vertex_count=len(cfg.z),
    )
    return Pipeline(cfg, tri, fc)


def relative_delcech(x1: PointCloud, x2: PointCloud, factor: float = DEFAULT_FACTOR) -> FilteredComplex:
    """The filtered complex whose relative persistence (quotient by the
    marked subcomplex) is the relative persistent homology of the pair."""
    return build_pipeline(x1, x2, factor).complex


# -- embedding certification ----------------------------------------------------


@dataclass
class EmbeddingReport:
    """Outcome of the three structural checks on a lifted triangulation.

    Failures usually mean a degenerate configuration whose symbolic tie
    breaks differ between the ambient and lifted triangulations (or a lift
    height below the supported range when bypassing choose_s); callers
    should treat them as a diagnostic, not silently proceed.
    """

    x1_embedded: bool
    x2_embedded: bool
    plus_matches: bool
    missing_x1: list[tuple[int, ...]]
    missing_x2: list[tuple[int, ...]]
    plus_mismatch: list[tuple[int, ...]]

    @property
    def ok(self) -> bool:
        return self.x1_embedded and self.x2_embedded and self.plus_matches

    def text(self) -> str:
        lines = [
            f"check lifted del(X1) included: {'pass' if self.x1_embedded else 'FAIL'}",
            f"check lifted del(X2) included: {'pass' if self.x2_embedded else 'FAIL'}",
            f"check all-plus cells match del(X1): {'pass' if self.plus_matches else 'FAIL'}",
        ]
        for name, items in (
            ("missing from del(Z) via j1", self.missing_x1),
            ("missing from del(Z) via j2", self.missing_x2),
            ("all-plus cells without del(X1) counterpart", self.plus_mismatch),
        ):
            if items:
                lines.append(f"  {name}: {items}")
        if not self.ok:
            lines.append("  diagnostic: lift height too small or degenerate configuration")
        return "\n".join(lines)


def verify_embedding(cfg: LiftedConfiguration, tri: Triangulation) -> EmbeddingReport:
    """Certify that both clouds' Delaunay complexes embed into del(Z) and
    that the all-plus part of del(Z) is exactly the lifted del(X1)."""
    n1 = len(cfg.x1)
    present: set[tuple[int, ...]] = set()
    for simp in tri.simplices():
        present.add(simp.vertices)

    def lifted_simplices(cloud: PointCloud, offset: int) -> set[tuple[int, ...]]:
        if len(cloud) == 0:
            return set()
        if len(cloud) == 1:
            return {(offset,)}
        t = delaunay(cloud)
        return {tuple(v + offset for v in s.vertices) for s in t.simplices()}

    j1 = lifted_simplices(cfg.x1, 0)
    j2 = lifted_simplices(cfg.x2, n1)
    missing_x1 = sorted(j1 - present)
    missing_x2 = sorted(j2 - present)
    all_plus = {vs for vs in present if all(cfg.labels[v] == "plus" for v in vs)}
    plus_mismatch = sorted(all_plus.symmetric_difference(j1))
    return EmbeddingReport(
        x1_embedded=not missing_x1,
        x2_embedded=not missing_x2,
        plus_matches=not plus_mismatch,
        missing_x1=missing_x1,
        missing_x2=missing_x2,
        plus_mismatch=plus_mismatch,
    )
