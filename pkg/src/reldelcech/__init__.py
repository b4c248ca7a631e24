"""Relative persistent homology of Euclidean point-cloud pairs.

Given finite X1, X2 in R^d (d <= 3), the pair (X1 union X2, X1) is filtered
by a Delaunay-Cech complex built from the Delaunay triangulation of the two
clouds lifted to heights +s/-s in R^(d+1).  The complex has the size of one
Delaunay triangulation, and its persistence quotient by the lifted copy of
del(X1) is the relative persistent homology of the pair; a brute-force
relative Cech oracle is included for desk-scale cross-validation.
"""

from .cech_oracle import ORACLE_CAP, BarcodeDiff, compare_barcodes, relative_cech
from .delaunay import Simplex, Triangulation, delaunay, faces
from .filtered_complex import Cell, FilteredComplex, build, dumps, loads
from .geometry import (
    DIM_CAP,
    Ball,
    InputError,
    Point,
    PointCloud,
    in_sphere,
    orientation,
    smallest_enclosing_ball,
    squared_distance,
)
from .persistence import (
    Barcode,
    BoundaryMatrix,
    barcode,
    boundary_matrix,
    reduce_matrix,
)
from .relative_lift import (
    EmbeddingReport,
    LiftedConfiguration,
    Pipeline,
    build_pipeline,
    choose_s,
    lift,
    relative_delcech,
    verify_embedding,
)

__version__ = "0.1.0"

__all__ = [
    "ORACLE_CAP",
    "DIM_CAP",
    "Ball",
    "Barcode",
    "BarcodeDiff",
    "BoundaryMatrix",
    "Cell",
    "EmbeddingReport",
    "FilteredComplex",
    "InputError",
    "LiftedConfiguration",
    "Pipeline",
    "Point",
    "PointCloud",
    "Simplex",
    "Triangulation",
    "barcode",
    "boundary_matrix",
    "build",
    "build_pipeline",
    "choose_s",
    "compare_barcodes",
    "delaunay",
    "dumps",
    "faces",
    "in_sphere",
    "lift",
    "loads",
    "orientation",
    "reduce_matrix",
    "relative_cech",
    "relative_delcech",
    "smallest_enclosing_ball",
    "squared_distance",
    "verify_embedding",
]
