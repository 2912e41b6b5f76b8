"""Growth of graded twisted Calabi-Yau algebras from their matrix Hilbert series."""

__version__ = "0.1.0"

from .cy_series import (CYSeriesModel, SpectralReport, Verdict, VerdictKind, build_q,  # noqa: E402
                        dim2_spectral_criterion, dim3_normal_criterion, hypocycloid_boundary,
                        hypocycloid_contains, verify_functional_equation)
from .growth import (GrowthClass, GrowthReport, all_roots_are_roots_of_unity,  # noqa: E402
                     classify_algebra, module_growth)
from .oracle import (DimTable, GradedPresentation, MeshData, Relation, Semipotential,  # noqa: E402
                     build_mesh_relations, build_semipotential_relations, check_against_series,
                     graded_dims, truncated_socle_trivial)
from .polyalg import LaurentPoly, MatPoly, RatFun, invert_as_series  # noqa: E402
from .quiver import Arrow, CYDatum, WeightedQuiver, incidence, validate_quiver  # noqa: E402

__all__ = [
    "CYSeriesModel",
    "SpectralReport",
    "Verdict",
    "VerdictKind",
    "build_q",
    "dim2_spectral_criterion",
    "dim3_normal_criterion",
    "hypocycloid_boundary",
    "hypocycloid_contains",
    "verify_functional_equation",
    "GrowthClass",
    "GrowthReport",
    "all_roots_are_roots_of_unity",
    "classify_algebra",
    "module_growth",
    "DimTable",
    "GradedPresentation",
    "MeshData",
    "Relation",
    "Semipotential",
    "build_mesh_relations",
    "build_semipotential_relations",
    "check_against_series",
    "graded_dims",
    "truncated_socle_trivial",
    "LaurentPoly",
    "MatPoly",
    "RatFun",
    "invert_as_series",
    "Arrow",
    "CYDatum",
    "WeightedQuiver",
    "incidence",
    "validate_quiver",
]
