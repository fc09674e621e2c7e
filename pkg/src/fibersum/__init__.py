"""Exact Donaldson series of simple-type 4-manifolds and their sums along genus-2 surfaces."""

from __future__ import annotations

from .donaldson import (ManifoldRecord, SimpleTypeStructure, StructureError, build_dseries, d_zero, from_dws,
                        to_dws, validate_structure)
from .gluing import GluingConfig, GluingError, MatchedClass, glue, glue_direct, glue_via_b, glued_form
from .lattice import IntersectionLattice, LatticeClass, LatticeError, pair
from .series import DSeries, ExpTerm, GaussianRational, expand, parse_series, render

__all__ = [
    "IntersectionLattice", "LatticeClass", "LatticeError", "pair",
    "DSeries", "ExpTerm", "GaussianRational", "expand", "parse_series", "render",
    "ManifoldRecord", "SimpleTypeStructure", "StructureError", "build_dseries", "d_zero", "from_dws",
    "to_dws", "validate_structure",
    "GluingConfig", "GluingError", "MatchedClass", "glue", "glue_direct", "glue_via_b", "glued_form",
]

__version__ = "0.1.0"
