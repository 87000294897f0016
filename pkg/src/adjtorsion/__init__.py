"""Adjoint Reidemeister torsions over trace-function fibers of two-bridge knots."""

from .errors import (AdjTorsionError, DomainError, NonGenericError, PoleError,
                     SolverError, StructureError, UnsupportedDimensionError)
from .fiber import CharacterPoint, d_gamma, pick_x, solve_fiber
from .laurent import LaurentPoly, parse_poly, resultant, resultant_info
from .numerics import Context
from .polytope import (LatticePolytope, minkowski_sum, newton_polytope,
                       strict_containment)
from .presets import (KnotPreset, builtin_names, get_preset, load_preset,
                      resolve_preset, validate_preset)
from .ratfunc import RationalFunctionT
from .residue import (check_nondegenerate, face_systems, jacobian_simplicity,
                      residue_sum, solve_torus_system)
from .roots import polyroots, univariate_roots
from .torsion import (BasedChainComplex, TorsionValue, chain_torsion,
                      presentation_complex, slope_change,
                      torsion_at_longitude, torsion_polynomial)
from .verify import (VerificationReport, khovanskii_certify, twisted_index,
                     verify_vanishing)
from .words import GroupRingElement, Presentation, Word, fox_derivative

__version__ = "0.1.0"

__all__ = [
    "AdjTorsionError", "DomainError", "NonGenericError", "PoleError",
    "SolverError", "StructureError", "UnsupportedDimensionError",
    "CharacterPoint", "d_gamma", "pick_x", "solve_fiber",
    "LaurentPoly", "parse_poly", "resultant", "resultant_info",
    "Context",
    "LatticePolytope", "minkowski_sum", "newton_polytope",
    "strict_containment",
    "KnotPreset", "builtin_names", "get_preset", "load_preset",
    "resolve_preset", "validate_preset",
    "RationalFunctionT",
    "check_nondegenerate", "face_systems", "jacobian_simplicity",
    "residue_sum", "solve_torus_system",
    "polyroots", "univariate_roots",
    "BasedChainComplex", "TorsionValue", "chain_torsion",
    "presentation_complex", "slope_change", "torsion_at_longitude",
    "torsion_polynomial",
    "VerificationReport", "khovanskii_certify", "twisted_index",
    "verify_vanishing",
    "GroupRingElement", "Presentation", "Word", "fox_derivative",
    "__version__",
]
