"""Equivariant homology with constant coefficients for finite groups.

Bredon homology of finite G-complexes by two independent routes, the
isotropy spectral sequence E^1, geometric fixed point coefficients, their
presented rings, and the split extraspecial 2-group example.
"""

from .errors import (ConsistencyError, DomainError, EquihomError, ParseError,
                     PreconditionError, SizeCapError, TruncationError)
from .groups import FiniteGroup, Subgroup, builtin, parse_builtin_spec, parse_group_text
from .chains import ChainComplex, GradedDims, GroupModule, homology_fp, homology_z
from .posets import GPoset, order_complex, reduced_homology
from .bredon import (GComplex, bredon_cohomology, bredon_homology_collapse,
                     bredon_homology_direct, e1_from_strata, e1_nerve, phi_coefficients)
from .rings import graded_dim, poincare_integral, poincare_mod_p, presentation
from .extraspecial import build_extraspecial, decorated_poset, enumerate_q_isotropic

__version__ = "0.1.0"

__all__ = [
    "ChainComplex", "ConsistencyError", "DomainError", "EquihomError", "FiniteGroup",
    "GComplex", "GPoset", "GradedDims", "GroupModule", "ParseError", "PreconditionError",
    "SizeCapError", "Subgroup", "TruncationError", "bredon_cohomology",
    "bredon_homology_collapse", "bredon_homology_direct", "build_extraspecial", "builtin",
    "decorated_poset", "e1_from_strata", "e1_nerve", "enumerate_q_isotropic", "graded_dim",
    "homology_fp", "homology_z", "order_complex", "parse_builtin_spec", "parse_group_text",
    "phi_coefficients", "poincare_integral", "poincare_mod_p", "presentation",
    "reduced_homology",
]
