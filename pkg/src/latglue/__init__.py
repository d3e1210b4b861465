"""Exact toolkit for even lattices: discriminant forms, overlattices, roots and curve graphs."""

from .discform import DiscriminantGroup, discriminant_group
from .errors import DomainError, ResourceError, VerificationError
from .glue import (IsotropicSubgroup, OverlatticeResult, is_primitive, isotropic_subgroups,
                   overlattice_from, overlattices, root_criterion, saturation)
from .kernels import BACKEND
from .lattice import (ADEType, Embedding, IntegerLattice, LatticeVector, direct_sum, discriminant,
                      make_ade, make_hyperbolic, orthogonal_complement, signature)
from .roots import RootSystem, enumerate_roots, is_root_lattice

__version__ = "0.1.0"

__all__ = [
    "ADEType", "BACKEND", "DiscriminantGroup", "DomainError", "Embedding", "IntegerLattice",
    "IsotropicSubgroup", "LatticeVector", "OverlatticeResult", "ResourceError", "RootSystem",
    "VerificationError", "direct_sum", "discriminant", "discriminant_group", "enumerate_roots",
    "is_primitive", "is_root_lattice", "isotropic_subgroups", "make_ade", "make_hyperbolic",
    "orthogonal_complement", "overlattice_from", "overlattices", "root_criterion", "saturation",
    "signature",
]
