"""Incomplete Tambara functors over finite groups: bispans, indexing systems and models."""

from .bispans import Bispan, HomClass, VirtualHom, compose, compose_class, enumerate_hom, norm, restriction, transfer
from .errors import (
    EndpointMismatchError,
    ExponentEscapeError,
    GroupValidationError,
    GSetValidationError,
    InvalidSubcategoryError,
    NormUnavailableError,
    ParseError,
    ResourceBoundError,
    ShapeError,
    TambaraError,
)
from .groups import FiniteGroup, Subgroup, cyclic, direct_product, from_table, klein4, symmetric, trivial_group
from .gsets import GMap, GSet, coproduct, dependent_product, induce, orbit, orbit_inclusion, point, pullback
from .indexing import ExponentPredicate, IndexingSystem, enumerate_systems, map_in_category
from .models import BurnsideModel, FixedPointModel, GRing, eval_bispan, swap_square, zmod

__version__ = "0.1.0"
