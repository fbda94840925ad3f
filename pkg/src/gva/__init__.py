"""Exact computations in lattice-type generalized vertex algebras."""

from __future__ import annotations

from .engine import (
    AlgebraInstance,
    Report,
    check_associativity,
    check_borcherds,
    check_jacobi_window,
    check_locality,
    check_skew_symmetry,
    check_translation_covariance,
    check_vacuum_translation,
    field_apply,
    jacobi_sides,
    locality_order,
    mode,
    ope_coefficient,
    twist_engine,
)
from .errors import GVAError, ParseError
from .fock import FockState, degree_of
from .formal import ExponentWindow, Series1, Series2, compare, series_multiply
from .lattice import (
    CocycleData,
    LatticeData,
    SpaceSpec,
    SubgroupSpec,
    canonical_invariant,
    construct_cocycle,
    dual_group,
    extend_cocycle,
    omega_superalgebra,
    verify_cocycle,
)
from .modules import CosetModule, build_twisted_view, check_module_borcherds, check_twisted_borcherds
from .parse import format_state, load_spec, parse_scalar, parse_state
from .scalar import Q, Scalar, root_of_unity

__version__ = "0.1.0"
