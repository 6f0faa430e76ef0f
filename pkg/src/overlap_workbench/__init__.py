"""Finite models of overlap algebras, their morphisms and inductively generated formal topologies.

Lattice elements are integer indices; subsets of a ground set are int bitmasks.
"""
from .errors import (
    BudgetError,
    FrameBudgetExceeded,
    InternalInconsistency,
    ParseError,
    SearchBudgetExceeded,
    TheoremViolation,
    ValidationError,
    WorkbenchError,
)
from .lattice import (
    BaseFamily,
    FiniteLattice,
    bits,
    build_lattice,
    chain_lattice,
    diamond_lattice,
    is_boolean,
    is_distributive,
    mask_of,
    minimal_base,
    pentagon_lattice,
    powerset_lattice,
)
from .overlap import (
    OAlgebra,
    OverlapRelation,
    canonical_overlap,
    check_overlap_axioms,
    derived_properties_suite,
    find_all_overlaps,
    powerset_oalgebra,
)
from .morphism import (
    FiniteRelation,
    LatticeMap,
    check_o_morphism,
    morphism_to_relation,
    red_condition,
    relation_operators,
    three_way_equivalence,
)
from .topology import (
    CoverPresentation,
    build_frame,
    diagonal_open,
    presentation,
    product,
    saturate,
)
from .atoms import atoms_of, ft_atoms, is_atomic, is_discrete, powerset_iso
from .constructions import dm_completion, dm_extend, finite_cofinite, free_oalgebra, generated_oo_sublattice

__version__ = "0.1.0"
