"""Operator representations, commutators and bracket-table verification."""
from .diffop import DiffOp, Mat2, commutator, compose
from .tables import Label, L, StructureTable, table_for, central_charge_table
from .catalog import CATALOG_IDS, CatalogError, Representation, build_representation, dynamical_operator
from .verify import (closure_check, jacobi_check, operator_jacobi, symmetry_multiplier,
                     verify_dynamical_symmetry, verify_structure)
from .virasoro import ResourceLimit, verify_matrix_central_charges
