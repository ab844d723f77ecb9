"""Ward identities for two-point functions of (logarithmic) doublets."""
from .twobody import DoubletSpec, Quartet, WardResidual, apply_two_body, leg_operator
from .cases import CASE_IDS, CaseError, catalog_solution, pair_coordinates, verify_covariance
from .constraints import (ANSATZ_FAMILIES, AnsatzError, Derivation, bracket_constraints,
                          derive_all, extract_constraints, implies, solve_for)
from .mutations import MUTATIONS, mutation_suite
