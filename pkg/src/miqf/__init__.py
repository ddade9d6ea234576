"""Abelian varieties with multiplication by an imaginary quadratic field,
their description by Hermitian triples, and exterior powers in signature
(1, r-1).
"""

from .correspondence import (
    ConjSpace,
    OmegaForm,
    TripleE,
    ValidationReport,
    VarietyB,
    b_to_e,
    e_to_b,
    h_from_omega,
    ker_alpha_basis,
    ker_gram,
    mu_basis_orthogonality,
    omega_pair,
    star_act,
    validate_triple,
    variety_build,
)
from .errors import MIQFError
from .exterior import ExactSeq, compound, exterior_hermitian, exterior_sequence, exterior_variety, wedge_basis
from .field import FieldContext, KElement, k_arith, k_embed, k_galois_data, trace_dual_solve
from .linalg import (
    KMatrix,
    Signature,
    conj_transpose,
    gram_normalize,
    hermitian_signature_exact,
    kernel_basis,
    posdef_check,
    sign_matrix,
)
from .siegel import GUElement, SiegelPoint, gu_act, gu_validate, siegel_contains, siegel_sample

__version__ = "0.1.0"
