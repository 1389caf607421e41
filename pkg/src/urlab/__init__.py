"""Numerical verification of characteristic uncertainty relations.

Builds covariance, mean-commutator and Gram (Robertson) matrices for sets of
operators in pure or mixed states and checks the determinant, characteristic
coefficient and principal-minor uncertainty relations they satisfy.
"""

__version__ = "0.1.0"

from .errors import DimensionMismatchError, HermiticityError, InputError, NotPSDError  # noqa: E402
from .linalg import char_coeffs, determinant, hermitian_sqrt, principal_minor  # noqa: E402
from .relations import (  # noqa: E402
    Relation,
    URVerdict,
    check_char_ur_multistate,
    check_entangled_pair,
    check_gram_superadditivity,
    check_minor_urs,
    check_robertson,
    check_schrodinger,
    check_two_mode_new_ur,
)
from .states import (  # noqa: E402
    DensityMatrix,
    OperatorSet,
    PureState,
    annihilation_op,
    coherent_state,
    embed,
    fock_state,
    quadratures,
    spin_ops,
    tensor,
)
from .uncertainty import GramPath, UncertaintyData, covariance_matrix, gram_robertson, mean, split_sk  # noqa: E402

__all__ = [
    "__version__",
    "DimensionMismatchError",
    "HermiticityError",
    "InputError",
    "NotPSDError",
    "char_coeffs",
    "determinant",
    "hermitian_sqrt",
    "principal_minor",
    "Relation",
    "URVerdict",
    "check_char_ur_multistate",
    "check_entangled_pair",
    "check_gram_superadditivity",
    "check_minor_urs",
    "check_robertson",
    "check_schrodinger",
    "check_two_mode_new_ur",
    "DensityMatrix",
    "OperatorSet",
    "PureState",
    "annihilation_op",
    "coherent_state",
    "embed",
    "fock_state",
    "quadratures",
    "spin_ops",
    "tensor",
    "GramPath",
    "UncertaintyData",
    "covariance_matrix",
    "gram_robertson",
    "mean",
    "split_sk",
]
