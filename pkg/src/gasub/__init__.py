"""Subspace operations on blades in real Clifford algebras of any signature."""

from ._kernels import BACKEND
from .algebra import (
    DEFAULT_TOL,
    Blade,
    Multivector,
    Signature,
    ToleranceConfig,
    blade_inverse,
    geometric_product,
    grade_part,
    left_contraction,
    outer_product,
    pseudoscalar,
    reverse,
)
from .blades import (
    LinearOperator,
    as_blade,
    blade_from_projector,
    factor_blade,
    is_blade,
    outermorphism_apply,
    projector_of_blade,
)
from .errors import (
    EmptyInput,
    GasubError,
    NotABlade,
    NotAProjector,
    NotASubspace,
    NotInImage,
    NotInvertible,
    RankMismatch,
    SignatureMismatch,
)
from .lift import Lift, canonical_lift, embedding_lift, lift_forward, lift_inverse, random_lift
from .subspace import (
    delta_product,
    inner_division,
    join,
    join_via_projector,
    linear_join,
    linear_meet,
    meet,
    normalize,
)

__version__ = "0.1.0"
