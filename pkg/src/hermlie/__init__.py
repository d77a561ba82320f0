"""hermlie: exact-arithmetic almost-Hermitian geometry on Lie algebras.

The engine builds left-invariant almost-Hermitian structures from
rational data and decides, as exact equalities, the tensor identities
attached to them: Levi-Civita and canonical Hermitian connections,
Riemann and Hermitian curvature, Gray identities, Bianchi defects,
scalar-curvature relations, and the classification statements for
curvature-flat quasi Kahler structures on nilpotent algebras.
"""

from .scalars import GaussianRational, Rational, gauss, rat
from .tensors import Kind, Tensor, conjugate_tensor, contract, invert_matrix
from .lie import (
    NOT_NILPOTENT,
    FrameChange,
    LieAlgebra,
    bracket,
    change_frame,
    jacobi_check,
    nilpotency_step,
)
from .structures import (
    AlmostComplexStructure,
    ComplexFrame,
    HermitianTriple,
    InvariantForm,
    InvariantMetric,
    classify,
    exterior_derivative,
    metric_from_taming,
    nijenhuis,
    pq_decompose,
    standard_10_frame,
    wedge,
)
from . import errors, fixtures

__version__ = "0.1.0"
