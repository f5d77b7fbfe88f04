"""p-Fourier and p-Beurling-Fourier algebras on compact groups."""

from .coeffs import (
    CoefficientBundle, DualFunctional, central_project, dual_pair, evaluate, evaluation_functional,
    indicator_identity, multiply, quotient_average, random_bundle, transform,
)
from .duals import (
    IrrepLabel, SU2, Torus, branching, enumerate_dual, fusion_multiplicities, intertwiners,
    irrep_matrix, parse_group, product_group,
)
from .errors import DescriptorError, DomainError, PFourierError, UnsupportedError
from .matnorm import SchattenIndex, dual_witness, schatten
from .norms import (
    DeltaParams, NormParams, ap_dual_norm, ap_norm, central_norm, delta_norm, delta_params,
    diagonal_norm_finite, restriction_dual_norm, rq_params, su2_torus_delta_dual, su2_torus_dual_norm,
)
from .weights import (
    Weight, check_weight, dimension_weight, log_weight, polynomial_weight, restrict_weight, symmetrize,
    word_length,
)

__version__ = "0.1.0"
