"""Expected local maxima below a level for random polynomials whose
coefficients form a Gaussian random walk.

Three mutually checking evaluation paths:

- exact: closed-form crossing intensity integrated by adaptive quadrature;
- asymptotic: large-degree expansions assembled from kernel integrals;
- monte-carlo: direct simulation of sampled polynomials.
"""

from .counts import CountQuery, NumericResult, expected_count, split_points
from .density import density_split, maxima_density
from .errors import (
    DegenerateCovariance,
    DegenerateModel,
    NonFiniteResult,
    RiceMaximaError,
    ToleranceNotMet,
    VerificationFailure,
)
from .expansion import (
    FAMILY_BOUNDS,
    FAMILY_INTERVALS,
    ExpansionResult,
    h_integral,
    kernel_pieces,
    theorem_expansion,
)
from .model import PolynomialModel, basis_eval, scale_model
from .moments import MomentSet, moments
from .montecarlo import (
    MCConfig,
    MCEstimate,
    count_maxima_below,
    estimate_em,
    estimate_many,
    sample_coefficients,
)
from .reference import VerifyRow, verify_constants
from .scaled import ScaledValue

__version__ = "0.1.0"

__all__ = [
    "CountQuery",
    "DegenerateCovariance",
    "DegenerateModel",
    "ExpansionResult",
    "FAMILY_BOUNDS",
    "FAMILY_INTERVALS",
    "MCConfig",
    "MCEstimate",
    "MomentSet",
    "NonFiniteResult",
    "NumericResult",
    "PolynomialModel",
    "RiceMaximaError",
    "ScaledValue",
    "ToleranceNotMet",
    "VerificationFailure",
    "VerifyRow",
    "__version__",
    "basis_eval",
    "count_maxima_below",
    "density_split",
    "estimate_em",
    "estimate_many",
    "expected_count",
    "h_integral",
    "kernel_pieces",
    "maxima_density",
    "moments",
    "sample_coefficients",
    "scale_model",
    "split_points",
    "theorem_expansion",
    "verify_constants",
]
