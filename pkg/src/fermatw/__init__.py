"""fermatw: lattice-function solutions of x^3 + y^3 = 1 and exact normal
forms for Fermat curves of every degree.

The cubic is uniformized through the Weierstrass wp function of a hexagonal
lattice; the change of variables that makes this work is verified in exact
integer arithmetic for all degrees via `normal_forms`.
"""

from . import _kernels
from .curves import (
    AffinePoint,
    E2Curve,
    FermatCurve,
    WeierstrassCurve,
    on_curve_residual,
)
from .errors import (
    ConditioningError,
    CurveMembershipError,
    EntireViolationError,
    EvalOverflowError,
    ExprError,
    ExprSyntaxError,
    FermatwError,
    MultiplicityWarning,
    PoleError,
    SolutionPoleError,
    UnsupportedFeatureError,
)
from .expr import evaluate, parse, to_source
from .lattice import (
    DEFAULT_TRUNCATION_RADIUS,
    Lattice,
    discriminant,
    eisenstein_invariants,
    half_points,
    hexagonal_lattice,
    lattice_from_invariants,
    reduce_min_norm,
    reduce_to_fundamental,
    scale_lattice,
)
from .maps import (
    SolutionPair,
    canonical_lattice,
    phi,
    phi_bar,
    phi_inv,
    solution_from_alpha,
    uniformize_g3_1,
    uniformize_g3_8,
    verification_samples,
)
from .normal_forms import (
    FermatMapSpec,
    InvolutionReport,
    ProofReport,
    RingInt,
    RingPoly,
    e2_even,
    e2_odd,
    involution_conjugacy_check,
    phi_inv_n,
    phi_n,
    poly_str,
    projection_degree_check,
    sample_fermat_points,
    verify_identity_even,
    verify_identity_odd,
)
from .weierstrass import (
    WpValue,
    ode_residual,
    psi,
    wp,
    wp_both,
    wp_prime,
    wp_unreduced,
)

__version__ = "0.1.0"


def kernel_backend():
    """Which kernel implementation is active: 'ext' or 'python'."""
    return _kernels.BACKEND
