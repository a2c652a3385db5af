"""Exact moment-property decisions and sum-of-squares certificates.

The package decides the moment property for hermitean parts of algebras of
complex polynomial fractions with linear denominators and produces
machine-verifiable certificates: rational sums of squares for polynomials,
fractions over x^2 + y^2 and polynomials on the cylinder, and hermitean
squares in three semigroup *-algebras.  All verdicts rest on exact rational
arithmetic; floating point only ever proposes candidates.
"""

from .polycore import (
    GaussianRational,
    ParseError,
    RealPolynomial,
    StarPolynomial,
    format_real,
    format_star,
    parse_real,
    parse_star,
)
from .ratlin import (
    herm_ldl,
    nullspace,
    rationalize_vector,
    solve_affine,
    sym_ldl,
)
from .fracalg import (
    AlgebraDescriptor,
    DenominatorBasis,
    FracAlgError,
    FractionElement,
    gh_functions,
    in_character_domain,
    make_algebra,
    parse_descriptor,
    serialize_descriptor,
    single_norm_basis,
)
from .fibres import (
    AnglePhi,
    FibreParameter,
    MomentDecision,
    ThetaParam,
    affine_normal_form,
    decide_moment_property,
    fibre_constraints,
    fibre_dimension,
    restrict_to_line,
)
from .univariate import (
    even_odd_split,
    find_negative_point,
    is_psd,
    root_count,
    square_free_decomposition,
    sturm_chain,
)
from .sos import (
    Exhausted,
    GramProblem,
    Indeterminate,
    Infeasible,
    NotPSD,
    NotPSDWitness,
    SOSCertificate,
    SOSError,
    certificate_residual,
    cylinder_sos,
    fraction_sos,
    gram_solve,
    multiplier_search,
    newton_basis,
    norm_polynomial,
    univariate_sos,
)
from .graded import (
    GradedElement,
    b_membership,
    expand_ternary,
    grade_decompose,
    is_bounded,
    sos_transfer_to_B,
    subalgebra_to_fraction,
    ternary_lift,
)
from .semigroups import (
    SemigroupElement,
    SemigroupError,
    StarSemigroup,
    TruncatedFunctional,
    box_window,
    character_value,
    element_value,
    functional_from_atoms,
    functional_from_element,
    hermitean_image,
    hermitean_image_algebra,
    hermitean_square_certify,
    moment_matrix,
    to_function_algebra,
    truncated_psd_check,
)
from .certificates import (
    CertificateError,
    format_certificate,
    parse_certificate,
    read_certificate,
    verify_certificate,
    write_certificate,
)

__version__ = "0.1.0"
