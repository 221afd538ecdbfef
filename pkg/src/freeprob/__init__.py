"""Exact computations with moments, free cumulants and the non-crossing
partition lattice, plus Fock-space realizations of the associated
processes.  All lattice and transform arithmetic is over Fraction; the
only floating point lives in the dense Fock matrices.
"""

from .errors import (
    CapacityError,
    DomainError,
    FreeprobError,
    ParseError,
    StructuralError,
    ValidationError,
)
from .partitions import (
    NcPartition,
    catalan_number,
    enumerate_nc,
    full,
    interval,
    is_noncrossing,
    join,
    leq,
    meet,
    mobius,
    singletons,
)
from .functionals import (
    CumulantFunctional,
    MomentFunctional,
    as_scalar,
    block_cumulant_product,
    block_moment_product,
    cumulant_mobius_sum,
    cumulants_to_moments,
    moment_lattice_sum,
    moments_to_cumulants,
)
from .freeness import FreenessReport, check_freeness, free_product
from .models import (
    CovarianceMatrix,
    PoissonSpec,
    bernoulli,
    compound_free_poisson,
    compound_free_poisson_cumulants,
    free_poisson,
    projection_family,
    projection_functional,
    sandwich_cumulants,
    semicircle,
    semicircle_family,
)
from .limits import (
    ConvergenceReport,
    PoissonApproximation,
    array_cumulants,
    compound_limit_check,
    dilate,
    free_sum_moments,
    multi_poisson_limit_check,
    poisson_approximation,
    poisson_limit_check,
    sequence_limit_check,
)
from .infdiv import (
    GramMatrix,
    InfdivVerdict,
    check_infdiv,
    gram_matrix,
    is_psd,
    kappa_functional_checks,
    monomial_basis,
    psd_certificate,
)
from .fock import (
    FockModel,
    FockOperator,
    LevyReport,
    PolySpace,
    TimeComponent,
    build_fock_model,
    build_poly_space,
    verify_levy_axioms,
)
from .dsl import Session, evaluate, parse, pretty, run_source
from .jsonio import (
    functional_from_dict,
    functional_to_dict,
    read_functional,
    write_functional,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DomainError",
    "FreeprobError",
    "ParseError",
    "StructuralError",
    "ValidationError",
    "NcPartition",
    "catalan_number",
    "enumerate_nc",
    "full",
    "interval",
    "is_noncrossing",
    "join",
    "leq",
    "meet",
    "mobius",
    "singletons",
    "CumulantFunctional",
    "MomentFunctional",
    "as_scalar",
    "block_cumulant_product",
    "block_moment_product",
    "cumulant_mobius_sum",
    "cumulants_to_moments",
    "moment_lattice_sum",
    "moments_to_cumulants",
    "FreenessReport",
    "check_freeness",
    "free_product",
    "CovarianceMatrix",
    "PoissonSpec",
    "bernoulli",
    "compound_free_poisson",
    "compound_free_poisson_cumulants",
    "free_poisson",
    "projection_family",
    "projection_functional",
    "sandwich_cumulants",
    "semicircle",
    "semicircle_family",
    "ConvergenceReport",
    "PoissonApproximation",
    "array_cumulants",
    "compound_limit_check",
    "dilate",
    "free_sum_moments",
    "multi_poisson_limit_check",
    "poisson_approximation",
    "poisson_limit_check",
    "sequence_limit_check",
    "GramMatrix",
    "InfdivVerdict",
    "check_infdiv",
    "gram_matrix",
    "is_psd",
    "kappa_functional_checks",
    "monomial_basis",
    "psd_certificate",
    "FockModel",
    "FockOperator",
    "LevyReport",
    "PolySpace",
    "TimeComponent",
    "build_fock_model",
    "build_poly_space",
    "verify_levy_axioms",
    "Session",
    "evaluate",
    "parse",
    "pretty",
    "run_source",
    "functional_from_dict",
    "functional_to_dict",
    "read_functional",
    "write_functional",
]
