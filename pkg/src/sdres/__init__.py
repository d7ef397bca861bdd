"""Exact-arithmetic toolkit for sparse differential resultants of systems
of generic Laurent differential polynomials: essentiality decisions,
order/degree bounds, the incremental linear-algebra resultant search, and
independent verification oracles."""

__version__ = "0.1.0"

from .diffpoly import (  # noqa: F401
    NEG_INF,
    DiffSystem,
    Poly,
    differentiate,
    effective_order,
    euler_apply,
    format_poly,
    mono,
    norm_form,
    parse_mono,
    parse_poly,
    uvar,
    yvar,
)
from .support import (  # noqa: F401
    SupportMatrix,
    TShapeResult,
    dtrdeg_monomials,
    is_reduced,
    is_tshape,
    rdm,
    support_matrix,
)
from .essential import (  # noqa: F401
    EssentialReport,
    RankEssentialSet,
    generic_rank,
    is_essential,
    rank_essential_subset,
)
from .bounds import (  # noqa: F401
    BoundReport,
    bezout_block_bound,
    cofactor_degree_bound,
    degree_bound,
    jacobi_number,
    order_bounds,
    order_matrix,
)
from .resultant import (  # noqa: F401
    ResourceError,
    ResultantCertificate,
    SearchOptions,
    build_linear_system,
    dresultant,
    nullspace,
    sdresultant,
)
from .verify import (  # noqa: F401
    MembershipReport,
    Series,
    SeriesPoint,
    homogeneity_check,
    membership_check,
    recover_solution,
    series_eval,
    span_check,
)
from .sysfile import (  # noqa: F401
    SystemParseError,
    format_system,
    parse_system,
    parse_system_file,
)
