"""gitkit: exact polyhedral GIT data of affine toric varieties, transport
along subtorus inclusions, and the resulting polyhedral divisors."""

from .cones import (
    Cone,
    Face,
    contains,
    double_description,
    dualize,
    faces,
    image,
    intersect,
    relative_interior_point,
)
from .downgrade import (
    DowngradedGITData,
    SubtorusData,
    analyze_subtorus,
    check_effective_quotient_action,
    downgraded_git_cone,
    downgraded_git_fan,
    downgraded_semistable,
    downgraded_semistable_via_union,
    downgraded_weight_cone,
)
from .errors import (
    DimensionMismatch,
    EmptyGitClass,
    NonSaturatedEmbedding,
    NotPointedError,
    RankLimitExceeded,
    SaturationBoundExhausted,
    UnboundedEvaluation,
)
from .gitfan import (
    AffineToricData,
    GITData,
    OrbitCone,
    SemistableLocus,
    SubsetSumPoset,
    git_cone,
    git_cone_via_poset,
    git_equivalence_report,
    git_fan,
    orbit_cones,
    orbit_lattice,
    orbit_monoid,
    semistable_locus,
    subset_sum_poset,
    weight_cone,
)
from .hilbert import HilbertBasis, hilbert_basis, monoid_generators, saturation_factor
from .linalg import hnf, kernel_basis, snf
from .ppdiv import (
    PolyhedralDivisor,
    RationalDivisor,
    TailedPolyhedron,
    ToricBase,
    check_proper,
    choose_section,
    downgrade_ppdivisor,
    evaluate,
    homogenized_evaluate,
    minkowski_sum,
    quotient_fan,
    verify_reconstruction,
)

__version__ = "0.1.0"
