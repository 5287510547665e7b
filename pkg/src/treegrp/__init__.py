"""Exact computation in automorphism groups of finite binary rooted trees.

Elements are stored as bit-packed portraits (one parity bit per vertex of
the labeled levels); subgroups come either enumerated or as membership
predicates; pattern groups carry the machinery of finitely constrained
groups: essentiality, reduction, exact Hausdorff dimension, and the
half-tree parity obstruction used to refute topological finite generation.

Composition convention: ``h * g`` applies g first.
"""

from .errors import EnumerationCapExceeded, TreeGroupError, VerificationError
from .halftree import (
    INCONCLUSIVE,
    NOT_IN_DERIVED,
    CertificateVerdict,
    JContext,
    N,
    commutator_parity,
    derived_membership_certificate,
    verify_ni_identities,
    word_parities,
    word_to_element,
)
from .kernel import backend_name, has_c_kernel, set_backend
from .patterns import (
    EssentialityResult,
    PatternGroup,
    PsiImageIndex,
    TruncationGroup,
    dimension_in_allowed_set,
    essential_reduction,
    hausdorff_dimension,
    is_essential,
    is_finite,
    is_level_transitive,
    pattern_appears,
    psi_image_index,
    truncation_group,
)
from .portrait import (
    MAX_DEPTH,
    DistanceResult,
    FiniteAutomorphism,
    commutator,
    compose,
    distance,
    from_sections,
    generator,
    generators,
    identity,
    invert,
)
from .subgroups import (
    DEFAULT_CAP,
    EnumeratedSubgroup,
    M_V,
    PredicateSubgroup,
    all_subgroups_depth2,
    beta_V,
    close,
    conjugate_label_check,
    contains,
    derived_subgroup,
    derived_subgroup_allpairs,
    enumerate_PJ,
    full_group,
    generating_set,
    in_derived_of_Gd,
    index,
    is_transitive_on_level,
    level_stabilizer,
    maximal_subgroup,
    orbit,
    order,
    subgroup_from_json,
    subgroup_to_json,
    verify_presentation,
)
from .verify import (
    ClassificationReport,
    ClassificationRow,
    classify_maximal,
    verify_auxiliary,
    verify_new_relation,
    verify_no_adad,
    verify_not_top_fg,
)

__version__ = "0.1.0"
