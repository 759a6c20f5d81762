"""Computational engine for finitely generated free pro-p groups.

Core objects: freely reduced words, truncated non-commutative power series
over F_p with the Magnus embedding, free differential calculus, Johnson
tables of automorphisms, Massey-product values on relator classes, and the
p-period dynamics of p-power iterates.
"""

__version__ = "0.1.0"

from .words import (
    EngineError,
    GroupContext,
    GroupEndo,
    InputError,
    PreconditionError,
    ResourceLimitError,
    Word,
    WordSyntaxError,
    apply_endo,
    compose,
    eliminate_generator,
    generator,
    parse_word,
    power_endo,
    word,
    word_commutator,
    word_power,
    word_product,
)
from .magnus import (
    EXCEEDS,
    IDENTITY,
    TruncSeries,
    degree_at_least,
    graded_component,
    magnus_coefficient,
    magnus_embed,
    series_invert,
    series_multiply,
    zassenhaus_degree,
)
from .fox import epsilon_via_fox, fox_derivative, fundamental_identity_holds
from .autom import (
    AlgebraEndo,
    JohnsonTable,
    aj_depth,
    aj_depth_at_least,
    algebra_endo_apply,
    algebra_endo_compose,
    algebra_endo_inverse,
    algebra_endo_of,
    algebra_endo_power,
    hom_to_ia,
    ia_to_hom,
    induced_matrix,
    is_automorphism,
    iterate_depth,
    johnson_hom,
    johnson_map,
    kappa_theta,
)
from .massey import (
    DefiningSystem,
    RelatorSet,
    TheoremReport,
    build_relators,
    massey_eval,
    theorem_522_check,
    theorem_522_grid,
)
from .iwasawa import (
    LambdaModuleDesc,
    MonodromySequences,
    lambda_action_check,
    lift_independence_check,
    monodromy_sequences,
    p_period,
)
