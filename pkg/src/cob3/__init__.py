"""cob3: an exact computational engine for labelled 3-dimensional bordisms.

Terms name composites of elementary spherical bordisms (merger, splitter,
cap, cup, wire crossing, prime handles); the package decides equality of the
underlying labelled 3-manifolds, searches for rewrite derivations, and
evaluates terms as exact rational linear maps for any commutative Frobenius
algebra presented over Q.
"""

from cob3.terms import (
    ArityMismatch,
    Compose,
    Gen,
    ParseError,
    Tensor,
    Term,
    TermTypeError,
    id_n,
    parse,
    permutation_term,
    print_term,
    random_term,
    subterm_at,
    replace_at,
    typecheck,
)
from cob3.cospan import (
    Component,
    LabelledCospan,
    compose_cospans,
    cospan_of_term,
    cospan_from_json,
    cospan_to_json,
    identity_cospan,
    manifold_signature,
    tensor_cospans,
    terms_equal,
)
from cob3.kernel import KERNEL
from cob3.rewrite import (
    RULES,
    RULE_SETS,
    NoMatch,
    NotFoundWithinBound,
    RewriteTrace,
    Rule,
    TraceStep,
    UnknownRuleSet,
    apply_rule,
    find_path,
    normalize_G1,
    normalize_G2,
    replay,
    ruleset,
    verify_ruleset_soundness,
)
from cob3.linmap import LinearMap, identity_map, permutation_map
from cob3.frobenius import (
    DegeneratePairing,
    FrobeniusAlgebra,
    IdempotentDecomposition,
    NotScalarOnBlock,
    ShapeError,
    UnknownPrime,
    VerifyReport,
    Violation,
    algebra_from_json,
    algebra_to_json,
    character_on_block,
    conjugate_algebra,
    diagonal_algebra,
    hadamard_algebra,
    idempotent_decomposition,
    make_algebra,
    random_labelled_algebra,
)
from cob3.evaluate import (
    closed_invariant,
    closed_invariant_by_characters,
    eval_semantic,
    eval_term,
    eval_with_endo_override,
    parse_manifold,
)

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch",
    "Component",
    "Compose",
    "DegeneratePairing",
    "FrobeniusAlgebra",
    "Gen",
    "IdempotentDecomposition",
    "KERNEL",
    "LabelledCospan",
    "LinearMap",
    "NoMatch",
    "NotFoundWithinBound",
    "NotScalarOnBlock",
    "ParseError",
    "RULES",
    "RULE_SETS",
    "RewriteTrace",
    "Rule",
    "ShapeError",
    "Tensor",
    "Term",
    "TermTypeError",
    "TraceStep",
    "UnknownPrime",
    "UnknownRuleSet",
    "VerifyReport",
    "Violation",
    "algebra_from_json",
    "algebra_to_json",
    "apply_rule",
    "character_on_block",
    "closed_invariant",
    "closed_invariant_by_characters",
    "compose_cospans",
    "conjugate_algebra",
    "cospan_from_json",
    "cospan_of_term",
    "cospan_to_json",
    "diagonal_algebra",
    "eval_semantic",
    "eval_term",
    "eval_with_endo_override",
    "find_path",
    "hadamard_algebra",
    "id_n",
    "idempotent_decomposition",
    "identity_cospan",
    "identity_map",
    "make_algebra",
    "manifold_signature",
    "normalize_G1",
    "normalize_G2",
    "parse",
    "parse_manifold",
    "permutation_map",
    "permutation_term",
    "print_term",
    "random_labelled_algebra",
    "random_term",
    "replace_at",
    "replay",
    "ruleset",
    "subterm_at",
    "tensor_cospans",
    "terms_equal",
    "typecheck",
    "verify_ruleset_soundness",
]
