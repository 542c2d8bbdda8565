"""Exact arithmetic for Laurent phenomenon algebras of digraphs."""
from __future__ import annotations

from .explorer import (
    ExchangeGraph,
    IsomorphismError,
    LabelingError,
    SequenceLabeling,
    explore,
    label_by_sequences,
    verify_counts,
    verify_isomorphism,
    verify_suite,
)
from .graphs import (
    ActivationSequence,
    Digraph,
    all_sequences,
    closed_form_cluster_variable,
    closed_form_exchange,
    closed_form_hat_ratio,
    initial_seed,
    initial_seed_binomial,
    initial_seed_linear,
    mutate_sequence,
    seed_from_sequence,
)
from .poly import (
    A,
    X,
    InexactDivisionError,
    LaurentPolynomial,
    RationalFunction,
    VarRef,
    coefficients_in,
    exact_divide,
    factor_multiplicity,
    gcd,
    parse,
    substitute,
)
from .seed import (
    HatPolynomial,
    LaurentPhenomenonError,
    Seed,
    canonicalize,
    compute_hat,
    mutate,
    seeds_equivalent,
    validate_seed,
)

__version__ = "0.1.0"
