from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from lpalgebra.graphs import (
    ActivationSequence,
    Digraph,
    GraphError,
    all_sequences,
    check_cluster_variable,
    check_exchange_closed_form,
    check_hat_ratio,
    check_multiplicity,
    check_product_identity,
    check_sequence_action,
    closed_form_cluster_variable,
    closed_form_exchange,
    closed_form_hat_ratio,
    closed_form_p,
    initial_seed_binomial,
    initial_seed_linear,
    mutate_sequence,
    seed_from_sequence,
    sequence_symbols,
)
from lpalgebra.poly import A, X, LaurentPolynomial, factor_multiplicity, mono_from_exponents, parse
from lpalgebra.seed import validate_seed

P = LaurentPolynomial
FIG = Digraph.from_edges(5, [(1, 2), (2, 1), (2, 3), (2, 5), (3, 2), (4, 1), (4, 3), (4, 5), (5, 3), (5, 4)])


def seq(*e, n):
    return ActivationSequence(tuple(e), n)


# -- digraphs and initial seeds ----------------------------------------------


def test_linear_seed_of_figure_graph():
    assert initial_seed_linear(FIG).exchange(2) == parse("A2+X1+X3+X5")


def test_binomial_seed_of_figure_graph():
    assert initial_seed_binomial(FIG).exchange(2) == parse("A2+X1*X3*X5")


def test_complete_graph_seeds():
    k3 = initial_seed_binomial(Digraph.complete(3))
    assert [str(s.exchange) for s in k3.slots] == ["A1+X2*X3", "A2+X1*X3", "A3+X1*X2"]
    k2 = Digraph.complete(2)
    assert initial_seed_linear(k2) == initial_seed_binomial(k2)
    assert [str(s.exchange) for s in initial_seed_linear(k2).slots] == ["A1+X2", "A2+X1"]


def test_edgeless_graph_gives_constant_exchange_polynomials():
    seed = initial_seed_linear(Digraph(2, frozenset()))
    assert seed.exchange(1) == parse("A1") and seed.exchange(2) == parse("A2")
    assert validate_seed(seed).ok


@pytest.mark.parametrize("bad", [
    '{"n": 2, "edges": [[1, 1]]}',
    '{"n": 2, "edges": [[1, 3]]}',
    '{"n": 2, "edges": [[1, 2], [1, 2]]}',
    '{"n": 2}',
    '{"n": "2", "edges": []}',
    '{"n": 2, "edges": [[1]]}',
    "[1, 2",
])
def test_bad_digraph_json(bad):
    with pytest.raises(GraphError):
        Digraph.from_json(bad)


def test_digraph_json_round_trip():
    import json

    assert Digraph.from_json(json.dumps(FIG.to_dict())) == FIG


# -- activation sequences ----------------------------------------------------


def test_sequence_validation_and_rendering():
    s = ActivationSequence.parse("1,3,2", 3)
    assert str(s) == "1,3,2" and s[2] == 3 and s.underlying == {1, 2, 3}
    assert s.prefix(1) == seq(1, n=3)
    with pytest.raises(GraphError):
        ActivationSequence.parse("1,1", 3)
    with pytest.raises(GraphError):
        ActivationSequence.parse("4", 3)
    with pytest.raises(GraphError):
        ActivationSequence.parse("a", 3)


def test_sequence_counts():
    assert [len(all_sequences(n)) for n in (1, 2, 3, 4, 5)] == [2, 5, 16, 65, 326]


def test_mutate_sequence_cases():
    assert mutate_sequence(seq(1, 2, n=3), 3) == seq(1, 2, 3, n=3)
    assert mutate_sequence(seq(1, 2, n=3), 2) == seq(1, n=3)
    assert mutate_sequence(seq(1, 2, 3, n=3), 1) == seq(2, 1, 3, n=3)


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.permutations(range(1, n + 1)), st.integers(0, n),
                                                      st.integers(1, n), st.just(n))))
def test_mutate_sequence_round_trips(data):
    perm, k, ell, n = data
    s = ActivationSequence(tuple(perm[:k]), n)
    t = mutate_sequence(s, ell)
    j = s.position(ell)
    if j is None or j == len(s):
        # append and truncate undo each other under the same direction
        assert mutate_sequence(t, ell) == s
    else:
        # a transposition is undone by the entry it was swapped with
        assert mutate_sequence(t, s[j + 1]) == s


def test_transposition_is_not_self_inverse():
    s = seq(1, 2, n=2)
    assert mutate_sequence(mutate_sequence(s, 1), 1) == seq(2, n=2)


# -- closed forms ------------------------------------------------------------


def test_closed_form_examples():
    y = sequence_symbols(seq(1, 2, n=3))
    y1, y12 = P.var(y[1]), P.var(y[2])
    assert closed_form_exchange(seq(1, n=3))[2] == P.var(A(1)) * P.var(X(3)) + P.var(A(2)) * y1
    e = closed_form_exchange(seq(1, 2, n=3))
    assert e[2] == P.var(A(1)) * P.var(X(3)) + P.var(A(2)) * y1
    assert e[1] == P.var(X(3)) ** 2 + y12


def test_hat_ratio_examples():
    assert closed_form_hat_ratio(seq(1, 2, 3, n=4), 4) == ()
    y = sequence_symbols(seq(1, 2, 3, n=4))
    assert closed_form_hat_ratio(seq(1, 2, 3, n=4), 1) == mono_from_exponents({y[3]: -2})
    assert closed_form_hat_ratio(seq(1, 2, n=3), 1) == ()


def test_cluster_variable_examples():
    assert closed_form_cluster_variable(seq(1, n=2)) == parse("X2*X1^-1+A1*X1^-1")
    y12 = closed_form_cluster_variable(seq(1, 2, n=2))
    assert y12 == parse("A2*X2+A1*X1+A1*A2") * P.var(X(1), -1) * P.var(X(2), -1)
    assert closed_form_cluster_variable(seq(2, 1, n=2)) == y12
    with pytest.raises(GraphError):
        closed_form_cluster_variable(seq(n=2))


def test_cluster_variable_symmetry_and_distinctness():
    for n in (2, 3, 4):
        values = {}
        for s in all_sequences(n)[1:]:
            y = closed_form_cluster_variable(s)
            assert values.setdefault(s.underlying, y) == y
        assert len(set(values.values())) == len(values) == 2 ** n - 1


def test_two_p_expressions_agree():
    for s in all_sequences(4):
        closed_form_p(s, check_alternative=True)


def test_custom_symbol_table():
    s = seq(1, 2, n=3)
    table = {1: X(100), 2: X(101)}
    e = closed_form_exchange(s, table)
    assert e[1] == P.var(X(3)) ** 2 + P.var(X(101))


def test_coefficients_in_pattern():
    # E of slot s_1 for (1,2,3,4) has no Y_(1,2,3,4)^3 term but a Y^4 term
    s = seq(1, 2, 3, 4, n=4)
    y4 = sequence_symbols(s)[4]
    from lpalgebra.poly import coefficients_in

    exps = {a for a, _ in coefficients_in(closed_form_exchange(s)[1], y4)}
    assert 3 not in exps and 4 in exps


def test_multiplicity_example():
    s = seq(1, 2, 3, n=3)
    y = sequence_symbols(s)
    e = closed_form_exchange(s)
    reduced = e[1].evaluate({y[3]: P.constant(0)})
    assert factor_multiplicity(reduced, e[3], laurent=False) == 2


# -- engine against closed forms ---------------------------------------------


def test_seed_from_sequence_examples():
    from lpalgebra.seed import mutate

    k2 = Digraph.complete(2)
    assert seed_from_sequence(seq(1, n=2), k2) == mutate(initial_seed_binomial(k2), 1)
    assert seed_from_sequence(seq(n=3)) == initial_seed_binomial(Digraph.complete(3))
    s = seq(1, 2, n=3)
    sd = seed_from_sequence(s)
    e = closed_form_exchange(s)
    assert [sd.exchange(l) for l in (1, 2, 3)] == [e[1], e[2], e[3]]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_identities_over_all_sequences(n):
    for s in all_sequences(n):
        seed = seed_from_sequence(s)
        assert check_exchange_closed_form(s, seed) is None
        assert check_cluster_variable(s, seed) is None
        assert check_hat_ratio(s, seed) is None
        assert check_product_identity(s) is None
        for ell in range(1, n + 1):
            assert check_sequence_action(s, ell) is None


def test_multiplicities_up_to_rank_five():
    count = 0
    for s in all_sequences(5, 4):
        assert check_multiplicity(s) is None
        count += max(0, len(s) - 2) * max(0, len(s) - 1) // 2
    assert count > 0


def test_checks_detect_a_wrong_closed_form():
    # a seed from a different sequence must not pass as the seed of s
    s = seq(1, 2, n=3)
    wrong = seed_from_sequence(seq(2, 1, n=3))
    assert check_exchange_closed_form(s, wrong) is not None
    assert check_hat_ratio(seq(1, 2, 3, n=3), seed_from_sequence(seq(1, 2, n=3))) is not None
