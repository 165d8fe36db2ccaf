import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from termgraph.dag import Fun, TermDag, Var, build_dag, canonical_form
from termgraph.errors import (
    MalformedTop,
    SizeConditionViolated,
    UnknownSymbol,
    UnknownTop,
    VariableNode,
)
from termgraph.generate import random_collapse, random_term_graph
from termgraph.morphism import collapses
from termgraph.tops import (
    CanonicalTop,
    build_precedence,
    parse_top,
    prec_leq,
    sharing_precedence,
    top_of,
    tops_of_symbol,
)

from conftest import SIG

f, g, a, b = SIG
BELL = [1, 1, 2, 5, 15]


def top(sym, *pattern):
    return CanonicalTop(sym, tuple(pattern))


CHAIN = [(top(f, 1, 1), top(g, 1)), (top(g, 1), top(f, 1, 2))]


def test_top_of_examples():
    shared = build_dag([(1, f, [2, 2]), (2, a, [])], [1])
    assert str(top_of(shared, 1)) == "f{1,1}"
    fab = build_dag([(1, f, [2, 3]), (2, a, []), (3, b, [])], [1])
    assert top_of(fab, 1) == top(f, 1, 2)
    assert str(top_of(fab, 2)) == "a{}"


def test_top_of_variable():
    G = build_dag([(1, g, [2]), (2, Var("x"), [])], [1])
    with pytest.raises(VariableNode):
        top_of(G, 2)


def test_tops_of_symbol_small_arities():
    assert tops_of_symbol(a) == {top(a)}
    assert tops_of_symbol(f) == {top(f, 1, 2), top(f, 1, 1)}
    assert len(tops_of_symbol(Fun("h", 3))) == 5


def collapse_classes(arity):
    """Iso classes of collapses of h(△,…,△), found by brute force (oracle)."""
    h, tri = Fun("h", arity), Fun("△", 0)
    leaves = list(range(1, arity + 1))
    tree = TermDag({0: h, **{i: tri for i in leaves}}, {0: tuple(leaves)}, [0])
    seen = set()
    for kids in itertools.product(leaves, repeat=arity):
        used = set(kids)
        T = TermDag({0: h, **{i: tri for i in used}}, {0: kids}, [0])
        if collapses(tree, T) is not None:
            seen.add(canonical_form(T))
    return seen


@pytest.mark.parametrize("arity", [0, 1, 2, 3, 4])
def test_tops_count_is_bell_number(arity):
    h = Fun("h", arity)
    assert len(tops_of_symbol(h)) == BELL[arity]
    assert len(collapse_classes(arity)) == BELL[arity]


def test_malformed_pattern():
    with pytest.raises(MalformedTop):
        top(f, 2, 1)
    with pytest.raises(MalformedTop):
        top(f, 1)


def test_chain_precedence():
    P = build_precedence(CHAIN, signature=SIG)
    assert P.leq(top(f, 1, 1), top(f, 1, 2))
    assert prec_leq(P, top(g, 1), top(f, 1, 2))
    assert not prec_leq(P, top(f, 1, 2), top(f, 1, 1))


def test_auto_sharing_orders_shared_below():
    P = build_precedence((), auto_sharing=True, signature=SIG)
    assert P.leq(top(f, 1, 1), top(f, 1, 2))
    assert not P.leq(top(f, 1, 2), top(f, 1, 1))
    assert not P.leq(top(a), top(b))


def test_size_condition_guard():
    with pytest.raises(SizeConditionViolated):
        build_precedence([(top(f, 1, 2), top(a))], signature=SIG)


def test_size_condition_inside_chain():
    with pytest.raises(SizeConditionViolated):
        build_precedence([(top(g, 1), top(f, 1, 1)), (top(f, 1, 1), top(b)), (top(b), top(a))], signature=SIG)


def test_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        build_precedence([(top(Fun("k", 0), ), top(a))], signature=SIG)


def test_unknown_top_query():
    P = build_precedence((), signature=SIG)
    with pytest.raises(UnknownTop):
        P.leq(top(Fun("k", 0)), top(a))


def test_reflexive():
    P = build_precedence(CHAIN, signature=SIG)
    for t in P.universe:
        assert P.leq(t, t)


@pytest.mark.parametrize("arity", [0, 1, 2, 3])
def test_auto_sharing_valid_up_to_arity_3(arity):
    sig = [Fun("h", arity), a]
    P = build_precedence((), auto_sharing=True, signature=sig)
    P.validate()
    for t, s in P.pairs:
        assert t.size <= s.size
        for u in P.universe:
            if P.leq(s, u):
                assert P.leq(t, u)


def test_parse_top():
    assert parse_top("f{1,1}", SIG) == top(f, 1, 1)
    assert parse_top("a", SIG) == top(a)
    with pytest.raises(MalformedTop):
        parse_top("f", SIG)
    with pytest.raises(UnknownSymbol):
        parse_top("k{1}", SIG)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_collapse_lowers_tops_under_sharing(seed):
    rng = random.Random(seed)
    G = random_term_graph(rng, SIG, 9, share=0.1)
    H = random_collapse(rng, G, 3)
    m = collapses(G, H)
    P = sharing_precedence(SIG)
    for n in G.nodes:
        assert P.leq(top_of(H, m(n)), top_of(G, n))
