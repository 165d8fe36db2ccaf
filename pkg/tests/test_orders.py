import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from termgraph.dag import Var, build_dag
from termgraph.embedding import Variant, brute_force_embeds, is_witness
from termgraph.errors import InletsNotParallel, NonGroundGraph
from termgraph.generate import random_term_graph
from termgraph.orders import (
    DuplicateInletsWarning,
    TERMINATION_CAVEAT,
    Order,
    Verdict,
    certify_derivation,
    collapses_onto,
    good_pair,
    lpo_less,
    orient_grs,
)
from termgraph.rewriting import GRS, Derivation, derive, validate_rule
from termgraph.tops import minimal_precedence

from conftest import SIG

f, g, a, b = SIG
PRECS = ["minimal", "sharing", "chain", "ab"]


def test_lpo_argument_order(ws):
    P = ws.precedence("ab")
    assert lpo_less(ws.graph("FAB"), ws.graph("FBA"), P)
    assert not lpo_less(ws.graph("FBA"), ws.graph("FAB"), P)


def test_lpo_constant_below_application(minimal):
    a1 = build_dag([(1, a, [])], [1])
    tree = build_dag([(1, f, [2, 3]), (2, a, []), (3, a, [])], [1])
    assert lpo_less(a1, tree, minimal)
    assert not lpo_less(tree, a1, minimal)


def test_lpo_shared_below_tree(ws, sharing):
    with pytest.warns(DuplicateInletsWarning):
        assert lpo_less(ws.graph("SharedFAA"), ws.graph("TreeFAA"), sharing)
    assert not lpo_less(ws.graph("TreeFAA"), ws.graph("SharedFAA"), sharing)


def test_lpo_chain(ws):
    P = ws.precedence("chain")
    assert lpo_less(ws.graph("G2"), ws.graph("G1"), P)
    assert lpo_less(ws.graph("G3"), ws.graph("G2"), P)


def test_lpo_irreflexive_on_fixtures(ws):
    for name in PRECS:
        P = ws.precedence(name)
        for G in ws.graphs.values():
            try:
                assert not lpo_less(G, G, P)
            except InletsNotParallel:
                pass


def test_lpo_undefined_without_parallel_inlets(ws, minimal):
    # the argument graph of FGAs has inlets g(C) and C, which are not parallel
    with pytest.raises(InletsNotParallel):
        lpo_less(ws.graph("FGAs"), ws.graph("FGAs"), minimal)


def test_lpo_rejects_variables(minimal):
    v = build_dag([(1, g, [2]), (2, Var("x"), [])], [1])
    with pytest.raises(NonGroundGraph):
        lpo_less(v, v, minimal)


def test_collapses_onto_merges_repeated_inlets():
    shared = build_dag([(2, a, [])], [2, 2])
    two = build_dag([(5, a, []), (6, a, [])], [5, 6])
    assert collapses_onto(two, shared)
    assert not collapses_onto(shared, two)


def graphs(max_nodes):
    return st.integers(0, 10**6).map(
        lambda seed: random_term_graph(random.Random(seed), SIG, max_nodes)
    )


def verdict(t, s, P):
    try:
        return lpo_less(t, s, P)
    except InletsNotParallel:
        return None


@settings(max_examples=80, deadline=None)
@given(graphs(7), graphs(7))
def test_lpo_invariant_under_renaming(T, S):
    P = minimal_precedence(SIG)
    assert verdict(T, S, P) == verdict(T.shifted(40), S.shifted(90), P)


# -- orientation --------------------------------------------------------------------


def test_orient_swap(ws):
    [o] = orient_grs(ws.grs("swap"), ws.precedence("ab"))
    assert o.verdict is Verdict.DECREASING


def test_orient_share_rule(ws, sharing):
    [o] = orient_grs(ws.grs("share"), sharing, order=Order.STRICT_EMBEDDING)
    assert o.verdict is Verdict.DECREASING
    [o] = orient_grs(ws.grs("share"), sharing)
    assert o.verdict is Verdict.DECREASING
    assert "does not prove termination" in TERMINATION_CAVEAT


def test_orient_identity_rule(minimal):
    carrier = build_dag([(1, a, [])], [1, 1])
    r = validate_rule(carrier, 1, 1, "same")
    [o] = orient_grs(GRS((r,)), minimal)
    assert o.verdict is Verdict.INCOMPARABLE
    [o] = orient_grs(GRS((r,)), minimal, order=Order.STRICT_EMBEDDING)
    assert o.verdict is Verdict.INCOMPARABLE


def test_orient_increasing(ws):
    P = ws.precedence("ab")
    carrier = build_dag([(1, a, []), (2, b, [])], [1, 2])
    r = validate_rule(carrier, 1, 2, "up")
    [o] = orient_grs(GRS((r,)), P)
    assert o.verdict is Verdict.INCREASING


def test_orient_inapplicable(minimal):
    # both sides are f(g(a), a) with the a shared; their argument dags have
    # inlets g(a) and a, which are not parallel
    carrier = build_dag(
        [(1, f, [2, 3]), (2, g, [3]), (3, a, []), (4, f, [5, 6]), (5, g, [6]), (6, a, [])],
        [1, 4],
    )
    r = validate_rule(carrier, 1, 4, "copy")
    [o] = orient_grs(GRS((r,)), minimal)
    assert o.verdict is Verdict.INAPPLICABLE


def test_orient_variables(minimal):
    x = Var("x")
    carrier = build_dag([(1, g, [2]), (2, x, [])], [1, 2])
    r = validate_rule(carrier, 1, 2, "proj")
    with pytest.raises(NonGroundGraph):
        orient_grs(GRS((r,)), minimal)
    [o] = orient_grs(GRS((r,)), minimal, vars_as_constants=True)
    assert o.verdict is Verdict.DECREASING


# -- certification ------------------------------------------------------------------


def test_certify_share_derivation(ws, sharing):
    d = derive(ws.graph("TreeFAA"), ws.grs("share"), max_steps=10)
    cert = certify_derivation(d, sharing, Order.STRICT_EMBEDDING)
    assert [v.decreasing for v in cert.steps] == [True, False]
    assert not cert.descending and cert.first_failure == 2


def test_certify_swap_descends(ws):
    d = derive(ws.graph("FBA"), ws.grs("swap"), max_steps=10)
    assert len(d) == 1
    assert certify_derivation(d, ws.precedence("ab"), Order.LPO).descending


def test_certify_empty(ws, minimal):
    d = Derivation([ws.graph("G1")])
    cert = certify_derivation(d, minimal, Order.LPO)
    assert cert.steps == () and cert.descending


# -- good pairs -----------------------------------------------------------------------


def test_good_pair_share_prefix(ws, sharing):
    gp = good_pair(ws.sequence("share-prefix"), sharing)
    assert (gp.i, gp.j) == (2, 3)


def test_good_pair_matches_oracle_sweep(ws):
    P = ws.precedence("chain")
    seq = ws.sequence("chain-reversed")
    expected = next(
        (
            (i + 1, j + 1)
            for i, j in itertools.combinations(range(len(seq)), 2)
            if brute_force_embeds(seq[j], seq[i], P, Variant.FINAL)
        ),
        None,
    )
    gp = good_pair(seq, P)
    assert (None if gp is None else (gp.i, gp.j)) == expected


def test_good_pair_singleton(ws, minimal):
    assert good_pair([ws.graph("G1")], minimal) is None


def test_good_pair_bad_sequence(ws, minimal):
    assert good_pair([ws.graph("FAB"), ws.graph("FBA")], minimal) is None


def test_good_pair_rejects_variables(minimal):
    v = build_dag([(1, Var("x"), [])], [1])
    with pytest.raises(NonGroundGraph):
        good_pair([v, v], minimal)


@settings(max_examples=40, deadline=None)
@given(st.lists(graphs(5), min_size=1, max_size=5), graphs(5))
def test_good_pair_witness_and_prefix_stable(seq, extra):
    P = minimal_precedence(SIG)
    gp = good_pair(seq, P)
    if gp is not None:
        assert is_witness(seq[gp.j - 1], seq[gp.i - 1], P, Variant.FINAL, gp.witness.mapping)
        # appending can only bring an earlier pair into view
        longer = good_pair(seq + [extra], P)
        assert (longer.i, longer.j) <= (gp.i, gp.j)
