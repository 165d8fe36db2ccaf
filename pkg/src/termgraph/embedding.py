"""Homeomorphic embedding of ground term graphs.

Three variants are implemented:

``attempt1``
    a total map from the smaller graph into the larger one, top-monotone,
    sending edges to non-empty paths.
``attempt2``
    a partial surjective map from the larger graph onto the smaller one,
    top-monotone in the other direction, with edges of the image reflected
    as paths into the preimage classes.
``final``
    ``attempt2`` plus preservation of the left-to-right order of parallel
    nodes.

All functions take the *larger* graph first: ``embeds(S, T, ...)`` asks
whether S embeds T.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .dag import NodeId, TermDag, is_parallel, left_of
from .errors import NonGroundGraph, TooLarge, UnvalidatedPrecedence
from .morphism import Morphism
from .tops import Precedence


class Variant(str, enum.Enum):
    ATTEMPT1 = "attempt1"
    ATTEMPT2 = "attempt2"
    FINAL = "final"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EmbeddingWitness:
    """A map certifying that ``larger`` embeds ``smaller``.

    For ``attempt1`` the map goes from the smaller graph into the larger one;
    for the other variants it is a partial surjection from larger onto smaller.
    """

    morphism: Morphism
    variant: Variant

    @property
    def mapping(self) -> Mapping[NodeId, NodeId]:
        return self.morphism.mapping

    def by_name(self, larger: TermDag, smaller: TermDag) -> Dict[str, str]:
        if self.variant is Variant.ATTEMPT1:
            return self.morphism.by_name(smaller, larger)
        return self.morphism.by_name(larger, smaller)


def _check_inputs(larger: TermDag, smaller: TermDag, prec) -> None:
    if not isinstance(prec, Precedence):
        raise UnvalidatedPrecedence("expected a Precedence built by build_precedence")
    for g in (larger, smaller):
        if not g.is_ground:
            raise NonGroundGraph("embedding is only defined for ground graphs")


# -- literal condition checks ------------------------------------------------


def is_witness(
    larger: TermDag,
    smaller: TermDag,
    prec: Precedence,
    variant: Variant,
    mapping: Mapping[NodeId, NodeId],
) -> bool:
    """Check ``mapping`` against every condition of ``variant``, quantifier by quantifier."""
    variant = Variant(variant)
    _check_inputs(larger, smaller, prec)
    if variant is Variant.ATTEMPT1:
        return _is_attempt1_witness(larger, smaller, prec, mapping)
    return _is_partial_witness(larger, smaller, prec, mapping, variant is Variant.FINAL)


def _is_attempt1_witness(S, T, prec, m) -> bool:
    if set(m) != set(T.nodes) or not set(m.values()) <= set(S.nodes):
        return False
    for t in T.nodes:
        if not prec.leq(T.tops[t], S.tops[m[t]]):
            return False
        for t2 in T.succ[t]:
            if not S.reaches_strictly(m[t], m[t2]):
                return False
    return True


def _is_partial_witness(S, T, prec, m, final) -> bool:
    if not set(m) <= set(S.nodes) or set(m.values()) != set(T.nodes):
        return False
    dom = sorted(m)

    def pre(t):
        return [n for n in dom if m[n] == t]

    for s in dom:
        if not prec.leq(T.tops[m[s]], S.tops[s]):
            return False
    for s in dom:
        for s2 in dom:
            if m[s2] in T.succ[m[s]]:
                if not any(S.reaches_strictly(s, n) for n in pre(m[s2])):
                    return False
            if final and left_of(T, m[s], m[s2]):
                cls = pre(m[s2])
                if any(is_parallel(S, s, n) for n in cls) and not any(
                    left_of(S, s, n) for n in cls
                ):
                    return False
    return True


# -- search ------------------------------------------------------------------


def embeds(
    larger: TermDag,
    smaller: TermDag,
    prec: Precedence,
    variant: Variant = Variant.FINAL,
) -> Optional[EmbeddingWitness]:
    """Search for a witness that ``larger`` embeds ``smaller``.

    Deterministic: smaller-graph nodes are handled parents first; candidate
    preimage sets are tried largest first, then in lexicographic id order.
    """
    variant = Variant(variant)
    _check_inputs(larger, smaller, prec)
    if variant is Variant.ATTEMPT1:
        m = _search_attempt1(larger, smaller, prec)
    else:
        m = _search_partial(larger, smaller, prec, variant is Variant.FINAL)
    if m is None:
        return None
    return EmbeddingWitness(Morphism(m, "embedding"), variant)


def _search_attempt1(S: TermDag, T: TermDag, prec) -> Optional[Dict[NodeId, NodeId]]:
    s_tops = S.tops
    cand = {}
    for t in T.nodes:
        tt = T.tops[t]
        cand[t] = [s for s in S.nodes if prec.leq(tt, s_tops[s])]
        if not cand[t]:
            return None
    order = T.topological_order
    m: Dict[NodeId, NodeId] = {}
    desc = S.descendants

    def rec(i):
        if i == len(order):
            return True
        t = order[i]
        for s in cand[t]:
            if all(s in desc[m[p]] for p in T.parents[t]):
                m[t] = s
                if rec(i + 1):
                    return True
                del m[t]
        return False

    return dict(m) if rec(0) else None


def _subsets_largest_first(items: Sequence[NodeId]):
    for k in range(len(items), 0, -1):
        yield from itertools.combinations(items, k)


def _search_partial(S: TermDag, T: TermDag, prec, final: bool) -> Optional[Dict[NodeId, NodeId]]:
    if len(S) < len(T):
        return None
    s_tops = S.tops
    cand: Dict[NodeId, List[NodeId]] = {}
    for t in T.nodes:
        tt = T.tops[t]
        cand[t] = [s for s in S.nodes if prec.leq(tt, s_tops[s])]
        if not cand[t]:
            return None
    if len(set().union(*cand.values())) < len(T):
        return None

    order = T.topological_order
    desc = S.descendants
    if final:
        s_par, s_left = S.parallel_pairs, S.left_pairs
        t_left = T.left_pairs
    pre: Dict[NodeId, Tuple[NodeId, ...]] = {}
    used: set = set()

    def order_ok(t_a, t_b) -> bool:
        # t_a ≪ t_b: every s over t_a that is parallel to something over t_b
        # must be left of something over t_b
        cls = pre[t_b]
        for s in pre[t_a]:
            if any((s, n) in s_par for n in cls) and not any(
                (s, n) in s_left for n in cls
            ):
                return False
        return True

    def consistent(t) -> bool:
        mine = pre[t]
        for p in T.parents[t]:
            for s in pre[p]:
                if not any(n in desc[s] for n in mine):
                    return False
        if final:
            for t2 in pre:
                if t2 == t:
                    continue
                if (t, t2) in t_left and not order_ok(t, t2):
                    return False
                if (t2, t) in t_left and not order_ok(t2, t):
                    return False
        return True

    def feasible(i) -> bool:
        free = [s for s in S.nodes if s not in used]
        if len(free) < len(order) - i:
            return False
        return all(any(s not in used for s in cand[t]) for t in order[i:])

    def rec(i) -> bool:
        if i == len(order):
            return True
        t = order[i]
        avail = [s for s in cand[t] if s not in used]
        for subset in _subsets_largest_first(avail):
            pre[t] = subset
            used.update(subset)
            if consistent(t) and feasible(i + 1) and rec(i + 1):
                return True
            used.difference_update(subset)
            del pre[t]
        return False

    if not rec(0):
        return None
    return {s: t for t, ss in pre.items() for s in ss}


def strict_embeds(larger: TermDag, smaller: TermDag, prec: Precedence) -> bool:
    """Strict part of the final embedding: one way but not back."""
    return (
        embeds(larger, smaller, prec, Variant.FINAL) is not None
        and embeds(smaller, larger, prec, Variant.FINAL) is None
    )


# -- brute-force oracle --------------------------------------------------------

BRUTE_FORCE_LIMIT = 8


def brute_force_embeds(
    larger: TermDag,
    smaller: TermDag,
    prec: Precedence,
    variant: Variant = Variant.FINAL,
) -> bool:
    """Decide embedding by enumerating every candidate map.

    Maps are enumerated node by node over all images allowed by the top
    condition (plus "undefined" for the partial variants); each complete map
    is handed to :func:`is_witness`.  Exponential; graphs are capped at
    ``BRUTE_FORCE_LIMIT`` nodes.
    """
    variant = Variant(variant)
    _check_inputs(larger, smaller, prec)
    if len(larger) > BRUTE_FORCE_LIMIT or len(smaller) > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute force is limited to {BRUTE_FORCE_LIMIT} nodes")
    S, T = larger, smaller
    if variant is Variant.ATTEMPT1:
        dom = T.nodes
        opts = [
            [s for s in S.nodes if prec.leq(T.tops[t], S.tops[s])] for t in dom
        ]
        for images in itertools.product(*opts):
            if _is_attempt1_witness(S, T, prec, dict(zip(dom, images))):
                return True
        return False
    final = variant is Variant.FINAL
    dom = S.nodes
    opts = [
        [None] + [t for t in T.nodes if prec.leq(T.tops[t], S.tops[s])] for s in dom
    ]
    covered = set(t for o in opts for t in o if t is not None)
    if covered != set(T.nodes):
        return False
    for images in itertools.product(*opts):
        if set(images) - {None} != set(T.nodes):
            continue
        m = {s: t for s, t in zip(dom, images) if t is not None}
        if _is_partial_witness(S, T, prec, m, final):
            return True
    return False
