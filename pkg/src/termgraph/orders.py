"""Path order on term dags, rule orientation, derivation certificates and good pairs."""
from __future__ import annotations

import enum
import itertools
import warnings
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .dag import Fun, NodeId, TermDag, Var, argument_graph, canonical_form, is_parallel, restrict
from .embedding import EmbeddingWitness, Variant, embeds, strict_embeds
from .errors import InletsNotParallel, NonGroundGraph
from .morphism import propagate
from .rewriting import GRS, Derivation, Rule
from .tops import CanonicalTop, Precedence, top_of

TERMINATION_CAVEAT = (
    "note: orienting every rule does not prove termination; "
    "rewrite steps are not necessarily oriented"
)


class DuplicateInletsWarning(UserWarning):
    """A comparison met a dag listing one node more than once among its inlets.

    Repeated occurrences are read as the same argument, not as parallel nodes.
    """


def _dedupe(seq: Sequence[NodeId]) -> Tuple[NodeId, ...]:
    return tuple(dict.fromkeys(seq))


def inlets_parallel(g: TermDag) -> bool:
    """Distinct inlets are pairwise parallel (repeated occurrences are allowed)."""
    d = _dedupe(g.inlets)
    return all(is_parallel(g, a, b) for a, b in itertools.combinations(d, 2))


def _block_maps(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    # sequences over range(k) whose first occurrences appear in order 0,1,..,k-1
    def go(prefix, top):
        if len(prefix) == n:
            if top == k - 1:
                yield tuple(prefix)
            return
        for x in range(min(top + 2, k)):
            prefix.append(x)
            yield from go(prefix, max(top, x))
            prefix.pop()

    if k == 0:
        if n == 0:
            yield ()
        return
    yield from go([], -1)


def collapses_onto(big: TermDag, small: TermDag) -> bool:
    """``big`` collapses onto ``small`` with its inlets landing, in order, on ``small``'s.

    Repeated inlets are merged first on both sides, and after mapping the
    merged inlet sequence of ``big`` must equal that of ``small``.  For
    single-inlet graphs this is the ordinary collapse relation.
    """
    db, ds = _dedupe(big.inlets), _dedupe(small.inlets)
    if len(big) < len(small) or len(db) < len(ds):
        return False
    for blocks in _block_maps(len(db), len(ds)):
        seeds = [(b, ds[j]) for b, j in zip(db, blocks)]
        m = propagate(big, small, seeds)
        if m is not None and len(m) == len(big):
            return True
    return False


def _lex(a: Sequence[CanonicalTop], b: Sequence[CanonicalTop], prec: Precedence) -> str:
    for x, y in zip(a, b):
        if x == y:
            continue
        return "less" if prec.less(x, y) else "other"
    if len(a) < len(b):
        return "less"
    return "equal" if len(a) == len(b) else "other"


class _PathOrder:
    """One comparison session; results are memoised on canonical forms."""

    def __init__(self, prec: Precedence):
        self.prec = prec
        self.memo: Dict[tuple, Optional[bool]] = {}
        self.saw_duplicates = False

    def projections(self, s: TermDag) -> List[TermDag]:
        """Restrictions of the argument graph to parallel subsequences of its inlets."""
        arg = argument_graph(s)
        d = _dedupe(arg.inlets)
        out = []
        for k in range(1, len(d) + 1):
            for sub in itertools.combinations(d, k):
                if all(is_parallel(arg, a, b) for a, b in itertools.combinations(sub, 2)):
                    out.append(restrict(arg, sub))
        return out

    def leq(self, t: TermDag, s: TermDag) -> Optional[bool]:
        if collapses_onto(s, t):
            return True
        return self.less(t, s)

    def less(self, t: TermDag, s: TermDag) -> Optional[bool]:
        key = (canonical_form(t), canonical_form(s))
        if key not in self.memo:
            self.memo[key] = self._less(t, s)
        return self.memo[key]

    def _less(self, t: TermDag, s: TermDag) -> Optional[bool]:
        if not inlets_parallel(t) or not inlets_parallel(s):
            return None
        if len(set(t.inlets)) < len(t.inlets) or len(set(s.inlets)) < len(s.inlets):
            self.saw_duplicates = True
        if len(t) == 0:
            return len(s) > 0
        if len(s) == 0:
            return False
        undefined = False

        def note(r):
            nonlocal undefined
            if r is None:
                undefined = True
            return r is True

        # (i) some projection of s is at least t
        for p in self.projections(s):
            if note(self.leq(t, p)):
                return True
        tt = [top_of(t, n) for n in t.inlets]
        ts = [top_of(s, n) for n in s.inlets]
        cmp = _lex(tt, ts, self.prec)
        # (ii) smaller tops, and t's arguments below s as a whole
        if cmp == "less" and note(self.less(argument_graph(t), s)):
            return True
        # (iii) equal tops, arguments compared recursively
        if cmp == "equal" and note(self.less(argument_graph(t), argument_graph(s))):
            return True
        return None if undefined else False


def lpo_less(t: TermDag, s: TermDag, prec: Precedence) -> bool:
    """``t <lpo s`` for ground term dags.

    Raises :class:`InletsNotParallel` when the comparison reaches a dag whose
    inlets are not pairwise parallel and no case succeeds elsewhere; the order
    is not defined there.
    """
    for g in (t, s):
        if not g.is_ground:
            raise NonGroundGraph("the path order is defined on ground dags only")
    order = _PathOrder(prec)
    r = order.less(t, s)
    if order.saw_duplicates:
        warnings.warn(
            "repeated inlets were treated as one argument, not as parallel nodes",
            DuplicateInletsWarning,
            stacklevel=2,
        )
    if r is None:
        raise InletsNotParallel("inlets not pairwise parallel; path order undefined")
    return r


# -- orientation -----------------------------------------------------------------


class Verdict(str, enum.Enum):
    DECREASING = "decreasing"
    INCREASING = "increasing"
    INCOMPARABLE = "incomparable"
    INAPPLICABLE = "inapplicable"


class Order(str, enum.Enum):
    LPO = "lpo"
    STRICT_EMBEDDING = "strict_embedding"


@dataclass(frozen=True)
class Orientation:
    rule: str
    verdict: Verdict
    reason: str = ""


def _ground_copy(g: TermDag) -> TermDag:
    labels = {
        n: (Fun("?" + l.name, 0) if isinstance(l, Var) else l) for n, l in g.labels.items()
    }
    return TermDag(labels, g.succ, g.inlets, g.names)


def _compare(smaller: TermDag, larger: TermDag, prec: Precedence, order: Order) -> bool:
    if order is Order.LPO:
        return lpo_less(smaller, larger, prec)
    return strict_embeds(larger, smaller, prec)


def orient_rule(
    rule: Rule, prec: Precedence, *, vars_as_constants: bool = False, order: Order = Order.LPO
) -> Orientation:
    order = Order(order)
    lhs, rhs = rule.lhs, rule.rhs
    if not rule.is_ground:
        if not vars_as_constants:
            raise NonGroundGraph(f"rule {rule.name} has variables; use vars_as_constants")
        lhs, rhs = _ground_copy(lhs), _ground_copy(rhs)
        prec = prec.extended(lhs.symbols() | rhs.symbols())
    try:
        if _compare(rhs, lhs, prec, order):
            return Orientation(rule.name, Verdict.DECREASING)
        if _compare(lhs, rhs, prec, order):
            return Orientation(rule.name, Verdict.INCREASING)
    except InletsNotParallel as exc:
        return Orientation(rule.name, Verdict.INAPPLICABLE, str(exc))
    return Orientation(rule.name, Verdict.INCOMPARABLE)


def orient_grs(
    grs: GRS,
    prec: Precedence,
    vars_as_constants: bool = False,
    order: Order = Order.LPO,
) -> List[Orientation]:
    """Per-rule verdicts.  Never read these as a termination proof (see TERMINATION_CAVEAT)."""
    return [
        orient_rule(r, prec, vars_as_constants=vars_as_constants, order=order) for r in grs
    ]


# -- derivation certificates -------------------------------------------------------


@dataclass(frozen=True)
class StepVerdict:
    index: int
    decreasing: Optional[bool]  # None: order undefined on this step


@dataclass(frozen=True)
class Certificate:
    order: Order
    steps: Tuple[StepVerdict, ...]

    @property
    def descending(self) -> bool:
        return all(v.decreasing is True for v in self.steps)

    @property
    def first_failure(self) -> Optional[int]:
        for v in self.steps:
            if v.decreasing is not True:
                return v.index
        return None


def certify_derivation(d: Derivation, prec: Precedence, order: Order = Order.LPO) -> Certificate:
    """Check that each graph of ``d`` is strictly below its predecessor.

    Step k is the move from ``d.graphs[k-1]`` to ``d.graphs[k]`` (k from 1).
    """
    order = Order(order)
    out = []
    for k in range(1, len(d.graphs)):
        before, after = d.graphs[k - 1], d.graphs[k]
        try:
            ok: Optional[bool] = _compare(after, before, prec, order)
        except InletsNotParallel:
            ok = None
        out.append(StepVerdict(k, ok))
    return Certificate(order, tuple(out))


# -- good pairs --------------------------------------------------------------------


@dataclass(frozen=True)
class GoodPair:
    """``i < j`` (1-based) with the i-th graph embedded in the j-th."""

    i: int
    j: int
    witness: EmbeddingWitness


def good_pair(seq: Sequence[TermDag], prec: Precedence) -> Optional[GoodPair]:
    """Least (i, j) in lexicographic order such that the j-th graph embeds the i-th."""
    for g in seq:
        if not g.is_ground:
            raise NonGroundGraph("good pairs are defined on ground graphs")
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            w = embeds(seq[j], seq[i], prec, Variant.FINAL)
            if w is not None:
                return GoodPair(i + 1, j + 1, w)
    return None
