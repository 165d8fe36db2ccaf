"""Graph rewrite rules, rewrite steps and bounded derivations."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .dag import (
    Fun,
    NodeId,
    TermDag,
    Var,
    _traversal,
    canonical_form,
    redirect,
    restrict,
    union,
)
from .errors import (
    CyclicGraph,
    CyclicResult,
    DuplicateVariableLabel,
    FreeRhsVariable,
    UnknownNode,
    VariableLhsRoot,
)
from .morphism import Morphism, match_rule_at


@dataclass(frozen=True, eq=False)
class Rule:
    """One carrier dag with two distinguished roots."""

    carrier: TermDag
    lhs_root: NodeId
    rhs_root: NodeId
    name: str = ""

    @cached_property
    def lhs(self) -> TermDag:
        return restrict(self.carrier, [self.lhs_root])

    @cached_property
    def rhs(self) -> TermDag:
        return restrict(self.carrier, [self.rhs_root])

    @property
    def is_ground(self) -> bool:
        return self.carrier.is_ground

    def __repr__(self):
        return f"Rule({self.name!r}, {self.carrier!r}, lhs={self.lhs_root}, rhs={self.rhs_root})"


def validate_rule(
    carrier: TermDag, lhs_root: NodeId, rhs_root: NodeId, name: str = ""
) -> Rule:
    for n in (lhs_root, rhs_root):
        if n not in carrier:
            raise UnknownNode(f"rule root {n!r} is not a node of the carrier")
    carrier = carrier.with_inlets([lhs_root, rhs_root])
    if isinstance(carrier.labels[lhs_root], Var):
        raise VariableLhsRoot(f"rule {name}: left-hand side root is a variable")
    seen: Dict[Var, NodeId] = {}
    for n in carrier.nodes:
        lab = carrier.labels[n]
        if isinstance(lab, Var):
            if lab in seen:
                raise DuplicateVariableLabel(
                    f"rule {name}: variable {lab} labels two nodes"
                )
            seen[lab] = n
    lhs_nodes = carrier.reachable_from([lhs_root])
    for n in carrier.reachable_from([rhs_root]):
        if isinstance(carrier.labels[n], Var) and n not in lhs_nodes:
            raise FreeRhsVariable(
                f"rule {name}: variable {carrier.labels[n]} occurs only on the right"
            )
    return Rule(carrier, lhs_root, rhs_root, name)


@dataclass(frozen=True)
class GRS:
    rules: Tuple[Rule, ...] = ()
    name: str = ""

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    @property
    def symbols(self) -> frozenset:
        return frozenset().union(*(r.carrier.symbols() for r in self.rules))


def _freshen(rule: Rule, host: TermDag) -> Tuple[Rule, int]:
    offset = (max(host.nodes) + 1 if len(host) else 0) - min(rule.carrier.nodes)
    offset = max(offset, 0)
    c = rule.carrier.shifted(offset)
    names = {n + offset: f"{rule.carrier.name(n)}'{n + offset}" for n in rule.carrier.nodes}
    c = TermDag(c.labels, c.succ, c.inlets, names, strict=False)
    return Rule(c, rule.lhs_root + offset, rule.rhs_root + offset, rule.name), offset


def apply_match(rule: Rule, host: TermDag, n: NodeId, m: Morphism) -> TermDag:
    """Rewrite ``host`` at ``n`` with ``rule`` under the match ``m`` of its lhs.

    The rule is first copied onto node ids disjoint from the host.  The
    instantiated right-hand side is ``R ⊕ host`` with every variable node of R
    redirected to its image; it then replaces the subgraph at ``n`` by
    redirecting the edges into ``n``.
    """
    fresh, offset = _freshen(rule, host)
    image = {x + offset: y for x, y in m.mapping.items()}
    R = fresh.rhs
    inst = union(R, host)
    for x in R.nodes:
        if isinstance(R.labels[x], Var):
            inst = redirect(inst, image[x], x)
    r = fresh.rhs_root
    new_root = image[r] if isinstance(R.labels[r], Var) else r
    try:
        if n == host.root:
            out = restrict(inst, [new_root])
        else:
            merged = redirect(union(host, inst), new_root, n)
            out = restrict(merged, [host.root])
        out.validate(strict=True)
    except CyclicGraph as exc:
        raise CyclicResult(f"rewriting with {rule.name} at {host.name(n)} creates a cycle") from exc
    return out


def redex_order(g: TermDag) -> List[NodeId]:
    """Canonical node order: preorder from the root, leftmost first."""
    return _traversal(g)


@dataclass(frozen=True)
class Redex:
    rule: str
    node: NodeId
    result: TermDag


def step(host: TermDag, grs: GRS, *, node_major: bool = False) -> List[Redex]:
    """Every one-step rewrite of ``host``, rule order first, then node order."""
    nodes = redex_order(host)
    pairs = (
        [(r, n) for n in nodes for r in grs.rules]
        if node_major
        else [(r, n) for r in grs.rules for n in nodes]
    )
    out = []
    for rule, n in pairs:
        m = match_rule_at(rule.lhs, host, n)
        if m is not None:
            out.append(Redex(rule.name, n, apply_match(rule, host, n, m)))
    return out


class Strategy(str, enum.Enum):
    LEFTMOST_FIRST = "leftmost_first"
    ALL_FIRST = "all_first"


class Status(str, enum.Enum):
    NORMAL_FORM = "normal_form"
    BUDGET_EXHAUSTED = "budget_exhausted"
    CYCLE_DETECTED = "cycle_detected"


@dataclass
class Derivation:
    """``graphs[k]`` is the graph after k steps; ``steps[k]`` produced ``graphs[k+1]``."""

    graphs: List[TermDag]
    steps: List[Tuple[str, NodeId]] = field(default_factory=list)
    status: Status = Status.NORMAL_FORM
    cycle: Optional[Tuple[int, int]] = None

    def __len__(self):
        return len(self.steps)


def derive(
    start: TermDag,
    grs: GRS,
    strategy: Strategy = Strategy.LEFTMOST_FIRST,
    max_steps: int = 100,
) -> Derivation:
    """Rewrite until a normal form, the step budget, or a graph isomorphic to an earlier one."""
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    strategy = Strategy(strategy)
    d = Derivation([start])
    seen = {canonical_form(start): 0}
    cur = start
    while True:
        redexes = step(cur, grs, node_major=strategy is Strategy.ALL_FIRST)
        if not redexes:
            d.status = Status.NORMAL_FORM
            return d
        if len(d.steps) >= max_steps:
            d.status = Status.BUDGET_EXHAUSTED
            return d
        first = redexes[0]
        cur = first.result
        d.steps.append((first.rule, first.node))
        d.graphs.append(cur)
        key = canonical_form(cur)
        k = len(d.graphs) - 1
        if key in seen:
            d.status = Status.CYCLE_DETECTED
            d.cycle = (seen[key], k)
            return d
        seen[key] = k
