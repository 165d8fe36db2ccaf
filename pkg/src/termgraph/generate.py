"""Exhaustive and random generation of ground term graphs (used by tests and the CLI)."""
from __future__ import annotations

import itertools
import random
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .dag import Fun, NodeId, TermDag, canonical_form, restrict
from .tops import restricted_growth_strings


def all_term_graphs(signature: Sequence[Fun], max_nodes: int) -> List[TermDag]:
    """Every ground term graph with at most ``max_nodes`` nodes, one per iso class.

    Graphs are built with nodes numbered in a topological order (root 0,
    successors always higher), then deduplicated by canonical form.  The
    result is sorted by size and then canonical form, so it is stable.
    """
    signature = sorted(signature)
    seen: Dict[tuple, TermDag] = {}
    for k in range(1, max_nodes + 1):
        for labels in itertools.product(signature, repeat=k):
            choices = []
            for i, f in enumerate(labels):
                later = range(i + 1, k)
                choices.append(list(itertools.product(later, repeat=f.arity)))
            for succs in itertools.product(*choices):
                has_parent = {j for kids in succs for j in kids}
                if len(has_parent) != k - 1:
                    continue
                g = TermDag(dict(enumerate(labels)), dict(enumerate(succs)), [0], strict=False)
                if len(g.reachable_from([0])) != k:
                    continue
                key = canonical_form(g)
                if key not in seen:
                    seen[key] = g.dense()
    return sorted(seen.values(), key=lambda g: (len(g), repr(canonical_form(g))))


def random_term_graph(
    rng: random.Random,
    signature: Sequence[Fun],
    max_nodes: int,
    share: float = 0.3,
) -> TermDag:
    """A random ground term graph with at most ``max_nodes`` nodes.

    Nodes are created bottom-up; each argument slot either reuses an existing
    node (with probability ``share``) or gets a fresh subtree when budget
    allows.  Only constants are used once the budget runs out.
    """
    signature = sorted(signature)
    constants = [f for f in signature if f.arity == 0]
    if not constants:
        raise ValueError("signature needs a constant")
    labels: Dict[NodeId, Fun] = {}
    succ: Dict[NodeId, Tuple[NodeId, ...]] = {}

    def fresh(budget: int) -> NodeId:
        opts = [f for f in signature if f.arity < budget] or constants
        f = rng.choice(opts)
        kids = []
        budget -= 1
        for _ in range(f.arity):
            if labels and (rng.random() < share or budget <= 0):
                kids.append(rng.choice(sorted(labels)))
            else:
                c = fresh(max(budget, 1))
                budget -= 1
                kids.append(c)
        n = len(labels)
        labels[n] = f
        succ[n] = tuple(kids)
        return n

    root = fresh(max_nodes)
    g = TermDag(labels, succ, [root], strict=False)
    g = restrict(g, [root])
    if len(g) > max_nodes:
        return random_term_graph(rng, signature, max_nodes, share)
    return g.dense()


def random_collapse(rng: random.Random, g: TermDag, merges: int = 2) -> TermDag:
    """Merge random pairs of bisimilar-at-one-level nodes, yielding some ``h`` with ``g ⊵ h``.

    Two nodes are merged only when they have the same label and (after earlier
    merges) identical successor lists, so the quotient map is a collapse.
    """
    cur = g
    for _ in range(merges):
        groups: Dict[tuple, List[NodeId]] = {}
        for n in cur.nodes:
            groups.setdefault((cur.labels[n], cur.succ[n]), []).append(n)
        cands = [ns for ns in groups.values() if len(ns) > 1]
        if not cands:
            break
        ns = rng.choice(cands)
        keep, drop = sorted(rng.sample(ns, 2))
        succ = {
            n: tuple(keep if m == drop else m for m in kids)
            for n, kids in cur.succ.items()
            if n != drop
        }
        labels = {n: l for n, l in cur.labels.items() if n != drop}
        inlets = [keep if n == drop else n for n in cur.inlets]
        cur = TermDag(labels, succ, inlets, strict=True)
    return cur
