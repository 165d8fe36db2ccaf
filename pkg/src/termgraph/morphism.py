"""Delta-morphisms between term graphs: collapse, isomorphism and rule matching."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Collection, Dict, Iterable, Mapping, Optional, Tuple

from .dag import NodeId, TermDag, Var, restrict


class _AllVariables:
    """Stands for the set of all variable labels."""

    def __contains__(self, label) -> bool:
        return isinstance(label, Var)

    def __repr__(self):
        return "VARIABLES"


VARIABLES = _AllVariables()


@dataclass(frozen=True, eq=False)
class Morphism:
    """A (possibly partial) node map.

    ``kind`` is one of ``"delta"``, ``"collapse"``, ``"matching"`` or
    ``"embedding"``.  Maps are not required to be injective.
    """

    mapping: Mapping[NodeId, NodeId]
    kind: str = "delta"
    delta: Collection = field(default=frozenset())

    def __call__(self, n: NodeId) -> NodeId:
        return self.mapping[n]

    def __contains__(self, n) -> bool:
        return n in self.mapping

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return dict(self.mapping) == dict(other.mapping) and self.kind == other.kind

    @property
    def domain(self) -> frozenset:
        return frozenset(self.mapping)

    @property
    def image(self) -> frozenset:
        return frozenset(self.mapping.values())

    def preimage(self, t: NodeId) -> Tuple[NodeId, ...]:
        return tuple(sorted(s for s, x in self.mapping.items() if x == t))

    def then(self, other: "Morphism", kind: Optional[str] = None) -> "Morphism":
        """``other ∘ self``: first apply self, then other (where defined)."""
        out = {s: other.mapping[t] for s, t in self.mapping.items() if t in other.mapping}
        return Morphism(out, kind or self.kind)

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def by_name(self, source: TermDag, target: TermDag) -> Dict[str, str]:
        return {
            source.name(s): target.name(t)
            for s, t in sorted(self.mapping.items())
        }


def propagate(
    source: TermDag,
    target: TermDag,
    seeds: Iterable[Tuple[NodeId, NodeId]],
    delta: Collection = frozenset(),
) -> Optional[Dict[NodeId, NodeId]]:
    """Push forced assignments down from ``seeds``.

    Every node whose label is not in ``delta`` must carry the same label as its
    image and its i-th successor must map to the image's i-th successor.
    Returns the forced map or None on a clash.  Nodes never reached from the
    seeds are left out of the result.
    """
    m: Dict[NodeId, NodeId] = {}
    stack = list(reversed(list(seeds)))
    while stack:
        s, t = stack.pop()
        if s in m:
            if m[s] != t:
                return None
            continue
        m[s] = t
        lab = source.labels[s]
        if lab in delta:
            continue
        if target.labels[t] != lab:
            return None
        stack.extend(reversed(list(zip(source.succ[s], target.succ[t]))))
    return m


def find_rooted_morphism(
    source: TermDag, target: TermDag, delta: Collection = frozenset()
) -> Optional[Morphism]:
    """The Δ-morphism sending root to root, if any.

    Since the root image is fixed and successors must commute, every node is
    forced; the result is therefore unique.  Raises ValueError if some node is
    only reachable through Δ-labelled nodes with successors (its image would
    not be determined).
    """
    m = propagate(source, target, [(source.root, target.root)], delta)
    if m is None:
        return None
    if len(m) != len(source):
        raise ValueError("delta leaves some nodes unconstrained; morphism not determined")
    return Morphism(m, "delta", delta)


def collapses(source: TermDag, target: TermDag) -> Optional[Morphism]:
    """Witness for ``source ⊵ target`` (target is a more shared version)."""
    m = find_rooted_morphism(source, target)
    return None if m is None else Morphism(m.mapping, "collapse")


def isomorphic(a: TermDag, b: TermDag) -> bool:
    return collapses(a, b) is not None and collapses(b, a) is not None


def match_rule_at(lhs: TermDag, host: TermDag, n: NodeId) -> Optional[Morphism]:
    """Match ``lhs`` against the subgraph of ``host`` rooted at ``n``; variables are wildcards."""
    host._check(n)
    sub = restrict(host, [n])
    m = find_rooted_morphism(lhs, sub, VARIABLES)
    return None if m is None else Morphism(m.mapping, "matching", VARIABLES)


def is_morphism(
    m: Mapping[NodeId, NodeId],
    source: TermDag,
    target: TermDag,
    delta: Collection = frozenset(),
) -> bool:
    """Literal check of the Δ-morphism conditions for a given total map."""
    if set(m) != set(source.nodes) or not set(m.values()) <= set(target.nodes):
        return False
    if m[source.root] != target.root:
        return False
    for s in source.nodes:
        lab = source.labels[s]
        if lab in delta:
            continue
        t = m[s]
        if target.labels[t] != lab:
            return False
        if tuple(m[c] for c in source.succ[s]) != target.succ[t]:
            return False
    return True
