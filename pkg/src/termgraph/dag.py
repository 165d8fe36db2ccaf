"""Term dags and term graphs.

A term dag is an acyclic node table: every node carries a label (a function
symbol with an arity or a variable) and an ordered list of successors.  The
``inlets`` list gives the entry points; a term graph is the special case of a
single inlet, its root.

Node ids are plain ints.  Display names are kept separately so that parsed
graphs can print the names used in the source text.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    ArityMismatch,
    CyclicGraph,
    DanglingSuccessor,
    DuplicateNode,
    NotATermGraph,
    UnknownNode,
    UnreachableNode,
    VarWithSuccessors,
)

NodeId = int
Position = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class Fun:
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError(f"negative arity for {self.name}")

    def __str__(self):
        return self.name


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self):
        return "?" + self.name


Label = Union[Fun, Var]


class TermDag:
    """An immutable term dag with an ordered inlets list.

    Use :func:`build_dag` to construct validated values; the constructor
    itself only checks the local conditions (arity, variable leaves, known
    successors, acyclicity) unless ``strict`` is set, in which case every node
    must also be reachable from the inlets.
    """

    def __init__(
        self,
        labels: Mapping[NodeId, Label],
        succ: Mapping[NodeId, Sequence[NodeId]],
        inlets: Sequence[NodeId],
        names: Optional[Mapping[NodeId, str]] = None,
        *,
        strict: bool = True,
    ):
        self._labels: Dict[NodeId, Label] = dict(labels)
        self._succ: Dict[NodeId, Tuple[NodeId, ...]] = {
            n: tuple(succ.get(n, ())) for n in self._labels
        }
        self._inlets: Tuple[NodeId, ...] = tuple(inlets)
        self._names: Dict[NodeId, str] = {
            n: names[n] for n in self._labels if names and n in names
        }
        self.validate(strict=strict)

    # -- basic accessors -------------------------------------------------

    @property
    def labels(self) -> Mapping[NodeId, Label]:
        return self._labels

    @property
    def succ(self) -> Mapping[NodeId, Tuple[NodeId, ...]]:
        return self._succ

    @property
    def inlets(self) -> Tuple[NodeId, ...]:
        return self._inlets

    @cached_property
    def nodes(self) -> Tuple[NodeId, ...]:
        return tuple(sorted(self._labels))

    def label(self, n: NodeId) -> Label:
        self._check(n)
        return self._labels[n]

    def successors(self, n: NodeId) -> Tuple[NodeId, ...]:
        self._check(n)
        return self._succ[n]

    def name(self, n: NodeId) -> str:
        return self._names.get(n, str(n))

    @property
    def names(self) -> Mapping[NodeId, str]:
        return {n: self.name(n) for n in self.nodes}

    def __len__(self):
        return len(self._labels)

    def __contains__(self, n):
        return n in self._labels

    def __iter__(self):
        return iter(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, TermDag):
            return NotImplemented
        return (
            self._labels == other._labels
            and self._succ == other._succ
            and self._inlets == other._inlets
        )

    def __hash__(self):
        return hash(
            (frozenset(self._labels.items()), frozenset(self._succ.items()), self._inlets)
        )

    def __repr__(self):
        body = ", ".join(
            f"{self.name(n)}:{self._labels[n]}"
            + (f"[{','.join(self.name(m) for m in self._succ[n])}]" if self._succ[n] else "")
            for n in self.nodes
        )
        return f"TermDag({{{body}}}, inlets=[{','.join(self.name(n) for n in self._inlets)}])"

    def _check(self, n):
        if n not in self._labels:
            raise UnknownNode(f"unknown node {n!r}")

    def same_table(self, other: "TermDag") -> bool:
        """Node-table equality, ignoring inlets."""
        return self._labels == other._labels and self._succ == other._succ

    # -- structure -------------------------------------------------------

    @cached_property
    def is_ground(self) -> bool:
        return all(isinstance(l, Fun) for l in self._labels.values())

    @property
    def is_term_graph(self) -> bool:
        return len(self._inlets) == 1

    @property
    def root(self) -> NodeId:
        if len(self._inlets) != 1:
            raise NotATermGraph(f"dag has {len(self._inlets)} inlets, not a single root")
        return self._inlets[0]

    @cached_property
    def parents(self) -> Mapping[NodeId, Tuple[NodeId, ...]]:
        acc: Dict[NodeId, List[NodeId]] = {n: [] for n in self._labels}
        for n in self.nodes:
            for m in self._succ[n]:
                if n not in acc[m]:
                    acc[m].append(n)
        return {n: tuple(ps) for n, ps in acc.items()}

    @cached_property
    def topological_order(self) -> Tuple[NodeId, ...]:
        """Parents before children; ties broken by node id."""
        indeg = {n: 0 for n in self._labels}
        for n in self._labels:
            for m in set(self._succ[n]):
                indeg[m] += 1
        ready = [n for n, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            n = heapq.heappop(ready)
            order.append(n)
            for m in set(self._succ[n]):
                indeg[m] -= 1
                if indeg[m] == 0:
                    heapq.heappush(ready, m)
        if len(order) != len(self._labels):
            raise CyclicGraph("successor relation contains a cycle")
        return tuple(order)

    @cached_property
    def descendants(self) -> Mapping[NodeId, frozenset]:
        """Nodes reachable by a non-empty path."""
        out: Dict[NodeId, frozenset] = {}
        for n in reversed(self.topological_order):
            acc = set()
            for m in self._succ[n]:
                acc.add(m)
                acc |= out[m]
            out[n] = frozenset(acc)
        return out

    def reaches(self, n: NodeId, m: NodeId) -> bool:
        """n ⇀* m."""
        self._check(n)
        self._check(m)
        return n == m or m in self.descendants[n]

    def reaches_strictly(self, n: NodeId, m: NodeId) -> bool:
        """n ⇀+ m."""
        self._check(n)
        self._check(m)
        return m in self.descendants[n]

    def reachable_from(self, roots: Iterable[NodeId]) -> frozenset:
        acc = set()
        for r in roots:
            self._check(r)
            acc.add(r)
            acc |= self.descendants[r]
        return frozenset(acc)

    # -- validation ------------------------------------------------------

    def validate(self, strict: bool = True) -> None:
        for n, lab in self._labels.items():
            kids = self._succ[n]
            if isinstance(lab, Var):
                if kids:
                    raise VarWithSuccessors(f"variable node {self.name(n)} has successors")
            elif len(kids) != lab.arity:
                raise ArityMismatch(
                    f"node {self.name(n)}: {lab.name} has arity {lab.arity} "
                    f"but {len(kids)} successors"
                )
            for m in kids:
                if m not in self._labels:
                    raise DanglingSuccessor(f"node {self.name(n)} points to unknown node {m!r}")
        for n in self._inlets:
            if n not in self._labels:
                raise UnknownNode(f"inlet {n!r} is not a node")
        self.topological_order  # raises CyclicGraph
        if strict:
            missing = set(self._labels) - self.reachable_from(self._inlets)
            if missing:
                raise UnreachableNode(
                    "nodes not reachable from inlets: "
                    + ", ".join(self.name(n) for n in sorted(missing))
                )

    def is_valid(self, strict: bool = True) -> bool:
        try:
            self.validate(strict)
        except Exception:
            return False
        return True

    # -- derived copies --------------------------------------------------

    def with_inlets(self, inlets: Sequence[NodeId], *, strict: bool = True) -> "TermDag":
        return TermDag(self._labels, self._succ, inlets, self._names, strict=strict)

    def renamed(self, mapping: Mapping[NodeId, NodeId]) -> "TermDag":
        """Apply an injective id renaming; display names travel with the nodes."""
        if len(set(mapping[n] for n in self._labels)) != len(self._labels):
            raise ValueError("renaming is not injective")
        return TermDag(
            {mapping[n]: l for n, l in self._labels.items()},
            {mapping[n]: tuple(mapping[m] for m in s) for n, s in self._succ.items()},
            [mapping[n] for n in self._inlets],
            {mapping[n]: self.name(n) for n in self._labels},
            strict=False,
        )

    def shifted(self, offset: int) -> "TermDag":
        return self.renamed({n: n + offset for n in self._labels})

    def dense(self) -> "TermDag":
        """Renumber nodes 0..n-1 in canonical traversal order."""
        order = _traversal(self)
        rest = [n for n in self.nodes if n not in set(order)]
        return self.renamed({n: i for i, n in enumerate(order + rest)})

    @cached_property
    def min_positions(self) -> Mapping[NodeId, Optional[Position]]:
        return _min_positions(self)

    @cached_property
    def tops(self) -> Mapping[NodeId, "CanonicalTop"]:
        """Top of every function-labelled node (variables have none)."""
        from .tops import top_of

        return {n: top_of(self, n) for n, l in self._labels.items() if isinstance(l, Fun)}

    @cached_property
    def parallel_pairs(self) -> frozenset:
        """All ordered pairs of parallel nodes."""
        d = self.descendants
        return frozenset(
            (a, b) for a in self._labels for b in self._labels
            if a != b and b not in d[a] and a not in d[b]
        )

    @cached_property
    def left_pairs(self) -> frozenset:
        """All pairs ``(a, b)`` with ``a ≪ b``."""
        pos = self.min_positions
        return frozenset((a, b) for a, b in self.parallel_pairs if lex_less(pos[a], pos[b]))

    def symbols(self) -> frozenset:
        return frozenset(l for l in self._labels.values() if isinstance(l, Fun))


def build_dag(
    decls: Iterable[Tuple[NodeId, Label, Sequence[NodeId]]],
    inlets: Sequence[NodeId],
    names: Optional[Mapping[NodeId, str]] = None,
    *,
    strict: bool = True,
) -> TermDag:
    """Build and validate a dag from ``(id, label, successors)`` triples."""
    labels: Dict[NodeId, Label] = {}
    succ: Dict[NodeId, Tuple[NodeId, ...]] = {}
    for n, lab, kids in decls:
        if n in labels:
            raise DuplicateNode(f"node {n!r} declared twice")
        labels[n] = lab
        succ[n] = tuple(kids)
    return TermDag(labels, succ, inlets, names, strict=strict)


EMPTY = TermDag({}, {}, ())


def restrict(g: TermDag, roots: Sequence[NodeId]) -> TermDag:
    """The sub-dag of everything reachable from ``roots``; inlets become ``roots``."""
    keep = g.reachable_from(roots)
    return TermDag(
        {n: g.labels[n] for n in keep},
        {n: g.succ[n] for n in keep},
        roots,
        g.names,
        strict=False,
    )


def argument_graph(g: TermDag) -> TermDag:
    inlets = [m for t in g.inlets for m in g.succ[t]]
    return restrict(g, inlets)


def is_parallel(g: TermDag, n: NodeId, m: NodeId) -> bool:
    """Mutually unreachable; a node is never parallel to itself."""
    if n == m:
        g._check(n)
        return False
    return not g.reaches(n, m) and not g.reaches(m, n)


def lex_less(p: Position, q: Position) -> bool:
    """Left-or-above order on positions: a proper prefix, or smaller at the first difference."""
    for a, b in zip(p, q):
        if a != b:
            return a < b
    return len(p) < len(q)


class _PosKey:
    """Sort key realising ``lex_less`` (a total order on positions)."""

    __slots__ = ("p",)

    def __init__(self, p: Position):
        self.p = p

    def __lt__(self, other: "_PosKey") -> bool:
        return lex_less(self.p, other.p)


def _min_positions(g: TermDag) -> Dict[NodeId, Optional[Position]]:
    # Topological DP: the minimum over parents p of minpos(p)·i is the true
    # minimum because positions of one node are never prefixes of each other
    # in an acyclic graph.
    base: Dict[NodeId, List[Position]] = {}
    if len(g.inlets) == 1:
        base[g.inlets[0]] = [()]
    else:
        for i, n in enumerate(g.inlets, start=1):
            base.setdefault(n, []).append((i,))
    best: Dict[NodeId, Optional[Position]] = {}
    for n in g.topological_order:
        cands = list(base.get(n, ()))
        for p in g.parents[n]:
            pp = best[p]
            if pp is None:
                continue
            i = g.succ[p].index(n) + 1
            cands.append(pp + (i,))
        best[n] = min(cands, key=_PosKey) if cands else None
    return best


def min_position(g: TermDag, n: NodeId) -> Position:
    """The lex-least position of ``n``.

    A single-inlet dag is treated as a term graph whose root sits at the empty
    position; otherwise the i-th inlet sits at position ``(i,)``.
    """
    g._check(n)
    pos = g.min_positions[n]
    if pos is None:
        raise UnknownNode(f"node {g.name(n)} is not reachable from the inlets")
    return pos


def left_of(g: TermDag, n: NodeId, m: NodeId) -> bool:
    """``n ≪ m``: parallel, and n's least position is lex-smaller."""
    return is_parallel(g, n, m) and lex_less(min_position(g, n), min_position(g, m))


def union(g: TermDag, h: TermDag) -> TermDag:
    """Left-biased union; inlets are concatenated.  Reachability is not enforced."""
    labels = dict(h.labels)
    labels.update(g.labels)
    succ = dict(h.succ)
    succ.update(g.succ)
    names = dict(h.names)
    names.update(g.names)
    return TermDag(labels, succ, g.inlets + h.inlets, names, strict=False)


def redirect(g: TermDag, v: NodeId, u: NodeId) -> TermDag:
    """``G[v <- u]``: every edge into ``u`` now points at ``v``.

    ``u`` stays in the node table even if it becomes unreachable; callers
    restrict afterwards.  Inlets are left untouched.
    """
    g._check(u)
    g._check(v)
    if u == v:
        return g
    succ = {n: tuple(v if m == u else m for m in kids) for n, kids in g.succ.items()}
    return TermDag(g.labels, succ, g.inlets, g.names, strict=False)


def _traversal(g: TermDag) -> List[NodeId]:
    """Preorder DFS from the inlets in order, children in order."""
    seen = set()
    order = []
    stack = list(reversed(g.inlets))
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        order.append(n)
        stack.extend(reversed(g.succ[n]))
    return order


def canonical_form(g: TermDag) -> tuple:
    """A hashable key equal for two dags iff they are isomorphic respecting inlets order."""
    order = _traversal(g)
    index = {n: i for i, n in enumerate(order)}
    table = tuple(
        (g.labels[n], tuple(index[m] for m in g.succ[n])) for n in order
    )
    return table, tuple(index[n] for n in g.inlets)


def term_graph(g: TermDag) -> TermDag:
    """Check that ``g`` is a (strictly valid) term graph and return it."""
    g.root
    g.validate(strict=True)
    return g
