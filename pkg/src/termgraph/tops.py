"""Tops and precedences on tops.

The top of a node is its label together with the sharing pattern among its
direct successors.  Each collapse class of ``f(△,…,△)`` is represented by a
restricted-growth string: the i-th entry names the block of the i-th
argument, blocks numbered in order of first occurrence.  ``f{1,1}`` is a
binary ``f`` whose two arguments are one shared node, ``f{1,2}`` the
unshared version.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from .dag import Fun, NodeId, TermDag, Var
from .errors import (
    MalformedTop,
    SizeConditionViolated,
    UnknownSymbol,
    UnknownTop,
    VariableNode,
)


@dataclass(frozen=True, order=True)
class CanonicalTop:
    symbol: Fun
    pattern: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.symbol, self.pattern)))
        if len(self.pattern) != self.symbol.arity or not is_restricted_growth(self.pattern):
            raise MalformedTop(
                f"{self.symbol.name}{{{','.join(map(str, self.pattern))}}} is not a valid "
                f"sharing pattern for arity {self.symbol.arity}"
            )

    def __hash__(self):
        return self._hash

    @property
    def size(self) -> int:
        """Root plus distinct successors."""
        return 1 + (max(self.pattern) if self.pattern else 0)

    def __str__(self):
        return f"{self.symbol.name}{{{','.join(map(str, self.pattern))}}}"


def is_restricted_growth(pattern: Tuple[int, ...]) -> bool:
    top = 0
    for x in pattern:
        if x < 1 or x > top + 1:
            return False
        top = max(top, x)
    return True


def restricted_growth_strings(n: int) -> Iterator[Tuple[int, ...]]:
    def go(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for x in range(1, top + 2):
            prefix.append(x)
            yield from go(prefix, max(top, x))
            prefix.pop()

    yield from go([], 0)


def sharing_pattern(kids: Iterable[NodeId]) -> Tuple[int, ...]:
    index: Dict[NodeId, int] = {}
    out = []
    for k in kids:
        if k not in index:
            index[k] = len(index) + 1
        out.append(index[k])
    return tuple(out)


def top_of(g: TermDag, n: NodeId) -> CanonicalTop:
    lab = g.label(n)
    if isinstance(lab, Var):
        raise VariableNode(f"node {g.name(n)} is a variable and has no top")
    return CanonicalTop(lab, sharing_pattern(g.succ[n]))


def tops_of_symbol(f: Fun) -> FrozenSet[CanonicalTop]:
    return frozenset(CanonicalTop(f, p) for p in restricted_growth_strings(f.arity))


def coarsens(fine: CanonicalTop, coarse: CanonicalTop) -> bool:
    """True if ``coarse`` shares at least everything ``fine`` shares (same symbol)."""
    if fine.symbol != coarse.symbol:
        return False
    p, q = fine.pattern, coarse.pattern
    n = len(p)
    return all(q[i] == q[j] for i in range(n) for j in range(i + 1, n) if p[i] == p[j])


_TOP_RE = re.compile(r"^\s*([A-Za-z_][\w']*)\s*(?:\{\s*([\d\s,]*)\})?\s*$")


def parse_top(text: str, signature: Iterable[Fun]) -> CanonicalTop:
    """Parse ``f{1,2}``; a bare name is accepted for constants only."""
    m = _TOP_RE.match(text)
    if not m:
        raise MalformedTop(f"cannot parse top {text!r}")
    name, body = m.group(1), m.group(2)
    by_name = {f.name: f for f in signature}
    if name not in by_name:
        raise UnknownSymbol(f"symbol {name!r} is not in the signature")
    f = by_name[name]
    if body is None:
        if f.arity != 0:
            raise MalformedTop(
                f"{name} has arity {f.arity}; name a sharing pattern such as "
                f"{name}{{{','.join(str(i + 1) for i in range(f.arity))}}}"
            )
        return CanonicalTop(f, ())
    pattern = tuple(int(x) for x in body.replace(",", " ").split())
    return CanonicalTop(f, pattern)


class Precedence:
    """A finite, transitively closed precedence on canonical tops.

    ``leq(t, s)`` reads ``t ⊑ s``.  Instances are immutable and always
    validated; construct them with :func:`build_precedence`.
    """

    def __init__(
        self,
        signature: Iterable[Fun],
        pairs: Iterable[Tuple[CanonicalTop, CanonicalTop]],
        *,
        decls: Iterable[Tuple[CanonicalTop, CanonicalTop]] = (),
        auto_sharing: bool = False,
        name: Optional[str] = None,
    ):
        self.signature: FrozenSet[Fun] = frozenset(signature)
        self.universe: FrozenSet[CanonicalTop] = frozenset(
            t for f in self.signature for t in tops_of_symbol(f)
        )
        self.decls = tuple(decls)
        self.auto_sharing = auto_sharing
        self.name = name
        self._above: Dict[CanonicalTop, Set[CanonicalTop]] = {t: {t} for t in self.universe}
        for t, s in pairs:
            for x in (t, s):
                if x not in self.universe:
                    raise UnknownTop(f"top {x} is outside the signature")
            self._above[t].add(s)
        self._close()
        self.validate()

    def _close(self):
        # reflexive-transitive closure by DFS from every top
        closed = {}
        for t in self.universe:
            seen = {t}
            stack = [t]
            while stack:
                x = stack.pop()
                for y in self._above[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            closed[t] = seen
        self._above = closed

    def validate(self) -> None:
        for t, ups in self._above.items():
            if t not in ups:
                raise AssertionError(f"precedence not reflexive at {t}")
            for s in ups:
                if not self._above[s] <= ups:
                    raise AssertionError("precedence not transitive")
                if t.size > s.size:
                    raise SizeConditionViolated(
                        f"{t} ⊑ {s} but |{t}| = {t.size} > {s.size} = |{s}|"
                    )

    @property
    def pairs(self) -> FrozenSet[Tuple[CanonicalTop, CanonicalTop]]:
        return frozenset((t, s) for t, ups in self._above.items() for s in ups)

    def _known(self, t: CanonicalTop):
        if t not in self.universe:
            raise UnknownTop(f"top {t} is outside the precedence's signature")

    def leq(self, t: CanonicalTop, s: CanonicalTop) -> bool:
        ups = self._above.get(t)
        if ups is None:
            self._known(t)
        if s in ups:
            return True
        self._known(s)
        return False

    def less(self, t: CanonicalTop, s: CanonicalTop) -> bool:
        """Strict part: ``t ⊑ s`` and not ``s ⊑ t``."""
        return self.leq(t, s) and not self.leq(s, t)

    def extended(self, symbols: Iterable[Fun]) -> "Precedence":
        """Same relation over a larger signature; new tops relate only to themselves."""
        extra = frozenset(symbols) - self.signature
        if not extra:
            return self
        return Precedence(
            self.signature | extra,
            self.pairs,
            decls=self.decls,
            auto_sharing=self.auto_sharing,
            name=self.name,
        )

    def __eq__(self, other):
        if not isinstance(other, Precedence):
            return NotImplemented
        return self.signature == other.signature and self.pairs == other.pairs

    def __hash__(self):
        return hash((self.signature, self.pairs))

    def __repr__(self):
        strict = sorted(
            f"{t} < {s}" for t, s in self.pairs if t != s
        )
        return f"Precedence({'; '.join(strict)})"


def sharing_pairs(signature: Iterable[Fun]) -> List[Tuple[CanonicalTop, CanonicalTop]]:
    """``T ⊑ T'`` for every pair of tops of one symbol where T is at least as shared."""
    out = []
    for f in sorted(set(signature)):
        tops = sorted(tops_of_symbol(f))
        out.extend((c, t) for t in tops for c in tops if c != t and coarsens(t, c))
    return out


def build_precedence(
    decls: Iterable[Tuple[CanonicalTop, CanonicalTop]] = (),
    auto_sharing: bool = False,
    signature: Iterable[Fun] = (),
    name: Optional[str] = None,
) -> Precedence:
    """Close ``decls`` (pairs ``(t, s)`` meaning t ⊏ s) into a validated precedence.

    With ``auto_sharing`` every top is additionally placed below each less
    shared top of the same symbol.  Symbols are never related across each
    other unless declared.
    """
    signature = frozenset(signature)
    decls = list(decls)
    for t, s in decls:
        for x in (t, s):
            if x.symbol not in signature:
                raise UnknownSymbol(f"symbol {x.symbol.name}/{x.symbol.arity} not in signature")
    pairs = list(decls)
    if auto_sharing:
        pairs.extend(sharing_pairs(signature))
    return Precedence(signature, pairs, decls=decls, auto_sharing=auto_sharing, name=name)


def minimal_precedence(signature: Iterable[Fun]) -> Precedence:
    return build_precedence((), False, signature, name="minimal")


def sharing_precedence(signature: Iterable[Fun]) -> Precedence:
    return build_precedence((), True, signature, name="sharing")


def prec_leq(prec: Precedence, t: CanonicalTop, s: CanonicalTop) -> bool:
    return prec.leq(t, s)
