"""Text format for graphs, rules, rewrite systems, precedences and sequences.

Grammar (``#`` starts a comment; ``,`` and ``;`` are optional separators)::

    file       := block*
    block      := 'symbols'    '{' (NAME '/' INT)* '}'
                | 'graph'      NAME '{' node* ('root' ':' ID | 'inlets' ':' ID+) '}'
                | 'rule'       NAME '{' node* 'lhs' ':' ID 'rhs' ':' ID '}'
                | 'grs'        NAME '{' NAME* '}'
                | 'precedence' NAME '{' (chain | 'auto-sharing')* '}'
                | 'sequence'   NAME '{' NAME* '}'
    node       := ID ':' label
    label      := NAME | NAME '(' ID (',' ID)* ')' | '?' NAME
    chain      := top ('<' top)+
    top        := NAME | NAME '{' INT (',' INT)* '}'

Node ids are local to their block.  On parsing they are renumbered densely
in declaration order; the written ids are kept as display names.  A bare
name in a precedence is allowed for constants only.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .dag import Fun, Label, TermDag, Var, build_dag
from .errors import (
    ArityConflict,
    DuplicateName,
    GraphSyntaxError,
    MalformedTop,
    TermGraphError,
)
from .rewriting import GRS, Rule, validate_rule
from .tops import (
    CanonicalTop,
    Precedence,
    build_precedence,
    minimal_precedence,
    sharing_precedence,
)

BUILTIN_PRECEDENCES = ("minimal", "sharing")

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<name>[A-Za-z0-9_'][A-Za-z0-9_'\-]*)"
    r"|(?P<punct>[{}()\[\]:,;<?/])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'name', 'punct' or 'eof'
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise GraphSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind in ("name", "punct"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


@dataclass
class Workspace:
    """Everything declared in one or more input files."""

    signature: Dict[str, Fun] = field(default_factory=dict)
    graphs: Dict[str, TermDag] = field(default_factory=dict)
    rules: Dict[str, Rule] = field(default_factory=dict)
    grss: Dict[str, GRS] = field(default_factory=dict)
    precedences: Dict[str, Precedence] = field(default_factory=dict)
    sequences: Dict[str, Tuple[str, ...]] = field(default_factory=dict)

    def graph(self, name: str) -> TermDag:
        try:
            return self.graphs[name]
        except KeyError:
            raise UnknownName(f"no graph named {name!r}") from None

    def precedence(self, name: str) -> Precedence:
        if name in self.precedences:
            return self.precedences[name]
        sig = self.signature.values()
        if name == "minimal":
            return minimal_precedence(sig)
        if name == "sharing":
            return sharing_precedence(sig)
        raise UnknownName(f"no precedence named {name!r}")

    def grs(self, name: Optional[str] = None) -> GRS:
        """A named rewrite system, a single rule by name, or (no name) all rules."""
        if name is None:
            return GRS(tuple(self.rules.values()), "all")
        if name in self.grss:
            return self.grss[name]
        if name in self.rules:
            return GRS((self.rules[name],), name)
        raise UnknownName(f"no rewrite system or rule named {name!r}")

    def sequence(self, name: str) -> List[TermDag]:
        if name not in self.sequences:
            raise UnknownName(f"no sequence named {name!r}")
        return [self.graph(g) for g in self.sequences[name]]


class UnknownName(TermGraphError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# -- parser ------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, ws: Workspace):
        self.toks = tokenize(text)
        self.i = 0
        self.ws = ws
        # precedences are resolved once the whole signature is known
        self.pending: List[Tuple[Token, list, bool]] = []
        self.pending_grs: List[Tuple[Token, List[Token]]] = []
        self.pending_seq: List[Tuple[Token, List[Token]]] = []

    # token helpers
    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg: str, tok: Optional[Token] = None, cls=GraphSyntaxError):
        tok = tok or self.peek()
        return cls(msg, tok.line, tok.column)

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text or t.kind == "eof":
            raise self.error(f"expected {text!r}, found {t.text or 'end of input'!r}", t)
        return t

    def name(self, what: str = "a name") -> Token:
        t = self.next()
        if t.kind != "name":
            raise self.error(f"expected {what}, found {t.text or 'end of input'!r}", t)
        return t

    def skip_seps(self):
        while self.peek().text in (",", ";") and self.peek().kind == "punct":
            self.i += 1

    def at(self, text: str) -> bool:
        return self.peek().kind == "punct" and self.peek().text == text

    # symbols
    def symbol(self, name: str, arity: int, tok: Token) -> Fun:
        f = self.ws.signature.get(name)
        if f is not None and f.arity != arity:
            raise self.error(
                f"symbol {name} used with arity {arity}, earlier with {f.arity}", tok, ArityConflict
            )
        if f is None:
            f = self.ws.signature[name] = Fun(name, arity)
        return f

    # blocks
    def parse(self):
        while self.peek().kind != "eof":
            kw = self.name("a block keyword")
            handler = {
                "symbols": self.symbols_block,
                "graph": self.graph_block,
                "rule": self.rule_block,
                "grs": self.grs_block,
                "precedence": self.precedence_block,
                "sequence": self.sequence_block,
            }.get(kw.text)
            if handler is None:
                raise self.error(f"unknown block keyword {kw.text!r}", kw)
            handler()
        self.resolve()

    def unique(self, table: dict, tok: Token, kind: str):
        if tok.text in table:
            raise self.error(f"{kind} {tok.text!r} defined twice", tok, DuplicateName)

    def symbols_block(self):
        self.expect("{")
        self.skip_seps()
        while not self.at("}"):
            n = self.name("a symbol")
            self.expect("/")
            a = self.name("an arity")
            if not a.text.isdigit():
                raise self.error("arity must be a natural number", a)
            self.symbol(n.text, int(a.text), n)
            self.skip_seps()
        self.expect("}")

    def node_table(self, stop: Tuple[str, ...]):
        """Parse ``id: label`` items until a keyword in ``stop`` followed by ':'."""
        decls: List[Tuple[Token, Label, List[Token]]] = []
        self.skip_seps()
        while not (self.peek().text in stop and self.peek(1).text == ":"):
            if self.at("}"):
                raise self.error(f"missing {' / '.join(stop)} line")
            nid = self.name("a node id")
            self.expect(":")
            if self.at("?"):
                self.next()
                v = self.name("a variable name")
                decls.append((nid, Var(v.text), []))
            else:
                sym = self.name("a function symbol")
                kids: List[Token] = []
                if self.at("("):
                    self.next()
                    while not self.at(")"):
                        kids.append(self.name("a node id"))
                        if self.at(","):
                            self.next()
                    self.expect(")")
                decls.append((nid, self.symbol(sym.text, len(kids), sym), kids))
            self.skip_seps()
        return decls

    def build(self, decls, roots: List[Token], strict: bool = True) -> TermDag:
        ids: Dict[str, int] = {}
        for tok, _, _ in decls:
            if tok.text in ids:
                raise self.error(f"node {tok.text!r} declared twice", tok, DuplicateName)
            ids[tok.text] = len(ids)

        def ref(tok):
            if tok.text not in ids:
                raise self.error(f"undeclared node {tok.text!r}", tok)
            return ids[tok.text]

        triples = [(ids[t.text], lab, [ref(k) for k in kids]) for t, lab, kids in decls]
        names = {i: s for s, i in ids.items()}
        inlets = [ref(r) for r in roots]
        try:
            return build_dag(triples, inlets, names, strict=strict)
        except TermGraphError as exc:
            anchor = roots[0] if roots else self.peek()
            raise self.error(str(exc), anchor) from exc

    def graph_block(self):
        name = self.name("a graph name")
        self.unique(self.ws.graphs, name, "graph")
        self.expect("{")
        decls = self.node_table(("root", "inlets"))
        kw = self.next()
        self.expect(":")
        roots = [self.name("a node id")]
        if kw.text == "inlets":
            self.skip_seps()
            while not self.at("}"):
                roots.append(self.name("a node id"))
                self.skip_seps()
        self.skip_seps()
        self.expect("}")
        self.ws.graphs[name.text] = self.build(decls, roots)

    def rule_block(self):
        name = self.name("a rule name")
        self.unique(self.ws.rules, name, "rule")
        self.expect("{")
        decls = self.node_table(("lhs",))
        self.next()
        self.expect(":")
        lhs = self.name("a node id")
        self.skip_seps()
        if self.peek().text != "rhs":
            raise self.error("expected 'rhs:'")
        self.next()
        self.expect(":")
        rhs = self.name("a node id")
        self.skip_seps()
        self.expect("}")
        carrier = self.build(decls, [lhs, rhs])
        try:
            rule = validate_rule(carrier, carrier.inlets[0], carrier.inlets[1], name.text)
        except TermGraphError as exc:
            raise self.error(str(exc), name, GraphSyntaxError) from exc
        self.ws.rules[name.text] = rule

    def name_list(self) -> List[Token]:
        self.expect("{")
        out = []
        self.skip_seps()
        while not self.at("}"):
            out.append(self.name())
            self.skip_seps()
        self.expect("}")
        return out

    def grs_block(self):
        name = self.name("a system name")
        self.unique(self.ws.grss, name, "rewrite system")
        if any(name.text == t.text for t, _ in self.pending_grs):
            raise self.error(f"rewrite system {name.text!r} defined twice", name, DuplicateName)
        self.pending_grs.append((name, self.name_list()))

    def sequence_block(self):
        name = self.name("a sequence name")
        self.unique(self.ws.sequences, name, "sequence")
        if any(name.text == t.text for t, _ in self.pending_seq):
            raise self.error(f"sequence {name.text!r} defined twice", name, DuplicateName)
        self.pending_seq.append((name, self.name_list()))

    def top_tokens(self):
        sym = self.name("a top")
        pattern = None
        if self.at("{"):
            self.next()
            pattern = []
            while not self.at("}"):
                t = self.name("a block number")
                if not t.text.isdigit():
                    raise self.error("sharing patterns are lists of numbers", t)
                pattern.append(int(t.text))
                if self.at(","):
                    self.next()
            self.expect("}")
        return sym, pattern

    def precedence_block(self):
        name = self.name("a precedence name")
        self.unique(self.ws.precedences, name, "precedence")
        if name.text in BUILTIN_PRECEDENCES or any(name.text == t.text for t, _, _ in self.pending):
            raise self.error(f"precedence {name.text!r} defined twice", name, DuplicateName)
        self.expect("{")
        chains = []
        auto = False
        self.skip_seps()
        while not self.at("}"):
            if self.peek().text == "auto-sharing":
                self.next()
                auto = True
            else:
                chain = [self.top_tokens()]
                if not self.at("<"):
                    raise self.error("expected '<' in precedence chain")
                while self.at("<"):
                    self.next()
                    chain.append(self.top_tokens())
                chains.append(chain)
            self.skip_seps()
        self.expect("}")
        self.pending.append((name, chains, auto))

    # resolution once all symbols are known
    def resolve_top(self, sym: Token, pattern) -> CanonicalTop:
        f = self.ws.signature.get(sym.text)
        if pattern is None:
            if f is None:
                f = self.symbol(sym.text, 0, sym)
            if f.arity != 0:
                raise self.error(
                    f"{sym.text} has arity {f.arity}; write a sharing pattern such as "
                    f"{sym.text}{{{','.join(str(i + 1) for i in range(f.arity))}}}",
                    sym,
                    GraphSyntaxError,
                )
            return CanonicalTop(f, ())
        f = self.symbol(sym.text, len(pattern), sym)
        try:
            return CanonicalTop(f, tuple(pattern))
        except MalformedTop as exc:
            raise self.error(str(exc), sym) from exc

    def resolve(self):
        sig = list(self.ws.signature.values())
        for name, chains, auto in self.pending:
            decls = []
            for chain in chains:
                tops = [self.resolve_top(s, p) for s, p in chain]
                decls.extend(zip(tops, tops[1:]))
            self.ws.precedences[name.text] = build_precedence(decls, auto, sig, name=name.text)
        for name, members in self.pending_grs:
            rules = []
            for m in members:
                if m.text not in self.ws.rules:
                    raise self.error(f"unknown rule {m.text!r}", m)
                rules.append(self.ws.rules[m.text])
            self.ws.grss[name.text] = GRS(tuple(rules), name.text)
        for name, members in self.pending_seq:
            for m in members:
                if m.text not in self.ws.graphs:
                    raise self.error(f"unknown graph {m.text!r}", m)
            self.ws.sequences[name.text] = tuple(m.text for m in members)


def parse_text(text: str, ws: Optional[Workspace] = None) -> Workspace:
    ws = ws if ws is not None else Workspace()
    _Parser(text, ws).parse()
    return ws


def parse_file(source: Union[str, Path, Iterable[Union[str, Path]]]) -> Workspace:
    """Parse one file path, several paths into one workspace, or literal text."""
    if isinstance(source, (str, Path)) and (isinstance(source, Path) or "{" not in source):
        paths = [source]
    elif isinstance(source, str):
        return parse_text(source)
    else:
        paths = list(source)
    ws = Workspace()
    for p in paths:
        parse_text(Path(p).read_text(encoding="utf-8"), ws)
    return ws


# -- printer -----------------------------------------------------------------------


def _node_lines(g: TermDag) -> List[str]:
    out = []
    for n in g.nodes:
        lab = g.labels[n]
        if isinstance(lab, Var):
            out.append(f"  {g.name(n)}: ?{lab.name}")
        elif lab.arity == 0:
            out.append(f"  {g.name(n)}: {lab.name}")
        else:
            kids = ", ".join(g.name(k) for k in g.succ[n])
            out.append(f"  {g.name(n)}: {lab.name}({kids})")
    return out


def format_graph(name: str, g: TermDag) -> str:
    lines = [f"graph {name} {{"] + _node_lines(g)
    if len(g.inlets) == 1:
        lines.append(f"  root: {g.name(g.inlets[0])}")
    else:
        lines.append("  inlets: " + " ".join(g.name(n) for n in g.inlets))
    return "\n".join(lines + ["}"])


def format_rule(rule: Rule) -> str:
    c = rule.carrier
    lines = [f"rule {rule.name} {{"] + _node_lines(c)
    lines.append(f"  lhs: {c.name(rule.lhs_root)}")
    lines.append(f"  rhs: {c.name(rule.rhs_root)}")
    return "\n".join(lines + ["}"])


def format_top(t: CanonicalTop) -> str:
    return str(t)


def format_precedence(name: str, p: Precedence) -> str:
    lines = [f"precedence {name} {{"]
    for t, s in p.decls:
        lines.append(f"  {t} < {s}")
    if p.auto_sharing:
        lines.append("  auto-sharing")
    return "\n".join(lines + ["}"])


def format_workspace(ws: Workspace) -> str:
    """Canonical text for ``ws``; parsing it back gives an isomorphic workspace."""
    parts = []
    if ws.signature:
        syms = " ".join(f"{f.name}/{f.arity}" for f in sorted(ws.signature.values()))
        parts.append(f"symbols {{ {syms} }}")
    parts += [format_graph(n, g) for n, g in ws.graphs.items()]
    parts += [format_rule(r) for r in ws.rules.values()]
    parts += [
        f"grs {n} {{ {' '.join(r.name for r in g.rules)} }}" for n, g in ws.grss.items()
    ]
    parts += [format_precedence(n, p) for n, p in ws.precedences.items()]
    parts += [f"sequence {n} {{ {' '.join(s)} }}" for n, s in ws.sequences.items()]
    return "\n\n".join(parts) + "\n"
