"""Parser and serializer for the `.scm.txt` stream-component model DSL.

The grammar is documented in docs/grammar.md. The parser is total: any byte
input yields a (possibly partial) document plus located diagnostics, never an
exception.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from . import exprs
from .abstraction import (ConcretizerSpec, GaloisSpec, ParamDecl, RelationSpec,
                          Universe)
from .components import (AutomatonSpec, CompositeSpec, ComponentSpec, Connector,
                         Endpoint, SyntacticInterface, Transition, VariableDecl,
                         validate_automaton)
from .errors import Diagnostic, ModelFormatError, TypeMismatchError
from .exprs import TRUE, Expr
from .lexing import EOF, IDENT, INT, PUNCT, REAL, Cursor, Token, tokenize
from .streams import BOOL, Channel, DataType, REAL as REAL_TYPE, bounded_int, enumeration

_TOP_KEYWORDS = ("type", "component", "relation", "galois", "concretizer", "refinement")


@dataclass(frozen=True)
class RefinementSpec:
    """Named binding of an abstract/concrete pair with its relating artifacts."""

    name: str
    abstract: str | None = None
    concrete: str | None = None
    ri: str | None = None
    ro: str | None = None
    galois: str | None = None
    concretizer: str | None = None


@dataclass
class ModelDocument:
    types: dict[str, DataType] = field(default_factory=dict)
    components: dict[str, ComponentSpec] = field(default_factory=dict)
    relations: dict[str, RelationSpec] = field(default_factory=dict)
    galois: dict[str, GaloisSpec] = field(default_factory=dict)
    concretizers: dict[str, ConcretizerSpec] = field(default_factory=dict)
    refinements: dict[str, RefinementSpec] = field(default_factory=dict)

    def merge(self, other: "ModelDocument") -> None:
        for attr in ("types", "components", "relations", "galois",
                     "concretizers", "refinements"):
            mine, theirs = getattr(self, attr), getattr(other, attr)
            dupes = set(mine) & set(theirs)
            if dupes:
                raise ModelFormatError([Diagnostic(0, 0, f"duplicate {attr} names: {sorted(dupes)}")])
            mine.update(theirs)


@dataclass
class ParseResult:
    document: ModelDocument
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def parse_model(text: str, base: ModelDocument | None = None) -> ParseResult:
    """Parse one document; `base` supplies resolvable names from earlier files."""
    try:
        tokens, diagnostics = tokenize(text)
        parser = _Parser(tokens, diagnostics, base)
        doc = parser.document()
        return ParseResult(doc, parser.diagnostics)
    except Exception as e:  # the parser must be total over arbitrary bytes
        return ParseResult(ModelDocument(), [Diagnostic(0, 0, f"internal parse failure: {e}")])


def load_model(path, base: ModelDocument | None = None) -> ModelDocument:
    with open(path, "r", encoding="utf-8") as fh:
        result = parse_model(fh.read(), base)
    if not result.ok:
        raise ModelFormatError(result.diagnostics)
    return result.document


def load_models(paths) -> ModelDocument:
    """Load several files in order; later files may reference earlier names."""
    doc = ModelDocument()
    for path in paths:
        doc.merge(load_model(path, base=doc))
    return doc


class _Parser:
    def __init__(self, tokens: list[Token], diagnostics: list[Diagnostic],
                 base: ModelDocument | None = None):
        self.c = Cursor(tokens)
        self.diagnostics = diagnostics
        self.doc = ModelDocument()
        self.base = base or ModelDocument()

    def lookup(self, attr: str, name: str):
        value = getattr(self.doc, attr).get(name)
        if value is None:
            value = getattr(self.base, attr).get(name)
        return value

    # -- helpers -----------------------------------------------------------

    def error(self, message: str, tok: Token | None = None) -> None:
        tok = tok or self.c.peek()
        self.diagnostics.append(Diagnostic(tok.line, tok.column, message))

    def expect_punct(self, value: str) -> bool:
        if self.c.take_punct(value):
            return True
        self.error(f"expected {value!r}, found {self.c.peek().value!r}")
        return False

    def expect_ident(self, what: str) -> str | None:
        tok = self.c.peek()
        if tok.kind == IDENT:
            self.c.advance()
            return tok.value
        self.error(f"expected {what}, found {tok.value!r}")
        return None

    def sync_top(self) -> None:
        depth = 0
        while True:
            tok = self.c.peek()
            if tok.kind == EOF:
                return
            if tok.kind == PUNCT and tok.value == "{":
                depth += 1
            elif tok.kind == PUNCT and tok.value == "}":
                depth = max(0, depth - 1)
            elif tok.kind == IDENT and depth == 0 and tok.value in _TOP_KEYWORDS:
                return
            self.c.advance()

    def parse_expr(self) -> Expr:
        try:
            return exprs.parse_expr(self.c)
        except exprs.ExprSyntaxError as e:
            self.error(str(e).split(": ", 1)[-1])
            return TRUE

    def parse_literal(self) -> Any:
        tok = self.c.peek()
        if tok.kind == INT:
            self.c.advance()
            return int(tok.value)
        if tok.kind == REAL:
            self.c.advance()
            return float(tok.value)
        if tok.kind == PUNCT and tok.value == "-":
            self.c.advance()
            inner = self.parse_literal()
            if isinstance(inner, (int, float)) and not isinstance(inner, bool):
                return -inner
            self.error("expected a numeric literal after '-'")
            return 0
        if tok.kind == IDENT:
            self.c.advance()
            if tok.value == "true":
                return True
            if tok.value == "false":
                return False
            return tok.value  # enumeration label
        self.error(f"expected a literal, found {tok.value!r}")
        self.c.advance()
        return 0

    def parse_type(self) -> DataType | None:
        tok = self.c.peek()
        if tok.kind != IDENT:
            self.error(f"expected a type, found {tok.value!r}")
            return None
        self.c.advance()
        if tok.value == "bool":
            return BOOL
        if tok.value == "real":
            return REAL_TYPE
        if tok.value == "int":
            if not self.expect_punct("["):
                return None
            lo = self.parse_literal()
            if not self.expect_punct(".."):
                return None
            hi = self.parse_literal()
            if not self.expect_punct("]"):
                return None
            if not isinstance(lo, int) or not isinstance(hi, int) or lo > hi:
                self.error(f"bad integer bounds [{lo}..{hi}]", tok)
                return None
            return bounded_int(lo, hi)
        if tok.value == "enum":
            if not self.expect_punct("{"):
                return None
            labels = []
            name = self.expect_ident("enumeration label")
            if name:
                labels.append(name)
            while self.c.take_punct(","):
                name = self.expect_ident("enumeration label")
                if name:
                    labels.append(name)
            self.expect_punct("}")
            if len(set(labels)) != len(labels) or not labels:
                self.error("enumeration labels must be distinct and non-empty", tok)
                return None
            return enumeration(*labels)
        dtype = self.lookup("types", tok.value)
        if dtype is None:
            self.error(f"unknown type {tok.value!r}", tok)
        return dtype

    def register(self, registry: dict, name: str | None, value, what: str, tok: Token) -> None:
        if name is None:
            return
        if name in registry:
            self.error(f"duplicate {what} name {name!r}", tok)
        else:
            registry[name] = value

    # -- top level ----------------------------------------------------------

    def document(self) -> ModelDocument:
        while True:
            tok = self.c.peek()
            if tok.kind == EOF:
                return self.doc
            if tok.kind != IDENT or tok.value not in _TOP_KEYWORDS:
                self.error(f"expected a declaration, found {tok.value!r}")
                self.c.advance()
                self.sync_top()
                continue
            before = len(self.diagnostics)
            getattr(self, "item_" + tok.value)()
            if len(self.diagnostics) > before:
                self.sync_top()

    def item_type(self) -> None:
        tok = self.c.advance()
        name = self.expect_ident("type name")
        self.expect_punct("=")
        dtype = self.parse_type()
        if dtype is not None:
            self.register(self.doc.types, name, dtype, "type", tok)

    # -- components ----------------------------------------------------------

    def item_component(self) -> None:
        tok = self.c.advance()
        name = self.expect_ident("component name") or "_anonymous"
        causality = "strict"
        total = False
        while True:
            if self.c.take_word("weak"):
                causality = "weak"
            elif self.c.take_word("strict"):
                causality = "strict"
            elif self.c.take_word("total"):
                total = True
            else:
                break
        if not self.expect_punct("{"):
            return
        inputs: list[Channel] = []
        outputs: list[Channel] = []
        variables: list[VariableDecl] = []
        states: list[str] = []
        initial: str | None = None
        transitions: list[Transition] = []
        output_init: dict[str, Any] = {}
        subs: list[tuple[str, ComponentSpec]] = []
        wiring: list[Connector] = []
        while not self.c.take_punct("}"):
            kw = self.c.peek()
            if kw.kind == EOF:
                self.error("unterminated component block", tok)
                return
            if self.c.take_word("input"):
                ch = self.channel_decl("input")
                if ch:
                    inputs.append(ch)
            elif self.c.take_word("output"):
                item = self.output_decl()
                if item:
                    ch, init = item
                    outputs.append(ch)
                    if init is not None:
                        output_init[ch.name] = init
            elif self.c.take_word("var"):
                v = self.var_decl()
                if v:
                    variables.append(v)
            elif self.c.take_word("states"):
                states, initial = self.states_decl()
            elif self.c.take_word("transition"):
                t = self.transition_decl()
                if t:
                    transitions.append(t)
            elif self.c.take_word("sub"):
                s = self.sub_decl()
                if s:
                    subs.append(s)
            elif self.c.take_word("connect"):
                w = self.connect_decl()
                if w:
                    wiring.append(w)
            else:
                self.error(f"unexpected {kw.value!r} in component body")
                self.c.advance()
        if subs or wiring:
            if states or transitions or variables:
                self.error(f"component {name!r} mixes automaton and composite items", tok)
                return
            try:
                iface = SyntacticInterface(tuple(inputs), tuple(outputs))
                spec: ComponentSpec = CompositeSpec(name, iface, tuple(subs), tuple(wiring))
            except TypeMismatchError as e:
                self.error(str(e), tok)
                return
            from .components import compose_check
            for problem in compose_check(spec):
                self.error(f"component {name!r}: {problem}", tok)
        else:
            if not states:
                self.error(f"component {name!r} declares no states", tok)
                return
            var_names = {v.name for v in variables}
            split = []
            for t in transitions:
                outs = tuple((n, e) for n, e in t.outputs if n not in var_names)
                ups = tuple((n, e) for n, e in t.outputs if n in var_names)
                split.append(Transition(t.source, t.target, t.guard, outs, ups, t.label))
            try:
                iface = SyntacticInterface(tuple(inputs), tuple(outputs))
                spec = AutomatonSpec(name, iface, tuple(states), initial or states[0],
                                     tuple(split), tuple(variables), output_init,
                                     causality, total)
            except TypeMismatchError as e:
                self.error(str(e), tok)
                return
            for problem in validate_automaton(spec):
                self.error(f"component {name!r}: {problem}", tok)
        self.register(self.doc.components, name, spec, "component", tok)

    def channel_decl(self, direction: str) -> Channel | None:
        name = self.expect_ident("channel name")
        self.expect_punct(":")
        dtype = self.parse_type()
        if name is None or dtype is None:
            return None
        return Channel(name, dtype, direction)

    def output_decl(self) -> tuple[Channel, Any] | None:
        ch = self.channel_decl("output")
        if ch is None:
            return None
        init = None
        if self.c.take_word("init"):
            init = self.parse_literal()
        return ch, init

    def var_decl(self) -> VariableDecl | None:
        name = self.expect_ident("variable name")
        self.expect_punct(":")
        dtype = self.parse_type()
        self.expect_punct("=")
        init = self.parse_literal()
        if name is None or dtype is None:
            return None
        return VariableDecl(name, dtype, init)

    def states_decl(self) -> tuple[list[str], str | None]:
        states: list[str] = []
        initial: str | None = None
        while True:
            name = self.expect_ident("state name")
            if name is None:
                break
            states.append(name)
            if self.c.take_word("init"):
                if initial is not None:
                    self.error("more than one initial state")
                initial = name
            if not self.c.take_punct(","):
                break
        return states, initial

    def transition_decl(self) -> Transition | None:
        label = None
        first = self.expect_ident("state name")
        if self.c.take_punct(":"):
            label = first
            first = self.expect_ident("state name")
        if not self.expect_punct("->"):
            return None
        target = self.expect_ident("state name")
        guard: Expr = TRUE
        if self.c.take_word("when"):
            guard = self.parse_expr()
        outputs: list[tuple[str, Expr]] = []
        updates: list[tuple[str, Expr]] = []
        if self.c.take_punct("{"):
            while not self.c.take_punct("}"):
                if self.c.peek().kind == EOF:
                    self.error("unterminated assignment block")
                    return None
                name = self.expect_ident("assignment target")
                if not self.expect_punct(":="):
                    return None
                expr = self.parse_expr()
                if name is not None:
                    # split into outputs vs variable updates once declarations are known
                    outputs.append((name, expr))
                self.c.take_punct(";")
        del updates
        if first is None or target is None:
            return None
        return Transition(first, target, guard, tuple(outputs), (), label)

    def sub_decl(self) -> tuple[str, ComponentSpec] | None:
        name = self.expect_ident("subcomponent name")
        self.expect_punct(":")
        ref_tok = self.c.peek()
        ref = self.expect_ident("component reference")
        if name is None or ref is None:
            return None
        spec = self.lookup("components", ref)
        if spec is None:
            self.error(f"unresolved component {ref!r}", ref_tok)
            return None
        return name, spec

    def endpoint(self) -> Endpoint | None:
        first = self.expect_ident("endpoint")
        if first is None:
            return None
        if self.c.take_punct("."):
            chan = self.expect_ident("channel name")
            if chan is None:
                return None
            return Endpoint(first, chan)
        return Endpoint(None, first)

    def connect_decl(self) -> Connector | None:
        producer = self.endpoint()
        if not self.expect_punct("->"):
            return None
        consumer = self.endpoint()
        if producer is None or consumer is None:
            return None
        return Connector(producer, consumer)

    # -- relations, galois, concretizers, refinements -------------------------

    def item_relation(self) -> None:
        tok = self.c.advance()
        name = self.expect_ident("relation name")
        side_tok = self.c.peek()
        side = self.expect_ident("relation side (RI or RO)")
        if side not in ("RI", "RO"):
            self.error(f"relation side must be RI or RO, found {side!r}", side_tok)
            return
        if self.c.take_word("when"):
            expr = self.parse_expr()
            rel = RelationSpec(name or "_", side, expr=expr)
        elif self.c.take_word("checker"):
            ref_tok = self.c.peek()
            ref = self.expect_ident("checker component")
            spec = self.lookup("components", ref) if ref else None
            if spec is None:
                self.error(f"unresolved component {ref!r}", ref_tok)
                return
            rel = RelationSpec(name or "_", side, checker=spec)
        else:
            self.error("expected 'when <expr>' or 'checker <component>'")
            return
        self.register(self.doc.relations, name, rel, "relation", tok)

    def item_galois(self) -> None:
        tok = self.c.advance()
        name = self.expect_ident("galois name") or "_"
        if not self.expect_punct("{"):
            return
        abstract = concrete = None
        f_map: list[tuple[str, Expr]] = []
        member: Expr | None = None
        uni_items: list[tuple[str, tuple[Any, ...]]] = []
        horizon = 1
        has_universe = False
        while not self.c.take_punct("}"):
            if self.c.peek().kind == EOF:
                self.error("unterminated galois block", tok)
                return
            if self.c.take_word("abstract"):
                abstract = self.component_ref()
            elif self.c.take_word("concrete"):
                concrete = self.component_ref()
            elif self.c.take_word("map"):
                chan = self.expect_ident("abstract channel")
                if self.expect_punct(":=") and chan:
                    f_map.append((chan, self.parse_expr()))
            elif self.c.take_word("member"):
                member = self.parse_expr()
            elif self.c.take_word("universe"):
                has_universe = True
                if not self.expect_punct("{"):
                    return
                while not self.c.take_punct("}"):
                    if self.c.peek().kind == EOF:
                        self.error("unterminated universe block", tok)
                        return
                    if self.c.take_word("horizon"):
                        h = self.parse_literal()
                        if isinstance(h, int) and h >= 0:
                            horizon = h
                        else:
                            self.error("horizon must be a non-negative integer")
                    else:
                        chan = self.expect_ident("channel name")
                        if not self.c.take_word("in") or not self.expect_punct("{"):
                            self.error("expected 'in { v, ... }'")
                            return
                        values = [self.parse_literal()]
                        while self.c.take_punct(","):
                            values.append(self.parse_literal())
                        self.expect_punct("}")
                        if chan:
                            uni_items.append((chan, tuple(values)))
            else:
                self.error(f"unexpected {self.c.peek().value!r} in galois block")
                self.c.advance()
        channel_types: dict[str, DataType] = {}
        abs_chans: set[str] = set()
        conc_chans: set[str] = set()
        for comp_name, chans in ((abstract, abs_chans), (concrete, conc_chans)):
            spec = self.lookup("components", comp_name) if comp_name else None
            if spec is not None:
                for c in spec.interface.inputs + spec.interface.outputs:
                    channel_types[c.name] = c.ctype
                    chans.add(c.name)
        universe = None
        if has_universe:
            abs_side, conc_side = [], []
            for chan, values in uni_items:
                dtype = channel_types.get(chan)
                if dtype is not None:
                    try:
                        values = tuple(dtype.check(v) for v in values)
                    except TypeMismatchError as e:
                        self.error(f"universe values for {chan!r}: {e}", tok)
                        continue
                if chan in abs_chans:
                    abs_side.append((chan, values))
                elif chan in conc_chans:
                    conc_side.append((chan, values))
                else:
                    self.error(f"universe channel {chan!r} not found in the bound components", tok)
            universe = Universe(tuple(abs_side), tuple(conc_side), horizon)
        gal = GaloisSpec(name, tuple(f_map), member, universe,
                         abstract, concrete, channel_types)
        self.register(self.doc.galois, name, gal, "galois", tok)

    def component_ref(self) -> str | None:
        tok = self.c.peek()
        ref = self.expect_ident("component reference")
        if ref is not None and self.lookup("components", ref) is None:
            self.error(f"unresolved component {ref!r}", tok)
            return None
        return ref

    def item_concretizer(self) -> None:
        tok = self.c.advance()
        name = self.expect_ident("concretizer name") or "_"
        if not self.expect_punct("{"):
            return
        component: ComponentSpec | None = None
        params: list[ParamDecl] = []
        while not self.c.take_punct("}"):
            if self.c.peek().kind == EOF:
                self.error("unterminated concretizer block", tok)
                return
            if self.c.take_word("component"):
                ref = self.component_ref()
                if ref:
                    component = self.lookup("components", ref)
            elif self.c.take_word("param"):
                pname = self.expect_ident("parameter name")
                self.expect_punct(":")
                dtype = self.parse_type()
                if pname and dtype:
                    params.append(ParamDecl(pname, dtype))
            else:
                self.error(f"unexpected {self.c.peek().value!r} in concretizer block")
                self.c.advance()
        if component is None:
            self.error(f"concretizer {name!r} names no component", tok)
            return
        self.register(self.doc.concretizers, name,
                      ConcretizerSpec(name, component, tuple(params)), "concretizer", tok)

    def item_refinement(self) -> None:
        tok = self.c.advance()
        name = self.expect_ident("refinement name") or "_"
        if not self.expect_punct("{"):
            return
        fields: dict[str, str | None] = {"abstract": None, "concrete": None, "ri": None,
                                         "ro": None, "galois": None, "concretizer": None}
        registries = {"abstract": "components", "concrete": "components",
                      "ri": "relations", "ro": "relations",
                      "galois": "galois", "concretizer": "concretizers"}
        while not self.c.take_punct("}"):
            kw = self.c.peek()
            if kw.kind == EOF:
                self.error("unterminated refinement block", tok)
                return
            if kw.kind == IDENT and kw.value in fields:
                self.c.advance()
                ref_tok = self.c.peek()
                ref = self.expect_ident("reference")
                if ref is not None and self.lookup(registries[kw.value], ref) is None:
                    self.error(f"unresolved {kw.value} reference {ref!r}", ref_tok)
                else:
                    fields[kw.value] = ref
            else:
                self.error(f"unexpected {kw.value!r} in refinement block")
                self.c.advance()
        self.register(self.doc.refinements, name, RefinementSpec(name, **fields),
                      "refinement", tok)


# ---------------------------------------------------------------------------
# Serialization


def _literal_text(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _serialize_automaton(spec: AutomatonSpec, out: list[str]) -> None:
    mods = ""
    if spec.causality == "weak":
        mods += " weak"
    if spec.total:
        mods += " total"
    out.append(f"component {spec.name}{mods} {{")
    for ch in spec.interface.inputs:
        out.append(f"  input {ch.name} : {ch.ctype.to_text()}")
    for ch in spec.interface.outputs:
        init = spec.output_init.get(ch.name)
        suffix = f" init {_literal_text(init)}" if ch.name in spec.output_init else ""
        out.append(f"  output {ch.name} : {ch.ctype.to_text()}{suffix}")
    for v in spec.variables:
        out.append(f"  var {v.name} : {v.dtype.to_text()} = {_literal_text(v.init)}")
    out.append("  states " + ", ".join(
        s + (" init" if s == spec.initial else "") for s in spec.states))
    for t in spec.transitions:
        head = f"  transition {t.label + ': ' if t.label else ''}{t.source} -> {t.target}"
        if t.guard != TRUE:
            head += f" when {exprs.to_text(t.guard)}"
        assigns = [f"{n} := {exprs.to_text(e)}" for n, e in tuple(t.outputs) + tuple(t.updates)]
        if assigns:
            head += " { " + "; ".join(assigns) + " }"
        out.append(head)
    out.append("}")


def _serialize_composite(spec: CompositeSpec, out: list[str]) -> None:
    out.append(f"component {spec.name} {{")
    for ch in spec.interface.inputs:
        out.append(f"  input {ch.name} : {ch.ctype.to_text()}")
    for ch in spec.interface.outputs:
        out.append(f"  output {ch.name} : {ch.ctype.to_text()}")
    for name, sub in spec.subcomponents:
        out.append(f"  sub {name} : {sub.name}")
    for conn in spec.wiring:
        out.append(f"  connect {conn.producer} -> {conn.consumer}")
    out.append("}")


def serialize_model(doc: ModelDocument) -> str:
    """Render a document so that parse(serialize(doc)) is structurally doc."""
    out: list[str] = []
    for name, dtype in doc.types.items():
        out.append(f"type {name} = {dtype.to_text()}")
    emitted: set[int] = set()

    def emit_component(spec: ComponentSpec) -> None:
        if id(spec) in emitted:
            return
        if isinstance(spec, CompositeSpec):
            for _, sub in spec.subcomponents:
                emit_component(sub)
        emitted.add(id(spec))
        if out:
            out.append("")
        if isinstance(spec, AutomatonSpec):
            _serialize_automaton(spec, out)
        else:
            _serialize_composite(spec, out)

    for spec in doc.components.values():
        emit_component(spec)
    for rel in doc.relations.values():
        out.append("")
        if rel.expr is not None:
            out.append(f"relation {rel.name} {rel.side} when {exprs.to_text(rel.expr)}")
        else:
            out.append(f"relation {rel.name} {rel.side} checker {rel.checker.name}")
    for gal in doc.galois.values():
        out.append("")
        out.append(f"galois {gal.name} {{")
        if gal.abstract_component:
            out.append(f"  abstract {gal.abstract_component}")
        if gal.concrete_component:
            out.append(f"  concrete {gal.concrete_component}")
        for chan, e in gal.f_map:
            out.append(f"  map {chan} := {exprs.to_text(e)}")
        if gal.member is not None:
            out.append(f"  member {exprs.to_text(gal.member)}")
        if gal.universe is not None:
            out.append("  universe {")
            for chan, values in gal.universe.abstract + gal.universe.concrete:
                out.append(f"    {chan} in {{ " + ", ".join(_literal_text(v) for v in values) + " }")
            out.append(f"    horizon {gal.universe.horizon}")
            out.append("  }")
        out.append("}")
    for conc in doc.concretizers.values():
        out.append("")
        out.append(f"concretizer {conc.name} {{")
        out.append(f"  component {conc.component.name}")
        for p in conc.params:
            out.append(f"  param {p.name} : {p.dtype.to_text()}")
        out.append("}")
    for ref in doc.refinements.values():
        out.append("")
        out.append(f"refinement {ref.name} {{")
        for attr in ("abstract", "concrete", "ri", "ro", "galois", "concretizer"):
            value = getattr(ref, attr)
            if value is not None:
                out.append(f"  {attr} {value}")
        out.append("}")
    return "\n".join(out) + ("\n" if out else "")
