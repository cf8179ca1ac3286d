"""Random well-formed model documents, for round-trip testing."""

import random

from streamcheck.abstraction import (ConcretizerSpec, GaloisSpec, ParamDecl,
                                     RelationSpec, Universe)
from streamcheck.components import (AutomatonSpec, CompositeSpec, Connector, Endpoint,
                                    SyntacticInterface, Transition)
from streamcheck.dsl import ModelDocument, RefinementSpec
from streamcheck.exprs import Binary, Lit, Name, Unary
from streamcheck.streams import (BOOL, Channel, REAL, TimedStream, bounded_int,
                                 enumeration)

_CMP = ["==", "!=", "<", "<=", ">", ">="]


class DocGen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.counter = 0

    def name(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    def dtype(self, enumerable_only: bool = False):
        r = self.rng
        kinds = ["bool", "int", "enum"] + ([] if enumerable_only else ["real"])
        kind = r.choice(kinds)
        if kind == "bool":
            return BOOL
        if kind == "int":
            lo = r.randint(-50, 0)
            return bounded_int(lo, lo + r.randint(1, 100))
        if kind == "enum":
            labels = [self.name("L") for _ in range(r.randint(1, 3))]
            return enumeration(*labels)
        return REAL

    def literal_of(self, dtype):
        r = self.rng
        if dtype.kind == "bool":
            return r.random() < 0.5
        if dtype.kind == "int":
            return r.randint(dtype.lo, dtype.hi)
        if dtype.kind == "enum":
            return r.choice(dtype.labels)
        return round(r.uniform(-10, 10), 3)

    def guard(self, inputs):
        r = self.rng
        usable = [c for c in inputs if c.ctype.kind in ("bool", "int")]
        if not usable:
            return Lit(True)

        def atom():
            c = r.choice(usable)
            if c.ctype.kind == "bool":
                e = Name(c.name)
                return Unary("not", e) if r.random() < 0.3 else e
            return Binary(r.choice(_CMP), Name(c.name),
                          Lit(r.randint(c.ctype.lo, c.ctype.hi)))

        e = atom()
        for _ in range(r.randint(0, 2)):
            e = Binary(r.choice(["and", "or"]), e, atom())
        return e

    def assignment_expr(self, dtype, inputs):
        r = self.rng
        same = [c for c in inputs if c.ctype == dtype]
        if same and r.random() < 0.5:
            return Name(r.choice(same).name)
        if dtype.kind == "enum":
            return Name(r.choice(dtype.labels))
        if dtype.kind == "bool" and r.random() < 0.5:
            return self.guard(inputs)
        return Lit(self.literal_of(dtype))

    def automaton(self):
        r = self.rng
        inputs = tuple(Channel(self.name("in"), self.dtype(), "input")
                       for _ in range(r.randint(1, 3)))
        outputs = tuple(Channel(self.name("out"), self.dtype(), "output")
                        for _ in range(r.randint(1, 2)))
        causality = r.choice(["strict", "weak"])
        output_init = {}
        if causality == "strict" or r.random() < 0.5:
            output_init = {c.name: self.literal_of(c.ctype) for c in outputs}
        states = tuple(self.name("S") for _ in range(r.randint(1, 3)))
        initial = r.choice(states)
        transitions = []
        for _ in range(r.randint(1, 4)):
            assigns = tuple((c.name, self.assignment_expr(c.ctype, inputs))
                            for c in outputs if r.random() < 0.8)
            guard = self.guard(inputs) if r.random() < 0.7 else Lit(True)
            label = self.name("T") if r.random() < 0.5 else None
            transitions.append(Transition(r.choice(states), r.choice(states),
                                          guard, assigns, (), label))
        return AutomatonSpec(self.name("Comp"),
                             SyntacticInterface(inputs, outputs),
                             states, initial, tuple(transitions), (),
                             output_init, causality, r.random() < 0.2)

    def pipeline(self):
        """A two-stage composite with a strict first stage."""
        t = bounded_int(0, 9)
        a = self.name("a")
        b = self.name("b")
        c = self.name("c")
        first = AutomatonSpec(
            self.name("Stage"),
            SyntacticInterface((Channel(a, t, "input"),), (Channel(b, t, "output"),)),
            ("Run",), "Run",
            (Transition("Run", "Run", Lit(True), ((b, Name(a)),), ()),),
            (), {b: 0}, "strict", False)
        second = AutomatonSpec(
            self.name("Stage"),
            SyntacticInterface((Channel(b, t, "input"),), (Channel(c, t, "output"),)),
            ("Run",), "Run",
            (Transition("Run", "Run", Lit(True), ((c, Name(b)),), ()),),
            (), {c: 0}, self.rng.choice(["strict", "weak"]), False)
        return CompositeSpec(
            self.name("Net"),
            SyntacticInterface((Channel(a, t, "input"),), (Channel(c, t, "output"),)),
            (("first", first), ("second", second)),
            (Connector(Endpoint(None, a), Endpoint("first", a)),
             Connector(Endpoint("first", b), Endpoint("second", b)),
             Connector(Endpoint("second", c), Endpoint(None, c)))), first, second

    def galois_pair(self):
        """Two single-channel automata with disjoint names, plus a connection."""
        r = self.rng
        ca = Channel(self.name("ga"), BOOL, "input")
        oa = Channel(self.name("ga"), BOOL, "output")
        cc = Channel(self.name("gc"), bounded_int(-3, 3), "input")
        oc = Channel(self.name("gc"), bounded_int(-3, 3), "output")

        def simple(name, cin, cout, init):
            return AutomatonSpec(
                name, SyntacticInterface((cin,), (cout,)), ("Run",), "Run",
                (Transition("Run", "Run", Lit(True), ((cout.name, Name(cin.name)),), ()),),
                (), {cout.name: init}, "weak", False)

        abstract = simple(self.name("Abs"), ca, oa, False)
        concrete = simple(self.name("Conc"), cc, oc, 0)
        channel_types = {}
        for spec in (abstract, concrete):
            for ch in spec.interface.inputs + spec.interface.outputs:
                channel_types[ch.name] = ch.ctype
        f_map = ((ca.name, Binary(">=", Name(cc.name), Lit(0))),
                 (oa.name, Binary(">=", Name(oc.name), Lit(0))))
        universe = Universe(
            ((ca.name, (True, False)),),
            ((cc.name, tuple(sorted(r.sample(range(-3, 4), r.randint(1, 3))))),),
            horizon=r.randint(0, 2))
        member = None
        if r.random() < 0.5:
            member = Binary("==", Binary(">=", Name(cc.name), Lit(0)), Name(ca.name))
        gal = GaloisSpec(self.name("Gal"), f_map, member, universe,
                         abstract.name, concrete.name, channel_types)
        return gal, abstract, concrete

    def document(self) -> ModelDocument:
        r = self.rng
        doc = ModelDocument()
        for _ in range(r.randint(0, 2)):
            doc.types[self.name("Ty")] = self.dtype()
        autos = [self.automaton() for _ in range(r.randint(1, 3))]
        for spec in autos:
            doc.components[spec.name] = spec
        if r.random() < 0.4:
            net, first, second = self.pipeline()
            doc.components[first.name] = first
            doc.components[second.name] = second
            doc.components[net.name] = net
        for _ in range(r.randint(0, 2)):
            side = r.choice(["RI", "RO"])
            rel = RelationSpec(self.name("Rel"), side,
                               expr=self.guard(autos[0].interface.inputs))
            doc.relations[rel.name] = rel
        gal = None
        if r.random() < 0.6:
            gal, abstract, concrete = self.galois_pair()
            doc.components[abstract.name] = abstract
            doc.components[concrete.name] = concrete
            doc.galois[gal.name] = gal
        conc = None
        if r.random() < 0.5:
            target = r.choice(autos)
            params = tuple(ParamDecl(self.name("p"), self.dtype())
                           for _ in range(r.randint(0, 2)))
            conc = ConcretizerSpec(self.name("Cz"), target, params)
            doc.concretizers[conc.name] = conc
        if r.random() < 0.5 and len(autos) >= 2:
            rels = list(doc.relations.values())
            ref = RefinementSpec(
                self.name("Ref"),
                abstract=autos[0].name, concrete=autos[1].name,
                ri=rels[0].name if rels and rels[0].side == "RI" else None,
                ro=None,
                galois=gal.name if gal else None,
                concretizer=conc.name if conc else None)
            doc.refinements[ref.name] = ref
        return doc
