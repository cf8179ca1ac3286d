"""Abstract/concrete correspondence checking.

Covers the RI/RO relation evaluation, end-to-end correspondence of a test
pair (RI on inputs implies RO on outputs), abstraction/concretization maps
with bounded-universe verification of the connection law, parameterized
concretizers, and the derived bool-stream output checker.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional

from .components import (AutomatonSpec, Channel, ComponentSpec, SyntacticInterface,
                         Transition, WEAK, run)
from .errors import (CapsExceededError, EvaluationError, StreamcheckError,
                     TypeMismatchError, UnboundParameterError)
from .exprs import Binary, Expr, Name, evaluate, free_names
from .streams import (BOOL, ChannelHistory, DataType, ENUM_KIND, TimedStream)

RI = "RI"
RO = "RO"

DEFAULT_UNIVERSE_CAP = 12
DEFAULT_HORIZON_CAP = 3


@dataclass(frozen=True)
class RelationSpec:
    """A per-tick predicate (or checker component) over paired histories."""

    name: str
    side: str  # RI | RO
    expr: Expr | None = None
    checker: ComponentSpec | None = None

    def __post_init__(self):
        if (self.expr is None) == (self.checker is None):
            raise TypeMismatchError("relation needs exactly one of expr / checker")


def _labels_of(histories: Iterable[ChannelHistory]) -> dict[str, str]:
    env = {}
    for h in histories:
        for s in h.streams.values():
            if s.elem_type.kind == ENUM_KIND:
                for label in s.elem_type.labels:
                    env[label] = label
    return env


def fold_stream(ticks: Iterable[bool]) -> bool:
    """Overall verdict of a bool stream: a single false fails the comparison."""
    return all(ticks)


def eval_relation(rel: RelationSpec, a: ChannelHistory, c: ChannelHistory) -> tuple[bool, list[bool]]:
    """Evaluate a relation tick-wise over an abstract/concrete history pair."""
    overlap = set(a.streams) & set(c.streams)
    if overlap:
        raise TypeMismatchError(f"paired histories share channel names {sorted(overlap)}")
    if a.horizon != c.horizon:
        raise TypeMismatchError(f"horizon mismatch: {a.horizon} vs {c.horizon}")
    if rel.checker is not None:
        combined = a.merged(c)
        out = run(rel.checker, combined, combined.horizon)
        out_names = rel.checker.interface.output_names()
        if len(out_names) != 1 or rel.checker.interface.outputs[0].ctype != BOOL:
            raise TypeMismatchError(f"checker {rel.checker.name!r} must have one boolean output")
        ticks = list(out.streams[out_names[0]].values)
        return fold_stream(ticks), ticks
    labels = _labels_of((a, c))
    ticks = []
    for t in range(1, a.horizon + 1):
        env = {**labels, **a.tick(t), **c.tick(t)}
        v = evaluate(rel.expr, env)
        if not isinstance(v, bool):
            raise EvaluationError(f"relation {rel.name!r} is not boolean at tick {t}")
        ticks.append(v)
    return fold_stream(ticks), ticks


@dataclass(frozen=True)
class CorrespondenceResult:
    ri_holds: bool
    ro_holds: bool
    corresponding: bool
    ri_stream: tuple[bool, ...] = ()
    ro_stream: tuple[bool, ...] = ()
    status: str = "ok"  # ok | error
    diagnostics: tuple[str, ...] = ()
    abstract_output: ChannelHistory | None = None
    concrete_output: ChannelHistory | None = None


def check_correspondence(spec_a: ComponentSpec, spec_c: ComponentSpec,
                         ri: RelationSpec, ro: RelationSpec,
                         ta: ChannelHistory, tc: ChannelHistory) -> CorrespondenceResult:
    """RI(ta, tc) -> RO(run(spec_a, ta), run(spec_c, tc))."""
    diagnostics: list[str] = []
    try:
        ri_holds, ri_stream = eval_relation(ri, ta, tc)
        out_a = run(spec_a, ta)
        out_c = run(spec_c, tc)
        ro_holds, ro_stream = eval_relation(ro, out_a, out_c)
    except StreamcheckError as e:
        return CorrespondenceResult(False, False, False, status="error",
                                    diagnostics=(str(e),))
    if not ri_holds:
        diagnostics.append("RI does not hold on the inputs; correspondence is vacuous")
    corresponding = (not ri_holds) or ro_holds
    return CorrespondenceResult(ri_holds, ro_holds, corresponding,
                                tuple(ri_stream), tuple(ro_stream),
                                diagnostics=tuple(diagnostics),
                                abstract_output=out_a, concrete_output=out_c)


# ---------------------------------------------------------------------------
# Galois connections


@dataclass(frozen=True)
class Universe:
    """Bounded enumeration domain for exhaustive Galois checks."""

    abstract: tuple[tuple[str, tuple[Any, ...]], ...]
    concrete: tuple[tuple[str, tuple[Any, ...]], ...]
    horizon: int = 1


@dataclass(frozen=True)
class GaloisSpec:
    """Element-wise abstraction map plus a concretization membership predicate.

    `f_map` gives, per abstract channel, an expression over concrete channel
    values. When `member` is omitted, membership defaults to the adjoint of
    f: a concrete history belongs to g(abstract) iff f maps it to exactly the
    abstract values, tick by tick.
    """

    name: str
    f_map: tuple[tuple[str, Expr], ...]
    member: Expr | None = None
    universe: Universe | None = None
    abstract_component: str | None = None
    concrete_component: str | None = None
    channel_types: Mapping[str, DataType] = field(default_factory=dict)

    def f_entries_for(self, available: set[str]) -> list[tuple[str, Expr]]:
        enums = {label for t in self.channel_types.values()
                 if t.kind == ENUM_KIND for label in t.labels}
        return [(chan, e) for chan, e in self.f_map
                if free_names(e) <= (available | enums)]


def _enum_labels_from_types(types: Mapping[str, DataType]) -> dict[str, str]:
    env = {}
    for t in types.values():
        if t.kind == ENUM_KIND:
            for label in t.labels:
                env[label] = label
    return env


def abstract_output(gal: GaloisSpec, c_out: ChannelHistory) -> ChannelHistory:
    """Apply the abstraction map element-wise to a concrete history."""
    available = set(c_out.streams)
    entries = gal.f_entries_for(available)
    if not entries:
        raise EvaluationError(f"galois {gal.name!r}: no abstraction map entry is "
                              f"applicable to channels {sorted(available)}")
    labels = _labels_of((c_out,))
    labels.update(_enum_labels_from_types(gal.channel_types))
    columns: dict[str, list[Any]] = {chan: [] for chan, _ in entries}
    for t in range(1, c_out.horizon + 1):
        env = {**labels, **c_out.tick(t)}
        for chan, e in entries:
            columns[chan].append(evaluate(e, env))
    streams = {}
    for chan, col in columns.items():
        dtype = gal.channel_types.get(chan)
        if dtype is None:
            dtype = _infer_type(col)
        streams[chan] = TimedStream.of(dtype, col)
    return ChannelHistory(streams, c_out.horizon)


def _infer_type(values: list[Any]) -> DataType:
    from .streams import REAL, bounded_int
    if all(isinstance(v, bool) for v in values):
        return BOOL
    if all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        lo, hi = min(values), max(values)
        return bounded_int(lo, hi)
    return REAL


def g_membership(gal: GaloisSpec, abstract: ChannelHistory, concrete: ChannelHistory) -> bool:
    """Does the concrete history belong to g({abstract})?"""
    if abstract.horizon != concrete.horizon:
        raise TypeMismatchError("horizon mismatch in membership check")
    labels = _labels_of((abstract, concrete))
    labels.update(_enum_labels_from_types(gal.channel_types))
    if gal.member is not None:
        for t in range(1, abstract.horizon + 1):
            env = {**labels, **abstract.tick(t), **concrete.tick(t)}
            if not evaluate(gal.member, env):
                return False
        return True
    # adjoint default: f(concrete) must equal the abstract values, tick-wise
    entries = [(chan, e) for chan, e in gal.f_entries_for(set(concrete.streams))
               if chan in abstract.streams]
    if not entries:
        raise EvaluationError(f"galois {gal.name!r}: no applicable membership entries")
    for t in range(1, abstract.horizon + 1):
        env = {**labels, **concrete.tick(t)}
        for chan, e in entries:
            if evaluate(e, env) != abstract.at(chan, t):
                return False
    return True


def build_output_checker(gal: GaloisSpec, abstract_outputs: Iterable[Channel],
                         concrete_outputs: Iterable[Channel]) -> AutomatonSpec:
    """A weak component (O_a x O_c -> bool stream) comparing f(concrete) to abstract."""
    abstract_outputs = tuple(abstract_outputs)
    concrete_outputs = tuple(concrete_outputs)
    abs_names = {c.name for c in abstract_outputs}
    conc_names = {c.name for c in concrete_outputs}
    expr: Expr | None = None
    for chan, e in gal.f_map:
        if chan not in abs_names:
            continue
        if not free_names(e) <= conc_names | {lab for t in gal.channel_types.values()
                                              if t.kind == ENUM_KIND for lab in t.labels}:
            raise EvaluationError(
                f"galois {gal.name!r}: map for {chan!r} is not element-wise over the "
                f"concrete outputs; supply a checker component instead")
        clause = Binary("==", Name(chan), e)
        expr = clause if expr is None else Binary("and", expr, clause)
    if expr is None:
        raise EvaluationError(f"galois {gal.name!r}: no abstraction map entries for "
                              f"outputs {sorted(abs_names)}")
    interface = SyntacticInterface(abstract_outputs + concrete_outputs,
                                   (Channel("check", BOOL, "output"),))
    return AutomatonSpec(
        name=f"{gal.name}_output_checker",
        interface=interface,
        states=("Run",),
        initial="Run",
        transitions=(Transition("Run", "Run", outputs=(("check", expr),)),),
        causality=WEAK,
    )


# ---------------------------------------------------------------------------
# Bounded-universe verification


def _side_elements(side: tuple[tuple[str, tuple[Any, ...]], ...], horizon: int,
                   types: Mapping[str, DataType]) -> list[ChannelHistory]:
    """All channel histories over the declared per-channel value sets."""
    axes = []
    chans = [chan for chan, _ in side]
    for chan, values in side:
        axes.extend([list(values)] * horizon)
    elements = []
    for combo in itertools.product(*axes):
        streams = {}
        for i, chan in enumerate(chans):
            vals = combo[i * horizon:(i + 1) * horizon]
            dtype = types.get(chan) or _infer_type(list(vals))
            streams[chan] = TimedStream.of(dtype, vals)
        elements.append(ChannelHistory(streams, horizon))
    return elements


@dataclass(frozen=True)
class GaloisCounterexample:
    concrete_set: tuple[ChannelHistory, ...]
    abstract_set: tuple[ChannelHistory, ...]
    lhs: bool  # f(T_c) subset of T_a
    rhs: bool  # T_c subset of g(T_a)

    def __str__(self) -> str:
        def fmt(hs):
            return "{" + ", ".join(
                "(" + ", ".join(f"{c}={list(h.streams[c].values)}" for c in sorted(h.streams)) + ")"
                for h in hs) + "}"
        return (f"f(T_c) subset-of T_a is {self.lhs} but T_c subset-of g(T_a) is "
                f"{self.rhs} for T_c={fmt(self.concrete_set)}, T_a={fmt(self.abstract_set)}")


def universe_elements(gal: GaloisSpec) -> tuple[list[ChannelHistory], list[ChannelHistory]]:
    if gal.universe is None:
        raise EvaluationError(f"galois {gal.name!r} declares no bounded universe")
    u = gal.universe
    return (_side_elements(u.abstract, u.horizon, gal.channel_types),
            _side_elements(u.concrete, u.horizon, gal.channel_types))


def verify_galois(gal: GaloisSpec, element_cap: int = DEFAULT_UNIVERSE_CAP,
                  horizon_cap: int = DEFAULT_HORIZON_CAP,
                  orientation: str = "standard") -> Optional[GaloisCounterexample]:
    """Exhaustively check the connection law over all subset pairs.

    Standard orientation: f(T_c) subset of T_a  iff  T_c subset of g(T_a).
    The 'literal' orientation instead applies g to the concrete set and
    compares against the abstract side; it is offered for diagnostics only.
    """
    if gal.universe is not None and gal.universe.horizon > horizon_cap:
        raise CapsExceededError(
            f"universe horizon {gal.universe.horizon} exceeds cap {horizon_cap}",
            gal.universe.horizon, horizon_cap)
    abs_elems, conc_elems = universe_elements(gal)
    for name, elems in (("abstract", abs_elems), ("concrete", conc_elems)):
        if len(elems) > element_cap:
            raise CapsExceededError(
                f"{name} universe has {len(elems)} elements, cap is {element_cap} "
                f"({2 ** len(elems)} subsets)", len(elems), element_cap)
    if orientation == "literal":
        return _verify_literal(gal, abs_elems, conc_elems)

    def key(h: ChannelHistory):
        return tuple((c, h.streams[c].values) for c in sorted(h.streams))

    abs_index = {key(h): i for i, h in enumerate(abs_elems)}
    # lifted f: image bit (or None when the image escapes the universe)
    f_bit: list[int | None] = []
    for x in conc_elems:
        img = abstract_output(gal, x)
        f_bit.append(abs_index.get(key(img)))
    member = [[g_membership(gal, a, x) for x in conc_elems] for a in abs_elems]
    n_a, n_c = len(abs_elems), len(conc_elems)
    for ta_mask in range(2 ** n_a):
        g_mask = 0
        for i in range(n_a):
            if ta_mask >> i & 1:
                for j in range(n_c):
                    if member[i][j]:
                        g_mask |= 1 << j
        # lhs holds for a singleton {x} iff f(x) lands inside T_a; for arbitrary
        # T_c both sides distribute over union, so comparing the two singleton
        # masks decides the biconditional for every T_c at once.
        lhs_mask = 0
        for j in range(n_c):
            if f_bit[j] is not None and (ta_mask >> f_bit[j]) & 1:
                lhs_mask |= 1 << j
        if lhs_mask != g_mask:
            j = min(i for i in range(n_c) if (lhs_mask ^ g_mask) >> i & 1)
            tc = (conc_elems[j],)
            ta = tuple(abs_elems[i] for i in range(n_a) if ta_mask >> i & 1)
            return GaloisCounterexample(tc, ta, lhs=bool(lhs_mask >> j & 1),
                                        rhs=bool(g_mask >> j & 1))
    return None


def _verify_literal(gal: GaloisSpec, abs_elems, conc_elems) -> Optional[GaloisCounterexample]:
    """Alternative form with g applied to the concrete set, for diagnostics."""
    def f_image(tc):
        return [abstract_output(gal, x) for x in tc]

    def g_of_concrete(tc):
        # abstract elements related to some member of the concrete set
        return [a for a in abs_elems if any(g_membership(gal, a, x) for x in tc)]

    def key(h):
        return tuple((c, h.streams[c].values) for c in sorted(h.streams))

    for conc_bits in range(2 ** len(conc_elems)):
        tc = [x for i, x in enumerate(conc_elems) if conc_bits >> i & 1]
        img_keys = {key(h) for h in f_image(tc)}
        g_keys = {key(a) for a in g_of_concrete(tc)}
        for abs_bits in range(2 ** len(abs_elems)):
            ta = [a for i, a in enumerate(abs_elems) if abs_bits >> i & 1]
            ta_keys = {key(a) for a in ta}
            lhs = img_keys <= ta_keys
            rhs = ta_keys <= g_keys
            if lhs != rhs:
                return GaloisCounterexample(tuple(tc), tuple(ta), lhs, rhs)
    return None


# ---------------------------------------------------------------------------
# Parameterized concretizers


@dataclass(frozen=True)
class ParamDecl:
    name: str
    dtype: DataType


@dataclass(frozen=True)
class ConcretizerSpec:
    """A component (I_a + params -> I_c) realizing one concretization family member."""

    name: str
    component: ComponentSpec
    params: tuple[ParamDecl, ...] = ()


class ConcretizationWarning(UserWarning):
    pass


def concretize(conc: ConcretizerSpec, p: Mapping[str, Any], ta: ChannelHistory,
               ri: RelationSpec | None = None) -> ChannelHistory:
    """Instantiate the parameter family member and run it on the abstract input.

    Scalar parameter values are broadcast to constant streams. When an RI
    relation is supplied the produced pair is checked against it and a
    ConcretizationWarning is emitted on failure.
    """
    streams = dict(ta.streams)
    horizon = ta.horizon
    for decl in conc.params:
        if decl.name not in p:
            raise UnboundParameterError(f"parameter {decl.name!r} is unbound")
        value = p[decl.name]
        if isinstance(value, TimedStream):
            streams[decl.name] = value
        else:
            streams[decl.name] = TimedStream.of(decl.dtype, [value] * horizon)
    extra = set(p) - {d.name for d in conc.params}
    if extra:
        raise UnboundParameterError(f"unknown parameters {sorted(extra)}")
    inputs = ChannelHistory(streams, horizon)
    result = run(conc.component, inputs, horizon)
    if ri is not None:
        holds, _ = eval_relation(ri, ta, result)
        if not holds:
            warnings.warn(f"concretizer {conc.name!r} produced an input violating RI",
                          ConcretizationWarning)
    return result


@dataclass(frozen=True)
class FinvViolation:
    params: Mapping[str, Any]
    abstract_input: ChannelHistory
    concrete_input: ChannelHistory


def check_finv_in_g(gal: GaloisSpec, conc: ConcretizerSpec,
                    samples: Iterable[tuple[Mapping[str, Any], ChannelHistory]]
                    ) -> Optional[FinvViolation]:
    """For each sampled (p, ta): concretize and require g-membership."""
    for p, ta in samples:
        tc = concretize(conc, p, ta)
        if not g_membership(gal, ta, tc):
            return FinvViolation(dict(p), ta, tc)
    return None
