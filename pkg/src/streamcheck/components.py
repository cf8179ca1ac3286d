"""Deterministic stream-processing components and their simulator.

Atomic components are finite automata evaluated element-wise: one transition
fires per tick (the first enabled one in declaration order), unassigned
outputs latch their last value, and strict components emit with a one-tick
delay (tick 1 emits the declared initial outputs). Composite components are
wiring networks over subcomponents; they are flattened before simulation so
scheduling only ever deals with atomic instances.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional, Union

from .errors import (EvaluationError, NondeterminismError, SimulationError,
                     StuckStateError, StreamcheckError, TypeMismatchError)
from .exprs import TRUE, Expr, evaluate, free_names
from .streams import (Channel, ChannelHistory, DataType, ENUM_KIND, TimedStream,
                      validate_history)

STRICT = "strict"
WEAK = "weak"


@dataclass(frozen=True)
class SyntacticInterface:
    """The typed input and output channel sets of a component."""

    inputs: tuple[Channel, ...]
    outputs: tuple[Channel, ...]

    def __post_init__(self):
        names = [c.name for c in self.inputs] + [c.name for c in self.outputs]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise TypeMismatchError(f"duplicate channel names: {sorted(dupes)}")

    def input(self, name: str) -> Channel:
        return next(c for c in self.inputs if c.name == name)

    def output(self, name: str) -> Channel:
        return next(c for c in self.outputs if c.name == name)

    def input_names(self) -> list[str]:
        return [c.name for c in self.inputs]

    def output_names(self) -> list[str]:
        return [c.name for c in self.outputs]


@dataclass(frozen=True)
class VariableDecl:
    name: str
    dtype: DataType
    init: Any


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    guard: Expr = TRUE
    outputs: tuple[tuple[str, Expr], ...] = ()
    updates: tuple[tuple[str, Expr], ...] = ()
    label: str | None = None


@dataclass(frozen=True)
class AutomatonSpec:
    name: str
    interface: SyntacticInterface
    states: tuple[str, ...]
    initial: str
    transitions: tuple[Transition, ...] = ()
    variables: tuple[VariableDecl, ...] = ()
    output_init: Mapping[str, Any] = field(default_factory=dict)
    causality: str = STRICT
    total: bool = False


@dataclass(frozen=True)
class Endpoint:
    """A wiring end: (component, channel); component None means the boundary."""

    component: str | None
    channel: str

    def __str__(self) -> str:
        return self.channel if self.component is None else f"{self.component}.{self.channel}"


@dataclass(frozen=True)
class Connector:
    producer: Endpoint
    consumer: Endpoint


@dataclass(frozen=True)
class CompositeSpec:
    name: str
    interface: SyntacticInterface
    subcomponents: tuple[tuple[str, "ComponentSpec"], ...]
    wiring: tuple[Connector, ...]


ComponentSpec = Union[AutomatonSpec, CompositeSpec]


def enum_label_env(spec: AutomatonSpec) -> dict[str, str]:
    """Enumeration labels visible to this automaton's expressions."""
    env: dict[str, str] = {}
    types = [c.ctype for c in spec.interface.inputs + spec.interface.outputs]
    types += [v.dtype for v in spec.variables]
    for t in types:
        if t.kind == ENUM_KIND:
            for label in t.labels:
                env[label] = label
    return env


def validate_automaton(spec: AutomatonSpec) -> list[str]:
    """Static well-formedness check; returns a list of problem descriptions."""
    problems: list[str] = []
    if spec.causality not in (STRICT, WEAK):
        problems.append(f"unknown causality mode {spec.causality!r}")
    if spec.initial not in spec.states:
        problems.append(f"initial state {spec.initial!r} not declared")
    if len(set(spec.states)) != len(spec.states):
        problems.append("duplicate state names")
    in_names = set(spec.interface.input_names())
    out_names = set(spec.interface.output_names())
    var_names = {v.name for v in spec.variables}
    labels = set(enum_label_env(spec))
    clash = labels & (in_names | out_names | var_names)
    if clash:
        problems.append(f"enumeration labels shadow channels/variables: {sorted(clash)}")
    for v in spec.variables:
        if not v.dtype.contains(v.init):
            problems.append(f"variable {v.name!r} initial value {v.init!r} outside its type")
    if spec.causality == STRICT:
        for c in spec.interface.outputs:
            if c.name not in spec.output_init:
                problems.append(f"strict component lacks init value for output {c.name!r}")
    for name, value in spec.output_init.items():
        if name not in out_names:
            problems.append(f"output_init names unknown output {name!r}")
        elif not spec.interface.output(name).ctype.contains(value):
            problems.append(f"init value {value!r} outside type of output {name!r}")
    guard_scope = in_names | var_names | labels
    assign_scope = guard_scope | out_names
    for t in spec.transitions:
        where = f"transition {t.label or t.source + '->' + t.target}"
        if t.source not in spec.states:
            problems.append(f"{where}: unknown source state {t.source!r}")
        if t.target not in spec.states:
            problems.append(f"{where}: unknown target state {t.target!r}")
        for n in sorted(free_names(t.guard) - guard_scope):
            problems.append(f"{where}: unresolved channel {n!r} in guard")
        for o, e in t.outputs:
            if o not in out_names:
                problems.append(f"{where}: assignment to unknown output {o!r}")
            for n in sorted(free_names(e) - assign_scope):
                problems.append(f"{where}: unresolved channel {n!r} in assignment")
        for v, e in t.updates:
            if v not in var_names:
                problems.append(f"{where}: update of unknown variable {v!r}")
            for n in sorted(free_names(e) - assign_scope):
                problems.append(f"{where}: unresolved channel {n!r} in assignment")
    return problems


# ---------------------------------------------------------------------------
# Runtime state


@dataclass(frozen=True)
class AutomatonState:
    state: str
    variables: tuple[tuple[str, Any], ...]
    pending: tuple[tuple[str, Any], ...]  # outputs computed at the previous tick


@dataclass(frozen=True)
class CompositeState:
    substates: tuple[tuple[str, AutomatonState], ...]


ComponentState = Union[AutomatonState, CompositeState]


class _AutomatonRt:
    def __init__(self, spec: AutomatonSpec, check_determinism: bool = False):
        self.spec = spec
        self.check_determinism = check_determinism
        self.labels = enum_label_env(spec)
        self.out_types = {c.name: c.ctype for c in spec.interface.outputs}
        self.var_types = {v.name: v.dtype for v in spec.variables}

    @property
    def strict(self) -> bool:
        return self.spec.causality == STRICT

    def initial(self) -> AutomatonState:
        spec = self.spec
        pending = tuple((c.name, spec.output_init[c.name])
                        for c in spec.interface.outputs if c.name in spec.output_init)
        return AutomatonState(spec.initial,
                              tuple((v.name, v.init) for v in spec.variables),
                              pending)

    def peek(self, st: AutomatonState) -> dict[str, Any]:
        return dict(st.pending)

    def step(self, st: AutomatonState, inputs: Mapping[str, Any]) -> tuple[AutomatonState, dict[str, Any]]:
        spec = self.spec
        for c in spec.interface.inputs:
            if c.name not in inputs:
                raise SimulationError(f"{spec.name}: input {c.name!r} not provided")
            c.ctype.check(inputs[c.name])
        latched = dict(st.pending)
        env = {**self.labels, **latched, **dict(st.variables), **inputs}
        fired = None
        for t in spec.transitions:
            if t.source != st.state:
                continue
            try:
                enabled = evaluate(t.guard, env)
            except EvaluationError as e:
                raise EvaluationError(
                    f"{spec.name}: guard of {t.label or t.source + '->' + t.target}: {e}") from e
            if not isinstance(enabled, bool):
                raise EvaluationError(
                    f"{spec.name}: guard of {t.label or t.source + '->' + t.target} is not boolean")
            if enabled:
                if fired is None:
                    fired = t
                    if not self.check_determinism:
                        break
                else:
                    raise NondeterminismError(
                        f"{spec.name}: transitions {fired.label or fired.target!r} and "
                        f"{t.label or t.target!r} both enabled in state {st.state!r}")
        computed = dict(latched)
        variables = dict(st.variables)
        if fired is None:
            if spec.total:
                raise StuckStateError(spec.name, st.state)
            new_state = st.state
        else:
            new_state = fired.target
            for o, e in fired.outputs:
                computed[o] = self.out_types[o].check(evaluate(e, env))
            for v, e in fired.updates:
                variables[v] = self.var_types[v].check(evaluate(e, env))
        if self.strict:
            emitted = latched
        else:
            emitted = computed
        missing = [c.name for c in spec.interface.outputs if c.name not in emitted]
        if missing:
            raise SimulationError(f"{spec.name}: outputs never assigned: {missing}")
        new_st = AutomatonState(new_state, tuple(sorted(variables.items())),
                                tuple(sorted(computed.items())))
        return new_st, dict(emitted)


_BOUNDARY = None


class _FlatModel:
    """A composite flattened to atomic instances plus resolved wiring."""

    def __init__(self, spec: CompositeSpec, check_determinism: bool = False):
        self.spec = spec
        self.atoms: dict[str, _AutomatonRt] = {}
        self._alias: dict[tuple[str | None, str], tuple[str | None, str]] = {}
        self._flatten(spec, None, {c.name: (_BOUNDARY, c.name) for c in spec.interface.inputs})
        self.check_determinism = check_determinism
        for rt in self.atoms.values():
            rt.check_determinism = check_determinism
        # resolve every consumer to its terminal producer up front
        self.src: dict[tuple[str, str], tuple[str | None, str]] = {}
        for path, rt in self.atoms.items():
            for c in rt.spec.interface.inputs:
                self.src[(path, c.name)] = self._resolve((path, c.name))
        self.out_src = {c.name: self._resolve((_BOUNDARY, c.name))
                        for c in spec.interface.outputs}

    def _flatten(self, spec: ComponentSpec, path: str | None,
                 input_src: dict[str, tuple[str | None, str]]) -> dict[str, tuple[str | None, str]]:
        """Inline a component at `path`; returns producer endpoints for its outputs.

        Producers that are sibling-subcomponent outputs are not known until
        that sibling has been flattened, so they are first recorded under a
        provisional key and rewritten to their terminal endpoint afterwards.
        """
        if isinstance(spec, AutomatonSpec):
            assert path is not None
            self.atoms[path] = _AutomatonRt(spec)
            for chan, src in input_src.items():
                self._alias[(path, chan)] = src
            return {c.name: (path, c.name) for c in spec.interface.outputs}
        prefix = "" if path is None else path + "/"

        def producer_key(ep: Endpoint) -> tuple[str | None, str]:
            if ep.component is None:
                src = input_src.get(ep.channel)
                if src is None:
                    raise SimulationError(f"{spec.name}: {ep} is not a composite input")
                return src
            return (f"{prefix}{ep.component}?", ep.channel)  # provisional

        sub_in: dict[str, dict[str, tuple[str | None, str]]] = {}
        boundary_out: dict[str, tuple[str | None, str]] = {}
        for conn in spec.wiring:
            ep = conn.consumer
            if ep.component is None:
                boundary_out[ep.channel] = producer_key(conn.producer)
            else:
                sub_in.setdefault(ep.component, {})[ep.channel] = producer_key(conn.producer)
        provisional: dict[tuple[str | None, str], tuple[str | None, str]] = {}
        for name, sub in spec.subcomponents:
            outs = self._flatten(sub, prefix + name, sub_in.get(name, {}))
            for chan, terminal in outs.items():
                provisional[(f"{prefix}{name}?", chan)] = terminal

        def fix(src: tuple[str | None, str]) -> tuple[str | None, str]:
            while src in provisional:
                src = provisional[src]
            return src

        for key, src in list(self._alias.items()):
            self._alias[key] = fix(src)
        boundary_out = {chan: fix(src) for chan, src in boundary_out.items()}
        if path is None:
            for chan, src in boundary_out.items():
                self._alias[(_BOUNDARY, chan)] = src
        return boundary_out

    def _resolve(self, key: tuple[str | None, str]) -> tuple[str | None, str]:
        seen = set()
        while key in self._alias:
            if key in seen:
                raise SimulationError(f"wiring alias cycle at {key}")
            seen.add(key)
            key = self._alias[key]
        return key

    def initial(self) -> CompositeState:
        return CompositeState(tuple((p, rt.initial()) for p, rt in sorted(self.atoms.items())))

    def step(self, st: CompositeState, inputs: Mapping[str, Any]) -> tuple[CompositeState, dict[str, Any]]:
        for c in self.spec.interface.inputs:
            if c.name not in inputs:
                raise SimulationError(f"{self.spec.name}: input {c.name!r} not provided")
        states = dict(st.substates)
        values: dict[tuple[str | None, str], Any] = {
            (_BOUNDARY, c.name): c.ctype.check(inputs[c.name]) for c in self.spec.interface.inputs}
        strict_atoms = [p for p, rt in self.atoms.items() if rt.strict]
        weak_atoms = [p for p, rt in self.atoms.items() if not rt.strict]
        for p in strict_atoms:
            for chan, v in self.atoms[p].peek(states[p]).items():
                values[(p, chan)] = v
        pending = set(weak_atoms)
        new_states: dict[str, AutomatonState] = {}

        def gather(path: str) -> dict[str, Any] | None:
            ins = {}
            for c in self.atoms[path].spec.interface.inputs:
                src = self.src.get((path, c.name))
                if src is None or src not in values:
                    return None
                ins[c.name] = values[src]
            return ins

        progress = True
        while pending and progress:
            progress = False
            for p in sorted(pending):
                ins = gather(p)
                if ins is None:
                    continue
                new_states[p], outs = self.atoms[p].step(states[p], ins)
                for chan, v in outs.items():
                    values[(p, chan)] = v
                pending.discard(p)
                progress = True
        if pending:
            raise SimulationError(
                f"{self.spec.name}: zero-delay dependency cycle or unconnected input "
                f"involving {sorted(pending)}")
        for p in strict_atoms:
            ins = gather(p)
            if ins is None:
                missing = [c.name for c in self.atoms[p].spec.interface.inputs
                           if self.src.get((p, c.name)) not in values]
                raise SimulationError(f"{self.spec.name}: unconnected inputs {missing} of {p!r}")
            new_states[p], _ = self.atoms[p].step(states[p], ins)
        outputs = {}
        for c in self.spec.interface.outputs:
            src = self.out_src.get(c.name)
            if src is None or src not in values:
                raise SimulationError(f"{self.spec.name}: output {c.name!r} has no producer")
            outputs[c.name] = c.ctype.check(values[src])
        return CompositeState(tuple(sorted(new_states.items()))), outputs


def _runtime(spec: ComponentSpec, check_determinism: bool = False):
    if isinstance(spec, AutomatonSpec):
        return _AutomatonRt(spec, check_determinism)
    return _FlatModel(spec, check_determinism)


def initial_state(spec: ComponentSpec) -> ComponentState:
    return _runtime(spec).initial()


def step(spec: ComponentSpec, st: ComponentState, inputs: Mapping[str, Any],
         check_determinism: bool = False) -> tuple[ComponentState, dict[str, Any]]:
    """Advance one tick: consume one message per input, emit one per output."""
    return _runtime(spec, check_determinism).step(st, inputs)


def run(spec: ComponentSpec, input_history: ChannelHistory, n: int | None = None,
        check_determinism: bool = False) -> ChannelHistory:
    """Iterate `step` from the initial state; returns the output history."""
    if n is None:
        n = input_history.horizon
    violations = validate_history(input_history, list(spec.interface.inputs))
    if violations:
        raise SimulationError("invalid input history: " + "; ".join(map(str, violations)))
    if input_history.horizon < n:
        raise SimulationError(f"input horizon {input_history.horizon} < requested ticks {n}")
    rt = _runtime(spec, check_determinism)
    st = rt.initial()
    columns: dict[str, list[Any]] = {c.name: [] for c in spec.interface.outputs}
    for t in range(1, n + 1):
        try:
            st, outs = rt.step(st, input_history.tick(t))
        except StreamcheckError as e:
            raise SimulationError(str(e), tick=t) from e
        for name, col in columns.items():
            col.append(outs[name])
    return ChannelHistory({c.name: TimedStream.of(c.ctype, columns[c.name])
                           for c in spec.interface.outputs}, n)


# ---------------------------------------------------------------------------
# Structural checks


def compose_check(spec: CompositeSpec) -> list[str]:
    """Validate a composite network; returns [] when everything is wired sanely."""
    problems: list[str] = []
    subs = dict(spec.subcomponents)
    if len(subs) != len(spec.subcomponents):
        problems.append("duplicate subcomponent names")

    def chan_of(ep: Endpoint, producing: bool) -> Channel | None:
        if ep.component is None:
            pool = spec.interface.inputs if producing else spec.interface.outputs
        else:
            sub = subs.get(ep.component)
            if sub is None:
                problems.append(f"unknown subcomponent in endpoint {ep}")
                return None
            pool = sub.interface.outputs if producing else sub.interface.inputs
        for c in pool:
            if c.name == ep.channel:
                return c
        side = "producer" if producing else "consumer"
        problems.append(f"endpoint {ep} is not a valid {side} channel")
        return None

    producers: dict[Endpoint, list[Endpoint]] = {}
    for conn in spec.wiring:
        p = chan_of(conn.producer, producing=True)
        c = chan_of(conn.consumer, producing=False)
        if p is not None and c is not None and p.ctype != c.ctype:
            problems.append(f"type mismatch on {conn.producer} -> {conn.consumer}: "
                            f"{p.ctype.to_text()} vs {c.ctype.to_text()}")
        producers.setdefault(conn.consumer, []).append(conn.producer)
    for consumer, plist in producers.items():
        if len(plist) > 1:
            problems.append(f"consumer {consumer} has {len(plist)} producers")
    for name, sub in spec.subcomponents:
        for c in sub.interface.inputs:
            if Endpoint(name, c.name) not in producers:
                problems.append(f"unconnected consumer {name}.{c.name}")
    for c in spec.interface.outputs:
        if Endpoint(None, c.name) not in producers:
            problems.append(f"unconnected composite output {c.name}")
    if problems:
        return problems
    problems.extend(_zero_delay_cycles(spec))
    return problems


def _zero_delay_cycles(spec: CompositeSpec) -> list[str]:
    try:
        flat = _FlatModel(spec)
    except StreamcheckError as e:
        return [f"cannot flatten composite: {e}"]
    weak = {p for p, rt in flat.atoms.items() if not rt.strict}
    edges: dict[str, dict[str, str]] = {p: {} for p in weak}
    for (consumer, chan), src in flat.src.items():
        if consumer in weak and src[0] in weak:
            edges[src[0]][consumer] = f"{src[0]}.{src[1]} -> {consumer}.{chan}"
    problems = []
    color: dict[str, int] = {}
    stack: list[tuple[str, str]] = []

    def dfs(u: str) -> bool:
        color[u] = 1
        for v, label in edges[u].items():
            if color.get(v) == 1:
                path = [lbl for node, lbl in stack] + [label]
                problems.append("zero-delay cycle: " + " ; ".join(path))
                return True
            if color.get(v, 0) == 0:
                stack.append((v, label))
                if dfs(v):
                    return True
                stack.pop()
        color[u] = 2
        return False

    for p in sorted(weak):
        if color.get(p, 0) == 0 and dfs(p):
            break
    return problems


# ---------------------------------------------------------------------------
# Causality checking


@dataclass(frozen=True)
class CausalityCounterexample:
    tick: int
    input_a: ChannelHistory
    input_b: ChannelHistory
    output_a: ChannelHistory
    output_b: ChannelHistory

    def __str__(self) -> str:
        return (f"inputs agree through tick {self.tick} but outputs diverge "
                f"within the checked prefix")


def representative_values(dtype: DataType, limit: int = 2) -> list[Any]:
    """A small value abstraction of a data type, for causality search."""
    if dtype.kind == "bool":
        return [False, True]
    if dtype.kind == "int":
        vals = dtype.values()
        return vals if len(vals) <= limit else [dtype.lo, dtype.hi][:limit]
    if dtype.kind == "enum":
        return list(dtype.labels[:max(limit, 1)])
    return [0.0, 1.0][:limit]


def _histories_from_grid(channels: Iterable[Channel], grid: dict[str, list[Any]],
                         combo: tuple, horizon: int) -> ChannelHistory:
    streams = {}
    i = 0
    for c in channels:
        streams[c.name] = TimedStream.of(c.ctype, combo[i:i + horizon])
        i += horizon
    return ChannelHistory(streams, horizon)


def check_causality(spec: ComponentSpec, budget: int = 4096, horizon: int = 3,
                    mode: str | None = None, seed: int = 0,
                    values_per_channel: int = 2) -> Optional[CausalityCounterexample]:
    """Search for a violation of the declared (or given) causality mode.

    Exhaustive over the per-channel value abstraction when the history count
    fits within the budget, otherwise randomized trials. Returns None when no
    counterexample is found.
    """
    if mode is None:
        mode = spec.causality if isinstance(spec, AutomatonSpec) else STRICT
    channels = list(spec.interface.inputs)
    grid = {c.name: representative_values(c.ctype, values_per_channel) for c in channels}
    per_tick = 1
    for c in channels:
        per_tick *= len(grid[c.name])
    total = per_tick ** horizon
    if total <= budget:
        return _causality_exhaustive(spec, channels, grid, horizon, mode)
    return _causality_random(spec, channels, grid, horizon, mode, budget, seed)


def _prefix_equal(a: ChannelHistory, b: ChannelHistory, t: int) -> bool:
    return all(a.streams[c].values[:t] == b.streams[c].values[:t] for c in a.streams)


def _causality_exhaustive(spec, channels, grid, horizon, mode):
    axes = []
    for c in channels:
        axes.extend([grid[c.name]] * horizon)
    runs: list[tuple[ChannelHistory, ChannelHistory]] = []
    for combo in itertools.product(*axes):
        hist = _histories_from_grid(channels, grid, combo, horizon)
        runs.append((hist, run(spec, hist, horizon)))
    ts = range(0, horizon) if mode == STRICT else range(1, horizon)
    for t in ts:
        out_t = t + 1 if mode == STRICT else t
        buckets: dict[tuple, tuple[ChannelHistory, ChannelHistory]] = {}
        for hist, out in runs:
            key = tuple(hist.streams[c.name].values[:t] for c in channels)
            if key not in buckets:
                buckets[key] = (hist, out)
            else:
                h0, o0 = buckets[key]
                if not _prefix_equal(o0, out, out_t):
                    return CausalityCounterexample(t, h0, hist, o0, out)
    return None


def _causality_random(spec, channels, grid, horizon, mode, budget, seed):
    rng = random.Random(seed)

    def rand_suffix(prefix_cols, t):
        streams = {}
        for c in channels:
            tail = [rng.choice(grid[c.name]) for _ in range(horizon - t)]
            streams[c.name] = TimedStream.of(c.ctype, list(prefix_cols[c.name]) + tail)
        return ChannelHistory(streams, horizon)

    lo_t = 0 if mode == STRICT else 1
    for _ in range(budget):
        t = rng.randint(lo_t, horizon - 1)
        prefix_cols = {c.name: [rng.choice(grid[c.name]) for _ in range(t)] for c in channels}
        h1 = rand_suffix(prefix_cols, t)
        h2 = rand_suffix(prefix_cols, t)
        o1 = run(spec, h1, horizon)
        o2 = run(spec, h2, horizon)
        out_t = t + 1 if mode == STRICT else t
        if not _prefix_equal(o1, o2, out_t):
            return CausalityCounterexample(t, h1, h2, o1, o2)
    return None
