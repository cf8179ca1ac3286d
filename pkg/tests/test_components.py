import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamcheck.components import (AutomatonSpec, CausalityCounterexample, Channel,
                                    CompositeSpec, Connector, Endpoint,
                                    SyntacticInterface, Transition, check_causality,
                                    compose_check, run, validate_automaton)
from streamcheck.errors import SimulationError
from streamcheck.exprs import parse_expression
from streamcheck.streams import BOOL, ChannelHistory, TimedStream, bounded_int

INT8 = bounded_int(-128, 127)


def _hist(**cols):
    streams = {}
    for name, vals in cols.items():
        if all(isinstance(v, bool) for v in vals):
            streams[name] = TimedStream.of(BOOL, vals)
        else:
            streams[name] = TimedStream.of(INT8, vals)
    return ChannelHistory(streams)


def identity(name="Id", causality="strict"):
    return AutomatonSpec(
        name=name,
        interface=SyntacticInterface((Channel("x", INT8, "input"),),
                                     (Channel("y", INT8, "output"),)),
        states=("Run",), initial="Run",
        transitions=(Transition("Run", "Run", outputs=(("y", parse_expression("x")),)),),
        output_init={"y": 0}, causality=causality)


def test_strict_delay_and_init():
    out = run(identity(), _hist(x=[5, 7, 9]))
    assert out.streams["y"].values == (0, 5, 7)


def test_weak_zero_delay():
    out = run(identity(causality="weak"), _hist(x=[5, 7, 9]))
    assert out.streams["y"].values == (5, 7, 9)


def test_latch_holds_last_output():
    spec = AutomatonSpec(
        name="Latch",
        interface=SyntacticInterface((Channel("x", INT8, "input"),),
                                     (Channel("y", INT8, "output"),)),
        states=("Run",), initial="Run",
        transitions=(
            Transition("Run", "Run", guard=parse_expression("x > 0"),
                       outputs=(("y", parse_expression("x")),)),
            Transition("Run", "Run"),  # no assignment: y latches
        ),
        output_init={"y": 0}, causality="strict")
    out = run(spec, _hist(x=[3, -1, -1, 8]))
    assert out.streams["y"].values == (0, 3, 3, 3)


def test_stuck_state_self_loops_by_default():
    spec = AutomatonSpec(
        name="Stuck",
        interface=SyntacticInterface((Channel("x", INT8, "input"),),
                                     (Channel("y", INT8, "output"),)),
        states=("Run",), initial="Run",
        transitions=(Transition("Run", "Run", guard=parse_expression("x > 0"),
                                outputs=(("y", parse_expression("x")),)),),
        output_init={"y": 0}, causality="strict")
    out = run(spec, _hist(x=[-5, -5]))
    assert out.streams["y"].values == (0, 0)


def test_total_automaton_errors_when_stuck():
    spec = AutomatonSpec(
        name="Total",
        interface=SyntacticInterface((Channel("x", INT8, "input"),),
                                     (Channel("y", INT8, "output"),)),
        states=("Run",), initial="Run",
        transitions=(Transition("Run", "Run", guard=parse_expression("x > 0"),
                                outputs=(("y", parse_expression("x")),)),),
        output_init={"y": 0}, causality="strict", total=True)
    with pytest.raises(SimulationError, match="stuck"):
        run(spec, _hist(x=[-5]))


def test_first_enabled_transition_wins():
    spec = AutomatonSpec(
        name="Order",
        interface=SyntacticInterface((Channel("x", INT8, "input"),),
                                     (Channel("y", INT8, "output"),)),
        states=("Run",), initial="Run",
        transitions=(
            Transition("Run", "Run", guard=parse_expression("x >= 0"),
                       outputs=(("y", parse_expression("1")),)),
            Transition("Run", "Run", guard=parse_expression("x >= 0"),
                       outputs=(("y", parse_expression("2")),)),
        ),
        output_init={"y": 0}, causality="weak")
    out = run(spec, _hist(x=[0]))
    assert out.streams["y"].values == (1,)


def test_determinism_check_flags_overlap():
    spec = AutomatonSpec(
        name="Overlap",
        interface=SyntacticInterface((Channel("x", INT8, "input"),),
                                     (Channel("y", INT8, "output"),)),
        states=("Run",), initial="Run",
        transitions=(
            Transition("Run", "Run", guard=parse_expression("x >= 0"),
                       outputs=(("y", parse_expression("1")),)),
            Transition("Run", "Run", guard=parse_expression("x <= 0"),
                       outputs=(("y", parse_expression("2")),)),
        ),
        output_init={"y": 0}, causality="weak")
    # enabled overlap only at x == 0
    assert run(spec, _hist(x=[5]), check_determinism=True).streams["y"].values == (1,)
    with pytest.raises(SimulationError, match="both enabled"):
        run(spec, _hist(x=[0]), check_determinism=True)


def test_run_validates_inputs():
    with pytest.raises(SimulationError):
        run(identity(), ChannelHistory({}))  # unbound input channel


def test_validate_automaton_catches_unresolved_names():
    spec = AutomatonSpec(
        name="Bad",
        interface=SyntacticInterface((Channel("x", INT8, "input"),),
                                     (Channel("y", INT8, "output"),)),
        states=("Run",), initial="Nope",
        transitions=(Transition("Run", "Run", guard=parse_expression("z > 0")),),
        causality="weak")
    problems = validate_automaton(spec)
    assert any("initial state" in p for p in problems)
    assert any("unresolved channel 'z'" in p for p in problems)


def _pipeline(first_causality="strict"):
    inc = AutomatonSpec(
        name="Inc",
        interface=SyntacticInterface((Channel("a", INT8, "input"),),
                                     (Channel("b", INT8, "output"),)),
        states=("Run",), initial="Run",
        transitions=(Transition("Run", "Run",
                                outputs=(("b", parse_expression("min(a + 1, 127)")),)),),
        output_init={"b": 0}, causality=first_causality)
    dbl = AutomatonSpec(
        name="Dbl",
        interface=SyntacticInterface((Channel("b", INT8, "input"),),
                                     (Channel("c", INT8, "output"),)),
        states=("Run",), initial="Run",
        transitions=(Transition("Run", "Run",
                                outputs=(("c", parse_expression("min(b * 2, 127)")),)),),
        output_init={"c": 0}, causality="weak")
    return CompositeSpec(
        name="Pipe",
        interface=SyntacticInterface((Channel("a", INT8, "input"),),
                                     (Channel("c", INT8, "output"),)),
        subcomponents=(("inc", inc), ("dbl", dbl)),
        wiring=(Connector(Endpoint(None, "a"), Endpoint("inc", "a")),
                Connector(Endpoint("inc", "b"), Endpoint("dbl", "b")),
                Connector(Endpoint("dbl", "c"), Endpoint(None, "c"))))


def test_composite_pipeline():
    out = run(_pipeline(), _hist(a=[1, 2, 3]))
    # inc is strict (one-tick delay), dbl is weak (zero delay)
    assert out.streams["c"].values == (0, 4, 6)


def test_compose_check_accepts_good_wiring():
    assert compose_check(_pipeline()) == []


def test_compose_check_rejects_zero_delay_cycle():
    fwd = AutomatonSpec(
        name="F",
        interface=SyntacticInterface((Channel("p", INT8, "input"),),
                                     (Channel("q", INT8, "output"),)),
        states=("Run",), initial="Run",
        transitions=(Transition("Run", "Run", outputs=(("q", parse_expression("p")),)),),
        causality="weak")
    bwd = AutomatonSpec(
        name="B",
        interface=SyntacticInterface((Channel("q", INT8, "input"),),
                                     (Channel("p", INT8, "output"),)),
        states=("Run",), initial="Run",
        transitions=(Transition("Run", "Run", outputs=(("p", parse_expression("q")),)),),
        causality="weak")
    cyc = CompositeSpec(
        name="Cycle",
        interface=SyntacticInterface((), (Channel("q", INT8, "output"),)),
        subcomponents=(("f", fwd), ("b", bwd)),
        wiring=(Connector(Endpoint("f", "q"), Endpoint("b", "q")),
                Connector(Endpoint("b", "p"), Endpoint("f", "p")),
                Connector(Endpoint("f", "q"), Endpoint(None, "q"))))
    problems = compose_check(cyc)
    assert any("cycle" in p for p in problems)


def test_compose_check_rejects_double_producer():
    spec = _pipeline()
    extra = Connector(Endpoint(None, "a"), Endpoint("dbl", "b"))
    bad = CompositeSpec(spec.name, spec.interface, spec.subcomponents,
                        spec.wiring + (extra,))
    assert any("produce" in p for p in compose_check(bad))


def test_causality_strict_component_passes():
    assert check_causality(identity(), horizon=3) is None


def test_causality_detects_weak_component_in_strict_mode():
    cex = check_causality(identity(causality="weak"), horizon=3, mode="strict")
    assert isinstance(cex, CausalityCounterexample)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_randomized_causality_agrees_on_identity(seed):
    # force the randomized path with a tiny budget
    assert check_causality(identity(), horizon=3, budget=6, seed=seed) is None
