"""Test-cases, execution against components, and verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .components import ComponentSpec, run
from .errors import StreamcheckError
from .streams import ChannelHistory, REAL_KIND, TimedStream

PASS = "pass"
FAIL = "fail"
ERROR = "error"

# A test-input is just a channel history over the component's input channels.
TestInput = ChannelHistory


@dataclass(frozen=True)
class ExpectedResult:
    """One or more complete output histories; matching any group passes."""

    groups: tuple[ChannelHistory, ...]

    @classmethod
    def of(cls, *groups: ChannelHistory) -> "ExpectedResult":
        return cls(tuple(groups))


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # keep pytest from collecting this as a test class

    name: str
    input: TestInput
    expected: ExpectedResult
    params: Mapping[str, TimedStream] = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        return self.input.horizon


@dataclass(frozen=True)
class Divergence:
    tick: int
    channel: str
    expected: Any
    actual: Any

    def __str__(self) -> str:
        return (f"tick {self.tick}, channel {self.channel}: "
                f"expected {self.expected!r}, got {self.actual!r}")


@dataclass(frozen=True)
class Verdict:
    status: str  # pass | fail | error
    first_divergence: Optional[Divergence] = None
    log: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.status == PASS


def _values_equal(expected: Any, actual: Any, kind: str, eps: float) -> bool:
    if kind == REAL_KIND:
        return abs(float(expected) - float(actual)) <= eps
    return expected == actual


def _match_group(actual: ChannelHistory, group: ChannelHistory,
                 eps: float) -> tuple[Optional[Divergence], list[str]]:
    """First divergence of actual against one expected group, plus a trace."""
    log = []
    first = None
    for t in range(1, actual.horizon + 1):
        for c in sorted(group.streams):
            exp = group.at(c, t)
            act = actual.at(c, t)
            ok = _values_equal(exp, act, actual.streams[c].elem_type.kind, eps)
            log.append(f"t={t} {c}: expected {exp!r}, actual {act!r} "
                       f"{'ok' if ok else 'MISMATCH'}")
            if not ok and first is None:
                first = Divergence(t, c, exp, act)
    return first, log


def compare_histories(actual: ChannelHistory, expected: ExpectedResult,
                      eps: float = 0.0) -> Verdict:
    """Pass iff the actual history equals some expected group (reals within eps)."""
    best: tuple[Optional[Divergence], list[str]] | None = None
    for group in expected.groups:
        if set(group.streams) != set(actual.streams):
            return Verdict(ERROR, log=(
                f"expected group channels {sorted(group.streams)} != "
                f"actual channels {sorted(actual.streams)}",))
        if group.horizon != actual.horizon:
            return Verdict(ERROR, log=(
                f"expected horizon {group.horizon} != actual horizon {actual.horizon}",))
        first, log = _match_group(actual, group, eps)
        if first is None:
            return Verdict(PASS, log=tuple(log))
        # keep the closest-matching group for the report
        if best is None or first.tick > best[0].tick:
            best = (first, log)
    if best is None:
        return Verdict(PASS, log=("no expected groups",))
    return Verdict(FAIL, first_divergence=best[0], log=tuple(best[1]))


def execute_test(spec: ComponentSpec, tc: TestCase, eps: float = 0.0,
                 check_determinism: bool = False) -> tuple[Optional[ChannelHistory], Verdict]:
    """Run the component on the test-input and compare against the expectation."""
    try:
        actual = run(spec, tc.input, tc.horizon, check_determinism=check_determinism)
    except StreamcheckError as e:
        return None, Verdict(ERROR, log=(f"simulation error: {e}",))
    return actual, compare_histories(actual, tc.expected, eps)


@dataclass(frozen=True)
class SuiteEntry:
    case: str
    verdict: Verdict


@dataclass(frozen=True)
class SuiteReport:
    entries: tuple[SuiteEntry, ...]

    @property
    def passed(self) -> int:
        return sum(1 for e in self.entries if e.verdict.status == PASS)

    @property
    def failed(self) -> int:
        return sum(1 for e in self.entries if e.verdict.status == FAIL)

    @property
    def errors(self) -> int:
        return sum(1 for e in self.entries if e.verdict.status == ERROR)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.errors == 0


def suite_run(spec: ComponentSpec, suite: list[TestCase], eps: float = 0.0,
              check_determinism: bool = False) -> SuiteReport:
    """Execute every case; entries are ordered by case name for determinism."""
    entries = []
    for tc in sorted(suite, key=lambda c: c.name):
        _, verdict = execute_test(spec, tc, eps, check_determinism)
        entries.append(SuiteEntry(tc.name, verdict))
    return SuiteReport(tuple(entries))
