"""Finite-horizon timed streams, typed messages and channel histories.

Streams carry exactly one message per tick; ticks are 1-based. Infinite
streams are represented by finite prefixes up to an explicit horizon, which
is all the downstream semantics ever inspect.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .errors import TickRangeError, TypeMismatchError

BOOL_KIND = "bool"
INT_KIND = "int"
REAL_KIND = "real"
ENUM_KIND = "enum"


@dataclass(frozen=True)
class DataType:
    """One of: boolean, bounded integer, 64-bit real, enumeration."""

    kind: str
    lo: int | None = None
    hi: int | None = None
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in (BOOL_KIND, INT_KIND, REAL_KIND, ENUM_KIND):
            raise TypeMismatchError(f"unknown type kind {self.kind!r}")
        if self.kind == INT_KIND:
            if self.lo is None or self.hi is None or self.lo > self.hi:
                raise TypeMismatchError(f"bad integer bounds [{self.lo}..{self.hi}]")
        if self.kind == ENUM_KIND:
            if not self.labels:
                raise TypeMismatchError("enumeration needs at least one label")
            if len(set(self.labels)) != len(self.labels):
                raise TypeMismatchError("enumeration labels must be distinct")

    def contains(self, value: Any) -> bool:
        if self.kind == BOOL_KIND:
            return isinstance(value, bool)
        if self.kind == INT_KIND:
            return isinstance(value, int) and not isinstance(value, bool) and self.lo <= value <= self.hi
        if self.kind == REAL_KIND:
            return isinstance(value, (int, float)) and not isinstance(value, bool)
        return isinstance(value, str) and value in self.labels

    def check(self, value: Any) -> Any:
        """Validate and normalize a message value; raises TypeMismatchError."""
        if not self.contains(value):
            raise TypeMismatchError(f"value {value!r} is not a valid {self.to_text()}")
        if self.kind == REAL_KIND:
            return float(value)
        return value

    @property
    def is_enumerable(self) -> bool:
        return self.kind != REAL_KIND

    def values(self) -> list[Any]:
        if self.kind == BOOL_KIND:
            return [False, True]
        if self.kind == INT_KIND:
            return list(range(self.lo, self.hi + 1))
        if self.kind == ENUM_KIND:
            return list(self.labels)
        raise TypeMismatchError("real64 is not enumerable")

    def to_text(self) -> str:
        if self.kind == BOOL_KIND:
            return "bool"
        if self.kind == REAL_KIND:
            return "real"
        if self.kind == INT_KIND:
            return f"int[{self.lo}..{self.hi}]"
        return "enum { " + ", ".join(self.labels) + " }"


BOOL = DataType(BOOL_KIND)
REAL = DataType(REAL_KIND)


def bounded_int(lo: int, hi: int) -> DataType:
    return DataType(INT_KIND, lo=lo, hi=hi)


def enumeration(*labels: str) -> DataType:
    return DataType(ENUM_KIND, labels=tuple(labels))


@dataclass(frozen=True)
class TimedStream:
    """A finite prefix of a timed stream: one typed message per tick."""

    elem_type: DataType
    values: tuple[Any, ...]

    @classmethod
    def of(cls, elem_type: DataType, values: Iterable[Any]) -> "TimedStream":
        checked = tuple(elem_type.check(v) for v in values)
        return cls(elem_type, checked)

    @property
    def horizon(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def at(self, t: int) -> Any:
        """Message communicated at tick t (1-based)."""
        if not 1 <= t <= len(self.values):
            raise TickRangeError(t, len(self.values))
        return self.values[t - 1]

    def prefix(self, t: int) -> "TimedStream":
        """The first t messages, as a stream of the same element type."""
        if not 0 <= t <= len(self.values):
            raise TickRangeError(t, len(self.values))
        return TimedStream(self.elem_type, self.values[:t])


@dataclass(frozen=True)
class Channel:
    """A typed, directed channel."""

    name: str
    ctype: DataType
    direction: str = "input"  # "input" | "output"


@dataclass(frozen=True)
class Violation:
    channel: str
    cause: str

    def __str__(self) -> str:
        return f"{self.channel}: {self.cause}"


@dataclass(frozen=True)
class ChannelHistory:
    """An assignment of equally long timed streams to channel names."""

    streams: Mapping[str, TimedStream]
    horizon: int = field(default=-1)

    def __post_init__(self):
        horizons = {s.horizon for s in self.streams.values()}
        if len(horizons) > 1:
            raise TypeMismatchError(f"streams disagree on horizon: {sorted(horizons)}")
        n = horizons.pop() if horizons else 0
        if self.horizon == -1:
            object.__setattr__(self, "horizon", n)
        elif self.streams and self.horizon != n:
            raise TypeMismatchError(f"declared horizon {self.horizon} != stream horizon {n}")

    @classmethod
    def of(cls, streams: Mapping[str, TimedStream], horizon: int | None = None) -> "ChannelHistory":
        return cls(dict(streams), -1 if horizon is None else horizon)

    def channels(self) -> list[str]:
        return sorted(self.streams)

    def at(self, channel: str, t: int) -> Any:
        return self.streams[channel].at(t)

    def tick(self, t: int) -> dict[str, Any]:
        """All channel values at tick t."""
        return {c: s.at(t) for c, s in self.streams.items()}

    def prefix(self, t: int) -> "ChannelHistory":
        return ChannelHistory({c: s.prefix(t) for c, s in self.streams.items()}, t)

    def restrict(self, names: Iterable[str]) -> "ChannelHistory":
        keep = set(names)
        return ChannelHistory({c: s for c, s in self.streams.items() if c in keep})

    def merged(self, other: "ChannelHistory") -> "ChannelHistory":
        overlap = set(self.streams) & set(other.streams)
        if overlap:
            raise TypeMismatchError(f"histories overlap on channels {sorted(overlap)}")
        return ChannelHistory({**self.streams, **other.streams})


def validate_history(h: ChannelHistory, channels: Sequence[Channel]) -> list[Violation]:
    """Check a history against a channel set; returns [] when well formed."""
    violations = []
    declared = {c.name: c for c in channels}
    for c in channels:
        s = h.streams.get(c.name)
        if s is None:
            violations.append(Violation(c.name, "unbound channel"))
        elif s.elem_type != c.ctype:
            violations.append(Violation(
                c.name, f"type mismatch: stream of {s.elem_type.to_text()} bound to {c.ctype.to_text()} channel"))
    for name, s in h.streams.items():
        if name not in declared:
            violations.append(Violation(name, "not a declared channel"))
        elif s.horizon != h.horizon:
            violations.append(Violation(name, f"horizon {s.horizon} != {h.horizon}"))
    return violations
