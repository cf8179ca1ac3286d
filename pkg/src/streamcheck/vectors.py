"""Reader/writer for `.tv.csv` test-vector files.

Layout per case: an optional `#case <name>` marker, an optional `#params`
table, one `#inputs` table, and one or more `#expected` tables (alternative
output groups). Each table is a CSV header of channel names followed by one
row per tick. Booleans are `true`/`false`, enumeration cells are bare labels,
reals use decimal-point notation.
"""

from __future__ import annotations

import csv
import difflib
import io
from dataclasses import dataclass
from typing import Any

from .components import SyntacticInterface
from .errors import Diagnostic, ModelFormatError
from .streams import (BOOL_KIND, ChannelHistory, DataType, ENUM_KIND, INT_KIND,
                      REAL_KIND, TimedStream)
from .testcases import ExpectedResult, TestCase


class VectorFormatError(ModelFormatError):
    pass


def _fail(line: int, column: int, message: str):
    raise VectorFormatError([Diagnostic(line, column, message)])


def _parse_cell(cell: str, dtype: DataType, line: int, column: int) -> Any:
    text = cell.strip()
    if dtype.kind == BOOL_KIND:
        if text == "true":
            return True
        if text == "false":
            return False
        _fail(line, column, f"expected true/false, found {text!r}")
    if dtype.kind == INT_KIND:
        try:
            value = int(text)
        except ValueError:
            _fail(line, column, f"expected an integer, found {text!r}")
        if not dtype.lo <= value <= dtype.hi:
            _fail(line, column, f"{value} outside [{dtype.lo}..{dtype.hi}]")
        return value
    if dtype.kind == REAL_KIND:
        try:
            return float(text)
        except ValueError:
            _fail(line, column, f"expected a real number, found {text!r}")
    if text in dtype.labels:
        return text
    hint = difflib.get_close_matches(text, dtype.labels, n=1)
    suggestion = f"; did you mean {hint[0]!r}?" if hint else ""
    _fail(line, column, f"unknown enumeration label {text!r}{suggestion}")


@dataclass
class _Section:
    kind: str  # case | params | inputs | expected
    arg: str
    line: int
    rows: list[tuple[int, list[str]]]


def _split_sections(text: str) -> list[_Section]:
    sections: list[_Section] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 1)
            kind = parts[0] if parts else ""
            if kind not in ("case", "params", "inputs", "expected"):
                _fail(lineno, 1, f"unknown section marker {line!r}")
            sections.append(_Section(kind, parts[1].strip() if len(parts) > 1 else "",
                                     lineno, []))
            continue
        if not sections:
            _fail(lineno, 1, "data before any section marker")
        cells = next(csv.reader(io.StringIO(raw)))
        sections[-1].rows.append((lineno, cells))
    return sections


def _read_table(section: _Section, known: dict[str, DataType],
                what: str) -> tuple[list[str], list[tuple[int, list[Any]]]]:
    if not section.rows:
        _fail(section.line, 1, f"empty #{section.kind} table")
    header_line, header = section.rows[0]
    names = [h.strip() for h in header]
    for col, name in enumerate(names, start=1):
        if name not in known:
            hint = difflib.get_close_matches(name, list(known), n=1)
            suggestion = f"; did you mean {hint[0]!r}?" if hint else ""
            _fail(header_line, col, f"unknown {what} {name!r}{suggestion}")
    if len(set(names)) != len(names):
        _fail(header_line, 1, f"duplicate columns in #{section.kind} header")
    rows: list[tuple[int, list[Any]]] = []
    for lineno, cells in section.rows[1:]:
        if len(cells) != len(names):
            _fail(lineno, 1, f"ragged row: {len(cells)} cells for {len(names)} columns")
        rows.append((lineno, [_parse_cell(cell, known[name], lineno, col)
                              for col, (name, cell) in enumerate(zip(names, cells), start=1)]))
    return names, rows


def _table_history(names: list[str], rows: list[tuple[int, list[Any]]],
                   types: dict[str, DataType]) -> ChannelHistory:
    columns: dict[str, list[Any]] = {n: [] for n in names}
    for _, cells in rows:
        for n, v in zip(names, cells):
            columns[n].append(v)
    return ChannelHistory({n: TimedStream.of(types[n], columns[n]) for n in names},
                          len(rows))


def parse_testcases(text: str, iface: SyntacticInterface,
                    param_types: dict[str, DataType] | None = None) -> list[TestCase]:
    """Parse all test-cases in a vector file, typed against an interface."""
    in_types = {c.name: c.ctype for c in iface.inputs}
    out_types = {c.name: c.ctype for c in iface.outputs}
    param_types = param_types or {}
    sections = _split_sections(text)
    cases: list[TestCase] = []
    i = 0
    counter = 0
    while i < len(sections):
        name = None
        if sections[i].kind == "case":
            name = sections[i].arg or None
            if sections[i].rows:
                _fail(sections[i].rows[0][0], 1, "data rows directly under #case")
            i += 1
        counter += 1
        name = name or f"case{counter}"
        params: dict[str, TimedStream] = {}
        if i < len(sections) and sections[i].kind == "params":
            pnames, prows = _read_table(sections[i], param_types, "parameter")
            phist = _table_history(pnames, prows, param_types)
            params = dict(phist.streams)
            i += 1
        if i >= len(sections) or sections[i].kind != "inputs":
            line = sections[i].line if i < len(sections) else sections[i - 1].line
            _fail(line, 1, f"expected #inputs for case {name!r}")
        names, rows = _read_table(sections[i], in_types, "channel")
        missing = sorted(set(in_types) - set(names))
        if missing:
            _fail(sections[i].line, 1, f"missing input channels: {missing}")
        inputs = _table_history(names, rows, in_types)
        i += 1
        groups = []
        while i < len(sections) and sections[i].kind == "expected":
            enames, erows = _read_table(sections[i], out_types, "channel")
            emissing = sorted(set(out_types) - set(enames))
            if emissing:
                _fail(sections[i].line, 1, f"missing output channels: {emissing}")
            if len(erows) != inputs.horizon:
                _fail(sections[i].line, 1,
                      f"expected table has {len(erows)} ticks, inputs have {inputs.horizon}")
            groups.append(_table_history(enames, erows, out_types))
            i += 1
        # params, when per-tick streams, must match the horizon
        for pname, stream in params.items():
            if stream.horizon not in (1, inputs.horizon):
                _fail(sections[0].line, 1,
                      f"parameter {pname!r} has {stream.horizon} ticks, inputs have {inputs.horizon}")
            if stream.horizon == 1 and inputs.horizon != 1:
                params[pname] = TimedStream.of(stream.elem_type,
                                               list(stream.values) * inputs.horizon)
        cases.append(TestCase(name, inputs, ExpectedResult(tuple(groups)), params))
    return cases


def _cell_text(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_table(out: list[str], marker: str, hist: ChannelHistory) -> None:
    names = sorted(hist.streams)
    out.append(marker)
    out.append(",".join(names))
    for t in range(1, hist.horizon + 1):
        out.append(",".join(_cell_text(hist.at(n, t)) for n in names))


def serialize_testcases(cases: list[TestCase]) -> str:
    """Render cases so that parsing the output reproduces them."""
    out: list[str] = []
    for tc in cases:
        out.append(f"#case {tc.name}")
        if tc.params:
            _write_table(out, "#params", ChannelHistory(dict(tc.params)))
        _write_table(out, "#inputs", tc.input)
        for group in tc.expected.groups:
            _write_table(out, "#expected", group)
    return "\n".join(out) + ("\n" if out else "")
