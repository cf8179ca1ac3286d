"""Command-line driver.

Exit codes: 0 success / all-pass, 1 semantic failure (test fail,
non-correspondence, Galois counterexample, causality counterexample),
2 usage or parse error, 3 runtime simulation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from typing import Any

from . import __version__
from .abstraction import (ConcretizationWarning, RelationSpec, check_correspondence,
                          check_finv_in_g, concretize, verify_galois)
from .components import (CausalityCounterexample, check_causality, compose_check,
                         CompositeSpec, run)
from .dsl import ModelDocument, ParseResult, load_model, parse_model
from .errors import (CapsExceededError, ModelFormatError, SimulationError,
                     StreamcheckError)
from .streams import ChannelHistory
from .testcases import FAIL, PASS, suite_run
from .vectors import parse_testcases, serialize_testcases

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


def _color_enabled() -> bool:
    value = os.environ.get("STREAMCHECK_COLOR")
    if value is None:
        return sys.stdout.isatty()
    return value not in ("0", "false", "no", "")


def _paint(text: str, code: str) -> str:
    if _color_enabled():
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _green(text: str) -> str:
    return _paint(text, "32")


def _red(text: str) -> str:
    return _paint(text, "31")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _load_documents(paths: list[str]) -> ModelDocument:
    doc = ModelDocument()
    for path in paths:
        try:
            doc.merge(load_model(path, base=doc))
        except FileNotFoundError:
            raise CliError(f"model file not found: {path}")
        except ModelFormatError as e:
            msgs = "\n".join(f"{path}:{d}" for d in e.diagnostics)
            raise CliError(f"model errors:\n{msgs}")
    return doc


def _get(doc_dict: dict, name: str | None, what: str):
    if name is None:
        raise CliError(f"missing --{what} name")
    value = doc_dict.get(name)
    if value is None:
        raise CliError(f"unknown {what} {name!r} (known: {sorted(doc_dict)})")
    return value


def _read_vectors(path: str, iface, param_types=None):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_testcases(fh.read(), iface, param_types)
    except FileNotFoundError:
        raise CliError(f"vector file not found: {path}")
    except ModelFormatError as e:
        raise CliError(f"{path}: " + "; ".join(map(str, e.diagnostics)))


def _emit(args, payload: dict[str, Any], human_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, default=str))
    else:
        for line in human_lines:
            print(line)


def _render_table(headers: list[str], rows: list[list[Any]]) -> list[str]:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return lines


# ---------------------------------------------------------------------------
# Subcommands


def cmd_simulate(args) -> int:
    doc = _load_documents(args.model)
    spec = _get(doc.components, args.component, "component")
    if not args.vectors:
        raise CliError("simulate needs --vectors")
    cases = _read_vectors(args.vectors[0], spec.interface)
    if not cases:
        raise CliError("vector file holds no test-cases")
    exit_code = EXIT_OK
    lines: list[str] = []
    payload_cases = []
    for tc in cases:
        n = args.ticks if args.ticks is not None else tc.horizon
        try:
            out = run(spec, tc.input, n, check_determinism=args.check_determinism)
        except StreamcheckError as e:
            raise CliError(f"simulation failed in case {tc.name!r}: {e}", EXIT_RUNTIME)
        in_names = sorted(tc.input.streams)
        out_names = sorted(out.streams)
        rows = [[t] + [tc.input.at(c, t) for c in in_names] + [out.at(c, t) for c in out_names]
                for t in range(1, n + 1)]
        lines.append(f"case {tc.name} ({spec.name}, {n} ticks)")
        lines.extend(_render_table(["tick"] + in_names + out_names, rows))
        lines.append("")
        payload_cases.append({
            "case": tc.name, "ticks": n,
            "inputs": {c: list(tc.input.streams[c].values[:n]) for c in in_names},
            "outputs": {c: list(out.streams[c].values) for c in out_names},
        })
    _emit(args, {"command": "simulate", "component": spec.name, "cases": payload_cases}, lines)
    return exit_code


def cmd_test(args) -> int:
    doc = _load_documents(args.model)
    spec = _get(doc.components, args.component, "component")
    cases = []
    for path in args.vectors:
        cases.extend(_read_vectors(path, spec.interface))
    report = suite_run(spec, cases, eps=args.eps, check_determinism=args.check_determinism)
    lines = []
    payload = []
    for entry in report.entries:
        v = entry.verdict
        mark = _green("PASS") if v.status == PASS else _red(v.status.upper())
        detail = f" ({v.first_divergence})" if v.first_divergence else ""
        if v.status == "error":
            detail = f" ({'; '.join(v.log)})"
        lines.append(f"{mark}  {entry.case}{detail}")
        payload.append({"case": entry.case, "status": v.status,
                        "first_divergence": str(v.first_divergence) if v.first_divergence else None})
    lines.append(f"{report.passed} passed, {report.failed} failed, {report.errors} errors")
    _emit(args, {"command": "test", "component": spec.name, "cases": payload,
                 "passed": report.passed, "failed": report.failed, "errors": report.errors},
          lines)
    if report.errors:
        return EXIT_RUNTIME
    return EXIT_OK if report.ok else EXIT_FAILURE


def _refinement_parts(doc: ModelDocument, name: str):
    ref = _get(doc.refinements, name, "refinement")
    parts = {}
    parts["abstract"] = doc.components.get(ref.abstract) if ref.abstract else None
    parts["concrete"] = doc.components.get(ref.concrete) if ref.concrete else None
    parts["ri"] = doc.relations.get(ref.ri) if ref.ri else None
    parts["ro"] = doc.relations.get(ref.ro) if ref.ro else None
    parts["galois"] = doc.galois.get(ref.galois) if ref.galois else None
    parts["concretizer"] = doc.concretizers.get(ref.concretizer) if ref.concretizer else None
    return ref, parts


def cmd_concretize(args) -> int:
    doc = _load_documents(args.model)
    ref, parts = _refinement_parts(doc, args.refinement)
    conc = parts["concretizer"]
    if conc is None:
        raise CliError(f"refinement {ref.name!r} names no concretizer")
    abstract = parts["abstract"]
    if abstract is None:
        raise CliError(f"refinement {ref.name!r} names no abstract component")
    if not args.vectors:
        raise CliError("concretize needs --vectors with abstract cases")
    param_types = {p.name: p.dtype for p in conc.params}
    cases = _read_vectors(args.vectors[0], abstract.interface, param_types)
    cli_params = {}
    for item in args.param or []:
        if "=" not in item:
            raise CliError(f"--param must be name=value, got {item!r}")
        pname, _, raw = item.partition("=")
        dtype = param_types.get(pname)
        if dtype is None:
            raise CliError(f"unknown parameter {pname!r} (declared: {sorted(param_types)})")
        from .vectors import _parse_cell
        cli_params[pname] = _parse_cell(raw, dtype, 0, 0)
    out_cases = []
    warned = []
    for tc in cases:
        bindings: dict[str, Any] = dict(tc.params)
        bindings.update(cli_params)
        missing = sorted(set(param_types) - set(bindings))
        if missing:
            raise CliError(f"case {tc.name!r}: unbound parameters {missing}")
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", ConcretizationWarning)
                concrete_input = concretize(conc, bindings, tc.input, ri=parts["ri"])
            for w in caught:
                warned.append(f"case {tc.name!r}: {w.message}")
        except StreamcheckError as e:
            raise CliError(f"case {tc.name!r}: {e}", EXIT_RUNTIME)
        from .testcases import ExpectedResult, TestCase
        out_cases.append(TestCase(tc.name, concrete_input, ExpectedResult(())))
    text = serialize_testcases(out_cases)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        lines = [f"wrote {len(out_cases)} concrete case(s) to {args.out}"]
    else:
        lines = [text]
    lines.extend(_red("warning: " + w) for w in warned)
    _emit(args, {"command": "concretize", "refinement": ref.name,
                 "cases": [tc.name for tc in out_cases], "warnings": warned,
                 "output": args.out or text}, lines)
    return EXIT_OK


def cmd_check(args) -> int:
    doc = _load_documents(args.model)
    ref, parts = _refinement_parts(doc, args.refinement)
    for key in ("abstract", "concrete", "ri", "ro"):
        if parts[key] is None:
            raise CliError(f"refinement {ref.name!r} names no {key}")
    if len(args.vectors) != 2:
        raise CliError("check needs --vectors <abstract.tv.csv> --vectors <concrete.tv.csv>")
    abs_cases = _read_vectors(args.vectors[0], parts["abstract"].interface)
    conc_cases = _read_vectors(args.vectors[1], parts["concrete"].interface)
    if len(abs_cases) != len(conc_cases):
        raise CliError(f"case count mismatch: {len(abs_cases)} abstract vs {len(conc_cases)} concrete")
    all_ok = True
    lines = []
    payload = []
    for ta, tc in zip(abs_cases, conc_cases):
        result = check_correspondence(parts["abstract"], parts["concrete"],
                                      parts["ri"], parts["ro"], ta.input, tc.input)
        if result.status == "error":
            raise CliError(f"pair ({ta.name}, {tc.name}): " + "; ".join(result.diagnostics),
                           EXIT_RUNTIME)
        ok = result.corresponding
        all_ok = all_ok and ok
        mark = _green("CORRESPONDING") if ok else _red("NOT CORRESPONDING")
        lines.append(f"{mark}  ({ta.name}, {tc.name})  RI={result.ri_holds} RO={result.ro_holds}")
        if not result.ri_holds:
            lines.append(f"  warning: vacuous pass, RI fails at ticks "
                         f"{[i + 1 for i, b in enumerate(result.ri_stream) if not b]}")
        if not ok:
            lines.append(f"  RO false at ticks "
                         f"{[i + 1 for i, b in enumerate(result.ro_stream) if not b]}")
        payload.append({"abstract_case": ta.name, "concrete_case": tc.name,
                        "ri_holds": result.ri_holds, "ro_holds": result.ro_holds,
                        "corresponding": ok,
                        "ri_stream": list(result.ri_stream),
                        "ro_stream": list(result.ro_stream)})
    _emit(args, {"command": "check", "refinement": ref.name, "pairs": payload,
                 "all_corresponding": all_ok}, lines)
    return EXIT_OK if all_ok else EXIT_FAILURE


def cmd_verify_galois(args) -> int:
    doc = _load_documents(args.model)
    if args.galois:
        gal = _get(doc.galois, args.galois, "galois")
    else:
        ref, parts = _refinement_parts(doc, args.refinement)
        gal = parts["galois"]
        if gal is None:
            raise CliError(f"refinement {ref.name!r} names no galois connection")
    try:
        cex = verify_galois(gal, element_cap=args.caps, orientation=args.orientation)
    except CapsExceededError as e:
        raise CliError(f"refusing enumeration: {e}")
    if cex is None:
        _emit(args, {"command": "verify-galois", "galois": gal.name, "ok": True},
              [_green("OK") + f"  {gal.name}: connection law holds on the bounded universe"])
        return EXIT_OK
    _emit(args, {"command": "verify-galois", "galois": gal.name, "ok": False,
                 "counterexample": str(cex)},
          [_red("COUNTEREXAMPLE") + f"  {gal.name}: {cex}"])
    return EXIT_FAILURE


def cmd_causality(args) -> int:
    doc = _load_documents(args.model)
    spec = _get(doc.components, args.component, "component")
    if isinstance(spec, CompositeSpec):
        problems = compose_check(spec)
        if problems:
            raise CliError(f"composite {spec.name!r} is ill-formed: " + "; ".join(problems))
    cex = check_causality(spec, budget=args.budget, horizon=args.ticks or 3,
                          mode=args.mode, seed=args.seed)
    if cex is None:
        _emit(args, {"command": "causality", "component": spec.name, "ok": True,
                     "seed": args.seed},
              [_green("OK") + f"  {spec.name}: no causality violation found"])
        return EXIT_OK
    _emit(args, {"command": "causality", "component": spec.name, "ok": False,
                 "seed": args.seed, "tick": cex.tick},
          [_red("COUNTEREXAMPLE") + f"  {spec.name}: {cex}"])
    return EXIT_FAILURE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamcheck",
        description="Simulate timed-stream component models, run test-cases, "
                    "concretize abstract cases, and check refinements.")
    parser.add_argument("--version", action="version", version=f"streamcheck {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, vectors=False):
        p.add_argument("--model", action="append", required=True,
                       help="model file (.scm.txt); repeatable")
        if vectors:
            p.add_argument("--vectors", action="append", default=[],
                           help="test-vector file (.tv.csv); repeatable")
        p.add_argument("--eps", type=float, default=0.0,
                       help="absolute tolerance for real64 comparisons")
        p.add_argument("--format", choices=("human", "json"), default="human")
        p.add_argument("--check-determinism", action="store_true",
                       help="error when two transitions are enabled at once")

    p = sub.add_parser("simulate", help="run a component on input vectors")
    common(p, vectors=True)
    p.add_argument("--component", required=True)
    p.add_argument("--ticks", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("test", help="execute test-cases and report verdicts")
    common(p, vectors=True)
    p.add_argument("--component", required=True)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("concretize", help="turn abstract test-cases into concrete ones")
    common(p, vectors=True)
    p.add_argument("--refinement", required=True)
    p.add_argument("--param", action="append", help="parameter binding name=value; repeatable")
    p.add_argument("--out", help="output .tv.csv path (default: stdout)")
    p.set_defaults(func=cmd_concretize)

    p = sub.add_parser("check", help="check abstract/concrete correspondence (RI implies RO)")
    common(p, vectors=True)
    p.add_argument("--refinement", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-galois", help="brute-force the Galois connection law")
    common(p)
    p.add_argument("--refinement")
    p.add_argument("--galois")
    p.add_argument("--caps", type=int, default=12, help="max universe elements per side")
    p.add_argument("--orientation", choices=("standard", "literal"), default="standard")
    p.set_defaults(func=cmd_verify_galois)

    p = sub.add_parser("causality", help="search for causality violations")
    common(p)
    p.add_argument("--component", required=True)
    p.add_argument("--ticks", type=int, default=3)
    p.add_argument("--budget", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("strict", "weak"), default=None)
    p.set_defaults(func=cmd_causality)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors already; normalize other exits
        return int(e.code) if e.code else 0
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except SimulationError as e:
        print(f"simulation error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except StreamcheckError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
