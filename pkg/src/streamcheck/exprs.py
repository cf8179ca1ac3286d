"""Guard/assignment expression language.

Boolean connectives, comparisons, arithmetic (+, -, *, integer division on
integers), and the builtins min, max, abs, floor — enough for every formula
the fixtures need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping, Union

from .errors import EvaluationError
from .lexing import EOF, IDENT, INT, PUNCT, REAL, Cursor, tokenize

Expr = Union["Lit", "Name", "Unary", "Binary", "Call"]


@dataclass(frozen=True)
class Lit:
    value: Any


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Unary:
    op: str  # "-" | "not"
    operand: Expr


@dataclass(frozen=True)
class Binary:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple[Expr, ...]


TRUE = Lit(True)

FUNCTIONS = ("min", "max", "abs", "floor")

_CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")


def free_names(expr: Expr) -> set[str]:
    if isinstance(expr, Lit):
        return set()
    if isinstance(expr, Name):
        return {expr.ident}
    if isinstance(expr, Unary):
        return free_names(expr.operand)
    if isinstance(expr, Binary):
        return free_names(expr.left) | free_names(expr.right)
    return set().union(*(free_names(a) for a in expr.args)) if expr.args else set()


def _num(value: Any, what: str) -> Any:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise EvaluationError(f"{what} needs a numeric operand, got {value!r}")
    return value


def _bool(value: Any, what: str) -> bool:
    if not isinstance(value, bool):
        raise EvaluationError(f"{what} needs a boolean operand, got {value!r}")
    return value


def evaluate(expr: Expr, env: Mapping[str, Any]) -> Any:
    """Evaluate an expression in a name environment; raises EvaluationError."""
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Name):
        try:
            return env[expr.ident]
        except KeyError:
            raise EvaluationError(f"unknown name {expr.ident!r}") from None
    if isinstance(expr, Unary):
        if expr.op == "not":
            return not _bool(evaluate(expr.operand, env), "'not'")
        return -_num(evaluate(expr.operand, env), "unary '-'")
    if isinstance(expr, Binary):
        op = expr.op
        if op == "or":
            return _bool(evaluate(expr.left, env), "'or'") or _bool(evaluate(expr.right, env), "'or'")
        if op == "and":
            return _bool(evaluate(expr.left, env), "'and'") and _bool(evaluate(expr.right, env), "'and'")
        lhs = evaluate(expr.left, env)
        rhs = evaluate(expr.right, env)
        if op in ("==", "!="):
            if _comparable(lhs, rhs):
                return (lhs == rhs) if op == "==" else (lhs != rhs)
            raise EvaluationError(f"cannot compare {lhs!r} with {rhs!r}")
        if op in ("<", "<=", ">", ">="):
            lhs, rhs = _num(lhs, op), _num(rhs, op)
            return {"<": lhs < rhs, "<=": lhs <= rhs, ">": lhs > rhs, ">=": lhs >= rhs}[op]
        lhs, rhs = _num(lhs, op), _num(rhs, op)
        if op == "+":
            return lhs + rhs
        if op == "-":
            return lhs - rhs
        if op == "*":
            return lhs * rhs
        if op == "/":
            if rhs == 0:
                raise EvaluationError("division by zero")
            if isinstance(lhs, int) and isinstance(rhs, int):
                return lhs // rhs
            return lhs / rhs
        raise EvaluationError(f"unknown operator {op!r}")
    return _call(expr, env)


def _comparable(lhs: Any, rhs: Any) -> bool:
    if isinstance(lhs, bool) or isinstance(rhs, bool):
        return isinstance(lhs, bool) and isinstance(rhs, bool)
    if isinstance(lhs, str) or isinstance(rhs, str):
        return isinstance(lhs, str) and isinstance(rhs, str)
    return isinstance(lhs, (int, float)) and isinstance(rhs, (int, float))


def _call(expr: Call, env: Mapping[str, Any]) -> Any:
    args = [evaluate(a, env) for a in expr.args]
    if expr.func in ("min", "max"):
        if len(args) < 2:
            raise EvaluationError(f"{expr.func}() needs at least two arguments")
        vals = [_num(a, expr.func) for a in args]
        return min(vals) if expr.func == "min" else max(vals)
    if expr.func == "abs":
        if len(args) != 1:
            raise EvaluationError("abs() takes one argument")
        return abs(_num(args[0], "abs"))
    if expr.func == "floor":
        if len(args) != 1:
            raise EvaluationError("floor() takes one argument")
        return math.floor(_num(args[0], "floor"))
    raise EvaluationError(f"unknown function {expr.func!r}")


class ExprSyntaxError(EvaluationError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


def parse_expr(cursor: Cursor) -> Expr:
    """Parse an expression off a token cursor (stops at the first non-operator)."""
    return _parse_or(cursor)


def parse_expression(text: str) -> Expr:
    tokens, diags = tokenize(text)
    if diags:
        d = diags[0]
        raise ExprSyntaxError(d.message, d.line, d.column)
    cursor = Cursor(tokens)
    expr = _parse_or(cursor)
    tok = cursor.peek()
    if tok.kind != EOF:
        raise ExprSyntaxError(f"unexpected trailing {tok.value!r}", tok.line, tok.column)
    return expr


def _parse_or(c: Cursor) -> Expr:
    node = _parse_and(c)
    while c.at_word("or"):
        c.advance()
        node = Binary("or", node, _parse_and(c))
    return node


def _parse_and(c: Cursor) -> Expr:
    node = _parse_not(c)
    while c.at_word("and"):
        c.advance()
        node = Binary("and", node, _parse_not(c))
    return node


def _parse_not(c: Cursor) -> Expr:
    if c.take_word("not"):
        return Unary("not", _parse_not(c))
    return _parse_cmp(c)


def _parse_cmp(c: Cursor) -> Expr:
    node = _parse_add(c)
    t = c.peek()
    if t.kind == PUNCT and t.value in _CMP_OPS:
        c.advance()
        node = Binary(t.value, node, _parse_add(c))
    return node


def _parse_add(c: Cursor) -> Expr:
    node = _parse_mul(c)
    while True:
        t = c.peek()
        if t.kind == PUNCT and t.value in ("+", "-"):
            c.advance()
            node = Binary(t.value, node, _parse_mul(c))
        else:
            return node


def _parse_mul(c: Cursor) -> Expr:
    node = _parse_unary(c)
    while True:
        t = c.peek()
        if t.kind == PUNCT and t.value in ("*", "/"):
            c.advance()
            node = Binary(t.value, node, _parse_unary(c))
        else:
            return node


def _parse_unary(c: Cursor) -> Expr:
    if c.at_punct("-"):
        tok = c.advance()
        operand = _parse_unary(c)
        if isinstance(operand, Lit) and not isinstance(operand.value, bool):
            return Lit(-operand.value)
        return Unary("-", operand)
    return _parse_primary(c)


def _parse_primary(c: Cursor) -> Expr:
    tok = c.peek()
    if tok.kind == INT:
        c.advance()
        return Lit(int(tok.value))
    if tok.kind == REAL:
        c.advance()
        return Lit(float(tok.value))
    if tok.kind == IDENT:
        c.advance()
        if tok.value == "true":
            return Lit(True)
        if tok.value == "false":
            return Lit(False)
        if c.at_punct("("):
            c.advance()
            args = []
            if not c.at_punct(")"):
                args.append(_parse_or(c))
                while c.take_punct(","):
                    args.append(_parse_or(c))
            if not c.take_punct(")"):
                t = c.peek()
                raise ExprSyntaxError("expected ')'", t.line, t.column)
            return Call(tok.value, tuple(args))
        return Name(tok.value)
    if c.take_punct("("):
        node = _parse_or(c)
        if not c.take_punct(")"):
            t = c.peek()
            raise ExprSyntaxError("expected ')'", t.line, t.column)
        return node
    raise ExprSyntaxError(f"expected expression, found {tok.value or 'end of input'!r}",
                          tok.line, tok.column)


_PRECEDENCE = {"or": 1, "and": 2, "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
               "+": 5, "-": 5, "*": 6, "/": 6}


def to_text(expr: Expr, parent_prec: int = 0) -> str:
    """Render an expression; parse(to_text(e)) is structurally e."""
    if isinstance(expr, Lit):
        v = expr.value
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            text = repr(v)
            return f"({text})" if v < 0 and parent_prec >= 5 else text
        if isinstance(v, int):
            return f"({v})" if v < 0 and parent_prec >= 5 else str(v)
        return str(v)
    if isinstance(expr, Name):
        return expr.ident
    if isinstance(expr, Unary):
        inner = to_text(expr.operand, 7)
        text = f"not {inner}" if expr.op == "not" else f"-{inner}"
        return f"({text})" if parent_prec >= 4 else text
    if isinstance(expr, Call):
        return f"{expr.func}(" + ", ".join(to_text(a) for a in expr.args) + ")"
    prec = _PRECEDENCE[expr.op]
    # comparisons do not chain: parenthesize both sides at equal precedence
    lhs = to_text(expr.left, prec if expr.op in _CMP_OPS else prec - 1)
    rhs = to_text(expr.right, prec)
    text = f"{lhs} {expr.op} {rhs}"
    return f"({text})" if prec <= parent_prec else text
