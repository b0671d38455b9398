"""A small expression language over multivectors.

Grammar (whitespace is insignificant)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '^' | '|') unary)*
    unary := '-' unary | atom
    atom  := number | 'e' digits | name '(' [expr (',' expr)*] ')' | '(' expr ')'

The three products share one precedence level and associate to the left, so
``e1 ^ e2 * e3`` is ``(e1 ^ e2) * e3``.  A number may carry an exponent, which
means ``2e1`` is the number 20; write ``2*e1`` for a scaled generator.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

from .algebra import (
    DEFAULT_TOL,
    Multivector,
    Signature,
    ToleranceConfig,
    _popcount,
    blade_inverse,
    format_plain,
    geometric_product,
    grade_part,
    left_contraction,
    mask_to_indices,
    outer_product,
    pseudoscalar,
    reverse,
)
from .blades import as_blade, factor_blade, is_blade, outermorphism_apply, projector_of_blade
from .errors import GasubError
from .subspace import delta_product, inner_division, join, linear_join, linear_meet, meet


class ParseError(GasubError, ValueError):
    """Syntax error; ``offset`` is the byte offset into the UTF-8 source."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"at byte {offset}: {message}")
        self.message = message
        self.offset = offset


class EvalError(GasubError):
    """An operation failed; the message names the operation."""


# ------------------------------------------------------------ syntax tree

@dataclass(frozen=True)
class Num:
    value: float
    text: str
    offset: int = 0


@dataclass(frozen=True)
class Basis:
    index: int
    offset: int = 0


@dataclass(frozen=True)
class Neg:
    operand: object
    offset: int = 0


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    offset: int = 0


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    offset: int = 0


_OP_NAMES = {"+": "Add", "-": "Sub", "*": "Geometric", "^": "Wedge", "|": "Contract"}

# name -> (min args, max args)
FUNCTIONS = {
    "meet": (2, 2),
    "join": (2, 2),
    "delta": (2, 2),
    "idiv": (2, 2),
    "lmeet": (2, 3),
    "ljoin": (2, 2),
    "grade": (2, 2),
    "rev": (1, 1),
    "inv": (1, 1),
    "proj": (2, 2),
    "pseudo": (0, 0),
    "factor": (1, 1),
    "isblade": (1, 1),
}


def dump(node) -> str:
    """Compact tree rendering, e.g. ``Add(Wedge(e1,e2),3)``."""
    if isinstance(node, Num):
        return node.text
    if isinstance(node, Basis):
        return f"e{node.index}"
    if isinstance(node, Neg):
        return f"Neg({dump(node.operand)})"
    if isinstance(node, BinOp):
        return f"{_OP_NAMES[node.op]}({dump(node.left)},{dump(node.right)})"
    return f"Call({node.name},[{','.join(dump(a) for a in node.args)}])"


# ------------------------------------------------------------ parser

_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op>[-+*^|(),])""",
    re.VERBOSE,
)
_BASIS = re.compile(r"e(\d+)")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    byte = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", byte)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), byte))
        byte += len(m.group().encode("utf-8"))
        i = m.end()
    toks.append(_Tok("end", "", byte))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.tok
        if t.text != text or t.kind != "op":
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ParseError(f"expected {text!r}, found {found}", t.offset)
        return self.take()

    def parse(self):
        if self.tok.kind == "end":
            raise ParseError("empty expression", self.tok.offset)
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            t = self.take()
            node = BinOp(t.text, node, self.term(), t.offset)
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*^|":
            t = self.take()
            node = BinOp(t.text, node, self.unary(), t.offset)
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            t = self.take()
            return Neg(self.unary(), t.offset)
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.take()
            value = float(t.text)
            if not math.isfinite(value):
                raise ParseError(f"number {t.text} out of range", t.offset)
            return Num(value, t.text, t.offset)
        if t.kind == "name":
            self.take()
            m = _BASIS.fullmatch(t.text)
            if m:
                idx = int(m.group(1))
                if idx < 1:
                    raise ParseError("generators are numbered from e1", t.offset)
                return Basis(idx, t.offset)
            return self.call(t)
        if t.kind == "op" and t.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"expected a number, generator, function or '(', found {found}", t.offset)

    def call(self, name: _Tok):
        if name.text not in FUNCTIONS:
            raise ParseError(f"unknown function {name.text!r}", name.offset)
        self.expect("(")
        args = []
        if not (self.tok.kind == "op" and self.tok.text == ")"):
            args.append(self.expr())
            while self.tok.kind == "op" and self.tok.text == ",":
                self.take()
                args.append(self.expr())
        self.expect(")")
        lo, hi = FUNCTIONS[name.text]
        if not lo <= len(args) <= hi:
            want = str(lo) if lo == hi else f"{lo} to {hi}"
            raise ParseError(f"{name.text} takes {want} argument(s), got {len(args)}", name.offset)
        if name.text == "grade":
            _integer_literal(args[1])
        return Call(name.text, tuple(args), name.offset)


def _integer_literal(node) -> int:
    sign = 1
    start = node
    while isinstance(node, Neg):
        sign, node = -sign, node.operand
    if not isinstance(node, Num) or node.value != int(node.value):
        raise ParseError("grade needs an integer literal as its second argument", start.offset)
    return sign * int(node.value)


def parse(text: str):
    """Parse ``text`` into a syntax tree; raises :class:`ParseError`."""
    return _Parser(text).parse()


# ------------------------------------------------------------ evaluation

def _blade(name, x, tol):
    if not is_blade(x, tol):
        raise EvalError(f"{name}: operand {format_plain(x)} is not a blade")
    return as_blade(x, tol)


def evaluate(node, sig: Signature, tol: ToleranceConfig = DEFAULT_TOL):
    """Value of a syntax tree: a multivector, or a list of vectors for ``factor``.

    ``factor`` is only allowed as the outermost call.
    """
    if isinstance(node, Call) and node.name == "factor":
        x = _blade("factor", _eval(node.args[0], sig, tol), tol)
        try:
            return factor_blade(x, tol)
        except (GasubError, ValueError) as exc:
            raise EvalError(f"factor: {exc}") from exc
    return _eval(node, sig, tol)


def _eval(node, sig, tol) -> Multivector:
    if isinstance(node, Num):
        return Multivector.scalar(sig, node.value)
    if isinstance(node, Basis):
        if node.index > sig.n:
            raise EvalError(f"e{node.index} does not exist in {sig}")
        return Multivector.basis(sig, node.index)
    if isinstance(node, Neg):
        return -_eval(node.operand, sig, tol)
    if isinstance(node, BinOp):
        a, b = _eval(node.left, sig, tol), _eval(node.right, sig, tol)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return geometric_product(a, b)
        if node.op == "^":
            return outer_product(a, b)
        return left_contraction(a, b)
    return _call(node, sig, tol)


def _call(node: Call, sig, tol) -> Multivector:
    name = node.name
    if name == "factor":
        raise EvalError("factor returns a list and can only be used as the whole expression")
    if name == "pseudo":
        return pseudoscalar(sig)
    if name == "grade":
        return grade_part(_eval(node.args[0], sig, tol), _integer_literal(node.args[1]))
    args = [_eval(a, sig, tol) for a in node.args]
    try:
        if name == "rev":
            return reverse(args[0])
        if name == "isblade":
            return Multivector.scalar(sig, 1.0 if is_blade(args[0], tol) else 0.0)
        if name == "ljoin":
            return linear_join(*args)
        if name == "lmeet":
            return linear_meet(*args)
        if name == "proj":
            p = projector_of_blade(_blade(name, args[0], tol), tol)
            return outermorphism_apply(p, args[1])
        blades = [_blade(name, x, tol) for x in args]
        if name == "inv":
            return blade_inverse(blades[0], tol)
        op = {"meet": meet, "join": join, "delta": delta_product, "idiv": inner_division}[name]
        return op(blades[0], blades[1], tol)
    except EvalError:
        raise
    except GasubError as exc:
        raise EvalError(f"{name}: {type(exc).__name__}: {exc}") from exc


def evaluate_text(text: str, sig: Signature, tol: ToleranceConfig = DEFAULT_TOL):
    return evaluate(parse(text), sig, tol)


# ------------------------------------------------------------ output

def _sorted_terms(m: Multivector):
    items = zip(m.masks.tolist(), m.coeffs.tolist())
    return sorted(items, key=lambda t: (_popcount(t[0]), mask_to_indices(t[0])))


def to_json_obj(m: Multivector) -> dict:
    s = m.sig
    return {
        "signature": [s.p, s.q, s.r],
        "terms": [{"basis": list(mask_to_indices(k)), "coeff": c} for k, c in _sorted_terms(m)],
    }


def from_json_obj(obj: dict) -> Multivector:
    sig = Signature(*obj["signature"])
    return Multivector(sig, {tuple(t["basis"]): float(t["coeff"]) for t in obj["terms"]})


def format_multivector(m: Multivector, style: str = "plain") -> str:
    """Render as ``plain`` text (parseable back) or ``json``."""
    if style == "plain":
        return format_plain(m)
    if style == "json":
        return json.dumps(to_json_obj(m))
    raise ValueError(f"unknown style {style!r}")


def format_result(value, style: str = "plain") -> str:
    """Multivector, or one line per factor (a JSON array in ``json`` style)."""
    if isinstance(value, Multivector):
        return format_multivector(value, style)
    if style == "json":
        return json.dumps([to_json_obj(v) for v in value])
    return "\n".join(format_plain(v) for v in value)
