"""Concrete syntax for formulas.

Grammar (whitespace-insensitive)::

    formula := or
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | quant | atom | "(" formula ")"
    quant   := ("ex" | "all") "*"? var unary          ("*" marks a weak hint)
    atom    := NAME "(" term ("," term)* ")" | term ("=" | "!=" | "<") term
    term    := var | "0" | "s" "(" term ")"
    var     := [a-z][a-zA-Z0-9_]*

"ex" and "all" are keywords; "s" and "0" build successor terms and are
only legal under arithmetic signatures, as is the infix "<".  A trailing
"_<digits>" group in a variable denotes its freshness serial.
"""

import re

from .errors import ArityError, ParseError, RenderLimitError
from .syntax import (And, Atom, BigOr, Eq, Exists, Forall, Formula, Neq, Not,
                     Or, Signature, Succ, Term, Var, VarName, Zero, ZERO,
                     ARITHMETIC_RELATIONS)

_TOKEN_RE = re.compile(r"\s*(!=|[A-Za-z][A-Za-z0-9_]*|0|[()=,|&!*<])")
_VAR_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
_SERIAL_RE = re.compile(r"\A(.*?)_([0-9]+)\Z")

KEYWORDS = {"ex", "all"}


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


def parse_varname(token: str) -> VarName:
    m = _SERIAL_RE.match(token)
    if m and _VAR_RE.match(m.group(1)):
        return VarName(m.group(1), int(m.group(2)))
    return VarName(token, 0)


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.tokens = _tokenize(text)
        self.sig = sig
        self.i = 0

    def peek(self, ahead=0):
        j = self.i + ahead
        return self.tokens[j][0] if j < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.tokens)

    def take(self, expected=None):
        if self.i >= len(self.tokens):
            raise ParseError(f"unexpected end of input, expected {expected!r}", self.pos())
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok, pos

    # -- formula levels ----------------------------------------------------

    def formula(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek() == "|":
            self.take("|")
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.peek() == "&":
            self.take("&")
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.pos())
        if tok == "!":
            self.take("!")
            return Not(self.unary())
        if tok == "(":
            self.take("(")
            f = self.formula()
            self.take(")")
            return f
        if tok in KEYWORDS:
            return self.quantifier()
        return self.atom()

    def quantifier(self) -> Formula:
        kind, _ = self.take()
        weak = False
        if self.peek() == "*":
            self.take("*")
            weak = True
        name_tok, pos = self.take()
        if not _VAR_RE.match(name_tok) or name_tok in KEYWORDS:
            raise ParseError(f"expected a variable, found {name_tok!r}", pos)
        name = parse_varname(name_tok)
        body = self.unary()
        cls = Exists if kind == "ex" else Forall
        return cls(name, body, weak)

    def atom(self) -> Formula:
        tok = self.peek()
        pos = self.pos()
        # relation atom: NAME "(" ... — except "s(", which starts a term
        if (tok is not None and re.match(r"[A-Za-z]", tok) and tok not in KEYWORDS
                and tok != "s" and self.peek(1) == "("):
            return self.relation_atom()
        left = self.term()
        op, oppos = self.take()
        if op == "=":
            return Eq(left, self.term())
        if op == "!=":
            return Neq(left, self.term())
        if op == "<":
            if not self.sig.arithmetic:
                raise ParseError("'<' requires an arithmetic signature", oppos)
            return Atom("<", (left, self.term()))
        raise ParseError(f"expected '=', '!=' or '<', found {op!r}", oppos)

    def relation_atom(self) -> Formula:
        name, pos = self.take()
        arity = self.sig.arity(name)
        if arity is None:
            raise ParseError(f"unknown relation symbol {name!r}", pos)
        self.take("(")
        terms = [self.term()]
        while self.peek() == ",":
            self.take(",")
            terms.append(self.term())
        self.take(")")
        if len(terms) != arity:
            raise ArityError(
                f"relation {name!r} has arity {arity}, got {len(terms)} arguments")
        return Atom(name, tuple(terms))

    def term(self) -> Term:
        tok, pos = self.take()
        if tok == "0":
            if not self.sig.arithmetic:
                raise ParseError("'0' requires an arithmetic signature", pos)
            return ZERO
        if tok == "s" and self.peek() == "(":
            if not self.sig.arithmetic:
                raise ParseError("'s(...)' requires an arithmetic signature", pos)
            self.take("(")
            inner = self.term()
            self.take(")")
            return Succ(inner)
        if _VAR_RE.match(tok) and tok not in KEYWORDS:
            return Var(parse_varname(tok))
        raise ParseError(f"expected a term, found {tok!r}", pos)


def parse_formula(text: str, sig: Signature) -> Formula:
    p = _Parser(text, sig)
    f = p.formula()
    if p.i < len(p.tokens):
        raise ParseError(f"trailing input {p.peek()!r}", p.pos())
    return f


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

DEFAULT_RENDER_LIMIT = 64


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name.render()
    if isinstance(t, Zero):
        return "0"
    return f"s({render_term(t.inner)})"


def render_formula(f: Formula, render_limit: int = DEFAULT_RENDER_LIMIT) -> str:
    """Deterministic text for a formula; parse_formula(render_formula(f))
    is structurally f for BigOr-free input."""
    return _render_or(f, render_limit)


def _render_or(f: Formula, lim: int) -> str:
    if isinstance(f, Or):
        return " | ".join(_render_and(c, lim) for c in f.children)
    if isinstance(f, BigOr):
        if f.family.size > lim:
            raise RenderLimitError(
                f"symbolic disjunction over {f.family.size} indices exceeds the render limit")
        parts = [_render_and(f.gen(i), lim) for i in f.family]
        if not parts:
            raise RenderLimitError("empty symbolic disjunction cannot be rendered")
        return " | ".join(parts)
    return _render_and(f, lim)


def _render_and(f: Formula, lim: int) -> str:
    if isinstance(f, And):
        return " & ".join(_render_unary(c, lim) for c in f.children)
    if isinstance(f, (Or, BigOr)):
        return "(" + _render_or(f, lim) + ")"
    return _render_unary(f, lim)


def _render_unary(f: Formula, lim: int) -> str:
    if isinstance(f, (And, Or, BigOr)):
        return "(" + _render_or(f, lim) + ")"
    if isinstance(f, Not):
        if isinstance(f.body, (Atom, Not)) and not _is_infix_atom(f.body):
            return "!" + _render_unary(f.body, lim)
        return "!(" + _render_or(f.body, lim) + ")"
    if isinstance(f, Exists):
        star = "*" if f.weak_hint else ""
        return f"ex{star} {f.name.render()} " + _render_unary(f.body, lim)
    if isinstance(f, Forall):
        star = "*" if f.weak_hint else ""
        return f"all{star} {f.name.render()} " + _render_unary(f.body, lim)
    if isinstance(f, Atom):
        if f.relation == "<":
            return f"{render_term(f.terms[0])} < {render_term(f.terms[1])}"
        return f.relation + "(" + ", ".join(render_term(t) for t in f.terms) + ")"
    if isinstance(f, Eq):
        return f"{render_term(f.left)} = {render_term(f.right)}"
    if isinstance(f, Neq):
        return f"{render_term(f.left)} != {render_term(f.right)}"
    raise RenderLimitError(f"cannot render {f!r}")


def _is_infix_atom(f: Formula) -> bool:
    return isinstance(f, Atom) and f.relation == "<"
