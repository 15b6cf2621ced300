"""Expression language: tokenizer, recursive-descent parser and printer.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?
    atom   := INT | IDENT | IDENT '_' SUFFIX | 'exp' '(' expr ')'
            | 'd' '(' IDENT (',' IDENT)+ ')' | '(' expr ')'

The parser first builds a small tuple AST; :func:`evaluate_ast` evaluates that
AST numerically without going through canonical forms, which gives tests an
independent route to compare against.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

import mpmath

from .expr import (
    Constant,
    Coordinate,
    ExpAtom,
    FunctionSymbol,
    Scalar,
    _icontent,
    _leading,
    _mono_content,
    _mono_div,
    _mono_key,
    generator,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int = -1, text: str = ""):
        self.position = position
        self.text = text
        where = f" at position {position}" if position >= 0 else ""
        super().__init__(f"{message}{where}")


class UndeclaredSymbolError(ParseError):
    pass


class DependencyError(ParseError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)?)|(?P<op>[-+*/^(),]))"
)


def tokenize(text: str) -> list:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            while text[pos].isspace():
                pos += 1
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, ctx):
        self.text = text
        self.ctx = ctx
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return ("neg", self.unary())
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            tok = self.take()
            return ("pow", base, self.unary(), tok[2])
        return base

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return ("num", Fraction(int(value)))
        if value == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if kind == "ident":
            self.take()
            if value == "exp" and self.peek()[1] == "(":
                self.take("(")
                arg = self.expr()
                self.take(")")
                return ("exp", arg, pos)
            if value == "d" and self.peek()[1] == "(" and "d" not in _names(self.ctx):
                return self.derivative(pos)
            return ("sym", self.identifier(value, pos))
        found = value or "end of input"
        raise ParseError(f"unexpected {found!r}", pos, self.text)

    def derivative(self, pos):
        self.take("(")
        kind, fname, fpos = self.take()
        if kind != "ident":
            raise ParseError("expected a function name", fpos, self.text)
        f = self.ctx.functions.get(fname)
        if f is None:
            raise UndeclaredSymbolError(f"undeclared function {fname!r}", fpos, self.text)
        coords = []
        while self.peek()[1] == ",":
            self.take()
            kind, cname, cpos = self.take()
            coords.append((cname, cpos))
        self.take(")")
        if not coords:
            raise ParseError("d(...) needs at least one coordinate", pos, self.text)
        return ("sym", self._derive(f, coords))

    def _derive(self, f: FunctionSymbol, coords):
        for cname, cpos in coords:
            try:
                c = self.ctx.chart[int(cname)] if cname.isdigit() else self.ctx.chart[cname]
            except (KeyError, IndexError):
                raise UndeclaredSymbolError(f"unknown coordinate {cname!r}", cpos, self.text)
            nxt = f.derivative(c)
            if nxt is None:
                raise DependencyError(
                    f"{f.name} does not depend on coordinate {c.name}", cpos, self.text
                )
            f = nxt
        return f

    def identifier(self, value, pos):
        ctx = self.ctx
        if "_" in value:
            base, suffix = value.split("_", 1)
            f = ctx.functions.get(base)
            if f is None:
                raise UndeclaredSymbolError(f"undeclared function {base!r}", pos, self.text)
            names = {c.name for c in ctx.chart.coordinates}
            coords = []
            for k, ch in enumerate(suffix):
                if ch not in names and not ch.isdigit():
                    raise UndeclaredSymbolError(
                        f"unknown coordinate {ch!r} in {value!r}", pos + len(base) + 1 + k, self.text
                    )
                coords.append((ch, pos + len(base) + 1 + k))
            return self._derive(f, coords)
        try:
            return ctx.lookup(value)
        except KeyError:
            raise UndeclaredSymbolError(f"undeclared identifier {value!r}", pos, self.text)


def _names(ctx):
    return set(ctx.constants) | set(ctx.functions) | set(ctx.chart.names)


def parse_ast(text: str, ctx):
    return _Parser(text, ctx).parse()


def ast_to_scalar(node, text: str = "") -> Scalar:
    kind = node[0]
    if kind == "num":
        return Scalar(node[1])
    if kind == "sym":
        return Scalar.symbol(node[1])
    if kind == "neg":
        return -ast_to_scalar(node[1], text)
    if kind in ("add", "sub", "mul", "div"):
        a = ast_to_scalar(node[1], text)
        b = ast_to_scalar(node[2], text)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if not b:
            raise ParseError("division by an expression that is identically zero", -1, text)
        return a / b
    if kind == "pow":
        base = ast_to_scalar(node[1], text)
        ex = ast_to_scalar(node[2], text)
        if not ex.is_number:
            raise ParseError("exponents must be rational numbers", node[3], text)
        try:
            return base ** ex.as_fraction()
        except (ValueError, ZeroDivisionError) as err:
            raise ParseError(str(err), node[3], text) from None
    if kind == "exp":
        try:
            return Scalar.exp(ast_to_scalar(node[1], text))
        except ValueError as err:
            raise ParseError(str(err), node[2], text) from None
    raise AssertionError(kind)


def parse_expression(text: str, ctx) -> Scalar:
    """Parse ``text`` in the symbol context ``ctx`` and return its canonical form."""
    return ast_to_scalar(parse_ast(text, ctx), text)


def evaluate_ast(node, values: Mapping, dps: int = 30):
    """Evaluate a parse tree numerically, term by term, with no simplification."""
    with mpmath.workdps(dps):
        def ev(n):
            kind = n[0]
            if kind == "num":
                return mpmath.mpf(n[1].numerator) / n[1].denominator
            if kind == "sym":
                return mpmath.mpf(values[n[1]])
            if kind == "neg":
                return -ev(n[1])
            if kind == "add":
                return ev(n[1]) + ev(n[2])
            if kind == "sub":
                return ev(n[1]) - ev(n[2])
            if kind == "mul":
                return ev(n[1]) * ev(n[2])
            if kind == "div":
                return ev(n[1]) / ev(n[2])
            if kind == "pow":
                return ev(n[1]) ** ev(n[2])
            if kind == "exp":
                return mpmath.exp(ev(n[1]))
            raise AssertionError(kind)

        return +ev(node)


# ---------------------------------------------------------------------------
# printing


def format_generator(gen) -> str:
    if isinstance(gen, (Coordinate, Constant)):
        return gen.name
    if isinstance(gen, FunctionSymbol):
        if not gen.derivs:
            return gen.name
        names = [c.name for c in gen.derivs]
        if all(len(n) == 1 and not n.isdigit() for n in names):
            return f"{gen.name}_{''.join(names)}"
        return f"d({gen.name}, {', '.join(names)})"
    raise TypeError(gen)


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def _fmt_power(name: str, e) -> str:
    if e == 1:
        return name
    if isinstance(e, Fraction) or e < 0:
        return f"{name}^({e})"
    return f"{name}^{e}"


def _fmt_exp_arg(terms) -> str:
    parts = []
    for mono, c in sorted(terms, key=lambda t: tuple((x.index, -k) for x, k in t[0])):
        body = "*".join(_fmt_power(x.name, k) for x, k in mono)
        mag = abs(c)
        if not body:
            s = _fmt_rational(mag)
        elif mag == 1:
            s = body
        else:
            s = f"{_fmt_rational(mag)}*{body}"
        parts.append(("-" if c < 0 else "+", s))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return f"exp({out})"


def _fmt_mono(m: tuple) -> list:
    factors = []
    exp_terms = []
    gens = sorted(((generator(g), e) for g, e in m), key=lambda t: t[0].sort_key)
    for gen, e in gens:
        if isinstance(gen, ExpAtom):
            exp_terms.append((gen.monomial, Fraction(e)))
        else:
            factors.append(_fmt_power(format_generator(gen), e))
    if exp_terms:
        factors.append(_fmt_exp_arg(exp_terms))
    return factors


def _fmt_poly(p: dict) -> str:
    terms = sorted(p.items(), key=lambda t: _mono_key(t[0]), reverse=True)
    out = []
    for m, c in terms:
        factors = _fmt_mono(m)
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        out.append(("-" if c < 0 else "+", body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


def _split(p: dict):
    """Split p into (integer content with sign, monomial content, rest)."""
    lead = _leading(p)
    c = _icontent(p)
    if p[lead] < 0:
        c = -c
    mc = _mono_content(p)
    rest = {_mono_div(m, mc): v // c for m, v in p.items()}
    return c, tuple(sorted(mc.items())), rest


def _factor_list(c_abs: int, mono: tuple, rest: dict) -> list:
    out = []
    if c_abs != 1:
        out.append(str(c_abs))
    out.extend(_fmt_mono(mono))
    if not (len(rest) == 1 and () in rest):
        out.append(f"({_fmt_poly(rest)})")
    return out


def format_scalar(e: Scalar) -> str:
    """Deterministic printed form: sign, content and monomial factors pulled out."""
    if not e.num:
        return "0"
    cn, mn, rn = _split(e.num)
    cd, md, rd = _split(e.den)
    negative = (cn < 0) != (cd < 0)
    top = _factor_list(abs(cn), mn, rn) or ["1"]
    bottom = _factor_list(abs(cd), md, rd)
    if len(top) == 1 and top[0].startswith("(") and not bottom and not negative:
        return top[0][1:-1]
    s = "*".join(top)
    if bottom:
        if len(bottom) == 1:
            s += "/" + bottom[0]
        else:
            s += "/(" + "*".join(bottom) + ")"
    return ("-" if negative else "") + s
