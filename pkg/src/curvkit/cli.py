"""Command-line front end: components, classify, check, compare."""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .catalog import BUILTIN_NAMES, DocumentError, builtin_document, parse_document
from .classify import (
    COMPARISON_PROPERTIES,
    PROPERTIES,
    Classifier,
    PropertyVerdict,
    compare,
)
from .curvature import Curvature, divergence, dot_action, kulkarni_nomizu, q_operator
from .expr import AssumptionSet, Scalar
from .geometry import Metric, SingularMetricError, Tensor, covariant_derivative
from .linalg import SolutionSpace
from .syntax import ParseError, UndeclaredSymbolError, tokenize

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# metric selection


def _document(selector: str):
    if selector in BUILTIN_NAMES:
        return builtin_document(selector)
    if os.path.exists(selector):
        with open(selector) as fh:
            doc = parse_document(fh.read())
        doc.name = doc.name or os.path.splitext(os.path.basename(selector))[0]
        return doc
    raise UsageError(f"unknown metric {selector!r}; use one of {', '.join(BUILTIN_NAMES)} or a file path")


def _split_binding(text: str, flag: str):
    lhs, eq, rhs = text.partition("=")
    if not eq or not lhs.strip() or not rhs.strip():
        raise UsageError(f"{flag} expects name=expression, got {text!r}")
    return lhs.strip(), rhs.strip()


def load_metric(selector: str, sets=(), binds=()):
    """Build (Metric, AssumptionSet) from a selector plus --set/--bind entries."""
    doc = _document(selector)
    entries = []
    for text in sets:
        lhs, rhs = _split_binding(text, "--set")
        if lhs not in doc.constants and lhs not in doc.functions:
            raise UsageError(f"--set target {lhs!r} is not a declared constant or function")
        entries.append((lhs, rhs))
    for text in binds:
        lhs, rhs = _split_binding(text, "--bind")
        if lhs not in doc.functions:
            raise UsageError(f"--bind target {lhs!r} is not a declared function")
        entries.append((lhs, rhs))
    known = set(doc.constants) | set(doc.functions) | {c for c, _ in doc.coords} | {"exp", "c", "G", "pi"}
    for _, rhs in entries:
        try:
            toks = tokenize(rhs)
        except ParseError as err:
            raise UsageError(str(err)) from None
        for kind, value, _ in toks:
            # bare new names become free constants
            if kind == "ident" and "_" not in value and value not in known:
                doc.constants.append(value)
                known.add(value)
    doc.assumptions += [("set", lhs, rhs) for lhs, rhs in entries]
    try:
        return doc.build()
    except (ParseError, UndeclaredSymbolError, ValueError) as err:
        raise UsageError(str(err)) from None


# ---------------------------------------------------------------------------
# components

TENSORS = {
    "g": ("g", lambda cv: cv.metric.g),
    "inverse": ("ginv", lambda cv: cv.metric.inverse),
    "christoffel": ("Gamma", lambda cv: cv.metric.christoffel),
    "riemann": ("R", lambda cv: cv.R),
    "ricci": ("S", lambda cv: cv.S),
    "scalar": ("kappa", lambda cv: cv.kappa),
    "conformal": ("C", lambda cv: cv.C),
    "concircular": ("W", lambda cv: cv.W),
    "conharmonic": ("K", lambda cv: cv.K),
    "projective": ("P", lambda cv: cv.P),
    "stress-energy": ("T", lambda cv: cv.T),
    "nabla-riemann": ("nablaR", lambda cv: cv.nabla("R")),
    "nabla-ricci": ("nablaS", lambda cv: cv.nabla("S")),
    "nabla-conformal": ("nablaC", lambda cv: cv.nabla("C")),
    "nabla-stress-energy": ("nablaT", lambda cv: cv.nabla("T")),
}


def component_entries(metric: Metric, tensor: str):
    """[(label, index tuple or None, Scalar)] for the nonzero orbit representatives."""
    if tensor not in TENSORS:
        raise UsageError(f"unknown tensor {tensor!r}; choose from {', '.join(TENSORS)}")
    label, get = TENSORS[tensor]
    value = get(Curvature(metric))
    if isinstance(value, Scalar):
        return [(label, None, value)]
    return [(label, idx, v) for idx, v in value.representatives()]


def _format_entry(label, idx, value) -> str:
    where = "".join(f"[{i}]" for i in idx) if idx else ""
    return f"{label}{where} = {value}"


# ---------------------------------------------------------------------------
# identity grammar for `check`

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(==|[-+*/().,]))")


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int


def _lex(text: str):
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            pos += len(text[pos:]) - len(text[pos:].lstrip())
            raise UsageError(f"unexpected character {text[pos]!r} at column {pos + 1}")
        kind = "int" if m.group(1) else "name" if m.group(2) else "op"
        out.append(_Tok(kind, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class IdentityParser:
    """Tensor identities such as ``P.P + 1/3*Q(S,P) == 0``.

    expr  := term (('+'|'-') term)*
    term  := ['-'] [number ['/' number] '*'] dot
    dot   := atom ['.' atom]
    atom  := NAME | Q(expr,expr) | wedge(expr,expr) | nabla(expr) | div(expr)
           | '(' expr ')' | '0'
    """

    NAMES = ("R", "S", "C", "W", "K", "P", "G", "Grot", "T", "Rup", "Sup")

    def __init__(self, curvature: Curvature):
        self.cv = curvature

    def parse(self, text: str):
        self.toks, self.i = _lex(text), 0
        lhs = self.expr()
        self.expect("==")
        rhs = self.expr()
        self.expect("")
        return lhs, rhs

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.take()
        if t.value != value or (value == "" and t.kind != "end"):
            want = repr(value) if value else "end of input"
            raise UsageError(f"expected {want} at column {t.pos + 1}")

    def expr(self):
        out = self.term()
        while self.peek().value in ("+", "-"):
            sign = self.take().value
            rhs = self.term()
            out = _combine(out, rhs, 1 if sign == "+" else -1)
        return out

    def term(self):
        sign = 1
        while self.peek().value == "-":
            self.take()
            sign = -sign
        coeff = Fraction(sign)
        t = self.peek()
        if t.kind == "int" and self.toks[self.i + 1].value in ("*", "/"):
            self.take()
            num = Fraction(int(t.value))
            if self.peek().value == "/":
                self.take()
                d = self.take()
                if d.kind != "int" or int(d.value) == 0:
                    raise UsageError(f"expected a nonzero integer at column {d.pos + 1}")
                num /= int(d.value)
            self.expect("*")
            coeff *= num
        value = self.dot()
        return _scale(value, coeff)

    def dot(self):
        left = self.atom()
        if self.peek().value == ".":
            t = self.take()
            right = self.atom()
            if not isinstance(left, Tensor) or left.valence != "dddd":
                raise UsageError(f"left operand of '.' at column {t.pos + 1} must be a (0,4) tensor")
            if not isinstance(right, Tensor):
                raise UsageError(f"right operand of '.' at column {t.pos + 1} must be a tensor")
            return dot_action(left, right, self.cv.metric)
        return left

    def atom(self):
        t = self.take()
        if t.kind == "int":
            if t.value != "0":
                raise UsageError(f"bare number {t.value} at column {t.pos + 1}; write it as a multiple")
            return 0
        if t.value == "(":
            v = self.expr()
            self.expect(")")
            return v
        if t.kind != "name":
            raise UsageError(f"unexpected {t.value or 'end of input'!r} at column {t.pos + 1}")
        if t.value in ("Q", "wedge"):
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            for x in (a, b):
                if not isinstance(x, Tensor):
                    raise UsageError(f"{t.value} needs tensor arguments")
            if t.value == "Q":
                if a.valence != "dd" or set(b.valence) != {"d"}:
                    raise UsageError("Q(A,H) needs a (0,2) tensor A and a covariant tensor H")
                return q_operator(a, b)
            if a.valence != "dd" or b.valence != "dd":
                raise UsageError("wedge needs two (0,2) tensors")
            return kulkarni_nomizu(a, b)
        if t.value in ("nabla", "div"):
            self.expect("(")
            a = self.expr()
            self.expect(")")
            if not isinstance(a, Tensor):
                raise UsageError(f"{t.value} needs a tensor argument")
            if t.value == "nabla":
                return covariant_derivative(a, self.cv.metric)
            if set(a.valence) != {"d"}:
                raise UsageError("div needs a covariant tensor")
            return divergence(a, 1, self.cv.metric)
        if t.value in self.NAMES:
            return self.cv.tensor(t.value)
        raise UsageError(f"unknown tensor {t.value!r} at column {t.pos + 1}")


def _scale(v, k: Fraction):
    if k == 1 or isinstance(v, int):
        return v
    return v * Scalar(k)


def _combine(a, b, sign: int):
    if isinstance(b, int):
        return a
    if isinstance(a, int):
        return _scale(b, Fraction(sign))
    if a.valence != b.valence or a.data.shape != b.data.shape:
        raise UsageError(f"shape mismatch: {a.valence!r} against {b.valence!r}")
    return a + b if sign > 0 else a - b


def check_identity(metric: Metric, text: str, assumptions: Optional[AssumptionSet] = None):
    """Return (holds, residual tensor or None, first nonzero (index, value) or None)."""
    cv = Curvature(metric)
    lhs, rhs = IdentityParser(cv).parse(text)
    diff = _combine(lhs, rhs, -1) if not isinstance(lhs, int) else _scale(rhs, Fraction(-1))
    if isinstance(diff, int):
        return True, None, None
    if assumptions:
        diff = diff.subs(assumptions)
    hit = diff.first_nonzero()
    return hit is None, diff, hit


# ---------------------------------------------------------------------------
# reports


def to_jsonable(x):
    if isinstance(x, Scalar):
        return str(x)
    if isinstance(x, SolutionSpace):
        return {
            "particular": to_jsonable(x.particular),
            "basis": to_jsonable(x.basis),
            "free": list(x.free),
            "dimension": x.dimension,
        }
    if isinstance(x, Tensor):
        return {"valence": x.valence, "components": {
            "".join(f"[{i}]" for i in idx): str(v) for idx, v in x.items()}}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, (Fraction, float, np.integer)):
        return str(x)
    return str(x)


def verdict_record(v: PropertyVerdict) -> dict:
    return {
        "name": v.name,
        "status": v.status,
        "summary": v.summary or v.status,
        "assumptions": [str(a) for a in v.assumptions],
        "witness": to_jsonable(v.witness),
    }


def _assumption_record(a: AssumptionSet) -> dict:
    lines = a.describe() if a else []
    return {
        "substitutions": [x[len("set: "):] for x in lines if x.startswith("set: ")],
        "nonzero": [x[len("nonzero: "):] for x in lines if x.startswith("nonzero: ")],
    }


def _emit(doc: dict, lines, fmt: str, out):
    if fmt == "machine":
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_components(args, out) -> int:
    metric, assumptions = load_metric(_selector(args), args.set, args.bind)
    t0 = time.perf_counter()
    entries = component_entries(metric, args.tensor)
    doc = {
        "version": __version__,
        "metric": metric.name,
        "assumptions": _assumption_record(assumptions),
        "operation": f"components {args.tensor}",
        "components": [
            {"index": list(idx) if idx else [], "value": str(v)} for _, idx, v in entries
        ],
        "timing": round(time.perf_counter() - t0, 3),
    }
    lines = [_format_entry(*e) for e in entries] or [f"{TENSORS[args.tensor][0]} = 0"]
    _emit(doc, lines, args.format, out)
    return EXIT_OK


def _properties(selection: Optional[str]):
    if not selection or selection == "all":
        return list(PROPERTIES)
    names = [p.strip() for p in selection.split(",") if p.strip()]
    unknown = [p for p in names if p not in PROPERTIES]
    if unknown:
        raise UsageError(f"unknown properties: {', '.join(unknown)}")
    return names


def cmd_classify(args, out) -> int:
    metric, assumptions = load_metric(_selector(args), args.set, args.bind)
    names = _properties(args.properties)
    report = Classifier(metric, assumptions).battery(names)
    doc = {
        "version": __version__,
        "metric": metric.name,
        "assumptions": _assumption_record(assumptions),
        "operation": "classify",
        "verdicts": [verdict_record(report[p]) for p in names],
        "implications": [list(x) for x in report.implications],
        "timing": {p: round(s, 3) for p, s in report.timings.items()},
    }
    _emit(doc, report.lines(), args.format, out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    metric, assumptions = load_metric(_selector(args), args.set, args.bind)
    holds, diff, hit = check_identity(metric, args.identity, assumptions)
    lines = [f"{args.identity}: {'holds' if holds else 'fails'}"]
    doc = {
        "version": __version__,
        "metric": metric.name,
        "assumptions": _assumption_record(assumptions),
        "operation": f"check {args.identity}",
        "verdicts": [{"name": args.identity, "status": "holds" if holds else "fails",
                      "assumptions": []}],
    }
    if hit is not None:
        idx, value = hit
        where = "".join(f"[{i}]" for i in idx)
        lines.append(f"residual{where} = {value}")
        doc["verdicts"][0]["residual"] = {"index": list(idx), "value": str(value)}
    _emit(doc, lines, args.format, out)
    return EXIT_OK if holds else EXIT_FAILED


def cmd_compare(args, out) -> int:
    (ga, aa), (gb, ab) = (load_metric(s, args.set, args.bind) for s in (args.first, args.second))
    names = _properties(args.properties) if args.properties else COMPARISON_PROPERTIES
    similar, dissimilar = compare(Classifier(ga, aa), Classifier(gb, ab), names)
    lines = [f"similar ({ga.name} | {gb.name}):"]
    lines += [f"  {p}: {va.summary or va.status} | {vb.summary or vb.status}" for p, va, vb in similar]
    lines.append("dissimilar:")
    lines += [f"  {p}: {va.summary or va.status} | {vb.summary or vb.status}" for p, va, vb in dissimilar]
    def pair(rows):
        return [{"property": p, "first": verdict_record(va), "second": verdict_record(vb)}
                for p, va, vb in rows]

    doc = {
        "version": __version__,
        "metric": [ga.name, gb.name],
        "assumptions": [_assumption_record(aa), _assumption_record(ab)],
        "operation": "compare",
        "similar": pair(similar),
        "dissimilar": pair(dissimilar),
    }
    _emit(doc, lines, args.format, out)
    return EXIT_OK


def _selector(args) -> str:
    if args.metric and args.metric_file:
        raise UsageError("give either --metric or --metric-file, not both")
    sel = args.metric or args.metric_file
    if not sel:
        raise UsageError("a metric is required (--metric NAME or --metric-file PATH)")
    if args.metric_file and not os.path.exists(args.metric_file):
        raise UsageError(f"no such file: {args.metric_file}")
    return sel


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--set", action="append", default=[], metavar="NAME=EXPR",
                        help="substitute a constant (or a function) everywhere")
    common.add_argument("--bind", action="append", default=[], metavar="F=EXPR",
                        help="bind a function to an expression, derivatives included")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    selector = argparse.ArgumentParser(add_help=False)
    selector.add_argument("--metric", help=f"catalog name ({', '.join(BUILTIN_NAMES)}) or document path")
    selector.add_argument("--metric-file", help="path to a metric document")

    p = argparse.ArgumentParser(prog="curvkit", description="Exact curvature of 4-metrics.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("components", parents=[selector, common], help="nonzero components up to symmetry")
    c.add_argument("--tensor", required=True, choices=list(TENSORS))
    c.set_defaults(run=cmd_components)
    k = sub.add_parser("classify", parents=[selector, common], help="run the property battery")
    k.add_argument("--properties", default="all", help="comma-separated property names or 'all'")
    k.set_defaults(run=cmd_classify)
    h = sub.add_parser("check", parents=[selector, common], help="check one tensor identity")
    h.add_argument("identity", help="e.g. 'P.P + 1/3*Q(S,P) == 0'")
    h.set_defaults(run=cmd_check)
    m = sub.add_parser("compare", parents=[common], help="similar and dissimilar properties of two metrics")
    m.add_argument("first")
    m.add_argument("second")
    m.add_argument("--properties", default=None)
    m.set_defaults(run=cmd_compare)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.run(args, out)
    except (UsageError, DocumentError, ParseError, UndeclaredSymbolError, KeyError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        sys.stderr.write(f"error: {msg}\n")
        return EXIT_USAGE
    except (SingularMetricError, ArithmeticError) as err:
        sys.stderr.write(f"computation error: {err}\n")
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
