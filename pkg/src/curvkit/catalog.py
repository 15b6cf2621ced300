"""Built-in metrics, the metric document format, and specializations.

A metric document is line oriented::

    name = prm
    description = pure radiation metric

    [coords]
    u
    r
    x : positive
    y
    [constants]
    p : nonzero
    [functions]
    w : u x y
    [components]
    g[1][1] = x*w - p^2*r^2/x^2
    g[1][2] = 1
    [assumptions]
    nonzero: w_xx + w_yy
    set: a = -p^2

Blank lines and ``#`` comments are ignored.  Components are symmetric, so
assigning ``g[1][3]`` also sets ``g[3][1]``; assigning both is an error
unless the two expressions agree.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .context import PHYSICAL_CONSTANTS, Chart, Context
from .expr import ZERO, AssumptionSet, Constant, Coordinate, FunctionSymbol, Scalar
from .geometry import Metric, SingularMetricError
from .syntax import ParseError, format_generator, parse_expression, tokenize

__all__ = [
    "DocumentError",
    "MetricDocument",
    "parse_document",
    "load_metric_document",
    "builtin_metric",
    "builtin_document",
    "apply_specialization",
    "specialization",
    "parse_assumption",
    "BUILTIN_NAMES",
    "SPECIALIZATIONS",
]

SECTIONS = ("coords", "constants", "functions", "components", "assumptions")


class DocumentError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass
class MetricDocument:
    name: str = ""
    description: str = ""
    coords: list = field(default_factory=list)  # (name, positive)
    constants: list = field(default_factory=list)
    functions: dict = field(default_factory=dict)  # name -> [coord names]
    nonzero_names: list = field(default_factory=list)
    components: dict = field(default_factory=dict)  # (i, j) with i <= j -> text
    assumptions: list = field(default_factory=list)  # ("nonzero", text) | ("set", lhs, rhs)

    def context(self) -> Context:
        chart = Chart([c for c, _ in self.coords], [c for c, pos in self.coords if pos])
        return Context(chart, self.constants, self.functions, self.nonzero_names)

    def build(self, extra: Optional[AssumptionSet] = None):
        """Return (Metric, AssumptionSet) with all substitutions applied."""
        ctx = self.context()
        n = ctx.dim
        rows = [[ZERO] * n for _ in range(n)]
        for (i, j), text in self.components.items():
            try:
                v = parse_expression(text, ctx)
            except ParseError as err:
                raise DocumentError(f"g[{i}][{j}]: {err}") from None
            rows[i - 1][j - 1] = rows[j - 1][i - 1] = v
        subs, nonzero = [], []
        for entry in self.assumptions:
            s, nz = parse_assumption(entry, ctx)
            subs += s
            nonzero += nz
        assumptions = AssumptionSet(subs, nonzero)
        if extra is not None:
            assumptions = assumptions.extend(extra.substitutions, extra.nonzero)
        rows = [[assumptions.apply(v) for v in row] for row in rows]
        metric = Metric(rows, ctx, self.name, assumptions)
        return metric, assumptions

    def serialize(self) -> str:
        out = []
        if self.name:
            out.append(f"name = {self.name}")
        if self.description:
            out.append(f"description = {self.description}")
        out.append("")
        out.append("[coords]")
        out += [f"{c} : positive" if pos else c for c, pos in self.coords]
        out.append("[constants]")
        for c in self.constants:
            out.append(f"{c} : nonzero" if c in self.nonzero_names else c)
        out.append("[functions]")
        for f, deps in self.functions.items():
            line = f"{f} : {' '.join(deps)}"
            out.append(line + " : nonzero" if f in self.nonzero_names else line)
        out.append("[components]")
        for (i, j), text in sorted(self.components.items()):
            out.append(f"g[{i}][{j}] = {text}")
        if self.assumptions:
            out.append("[assumptions]")
            for entry in self.assumptions:
                if entry[0] == "nonzero":
                    out.append(f"nonzero: {entry[1]}")
                else:
                    out.append(f"set: {entry[1]} = {entry[2]}")
        return "\n".join(out) + "\n"


_COMPONENT = re.compile(r"g\[\s*(\d+)\s*\]\[\s*(\d+)\s*\]\s*=\s*(.*)$")
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9]*$")


def parse_document(text: str) -> MetricDocument:
    doc = MetricDocument()
    section = None
    declared = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]") or _COMPONENT.match(stripped):
                raise DocumentError(f"malformed section header {stripped!r}", lineno, col)
            name = stripped[1:-1].strip()
            if name not in SECTIONS:
                raise DocumentError(f"unknown section [{name}]", lineno, col)
            section = name
            continue
        if section is None:
            key, sep, value = stripped.partition("=")
            key = key.strip()
            if not sep or key not in ("name", "description"):
                raise DocumentError("expected 'name = ...' or a section header", lineno, col)
            setattr(doc, key, value.strip())
            continue
        parts = [p.strip() for p in stripped.split(":")]
        if section in ("coords", "constants", "functions"):
            ident = parts[0]
            if not _IDENT.match(ident):
                raise DocumentError(f"bad identifier {ident!r}", lineno, col)
            if ident in declared:
                raise DocumentError(f"{ident!r} declared twice", lineno, col)
            declared.add(ident)
            flags = parts[1:]
            if section == "coords":
                if flags not in ([], ["positive"]):
                    raise DocumentError(f"unknown coordinate flag {flags}", lineno, col)
                doc.coords.append((ident, bool(flags)))
            elif section == "constants":
                if flags not in ([], ["nonzero"]):
                    raise DocumentError(f"unknown constant flag {flags}", lineno, col)
                if ident not in PHYSICAL_CONSTANTS:
                    doc.constants.append(ident)
                if flags:
                    doc.nonzero_names.append(ident)
            else:
                if not flags or flags[1:] not in ([], ["nonzero"]):
                    raise DocumentError("expected 'name : coords [: nonzero]'", lineno, col)
                deps = flags[0].split()
                coord_names = {c for c, _ in doc.coords}
                bad = [d for d in deps if d not in coord_names]
                if bad:
                    raise DocumentError(f"unknown coordinates {bad} in dependency list", lineno, col)
                doc.functions[ident] = deps
                if flags[1:]:
                    doc.nonzero_names.append(ident)
        elif section == "components":
            m = _COMPONENT.match(stripped)
            if not m:
                raise DocumentError("expected 'g[i][j] = expression'", lineno, col)
            i, j, expr = int(m.group(1)), int(m.group(2)), m.group(3).strip()
            n = len(doc.coords)
            if not (1 <= i <= n and 1 <= j <= n):
                raise DocumentError(f"index g[{i}][{j}] outside 1..{n}", lineno, col)
            key = (min(i, j), max(i, j))
            if key in doc.components:
                prev = doc.components[key]
                ctx = doc.context()
                try:
                    same = parse_expression(prev, ctx) == parse_expression(expr, ctx)
                except ParseError as err:
                    raise DocumentError(str(err), lineno, col) from None
                if not same:
                    raise DocumentError(f"duplicate assignment of g[{key[0]}][{key[1]}]", lineno, col)
                continue
            doc.components[key] = expr
        else:
            key, sep, value = stripped.partition(":")
            key = key.strip()
            if key == "nonzero" and sep:
                doc.assumptions.append(("nonzero", value.strip()))
            elif key == "set" and sep:
                lhs, eq, rhs = value.partition("=")
                if not eq:
                    raise DocumentError("expected 'set: symbol = expression'", lineno, col)
                doc.assumptions.append(("set", lhs.strip(), rhs.strip()))
            else:
                raise DocumentError("expected 'nonzero: ...' or 'set: ...'", lineno, col)
    if len(doc.coords) < 3:
        raise DocumentError("a metric document needs at least three coordinates")
    # surface parse errors with the document's own line numbers
    ctx = doc.context()
    for (i, j), expr in doc.components.items():
        try:
            parse_expression(expr, ctx)
        except ParseError as err:
            lineno = _find_line(text, f"g[{i}][{j}]") or _find_line(text, f"g[{j}][{i}]")
            raise DocumentError(f"g[{i}][{j}]: {err}", lineno, max(err.position, 0) + 1) from None
    return doc


def _find_line(text: str, needle: str) -> int:
    for lineno, line in enumerate(text.splitlines(), 1):
        if needle in line.replace(" ", ""):
            return lineno
    return 0


def parse_assumption(entry, ctx: Context):
    """Turn a ("nonzero", text) or ("set", lhs, rhs) entry into substitutions and nonzero lists."""
    if entry[0] == "nonzero":
        return [], [parse_expression(entry[1], ctx)]
    _, lhs, rhs = entry
    target = _target(lhs, ctx)
    image = parse_expression(rhs, ctx)
    if isinstance(target, FunctionSymbol):
        allowed = {c.index for c in target.deps}
        for g in image.generators():
            if isinstance(g, Coordinate) and g.index not in allowed:
                raise ValueError(f"binding for {lhs} depends on coordinate {g.name}")
            if isinstance(g, FunctionSymbol) and not {c.index for c in g.deps} <= allowed:
                raise ValueError(f"binding for {lhs} uses {g.name}, which has other dependencies")
    return [(target, image)], []


def _target(text: str, ctx: Context):
    e = parse_expression(text, ctx)
    gens = e.generators()
    if len(gens) == 1:
        (g,) = gens
        if isinstance(g, (Constant, FunctionSymbol)) and e == Scalar.symbol(g):
            return g
    raise ValueError(f"left side of a substitution must be a constant or function symbol, got {text!r}")


def load_metric_document(text: str, extra: Optional[AssumptionSet] = None):
    """Parse a metric document; returns (Metric, AssumptionSet)."""
    return parse_document(text).build(extra)


# ---------------------------------------------------------------------------
# catalog

_HEADER = """
[coords]
u
r
x : positive
y
"""

_BUILTIN_TEXT = {
    "prm": _HEADER + """
[constants]
p : nonzero
[functions]
w : u x y
[components]
g[1][1] = x*w - p^2*r^2/x^2
g[1][2] = 1
g[1][3] = -2*r/x
g[3][3] = -1/p^2
g[4][4] = -1/p^2
""",
    "gprm": _HEADER + """
[constants]
a : nonzero
b : nonzero
[functions]
w : u x y : nonzero
f : x y : nonzero
[components]
g[1][1] = x*w + a*r^2/x^2
g[1][2] = 1
g[1][3] = b*r/x
g[3][3] = f
g[4][4] = f
""",
    "gppw": _HEADER + """
[functions]
h : u x y
F : x y : nonzero
[components]
g[1][1] = -2*h
g[1][2] = 1
g[3][3] = -F/2
g[4][4] = -F/2
""",
    "ppw": _HEADER + """
[functions]
h : u x y
[components]
g[1][1] = h
g[1][2] = 1
g[3][3] = 1
g[4][4] = 1
""",
}

_DESCRIPTIONS = {
    "prm": "conformally Ricci flat pure radiation metric",
    "gprm": "pure radiation type metric with constants a, b and conformal factor f(x,y)",
    "gppw": "generalized pp-wave",
    "ppw": "pp-wave",
}

BUILTIN_NAMES = tuple(_BUILTIN_TEXT)


def builtin_document(name: str) -> MetricDocument:
    if name not in _BUILTIN_TEXT:
        raise KeyError(f"unknown metric {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    doc = parse_document(f"name = {name}\ndescription = {_DESCRIPTIONS[name]}\n" + _BUILTIN_TEXT[name])
    return doc


def builtin_metric(name: str, extra: Optional[AssumptionSet] = None):
    """Return (Metric, AssumptionSet) for a catalog metric."""
    return builtin_document(name).build(extra)


# source -> target: (extra declarations, bindings as (lhs, rhs) text)
SPECIALIZATIONS = {
    ("gprm", "prm"): (
        {"constants": ["p"], "nonzero": ["p"]},
        [("a", "-p^2"), ("b", "-2"), ("f", "-1/p^2")],
    ),
    ("gprm", "ppw"): (
        {"functions": {"h": ["u", "x", "y"]}},
        [("w", "h/x"), ("a", "0"), ("b", "0"), ("f", "1")],
    ),
    ("gprm", "gppw"): (
        {"functions": {"h": ["u", "x", "y"], "F": ["x", "y"]}, "nonzero": ["F"]},
        [("w", "-2*h/x"), ("a", "0"), ("b", "0"), ("f", "-F/2")],
    ),
}


def specialization(source: Metric, target: str) -> AssumptionSet:
    """The catalog bindings that turn ``source`` (by name) into ``target``."""
    key = (source.name, target)
    if key not in SPECIALIZATIONS:
        raise KeyError(f"no specialization from {source.name!r} to {target!r}")
    decl, bindings = SPECIALIZATIONS[key]
    ctx = source.context.extended(decl.get("constants", ()), decl.get("functions"), decl.get("nonzero", ()))
    nonzero = [parse_expression(n, ctx) for n in decl.get("nonzero", ())]
    return AssumptionSet([(_target(l, ctx), parse_expression(r, ctx)) for l, r in bindings], nonzero)


def apply_specialization(source: Metric, bindings: AssumptionSet, name: Optional[str] = None) -> Metric:
    """Substitute ``bindings`` into every component and rebuild the geometry."""
    rows = [[bindings.apply(v) for v in row] for row in source.g.data.tolist()]
    ctx = _context_for(source.context, bindings)
    merged = AssumptionSet(
        source.assumptions.substitutions + bindings.substitutions,
        source.assumptions.nonzero + bindings.nonzero,
    )
    try:
        return Metric(rows, ctx, name or source.name, merged, source.convention)
    except (SingularMetricError, ZeroDivisionError) as err:
        raise SingularMetricError(f"specialization makes the metric degenerate: {err}") from None


def _context_for(ctx: Context, bindings: AssumptionSet) -> Context:
    """Extend ``ctx`` with any constants or functions introduced by binding images."""
    consts, funcs = [], {}
    for _, image in bindings.substitutions:
        for g in image.generators():
            if isinstance(g, Constant) and g.name not in ctx.constants:
                consts.append(g.name)
            elif isinstance(g, FunctionSymbol) and g.name not in ctx.functions:
                funcs[g.name] = [c.name for c in g.deps]
    # constants that were substituted away are dropped from the nonzero list
    gone = {t.name for t in bindings.targets()}
    nonzero = [n for n in ctx.nonzero_names if n not in gone]
    declared = set()
    for e in bindings.nonzero:
        gens = e.generators()
        if len(gens) == 1 and e == Scalar.symbol(next(iter(gens))):
            declared.add(next(iter(gens)).name)
    out = ctx.extended(consts, funcs)
    out.nonzero_names = frozenset(set(nonzero) | set(PHYSICAL_CONSTANTS) | declared)
    return out


def declare_free_constants(text: str, ctx: Context) -> Context:
    """Extend ``ctx`` with every bare identifier of ``text`` that is not yet declared."""
    known = set(ctx.constants) | set(ctx.functions) | set(ctx.chart.names) | {"exp", "d"}
    new = []
    for kind, value, _ in tokenize(text):
        if kind == "ident" and "_" not in value and value not in known and value not in new:
            new.append(value)
    return ctx.extended(new) if new else ctx
