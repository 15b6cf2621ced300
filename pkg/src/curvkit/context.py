"""Charts and symbol tables: which identifiers mean what in a metric definition."""
from __future__ import annotations

from typing import Iterable, Mapping, Optional, Sequence, Union

from .expr import Constant, Coordinate, FunctionSymbol, Scalar

# Constants of the field equations; always declared, never zero.
PHYSICAL_CONSTANTS = ("c", "G", "pi")


class Chart:
    """Ordered coordinates x^1..x^n of a single chart (1-based indices)."""

    def __init__(self, names: Sequence[str], positive: Iterable[str] = ()):
        names = list(names)
        if len(set(names)) != len(names):
            raise ValueError("coordinate names must be distinct")
        if len(names) < 3:
            raise ValueError("charts need dimension n >= 3")
        positive = set(positive)
        unknown = positive - set(names)
        if unknown:
            raise ValueError(f"positivity declared for unknown coordinates {sorted(unknown)}")
        self.coordinates = tuple(
            Coordinate(i + 1, n, n in positive) for i, n in enumerate(names)
        )

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    @property
    def names(self) -> tuple:
        return tuple(c.name for c in self.coordinates)

    def __getitem__(self, key: Union[int, str]) -> Coordinate:
        if isinstance(key, int):
            if not 1 <= key <= self.dim:
                raise IndexError(f"coordinate index {key} outside 1..{self.dim}")
            return self.coordinates[key - 1]
        for c in self.coordinates:
            if c.name == key:
                return c
        raise KeyError(key)

    def __eq__(self, other):
        return isinstance(other, Chart) and self.coordinates == other.coordinates

    def __hash__(self):
        return hash(self.coordinates)

    def __repr__(self):
        return f"Chart({list(self.names)})"


class Context:
    """A chart plus declared constants and functions.

    ``nonzero`` names constants or functions that are nowhere vanishing; they
    (and positive coordinates) are treated as never zero when pivoting.
    """

    def __init__(
        self,
        chart: Chart,
        constants: Iterable[str] = (),
        functions: Optional[Mapping[str, Sequence[str]]] = None,
        nonzero: Iterable[str] = (),
    ):
        self.chart = chart
        consts = list(constants)
        for name in PHYSICAL_CONSTANTS:
            if name not in consts:
                consts.append(name)
        self.constants = {n: Constant(n) for n in consts}
        self.functions = {}
        for name, deps in (functions or {}).items():
            dep_coords = tuple(sorted((chart[d] for d in deps), key=lambda c: c.index))
            self.functions[name] = FunctionSymbol(name, dep_coords)
        clash = set(self.constants) & set(self.functions) | (
            (set(self.constants) | set(self.functions)) & set(chart.names)
        )
        if clash:
            raise ValueError(f"identifiers declared twice: {sorted(clash)}")
        nz = set(nonzero) | set(PHYSICAL_CONSTANTS)
        self.nonzero_names = frozenset(nz)

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def nonzero_generators(self) -> frozenset:
        out = set()
        for n in self.nonzero_names:
            if n in self.constants:
                out.add(self.constants[n])
            elif n in self.functions:
                out.add(self.functions[n])
        return frozenset(out)

    def lookup(self, name: str):
        if name in self.constants:
            return self.constants[name]
        if name in self.functions:
            return self.functions[name]
        return self.chart[name]

    def __getitem__(self, name: str) -> Scalar:
        return Scalar.symbol(self.lookup(name))

    def symbols(self, names: str) -> list:
        return [self[n] for n in names.split()]

    def derivative(self, fname: str, *coords: Union[str, int]) -> Scalar:
        f = self.functions[fname]
        for c in coords:
            d = f.derivative(self.chart[c])
            if d is None:
                raise ValueError(f"{fname} does not depend on {c}")
            f = d
        return Scalar.symbol(f)

    def parse(self, text: str) -> Scalar:
        from .syntax import parse_expression

        return parse_expression(text, self)

    def extended(self, constants: Iterable[str] = (), functions=None, nonzero=()) -> "Context":
        funcs = {n: [c.name for c in f.deps] for n, f in self.functions.items()}
        funcs.update(functions or {})
        consts = list(self.constants) + [c for c in constants if c not in self.constants]
        return Context(self.chart, consts, funcs, set(self.nonzero_names) | set(nonzero))

    def __repr__(self):
        return (
            f"Context(coords={list(self.chart.names)}, constants={list(self.constants)}, "
            f"functions={list(self.functions)})"
        )
