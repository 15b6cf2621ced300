"""Tensor fields on a chart and the Levi-Civita pipeline.

Index conventions: components are addressed with 1-based tuples, matching
x^1..x^n.  Valence is a string of ``'u'`` (contravariant) / ``'d'``
(covariant) characters, one per slot.  Covariant derivatives append their
derivative slot last, so ``nabla(R)[1,2,1,3,1]`` is R_{1213,1}.

Curvature convention: R(X1,X2,X3,X4) = g(Rop(X1,X2)X3, X4) with
Rop(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y], and S(X,Y) = tr(Z -> Rop(Z,X)Y),
i.e. the trace of R over slots 1 and 4.  With this sign the plane-wave
family has R_1313 = -x w_xx/2 and S_11 = -p^2 x (w_xx + w_yy)/2.
:data:`CONVENTIONS` keeps the textbook sign of Rop available as ``"textbook"``.
"""
from __future__ import annotations

import itertools
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .context import Chart, Context
from .expr import ONE, ZERO, AssumptionSet, Scalar, as_scalar
from . import linalg

__all__ = [
    "Tensor",
    "Metric",
    "SingularMetricError",
    "RIEMANN_SYMMETRY",
    "PAIR_SYMMETRY",
    "covariant_derivative",
    "raise_lower",
    "inverse_metric",
    "christoffel",
    "riemann",
    "ricci_and_scalar",
]

# (permutation of slots, sign) generators of the symmetry group
RIEMANN_SYMMETRY = (((1, 0, 2, 3), -1), ((0, 1, 3, 2), -1), ((2, 3, 0, 1), 1))
PAIR_SYMMETRY = (((1, 0), 1),)
ANTISYMMETRIC_PAIR = (((1, 0, 2, 3), -1),)

# riemann_sign multiplies R; ricci_slots are the (0-based) slots of R traced by g
CONVENTIONS = {
    "adopted": {"riemann_sign": -1, "ricci_slots": (0, 3)},
    "textbook": {"riemann_sign": 1, "ricci_slots": (0, 3)},
}
DEFAULT_CONVENTION = "adopted"


class SingularMetricError(ArithmeticError):
    pass


def extend_symmetry(sym, rank: int):
    """Pad slot permutations with identity on trailing slots."""
    if not sym:
        return ()
    out = []
    for perm, sign in sym:
        out.append((tuple(perm) + tuple(range(len(perm), rank)), sign))
    return tuple(out)


class Tensor:
    """Dense array of scalars with a valence string and optional symmetry tag."""

    __slots__ = ("data", "valence", "chart", "symmetry")

    def __init__(self, data, valence: str, chart: Optional[Chart] = None, symmetry=()):
        arr = np.asarray(data, dtype=object) if not isinstance(data, np.ndarray) else data
        if arr.ndim != len(valence):
            raise ValueError(f"valence {valence!r} does not match array rank {arr.ndim}")
        self.data = arr
        self.valence = valence
        self.chart = chart
        self.symmetry = tuple(symmetry)

    # construction ---------------------------------------------------------

    @classmethod
    def zeros(cls, dim: int, valence: str, chart=None, symmetry=()) -> "Tensor":
        arr = np.empty((dim,) * len(valence), dtype=object)
        arr.fill(ZERO)
        return cls(arr, valence, chart, symmetry)

    @classmethod
    def from_function(cls, dim: int, valence: str, fn: Callable, chart=None, symmetry=()):
        """Fill from ``fn(idx0)`` (0-based index tuple), using symmetries to skip work."""
        t = cls.zeros(dim, valence, chart, symmetry)
        done = set()
        for idx in itertools.product(range(dim), repeat=len(valence)):
            if idx in done:
                continue
            v = as_scalar(fn(idx))
            for j, sign in _orbit(idx, t.symmetry):
                done.add(j)
                t.data[j] = v if sign == 1 else -v
        return t

    @classmethod
    def from_entries(cls, dim: int, valence: str, entries: dict, chart=None, symmetry=()):
        """Build from a sparse dict {0-based idx: Scalar}, completing symmetric partners."""
        t = cls.zeros(dim, valence, chart, symmetry)
        for idx, v in entries.items():
            v = as_scalar(v)
            if not v:
                continue
            for j, sign in _orbit(idx, t.symmetry):
                t.data[j] = v if sign == 1 else -v
        return t

    # access ----------------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.valence)

    @property
    def dim(self) -> int:
        return self.data.shape[0] if self.data.ndim else 0

    def __getitem__(self, idx) -> Scalar:
        if isinstance(idx, int):
            idx = (idx,)
        if len(idx) != self.rank:
            raise IndexError(f"expected {self.rank} indices, got {len(idx)}")
        for i in idx:
            if not 1 <= i <= self.dim:
                raise IndexError(f"index {i} outside 1..{self.dim}")
        return self.data[tuple(i - 1 for i in idx)]

    def nonzero(self) -> dict:
        """{0-based index: value} of the nonzero components."""
        return {idx: v for idx, v in np.ndenumerate(self.data) if v}

    def items(self):
        """Nonzero components with 1-based indices, in lexicographic order."""
        for idx, v in np.ndenumerate(self.data):
            if v:
                yield tuple(i + 1 for i in idx), v

    def representatives(self):
        """Nonzero components whose index is the smallest in its symmetry orbit."""
        for idx, v in np.ndenumerate(self.data):
            if v and idx == min(j for j, _ in _orbit(idx, self.symmetry)):
                yield tuple(i + 1 for i in idx), v

    def is_zero(self) -> bool:
        return not any(v for v in self.data.flat)

    def first_nonzero(self):
        for idx, v in self.items():
            return idx, v
        return None

    # algebra ----------------------------------------------------------------

    def map(self, fn: Callable[[Scalar], Scalar], symmetry=None) -> "Tensor":
        out = np.empty(self.data.shape, dtype=object)
        for idx, v in np.ndenumerate(self.data):
            out[idx] = fn(v) if v else ZERO
        return Tensor(out, self.valence, self.chart, self.symmetry if symmetry is None else symmetry)

    def _check(self, other: "Tensor"):
        if not isinstance(other, Tensor):
            raise TypeError("expected a Tensor")
        if other.valence != self.valence or other.data.shape != self.data.shape:
            raise ValueError(f"shape mismatch: {self.valence} vs {other.valence}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = np.empty(self.data.shape, dtype=object)
        for idx, v in np.ndenumerate(self.data):
            out[idx] = v + other.data[idx]
        sym = self.symmetry if self.symmetry == other.symmetry else ()
        return Tensor(out, self.valence, self.chart, sym)

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda v: -v)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = as_scalar(k)
        if not k:
            return Tensor.zeros(self.dim, self.valence, self.chart, self.symmetry)
        return self.map(lambda v: v * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.valence == other.valence
            and self.data.shape == other.data.shape
            and all(a == b for a, b in zip(self.data.flat, other.data.flat))
        )

    __hash__ = None

    def subs(self, assumptions: AssumptionSet) -> "Tensor":
        if not assumptions.substitutions:
            return self
        return self.map(assumptions.apply)

    def transpose(self, perm: Sequence[int]) -> "Tensor":
        """New tensor with slot k taken from slot perm[k] (0-based)."""
        out = np.transpose(self.data, perm).copy()
        val = "".join(self.valence[p] for p in perm)
        return Tensor(out, val, self.chart)

    def tensor_product(self, other: "Tensor") -> "Tensor":
        a, b = self.nonzero(), other.nonzero()
        t = Tensor.zeros(self.dim, self.valence + other.valence, self.chart)
        for i, u in a.items():
            for j, v in b.items():
                t.data[i + j] = u * v
        return t

    def with_symmetry(self, symmetry) -> "Tensor":
        """Same components, tagged with ``symmetry`` (not verified; see check_symmetry)."""
        return Tensor(self.data, self.valence, self.chart, symmetry)

    def check_symmetry(self) -> bool:
        for idx, v in np.ndenumerate(self.data):
            for j, sign in _orbit(idx, self.symmetry):
                if self.data[j] != (v if sign == 1 else -v):
                    return False
        return True

    def __repr__(self):
        nz = sum(1 for v in self.data.flat if v)
        return f"Tensor(valence={self.valence!r}, dim={self.dim}, nonzero={nz})"


def _orbit(idx: tuple, symmetry) -> list:
    """Orbit of an index tuple under signed slot permutations, with signs."""
    if not symmetry:
        return [(idx, 1)]
    seen = {idx: 1}
    stack = [idx]
    while stack:
        cur = stack.pop()
        s = seen[cur]
        for perm, sign in symmetry:
            nxt = tuple(cur[p] for p in perm)
            if nxt not in seen:
                seen[nxt] = s * sign
                stack.append(nxt)
    return list(seen.items())


# ---------------------------------------------------------------------------
# metric and curvature


class Metric:
    """Symmetric nondegenerate (0,2) field with eagerly cached inverse and Christoffels."""

    def __init__(
        self,
        components,
        context: Context,
        name: str = "",
        assumptions: Optional[AssumptionSet] = None,
        convention: str = DEFAULT_CONVENTION,
    ):
        n = context.dim
        rows = components.data.tolist() if isinstance(components, Tensor) else components
        rows = [[as_scalar(x) for x in row] for row in rows]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"metric must be {n}x{n}")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"metric is not symmetric at ({j + 1},{i + 1})")
        self.context = context
        self.chart = context.chart
        self.name = name
        self.assumptions = assumptions or AssumptionSet()
        self.convention = convention
        self.g = Tensor(np.array(rows, dtype=object).reshape(n, n), "dd", self.chart, PAIR_SYMMETRY)
        self.det = linalg.determinant(rows)
        if not self.det:
            raise SingularMetricError("metric determinant is identically zero")
        inv = linalg.inverse(rows)
        self.inverse = Tensor(np.array(inv, dtype=object).reshape(n, n), "uu", self.chart, PAIR_SYMMETRY)
        self.christoffel = self._christoffel()

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def nonzero_generators(self) -> frozenset:
        return self.context.nonzero_generators

    def _christoffel(self) -> Tensor:
        n = self.dim
        g = self.g.data
        dg = np.empty((n, n, n), dtype=object)  # dg[l, i, j] = d_l g_ij
        for l in range(n):
            for i in range(n):
                for j in range(i, n):
                    dg[l, i, j] = dg[l, j, i] = g[i, j].diff(l + 1)
        first = np.empty((n, n, n), dtype=object)  # Gamma_{l i j}
        for l in range(n):
            for i in range(n):
                for j in range(i, n):
                    first[l, i, j] = first[l, j, i] = (dg[i, j, l] + dg[j, i, l] - dg[l, i, j]) / 2
        ginv = self.inverse.data

        def fn(idx):
            k, i, j = idx
            return Scalar.sum(ginv[k, l] * first[l, i, j] for l in range(n) if ginv[k, l] and first[l, i, j])

        sym = (((0, 2, 1), 1),)
        return Tensor.from_function(n, "udd", fn, self.chart, sym)

    @cached_property
    def riemann_up(self) -> Tensor:
        """The (1,3) tensor Rop as components [i,j,k,l] = (Rop(d_i,d_j)d_k)^l, valence 'dddu'."""
        n = self.dim
        G = self.christoffel.data
        sign = CONVENTIONS[self.convention]["riemann_sign"]
        dG = {}
        for (l, j, k), v in self.christoffel.nonzero().items():
            for i in range(n):
                d = v.diff(i + 1)
                if d:
                    dG[i, l, j, k] = d  # d_i Gamma^l_{jk}
        nzG = self.christoffel.nonzero()
        by_lower_first: dict = {}
        for (l, i, m), v in nzG.items():
            by_lower_first.setdefault(i, []).append((l, m, v))

        def fn(idx):
            i, j, k, l = idx
            terms = []
            a = dG.get((i, l, j, k))
            if a:
                terms.append(a)
            b = dG.get((j, l, i, k))
            if b:
                terms.append(-b)
            for m in range(n):
                gm = G[m, j, k]
                if gm and G[l, i, m]:
                    terms.append(gm * G[l, i, m])
                gm = G[m, i, k]
                if gm and G[l, j, m]:
                    terms.append(-(gm * G[l, j, m]))
            s = Scalar.sum(terms)
            return s if sign == 1 else -s

        return Tensor.from_function(n, "dddu", fn, self.chart, (((1, 0, 2, 3), -1),))

    @cached_property
    def riemann(self) -> Tensor:
        """R_{ijkl} = g(Rop(d_i, d_j) d_k, d_l)."""
        return raise_lower(self.riemann_up, 4, self).with_symmetry(RIEMANN_SYMMETRY)

    @cached_property
    def ricci(self) -> Tensor:
        a, b = CONVENTIONS[self.convention]["ricci_slots"]
        return contract(self.riemann, a, b, self).with_symmetry(PAIR_SYMMETRY)

    @cached_property
    def scalar(self) -> Scalar:
        return contract(self.ricci, 0, 1, self).data[()]

    @cached_property
    def ricci_up(self) -> Tensor:
        """Ricci endomorphism as a (1,1) tensor, valence 'du'."""
        return raise_lower(self.ricci, 2, self)

    def with_assumptions(self, s: AssumptionSet, name: Optional[str] = None) -> "Metric":
        rows = [[s.apply(v) for v in row] for row in self.g.data.tolist()]
        combined = AssumptionSet(
            self.assumptions.substitutions + s.substitutions, self.assumptions.nonzero + s.nonzero
        )
        return Metric(rows, self.context, name or self.name, combined, self.convention)

    def __repr__(self):
        return f"Metric({self.name or 'unnamed'}, dim={self.dim})"


def contract(t: Tensor, a: int, b: int, metric: Metric) -> Tensor:
    """Trace over two slots (0-based), using g or g^-1 when both slots agree in type."""
    n = t.dim
    va, vb = t.valence[a], t.valence[b]
    if va != vb:
        weight = lambda p, q: ONE if p == q else ZERO
    elif va == "d":
        weight = lambda p, q: metric.inverse.data[p, q]
    else:
        weight = lambda p, q: metric.g.data[p, q]
    keep = [s for s in range(t.rank) if s not in (a, b)]
    val = "".join(t.valence[s] for s in keep)
    out = np.empty((n,) * len(keep), dtype=object)
    for idx in itertools.product(range(n), repeat=len(keep)):
        terms = []
        for p in range(n):
            for q in range(n):
                w = weight(p, q)
                if not w:
                    continue
                full = [0] * t.rank
                for s, i in zip(keep, idx):
                    full[s] = i
                full[a], full[b] = p, q
                v = t.data[tuple(full)]
                if v:
                    terms.append(w * v)
        out[idx] = Scalar.sum(terms)
    return Tensor(out, val, t.chart)


def raise_lower(t: Tensor, slot: int, metric: Metric) -> Tensor:
    """Raise a covariant slot or lower a contravariant one (slot is 1-based)."""
    if not 1 <= slot <= t.rank:
        raise IndexError(f"slot {slot} outside 1..{t.rank}")
    s = slot - 1
    n = t.dim
    m = metric.inverse.data if t.valence[s] == "d" else metric.g.data
    val = t.valence[:s] + ("u" if t.valence[s] == "d" else "d") + t.valence[s + 1:]
    out = Tensor.zeros(n, val, t.chart)
    groups: dict = {}
    for idx, v in t.nonzero().items():
        for q in range(n):
            w = m[idx[s], q]
            if w:
                j = idx[:s] + (q,) + idx[s + 1:]
                groups.setdefault(j, []).append(w * v)
    for j, terms in groups.items():
        out.data[j] = Scalar.sum(terms)
    return out


def covariant_derivative(t: Tensor, metric: Metric) -> Tensor:
    """nabla t with the derivative slot appended last."""
    n = t.dim
    G = metric.christoffel.data
    nz = t.nonzero()
    out_terms: dict = {}

    def put(idx, v):
        out_terms.setdefault(idx, []).append(v)

    for idx, v in nz.items():
        for m in range(n):
            d = v.diff(m + 1)
            if d:
                put(idx + (m,), d)
    # Gamma corrections: for each nonzero component, push into the slots it feeds
    for idx, v in nz.items():
        for s, kind in enumerate(t.valence):
            p = idx[s]
            for m in range(n):
                for i in range(n):
                    if kind == "d":
                        # -Gamma^p_{m i} T_{..p..} contributes to output index with slot s = i
                        gam = G[p, m, i]
                        if gam:
                            put(idx[:s] + (i,) + idx[s + 1:] + (m,), -(gam * v))
                    else:
                        # +Gamma^i_{m p} T^{..p..} contributes to slot value i
                        gam = G[i, m, p]
                        if gam:
                            put(idx[:s] + (i,) + idx[s + 1:] + (m,), gam * v)
    out = Tensor.zeros(n, t.valence + "d", t.chart, extend_symmetry(t.symmetry, t.rank + 1))
    for idx, terms in out_terms.items():
        out.data[idx] = Scalar.sum(terms)
    return out


# functional forms taking the metric directly ----------------------------------


def inverse_metric(g: Metric) -> Tensor:
    return g.inverse


def christoffel(g: Metric) -> Tensor:
    return g.christoffel


def riemann(g: Metric):
    return g.riemann, g.riemann_up


def ricci_and_scalar(g: Metric):
    return g.ricci, g.scalar
