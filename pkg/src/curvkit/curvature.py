"""Curvature-derived tensors and the algebraic operators acting on them.

Every operator works on dense :class:`~curvkit.geometry.Tensor` arrays and
returns new tensors; nothing is mutated.  Slot arguments are 1-based.
"""
from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .expr import ONE, ZERO, Scalar, as_scalar
from .geometry import (
    PAIR_SYMMETRY,
    RIEMANN_SYMMETRY,
    Metric,
    Tensor,
    contract,
    covariant_derivative,
    raise_lower,
)

__all__ = [
    "DerivedKind",
    "kulkarni_nomizu",
    "derived_tensor",
    "ricci_power",
    "dot_action",
    "q_operator",
    "cyclic_sum",
    "divergence",
    "energy_momentum",
    "Curvature",
]


class DerivedKind(enum.Enum):
    CONFORMAL = "C"
    CONCIRCULAR = "W"
    CONHARMONIC = "K"
    PROJECTIVE = "P"
    GAUSSIAN = "G"


def _same_shape(a: Tensor, b: Tensor, valence: str):
    for t in (a, b):
        if t.valence != valence:
            raise ValueError(f"expected valence {valence!r}, got {t.valence!r}")
    if a.dim != b.dim:
        raise ValueError("tensors live on charts of different dimension")


def kulkarni_nomizu(A: Tensor, E: Tensor) -> Tensor:
    """(A^E)_{ijkl} = A_il E_jk + A_jk E_il - A_ik E_jl - A_jl E_ik."""
    _same_shape(A, E, "dd")
    a, e = A.data, E.data

    def fn(idx):
        i, j, k, l = idx
        terms = []
        for p, q, s in ((a[i, l], e[j, k], 1), (a[j, k], e[i, l], 1),
                        (a[i, k], e[j, l], -1), (a[j, l], e[i, k], -1)):
            if p and q:
                terms.append(p * q if s == 1 else -(p * q))
        return Scalar.sum(terms)

    return Tensor.from_function(A.dim, "dddd", fn, A.chart, RIEMANN_SYMMETRY)


def derived_tensor(kind, g: Metric) -> Tensor:
    """C, W, K, P or the Gaussian tensor of ``g`` in Kulkarni-Nomizu form."""
    kind = DerivedKind(kind) if not isinstance(kind, DerivedKind) else kind
    n = g.dim
    R, S, kappa = g.riemann, g.ricci, g.scalar
    gg = kulkarni_nomizu(g.g, g.g)
    if kind is DerivedKind.GAUSSIAN:
        return gg * Scalar(Fraction(1, 2))
    if kind is DerivedKind.CONCIRCULAR:
        return R - gg * (kappa / (2 * n * (n - 1)))
    if kind is DerivedKind.CONHARMONIC:
        return R - kulkarni_nomizu(g.g, S) * Scalar(Fraction(1, n - 2))
    if kind is DerivedKind.CONFORMAL:
        return (
            R
            - kulkarni_nomizu(g.g, S) * Scalar(Fraction(1, n - 2))
            + gg * (kappa / (2 * (n - 2) * (n - 1)))
        )
    # projective: no pair symmetry, only antisymmetry in the first two slots
    gd, sd = g.g.data, S.data
    k = Scalar(Fraction(1, n - 1))

    def fn(idx):
        i, j, l, m = idx
        corr = []
        if gd[i, m] and sd[j, l]:
            corr.append(gd[i, m] * sd[j, l])
        if gd[j, m] and sd[i, l]:
            corr.append(-(gd[j, m] * sd[i, l]))
        c = Scalar.sum(corr)
        r = R.data[idx]
        return r - c * k if c else r

    return Tensor.from_function(n, "dddd", fn, g.chart, (((1, 0, 2, 3), -1),))


def ricci_power(S: Tensor, k: int, g: Metric) -> Tensor:
    """k-th level tensor S^k(X,Y) = S(𝒮^{k-1}X, Y), i.e. (S g^-1)^{k-1} S as matrices."""
    if k < 1:
        raise ValueError("level must be a positive integer")
    from .linalg import matmul

    n = g.dim
    s = S.data.tolist()
    endo = matmul(s, g.inverse.data.tolist())
    out = s
    for _ in range(k - 1):
        out = matmul(endo, out)
    return Tensor(np.array(out, dtype=object).reshape(n, n), "dd", g.chart, PAIR_SYMMETRY)


def _endomorphism(D: Tensor, g: Metric) -> dict:
    """Nonzero entries of 𝒟(d_a, d_b) d_i = sum_m E[a,b,i,m] d_m, grouped by i."""
    if D.valence != "dddd":
        raise ValueError("the acting tensor must be of type (0,4)")
    up = raise_lower(D, 4, g)
    by_i: dict = {}
    for (a, b, i, m), v in up.nonzero().items():
        by_i.setdefault(i, []).append((a, b, m, v))
    return by_i


def dot_action(D: Tensor, H: Tensor, g: Metric) -> Tensor:
    """D·H: the endomorphisms 𝒟(X,Y) acting as derivations on H.

    Covariant slots enter with a minus sign, contravariant slots with a plus
    sign, and the two new covariant slots (X, Y) are appended last.
    """
    by_i = _endomorphism(D, g)
    n = g.dim
    terms: dict = {}
    for idx, h in H.nonzero().items():
        for s, kind in enumerate(H.valence):
            if kind == "d":
                # H(.., 𝒟(X,Y)X_s, ..) picks up H[.., m, ..] with weight E[a,b,i,m]
                m = idx[s]
                for i in range(n):
                    for a, b, mm, v in by_i.get(i, ()):
                        if mm == m:
                            out = idx[:s] + (i,) + idx[s + 1:] + (a, b)
                            terms.setdefault(out, []).append(-(v * h))
            else:
                # (𝒟(X,Y) H)^l gets E[a,b,m,l] H^m
                m = idx[s]
                for a, b, l, v in by_i.get(m, ()):
                    out = idx[:s] + (l,) + idx[s + 1:] + (a, b)
                    terms.setdefault(out, []).append(v * h)
    t = Tensor.zeros(n, H.valence + "dd", g.chart)
    for idx, ts in terms.items():
        t.data[idx] = Scalar.sum(ts)
    return t


def q_operator(A: Tensor, H: Tensor) -> Tensor:
    """Q(A,H)(X_1..X_k,X,Y) = sum_s A(X,X_s) H(..Y..) - A(Y,X_s) H(..X..)."""
    if A.valence != "dd":
        raise ValueError("Q(A,H) needs a (0,2) tensor A")
    if set(H.valence) - {"d"}:
        raise ValueError("Q(A,H) needs a covariant tensor H")
    n = A.dim
    a = A.nonzero()
    by_first: dict = {}
    for (p, q), v in a.items():
        by_first.setdefault(q, []).append((p, v))  # A[p, q] with q the slot index
    terms: dict = {}
    for idx, h in H.nonzero().items():
        for s in range(H.rank):
            y = idx[s]  # H has Y (resp. X) in slot s
            for i in range(n):
                for x, v in by_first.get(i, ()):
                    # A(X=x, X_s=i) H(.., Y=y, ..) with output (.., i, .., x, y)
                    base = idx[:s] + (i,) + idx[s + 1:]
                    terms.setdefault(base + (x, y), []).append(v * h)
                    # - A(Y=x, X_s=i) H(.., X=y, ..) with output (.., i, .., y, x)
                    terms.setdefault(base + (y, x), []).append(-(v * h))
    t = Tensor.zeros(n, H.valence + "dd", A.chart)
    for idx, ts in terms.items():
        t.data[idx] = Scalar.sum(ts)
    return t


def cyclic_sum(t: Tensor, slots: Sequence[int]) -> Tensor:
    """Sum of the three cyclic rotations of the values placed in ``slots`` (1-based)."""
    slots = [s - 1 for s in slots]
    if len(slots) != 3 or len(set(slots)) != 3 or not all(0 <= s < t.rank for s in slots):
        raise ValueError(f"need three distinct slots within 1..{t.rank}")
    a, b, c = slots
    out = np.empty(t.data.shape, dtype=object)
    for idx in itertools.product(range(t.dim), repeat=t.rank):
        vals = []
        for p, q, r in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            src = list(idx)
            trio = (idx[a], idx[b], idx[c])
            src[a], src[b], src[c] = trio[p], trio[q], trio[r]
            v = t.data[tuple(src)]
            if v:
                vals.append(v)
        out[idx] = Scalar.sum(vals)
    return Tensor(out, t.valence, t.chart)


def divergence(t: Tensor, slot: int, g: Metric) -> Tensor:
    """g-trace of ∇t over ``slot`` and the derivative slot."""
    if not 1 <= slot <= t.rank:
        raise ValueError(f"slot {slot} outside 1..{t.rank}")
    nt = covariant_derivative(t, g)
    return contract(nt, slot - 1, t.rank, g)


def energy_momentum(g: Metric) -> Tensor:
    """T = c^4/(8 pi G) (S - kappa/2 g), zero cosmological constant."""
    ctx = g.context
    c, G, pi = ctx["c"], ctx["G"], ctx["pi"]
    k = c ** 4 / (8 * pi * G)
    S, kappa = g.ricci, g.scalar
    return ((S - g.g * (kappa / 2)) * k).with_symmetry(PAIR_SYMMETRY)


def covariant_one_form(g: Metric, components) -> Tensor:
    return Tensor(np.array([as_scalar(c) for c in components], dtype=object), "d", g.chart)


class Curvature:
    """Lazily computed tensors of one metric, addressed by short names."""

    NAMES = ("g", "R", "S", "C", "W", "K", "P", "G", "Grot", "T", "Rup", "Sup")

    def __init__(self, metric: Metric):
        self.metric = metric

    @cached_property
    def R(self):
        return self.metric.riemann

    @cached_property
    def S(self):
        return self.metric.ricci

    @property
    def g(self):
        return self.metric.g

    @property
    def kappa(self):
        return self.metric.scalar

    @cached_property
    def C(self):
        return derived_tensor(DerivedKind.CONFORMAL, self.metric)

    @cached_property
    def W(self):
        return derived_tensor(DerivedKind.CONCIRCULAR, self.metric)

    @cached_property
    def K(self):
        return derived_tensor(DerivedKind.CONHARMONIC, self.metric)

    @cached_property
    def P(self):
        return derived_tensor(DerivedKind.PROJECTIVE, self.metric)

    @cached_property
    def Grot(self):
        return derived_tensor(DerivedKind.GAUSSIAN, self.metric)

    @cached_property
    def T(self):
        return energy_momentum(self.metric)

    @property
    def Rup(self):
        return self.metric.riemann_up

    @property
    def Sup(self):
        return self.metric.ricci_up

    def tensor(self, name: str) -> Tensor:
        if name == "G":
            return self.metric.g
        if name not in self.NAMES:
            raise KeyError(f"unknown tensor {name!r}")
        return getattr(self, name)

    def nabla(self, name: str) -> Tensor:
        key = "_nabla_" + name
        if key not in self.__dict__:
            self.__dict__[key] = covariant_derivative(self.tensor(name), self.metric)
        return self.__dict__[key]

    def dot(self, D: str, H: str) -> Tensor:
        key = f"_dot_{D}_{H}"
        if key not in self.__dict__:
            self.__dict__[key] = dot_action(self.tensor(D), self.tensor(H), self.metric)
        return self.__dict__[key]

    def q(self, A: str, H: str) -> Tensor:
        key = f"_q_{A}_{H}"
        if key not in self.__dict__:
            self.__dict__[key] = q_operator(self.tensor(A), self.tensor(H))
        return self.__dict__[key]
