"""Exact rational-function scalars over an algebraically independent generator set.

A :class:`Scalar` is a reduced fraction ``num/den`` of sparse polynomials with
integer coefficients.  Generators are coordinates, named constants, abstract
function symbols (with their partial derivatives), and two kinds of
transcendental atoms that may carry rational exponents:

* exp-atoms ``exp(m)`` for a coordinate monomial ``m``; ``exp(q)`` for a
  polynomial ``q`` is the product of ``exp(m)**c`` over the terms ``c*m`` of
  ``q``, so exp-atoms merge multiplicatively by exponent addition;
* rational powers of coordinates declared positive.

Everything is immutable.  Generators are interned in a process-wide registry
so that monomials can be stored as sorted tuples of ``(gid, exponent)``.
"""
from __future__ import annotations

import functools
import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Union

import mpmath

__all__ = [
    "Coordinate",
    "Constant",
    "FunctionSymbol",
    "ExpAtom",
    "Scalar",
    "AssumptionSet",
    "ModularPoint",
    "ZERO",
    "ONE",
    "as_scalar",
    "differentiate",
    "substitute",
    "is_zero",
]

Number = Union[int, Fraction]


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class Coordinate:
    index: int  # 1-based position in its chart
    name: str
    positive: bool = False

    @property
    def sort_key(self):
        return (0, self.index, self.name)

    @property
    def rational_exponents(self) -> bool:
        return self.positive


@dataclass(frozen=True)
class Constant:
    name: str

    @property
    def sort_key(self):
        return (1, self.name)

    rational_exponents = False


@dataclass(frozen=True)
class FunctionSymbol:
    """An abstract function ``name(deps)`` or one of its partial derivatives.

    ``derivs`` is kept sorted by coordinate index because partials commute.
    """

    name: str
    deps: tuple = field(compare=False)
    derivs: tuple = ()

    def __post_init__(self):
        dep_idx = {c.index for c in self.deps}
        for c in self.derivs:
            if c.index not in dep_idx:
                raise ValueError(f"{self.name} does not depend on {c.name}")
        object.__setattr__(
            self, "derivs", tuple(sorted(self.derivs, key=lambda c: c.index))
        )

    @property
    def sort_key(self):
        return (2, self.name, len(self.derivs), tuple(c.index for c in self.derivs))

    @property
    def base(self) -> "FunctionSymbol":
        return FunctionSymbol(self.name, self.deps) if self.derivs else self

    def derivative(self, coord: Coordinate) -> Optional["FunctionSymbol"]:
        for c in self.deps:
            if c.index == coord.index:
                return FunctionSymbol(self.name, self.deps, self.derivs + (c,))
        return None

    rational_exponents = False


@dataclass(frozen=True)
class ExpAtom:
    """``exp(m)`` for a coordinate monomial ``m`` given as ((Coordinate, power), ...)."""

    monomial: tuple

    @property
    def sort_key(self):
        return (3, tuple((c.index, k) for c, k in self.monomial))

    rational_exponents = True


Generator = Union[Coordinate, Constant, FunctionSymbol, ExpAtom]

_lock = threading.Lock()
_GENS: list = []
_GID: dict = {}


def gid(gen) -> int:
    try:
        return _GID[gen]
    except KeyError:
        with _lock:
            if gen not in _GID:
                _GID[gen] = len(_GENS)
                _GENS.append(gen)
            return _GID[gen]


def generator(i: int):
    return _GENS[i]


# ---------------------------------------------------------------------------
# sparse polynomials: dict {monomial: int}, monomial = tuple of (gid, exp)


def _norm(e):
    if isinstance(e, Fraction) and e.denominator == 1:
        return int(e)
    return e


@functools.lru_cache(maxsize=1 << 18)
def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for g, e in b:
        s = d.get(g, 0) + e
        if s:
            d[g] = _norm(s)
        else:
            del d[g]
    return tuple(sorted(d.items()))


def _mono_pow(m: tuple, k) -> tuple:
    return tuple((g, _norm(e * k)) for g, e in m)


def _mono_div(a: tuple, b: Mapping) -> tuple:
    d = dict(a)
    for g, e in b.items():
        s = d.get(g, 0) - e
        if s:
            d[g] = _norm(s)
        else:
            d.pop(g, None)
    return tuple(sorted(d.items()))


def _padd(a: dict, b: dict, sign: int = 1) -> dict:
    if len(a) < len(b) and sign == 1:
        a, b = b, a
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul(a: dict, b: dict) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul(ma, mb)
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _pscale(a: dict, k: int) -> dict:
    if k == 1:
        return a
    return {m: c * k for m, c in a.items()}


def _pmul_mono(a: dict, mono: tuple, k: int = 1) -> dict:
    return {_mono_mul(m, mono): c * k for m, c in a.items()}


def _mono_content(p: dict) -> dict:
    """Per-generator minimum exponent over the terms of p (absent counts as 0)."""
    mins: dict = {}
    count: Counter = Counter()
    for m in p:
        for g, e in m:
            cur = mins.get(g)
            if cur is None or e < cur:
                mins[g] = e
            count[g] += 1
    n = len(p)
    out = {}
    for g, e in mins.items():
        if count[g] < n and e > 0:
            continue
        if count[g] < n:
            e = min(e, 0)
        if e:
            out[g] = e
    return out


def _icontent(p: dict) -> int:
    return math.gcd(*p.values())


def _integerize(p: dict) -> tuple[dict, int]:
    """Scale a polynomial with Fraction coefficients to integers: p = out/den."""
    den = 1
    for c in p.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    if den == 1:
        return {m: int(c) for m, c in p.items()}, 1
    return {m: int(c * den) for m, c in p.items()}, den


def _mono_cmp(a: tuple, b: tuple) -> int:
    da = sum(e for _, e in a)
    db = sum(e for _, e in b)
    if da != db:
        return -1 if da < db else 1
    ka = {_GENS[g].sort_key: e for g, e in a}
    kb = {_GENS[g].sort_key: e for g, e in b}
    for k in sorted(set(ka) | set(kb)):
        ea, eb = ka.get(k, 0), kb.get(k, 0)
        if ea != eb:
            return -1 if ea < eb else 1
    return 0


_mono_key = functools.cmp_to_key(_mono_cmp)


def _leading(p: dict) -> tuple:
    if len(p) == 1:
        return next(iter(p))
    return max(p, key=_mono_key)


_RINGS: dict = {}


def _ring(n: int):
    r = _RINGS.get(n)
    if r is None:
        from sympy import ZZ
        from sympy.polys.rings import ring

        r = ring([f"_z{i}" for i in range(n)], ZZ)[0]
        _RINGS[n] = r
    return r


def _encoder(polys):
    """Map polynomials with zero monomial content into a sympy ring and back.

    Generators with rational exponents are replaced by an integer-exponent
    variable ``y**d``.
    """
    gids = sorted({g for p in polys for m in p for g, _ in m})
    scale = []
    for g in gids:
        d = 1
        if _GENS[g].rational_exponents:
            for p in polys:
                for m in p:
                    for h, e in m:
                        if h == g and isinstance(e, Fraction):
                            d = d * e.denominator // math.gcd(d, e.denominator)
        scale.append(d)
    pos = {g: i for i, g in enumerate(gids)}
    n = len(gids)
    R = _ring(n)

    def enc(p):
        out = {}
        for m, c in p.items():
            v = [0] * n
            for g, e in m:
                i = pos[g]
                v[i] = int(e * scale[i])
            out[tuple(v)] = c
        return R(out)

    def dec(q):
        out = {}
        for exps, c in q.items():
            m = tuple(
                (gids[i], _norm(Fraction(k, scale[i]))) for i, k in enumerate(exps) if k
            )
            out[m] = int(c)
        return out

    return enc, dec


def _cancel(N: dict, D: dict) -> tuple[dict, dict]:
    """Divide N and D by their polynomial gcd (both have zero monomial content)."""
    enc, dec = _encoder((N, D))
    _, a, b = enc(N).cofactors(enc(D))
    return dec(a), dec(b)


def factor_numerator(e: "Scalar") -> list:
    """Irreducible non-monomial factors of the numerator, each with positive leading term."""
    if not e.num or len(e.num) == 1:
        return []
    mc = _mono_content(e.num)
    N = {_mono_div(m, mc): c for m, c in e.num.items()} if mc else e.num
    enc, dec = _encoder((N,))
    _, facs = enc(N).factor_list()
    out = []
    for f, _k in facs:
        p = dec(f)
        if len(p) < 2:
            continue
        if p[_leading(p)] < 0:
            p = {m: -c for m, c in p.items()}
        out.append(Scalar._raw(p, {(): 1}))
    return out


def _canon(num: dict, den: dict) -> "Scalar":
    if not den:
        raise ZeroDivisionError("denominator is identically zero")
    if not num:
        return ZERO
    mn = _mono_content(num)
    md = _mono_content(den)
    N = {_mono_div(m, mn): c for m, c in num.items()} if mn else num
    D = {_mono_div(m, md): c for m, c in den.items()} if md else den
    cn = _icontent(N)
    cd = _icontent(D)
    if cn != 1:
        N = {m: c // cn for m, c in N.items()}
    if cd != 1:
        D = {m: c // cd for m, c in D.items()}
    if len(D) > 1:
        N, D = _cancel(N, D)
    net = dict(mn)
    for g, e in md.items():
        net[g] = net.get(g, 0) - e
    num_m, den_m = [], []
    for g, e in net.items():
        if not e:
            continue
        gen = _GENS[g]
        if isinstance(gen, ExpAtom):
            num_m.append((g, _norm(e)))
        elif gen.rational_exponents:
            if e > 0:
                num_m.append((g, _norm(e)))
            else:
                k = math.floor(-e)
                if e + k:
                    num_m.append((g, _norm(e + k)))
                if k:
                    den_m.append((g, k))
        elif e > 0:
            num_m.append((g, e))
        else:
            den_m.append((g, -e))
    k = math.gcd(cn, cd)
    p, q = cn // k, cd // k
    nm = tuple(sorted(num_m))
    dm = tuple(sorted(den_m))
    num = _pmul_mono(N, nm, p) if (nm or p != 1) else N
    den = _pmul_mono(D, dm, q) if (dm or q != 1) else D
    if den[_leading(den)] < 0:
        num = {m: -c for m, c in num.items()}
        den = {m: -c for m, c in den.items()}
    return Scalar._raw(num, den)


# ---------------------------------------------------------------------------
# scalars


class Scalar:
    """Canonical element of the working function field.  Immutable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, value: Number = 0):
        value = Fraction(value)
        self.num = {(): value.numerator} if value else {}
        self.den = {(): value.denominator}
        self._hash = None

    @classmethod
    def _raw(cls, num: dict, den: dict) -> "Scalar":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def from_polys(cls, num: dict, den: dict) -> "Scalar":
        return _canon(num, den)

    @classmethod
    def symbol(cls, gen) -> "Scalar":
        if isinstance(gen, ExpAtom) and not gen.monomial:
            pass
        return cls._raw({((gid(gen), 1),): 1}, {(): 1})

    @classmethod
    def monomial(cls, factors: Iterable, coeff: Number = 1) -> "Scalar":
        """Build ``coeff * prod(gen**e)`` from (generator, exponent) pairs."""
        d: dict = {}
        for gen, e in factors:
            g = gid(gen)
            if not isinstance(e, int) and Fraction(e).denominator != 1:
                if not gen.rational_exponents:
                    raise ValueError(f"non-integer power of {gen}")
            d[g] = _norm(d.get(g, 0) + Fraction(e))
        mono = tuple(sorted((g, e) for g, e in d.items() if e))
        coeff = Fraction(coeff)
        return _canon({mono: coeff.numerator} if coeff else {}, {(): coeff.denominator})

    @classmethod
    def exp(cls, arg: "Scalar") -> "Scalar":
        """exp of a polynomial in coordinates with rational coefficients."""
        if len(arg.den) != 1 or () not in arg.den:
            raise ValueError("exp argument must be a polynomial in coordinates")
        q = arg.den[()]
        factors = []
        for m, c in arg.num.items():
            cmono = []
            for g, e in m:
                gen = _GENS[g]
                if not isinstance(gen, Coordinate) or not isinstance(e, int) or e < 0:
                    raise ValueError("exp argument must be a polynomial in coordinates")
                cmono.append((gen, e))
            cmono.sort(key=lambda t: t[0].index)
            factors.append((ExpAtom(tuple(cmono)), Fraction(c, q)))
        return cls.monomial(factors)

    # -- structure -----------------------------------------------------------

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = as_scalar(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __bool__(self):
        return bool(self.num)

    @property
    def is_number(self) -> bool:
        return all(not m for m in self.num) and all(not m for m in self.den)

    def as_fraction(self) -> Fraction:
        if not self.is_number:
            raise ValueError("not a number")
        return Fraction(self.num.get((), 0), self.den[()])

    def generators(self) -> set:
        return {_GENS[g] for p in (self.num, self.den) for m in p for g, _ in m}

    @property
    def size(self) -> int:
        return len(self.num) + len(self.den)

    def is_unit_monomial(self, nonzero: Iterable = ()) -> bool:
        """True if both num and den are single terms built from never-zero generators."""
        if len(self.num) != 1 or len(self.den) != 1:
            return False
        nz = set(nonzero)
        for p in (self.num, self.den):
            for g, _ in next(iter(p)):
                gen = _GENS[g]
                if isinstance(gen, ExpAtom) or (isinstance(gen, Coordinate) and gen.positive):
                    continue
                if gen not in nz:
                    return False
        return True

    def numerator(self) -> "Scalar":
        return Scalar._raw(self.num, {(): 1})

    def denominator(self) -> "Scalar":
        return Scalar._raw(self.den, {(): 1})

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self):
        return Scalar._raw({m: -c for m, c in self.num.items()}, self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return _canon(_padd(self.num, other.num), self.den)
        return _canon(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ZERO
        return _canon(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise ZeroDivisionError("division by zero scalar")
        return _canon(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise ZeroDivisionError("division by zero scalar")
        return _canon(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k):
        if isinstance(k, Fraction) and k.denominator == 1:
            k = int(k)
        if isinstance(k, int):
            if k == 0:
                return ONE
            if k < 0:
                return self.inverse() ** (-k)
            if len(self.num) == 1 and len(self.den) == 1:
                (mn, cn), (md, cd) = next(iter(self.num.items())), next(iter(self.den.items()))
                return Scalar._raw({_mono_pow(mn, k): cn**k}, {_mono_pow(md, k): cd**k})
            out, base = ONE, self
            while k:
                if k & 1:
                    out = out * base
                k >>= 1
                if k:
                    base = base * base
            return out
        k = Fraction(k)
        if len(self.num) != 1 or len(self.den) != 1:
            raise ValueError("rational powers are limited to single-term expressions")
        (mn, cn), (md, cd) = next(iter(self.num.items())), next(iter(self.den.items()))
        if cn != 1 or cd != 1:
            raise ValueError("rational power of a numeric coefficient")
        for g, _ in mn + md:
            if not _GENS[g].rational_exponents:
                raise ValueError(f"rational power of {_GENS[g]} is not allowed")
        m = _mono_div(_mono_pow(mn, k), dict(_mono_pow(md, k)))
        return _canon({m: 1}, {(): 1})

    @staticmethod
    def sum(items: Iterable) -> "Scalar":
        """Sum with one final reduction when denominators are monomials."""
        groups: dict = {}
        for it in items:
            it = as_scalar(it)
            if not it.num:
                continue
            key = frozenset(it.den.items())
            g = groups.get(key)
            if g is None:
                groups[key] = [it.den, it.num]
            else:
                g[1] = _padd(g[1], it.num)
        if not groups:
            return ZERO
        if len(groups) == 1:
            den, num = next(iter(groups.values()))
            return _canon(num, den)
        if all(len(den) == 1 for den, _ in groups.values()):
            lexp: dict = {}
            lco = 1
            for den, _ in groups.values():
                (m, c), = den.items()
                lco = lco * c // math.gcd(lco, c)
                for g, e in m:
                    if e > lexp.get(g, 0):
                        lexp[g] = e
            lmono = tuple(sorted(lexp.items()))
            num: dict = {}
            for den, part in groups.values():
                (m, c), = den.items()
                factor = _mono_div(lmono, dict(m))
                num = _padd(num, _pmul_mono(part, factor, lco // c))
            return _canon(num, {lmono: lco})
        out = ZERO
        for den, part in groups.values():
            out = out + _canon(part, den)
        return out

    # -- calculus and substitution -------------------------------------------

    def diff(self, coord: Union[Coordinate, int]) -> "Scalar":
        idx = coord if isinstance(coord, int) else coord.index
        dn, qn = _integerize(_dpoly(self.num, idx))
        if len(self.den) == 1 and () in self.den:
            return _canon(dn, {(): qn * self.den[()]}) if dn else ZERO
        dd, qd = _integerize(_dpoly(self.den, idx))
        top = _padd(_pscale(_pmul(dn, self.den), qd), _pscale(_pmul(self.num, dd), qn), -1)
        if not top:
            return ZERO
        return _canon(top, _pscale(_pmul(self.den, self.den), qn * qd))

    def subs(self, image: Callable) -> "Scalar":
        """Replace generators: ``image(gen)`` returns a Scalar or None to keep it."""
        memo: dict = {}

        def img(g):
            if g not in memo:
                memo[g] = image(_GENS[g])
            return memo[g]

        top = _subs_poly(self.num, img)
        bottom = _subs_poly(self.den, img)
        if not bottom:
            raise ZeroDivisionError("substitution makes a denominator identically zero")
        return top / bottom

    def evaluate(self, values: Mapping, dps: int = 30):
        """Numerically evaluate with mpmath; ``values`` maps generators to numbers."""
        with mpmath.workdps(dps):
            cache: dict = {}

            def gval(g, e):
                gen = _GENS[g]
                if isinstance(gen, ExpAtom):
                    arg = mpmath.mpf(1)
                    for c, k in gen.monomial:
                        arg *= mpmath.mpf(values[c]) ** k
                    return mpmath.exp(arg * mpmath.mpf(e.numerator) / e.denominator) \
                        if isinstance(e, Fraction) else mpmath.exp(arg * e)
                key = g
                if key not in cache:
                    cache[key] = mpmath.mpf(values[gen]) if not isinstance(values[gen], mpmath.mpc) else values[gen]
                v = cache[key]
                if isinstance(e, Fraction):
                    return v ** (mpmath.mpf(e.numerator) / e.denominator)
                return v**e

            def pval(p):
                total = mpmath.mpf(0)
                for m, c in p.items():
                    t = mpmath.mpf(c)
                    for g, e in m:
                        t *= gval(g, e)
                    total += t
                return total

            return +(pval(self.num) / pval(self.den))

    # -- printing -------------------------------------------------------------

    def __str__(self):
        from .syntax import format_scalar

        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({self})"


class ModularPoint:
    """Ring homomorphism to Z/p at a random point: every generator gets a random residue.

    Rational exponents are handled by drawing each base as a ``RADICAL``-th
    power, so any exponent whose denominator divides ``RADICAL`` evaluates
    exactly.  Used to screen large linear systems before exact elimination.
    """

    PRIME = (1 << 61) - 1
    RADICAL = 27720  # lcm(1..12)

    def __init__(self, seed: int = 0):
        import random

        self._rng = random.Random(seed)
        self._base: dict = {}
        self._memo: dict = {}

    def _gen(self, g: int, e) -> int:
        P = self.PRIME
        b = self._base.get(g)
        if b is None:
            b = self._base[g] = self._rng.randrange(2, P - 1)
        if isinstance(e, Fraction):
            if self.RADICAL % e.denominator:
                raise ValueError(f"exponent {e} not supported by modular evaluation")
            return pow(b, self.RADICAL // e.denominator * e.numerator, P)
        return pow(b, self.RADICAL * e, P)

    def _poly(self, p: dict) -> int:
        P = self.PRIME
        total = 0
        for mono, c in p.items():
            if isinstance(c, Fraction):
                t = c.numerator * pow(c.denominator, -1, P)
            else:
                t = c
            for g, e in mono:
                t = t * self._gen(g, e) % P
            total += t
        return total % P

    def __call__(self, e: "Scalar") -> int:
        v = self._memo.get(e)
        if v is None:
            den = self._poly(e.den)
            if not den:
                raise ZeroDivisionError("denominator vanishes at the sample point")
            v = self._memo[e] = self._poly(e.num) * pow(den, -1, self.PRIME) % self.PRIME
        return v


def _dpoly(p: dict, idx: int) -> dict:
    out: dict = {}
    for m, c in p.items():
        for j, (g, e) in enumerate(m):
            gen = _GENS[g]
            if isinstance(gen, Coordinate):
                if gen.index != idx:
                    continue
                rest = m[:j] + ((g, _norm(e - 1)),) + m[j + 1:] if e != 1 else m[:j] + m[j + 1:]
                terms = [(rest, c * e)]
            elif isinstance(gen, FunctionSymbol):
                coord = next((cc for cc in gen.deps if cc.index == idx), None)
                if coord is None:
                    continue
                d = gid(gen.derivative(coord))
                rest = m[:j] + ((g, e - 1),) + m[j + 1:] if e != 1 else m[:j] + m[j + 1:]
                terms = [(_mono_mul(tuple(sorted(rest)), ((d, 1),)), c * e)]
            elif isinstance(gen, ExpAtom):
                k = next((kk for cc, kk in gen.monomial if cc.index == idx), 0)
                if not k:
                    continue
                dm = []
                for cc, kk in gen.monomial:
                    kk = kk - 1 if cc.index == idx else kk
                    if kk:
                        dm.append((gid(cc), kk))
                terms = [(_mono_mul(m, tuple(sorted(dm))), c * e * k)]
            else:
                continue
            for mono, coef in terms:
                coef = _norm(Fraction(coef)) if isinstance(coef, Fraction) else coef
                v = out.get(mono, 0) + coef
                if v:
                    out[mono] = v
                else:
                    out.pop(mono, None)
    return out


def _subs_poly(p: dict, img) -> "Scalar":
    terms = []
    for m, c in p.items():
        kept = []
        factors = []
        for g, e in m:
            r = img(g)
            if r is None:
                kept.append((g, e))
            else:
                if not isinstance(e, int):
                    raise ValueError(f"cannot substitute into a rational power of {_GENS[g]}")
                factors.append(r**e)
        t = Scalar._raw({tuple(kept): c}, {(): 1})
        for f in factors:
            t = t * f
        terms.append(t)
    return Scalar.sum(terms)


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    return NotImplemented


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    if isinstance(x, (Coordinate, Constant, FunctionSymbol, ExpAtom)):
        return Scalar.symbol(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


ZERO = Scalar(0)
ONE = Scalar(1)


# ---------------------------------------------------------------------------
# assumptions


def _multiset_minus(big: tuple, small: tuple):
    rest = list(big)
    for c in small:
        for i, d in enumerate(rest):
            if d.index == c.index:
                del rest[i]
                break
        else:
            return None
    return rest


class AssumptionSet:
    """Ordered substitutions plus expressions declared nonzero.

    A substitution for a function symbol also rewrites every higher derivative
    of that symbol by differentiating the image.
    """

    def __init__(self, substitutions: Iterable = (), nonzero: Iterable = ()):
        subs = []
        for target, image in substitutions:
            if not isinstance(target, (Constant, FunctionSymbol)):
                raise TypeError("only constants and function symbols can be substituted")
            subs.append((target, as_scalar(image)))
        self.substitutions = tuple(subs)
        self.nonzero = tuple(as_scalar(e) for e in nonzero)
        self._memo: dict = {}
        self._check_acyclic()

    def _check_acyclic(self):
        targets = {t for t, _ in self.substitutions}
        names = {t.name for t in targets if isinstance(t, FunctionSymbol)}
        for t, image in self.substitutions:
            for g in image.generators():
                if g == t or (
                    isinstance(t, FunctionSymbol) and isinstance(g, FunctionSymbol)
                    and g.name == t.name and _multiset_minus(g.derivs, t.derivs) is not None
                ):
                    raise ValueError(f"cyclic substitution for {t}")
        del targets, names

    def __bool__(self):
        return bool(self.substitutions or self.nonzero)

    def __len__(self):
        return len(self.substitutions) + len(self.nonzero)

    def extend(self, substitutions: Iterable = (), nonzero: Iterable = ()) -> "AssumptionSet":
        return AssumptionSet(
            self.substitutions + tuple(substitutions), self.nonzero + tuple(nonzero)
        )

    def image(self, gen) -> Optional[Scalar]:
        if gen in self._memo:
            return self._memo[gen]
        out = None
        for target, image in self.substitutions:
            if gen == target:
                out = image
                break
            if (
                isinstance(gen, FunctionSymbol) and isinstance(target, FunctionSymbol)
                and gen.name == target.name
            ):
                rest = _multiset_minus(gen.derivs, target.derivs)
                if rest is not None:
                    out = image
                    for c in rest:
                        out = out.diff(c)
                    break
        self._memo[gen] = out
        return out

    def apply(self, e: Scalar) -> Scalar:
        if not self.substitutions:
            return e
        for _ in range(64):
            if not any(self.image(g) is not None for g in e.generators()):
                return e
            e = e.subs(self.image)
        raise ValueError("substitutions do not terminate")

    def targets(self):
        return [t for t, _ in self.substitutions]

    def describe(self) -> list:
        from .syntax import format_generator

        out = [f"set: {format_generator(t)} = {img}" for t, img in self.substitutions]
        out += [f"nonzero: {e}" for e in self.nonzero]
        return out

    def __repr__(self):
        return f"AssumptionSet({self.describe()})"


def differentiate(e: Scalar, coord: Union[Coordinate, int]) -> Scalar:
    return as_scalar(e).diff(coord)


def substitute(e: Scalar, s: AssumptionSet) -> Scalar:
    return s.apply(as_scalar(e))


def is_zero(e: Scalar, s: Optional[AssumptionSet] = None) -> bool:
    e = as_scalar(e)
    if s is not None:
        e = s.apply(e)
    return not e.num
