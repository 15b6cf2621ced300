"""Linear algebra over the function field of canonical scalars.

Ranks and solutions are *generic*: generators are independent, and every
division by a pivot that is not obviously nonzero is recorded as an
assumption on the result.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .expr import (
    ONE,
    ZERO,
    Coordinate,
    ExpAtom,
    ModularPoint,
    Scalar,
    as_scalar,
    factor_numerator,
    generator,
)


class SingularMatrixError(ArithmeticError):
    pass


class PivotPolicy:
    """Decides which pivots need no assumption and records the rest.

    Pivots are split into irreducible numerator factors.  Factors built from
    never-zero generators are free; factors of ``declared`` expressions are
    allowed but reported when used; any other factor becomes a new assumption.
    """

    def __init__(self, nonzero_generators: Iterable = (), declared: Iterable[Scalar] = ()):
        self.nonzero_generators = frozenset(nonzero_generators)
        self.declared = [as_scalar(d) for d in declared]
        self.known = set()
        for d in self.declared:
            self.known.update(self._factors(d))
        self.used: list = []
        self._memo: dict = {}

    def _factors(self, e: Scalar) -> list:
        num = e.numerator()
        if num.is_unit_monomial(self.nonzero_generators):
            return []
        if len(num.num) > self.FACTOR_LIMIT:
            out = [_primitive(num)]
        else:
            out = factor_numerator(num)
        # single-term numerators: keep the generators that may vanish
        if len(num.num) == 1:
            (mono,) = num.num
            for g, _ in mono:
                gen = generator(g)
                if not (
                    isinstance(gen, ExpAtom)
                    or (isinstance(gen, Coordinate) and gen.positive)
                    or gen in self.nonzero_generators
                ):
                    out.append(Scalar.symbol(gen))
        else:
            from .expr import _mono_content

            for g in _mono_content(num.num):
                gen = generator(g)
                if not (
                    isinstance(gen, ExpAtom)
                    or (isinstance(gen, Coordinate) and gen.positive)
                    or gen in self.nonzero_generators
                ):
                    out.append(Scalar.symbol(gen))
        return out

    def factors(self, e: Scalar) -> list:
        f = self._memo.get(e)
        if f is None:
            f = self._memo[e] = self._factors(e)
        return f

    # numerators with more terms are kept whole rather than factored
    FACTOR_LIMIT = 40

    def trivially_nonzero(self, e: Scalar) -> bool:
        # a denominator is nonzero wherever the expression is defined
        return e.is_number or e.numerator().is_unit_monomial(self.nonzero_generators)

    def record(self, pivot: Scalar) -> None:
        if self.trivially_nonzero(pivot):
            return
        for f in self.factors(pivot):
            if f not in self.used:
                self.used.append(f)

    def score(self, e: Scalar):
        if e.is_number:
            return (0, 0)
        if self.trivially_nonzero(e):
            return (1, e.size)
        fs = self.factors(e)
        if all(f in self.used for f in fs):
            return (2, e.size)
        if all(f in self.used or f in self.known for f in fs):
            return (3, e.size)
        return (4, len(fs), e.size)


def _primitive(num: Scalar) -> Scalar:
    """``num`` without its monomial content, scaled to a positive leading coefficient."""
    from .expr import _canon, _leading, _mono_content, _mono_div, _integerize

    content = _mono_content(num.num)
    p = {_mono_div(m, content): c for m, c in num.num.items()} if content else dict(num.num)
    p, _ = _integerize(p)
    if p[_leading(p)] < 0:
        p = {m: -c for m, c in p.items()}
    return _canon(p, {(): 1})


# ---------------------------------------------------------------------------
# dense matrices (lists of lists of Scalar)


def determinant(m: Sequence[Sequence[Scalar]]) -> Scalar:
    n = len(m)
    a = [[as_scalar(x) for x in row] for row in m]
    det = ONE
    policy = PivotPolicy()
    for col in range(n):
        rows = [r for r in range(col, n) if a[r][col]]
        if not rows:
            return ZERO
        piv = min(rows, key=lambda r: policy.score(a[r][col]))
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / p
                a[r] = [a[r][k] - f * a[col][k] if k >= col else a[r][k] for k in range(n)]
    return det


def inverse(m: Sequence[Sequence[Scalar]]) -> list:
    """Gauss-Jordan inverse; raises SingularMatrixError for a generically singular matrix."""
    n = len(m)
    a = [[as_scalar(x) for x in row] + [ONE if i == j else ZERO for j in range(n)]
         for i, row in enumerate(m)]
    policy = PivotPolicy()
    for col in range(n):
        rows = [r for r in range(col, n) if a[r][col]]
        if not rows:
            raise SingularMatrixError("matrix is singular over the function field")
        piv = min(rows, key=lambda r: policy.score(a[r][col]))
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [a[r][k] - f * a[col][k] for k in range(2 * n)]
    return [row[n:] for row in a]


def matmul(a, b) -> list:
    n, k, m = len(a), len(b), len(b[0])
    return [[Scalar.sum(a[i][t] * b[t][j] for t in range(k) if a[i][t] and b[t][j])
             for j in range(m)] for i in range(n)]


def rank(m: Sequence[Sequence[Scalar]], policy: Optional[PivotPolicy] = None) -> int:
    """Generic rank by elimination; pivots are reported to ``policy``."""
    policy = policy or PivotPolicy()
    rows = [[as_scalar(x) for x in row] for row in m]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ncol = len(rows[0])
    r = 0
    for col in range(ncol):
        cand = [i for i in range(r, len(rows)) if rows[i][col]]
        if not cand:
            continue
        piv = min(cand, key=lambda i: policy.score(rows[i][col]))
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        policy.record(p)
        for i in range(r + 1, len(rows)):
            if rows[i][col]:
                f = rows[i][col] / p
                rows[i] = [rows[i][k] - f * rows[r][k] for k in range(ncol)]
        r += 1
        if r == len(rows):
            break
    return r


# ---------------------------------------------------------------------------
# linear systems


@dataclass
class LinearForm:
    """sum(coeffs[i] * unknown_i) + const, as one equation ``... = 0``."""

    coeffs: dict = field(default_factory=dict)
    const: Scalar = ZERO

    def add(self, unknown: int, coeff: Scalar) -> None:
        if not coeff:
            return
        cur = self.coeffs.get(unknown)
        v = coeff if cur is None else cur + coeff
        if v:
            self.coeffs[unknown] = v
        else:
            self.coeffs.pop(unknown, None)

    def is_trivial(self) -> bool:
        return not self.coeffs and not self.const

    def evaluate(self, values: Sequence[Scalar]) -> Scalar:
        return Scalar.sum([c * values[i] for i, c in self.coeffs.items()] + [self.const])


@dataclass
class SolutionSpace:
    """Affine family ``particular + span(basis)`` of solutions of a linear system.

    ``assumptions`` lists the pivots assumed nonzero during elimination.
    """

    unknowns: list
    particular: dict
    basis: list
    assumptions: list = field(default_factory=list)
    free: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def member(self, params: Sequence = ()) -> dict:
        params = list(params) + [ZERO] * (len(self.basis) - len(params))
        out = dict(self.particular)
        for t, vec in zip(params, self.basis):
            t = as_scalar(t)
            for k, v in vec.items():
                out[k] = out[k] + t * v
        return out

    def contains(self, candidate: dict) -> bool:
        """Membership test: the free coordinates determine the combination."""
        cand = {k: as_scalar(candidate.get(k, ZERO)) for k in self.unknowns}
        coeffs = [cand[f] - self.particular[f] for f in self.free]
        expect = self.member(coeffs)
        return all(expect[k] == cand[k] for k in self.unknowns)

    def is_homogeneous(self) -> bool:
        return not any(self.particular.values())

    def has_nonzero_member(self) -> bool:
        return bool(self.basis) or any(self.particular.values())


@dataclass
class Inconsistent:
    """Certificate that a system has no solution: a reduced equation ``0 = residual``."""

    residual: Scalar
    equation_index: int
    assumptions: list = field(default_factory=list)


# systems with more equations than this multiple of the unknowns are screened
SCREEN_FACTOR = 3
# True: leftover equations of a screened system are checked exactly; False:
# checked at two random points mod p (an error needs both points on a root)
EXACT_VERIFY = True


def solve_linear(
    unknowns: Sequence[str],
    equations: Iterable[LinearForm],
    policy: Optional[PivotPolicy] = None,
    screen: Optional[bool] = None,
    exact: Optional[bool] = None,
):
    """Solve ``eq = 0`` for all equations by incremental Gauss-Jordan elimination.

    Large overdetermined systems are first reduced mod a prime at a random
    point to pick an independent subset.  The subset is solved exactly and
    every other equation is checked against that solution, exactly by default
    or at two further random points mod p when ``exact`` (or the module flag
    ``EXACT_VERIFY``) is false.  An equation that fails the check joins the
    subset.  The returned solution is always an exact solve of the subset.

    Returns a :class:`SolutionSpace` or an :class:`Inconsistent` certificate.
    """
    policy = policy or PivotPolicy()
    eqs = [e for e in equations if not e.is_trivial()]
    eqs.sort(key=_simplicity)
    n = len(unknowns)
    if screen is None:
        screen = len(eqs) > SCREEN_FACTOR * max(n, 1)
    if not screen:
        return _eliminate(unknowns, eqs, policy)
    try:
        chosen = _independent_rows(n, eqs, ModularPoint())
    except (ZeroDivisionError, ValueError):
        return _eliminate(unknowns, eqs, policy)
    exact = EXACT_VERIFY if exact is None else exact
    checks = [_satisfied] if exact else [_sampler(1), _sampler(2)]
    used = list(policy.used)
    while True:
        policy.used = list(used)
        sub = [eqs[i] for i in sorted(chosen)]
        sol = _eliminate(unknowns, sub, policy)
        if isinstance(sol, Inconsistent):
            return sol
        bad = next((i for i, e in enumerate(eqs)
                    if i not in chosen and not all(ok(e, sol) for ok in checks)), None)
        if bad is None:
            return sol
        chosen.add(bad)


def _simplicity(e: LinearForm):
    return (len(e.coeffs), sum(c.size for c in e.coeffs.values()) + e.const.size)


def _independent_rows(n: int, eqs: Sequence[LinearForm], point: ModularPoint) -> set:
    """Indices of equations whose augmented rows are independent mod p."""
    P = point.PRIME
    echelon: dict = {}  # pivot column -> normalized row
    chosen = set()
    for idx, eq in enumerate(eqs):
        row = [0] * (n + 1)
        for v, c in eq.coeffs.items():
            row[v] = point(c)
        row[n] = point(eq.const) if eq.const else 0
        for col in range(n + 1):
            if row[col] and col in echelon:
                f = row[col]
                row = [(a - f * b) % P for a, b in zip(row, echelon[col])]
        lead = next((c for c in range(n + 1) if row[c]), None)
        if lead is None:
            continue
        inv = pow(row[lead], -1, P)
        echelon[lead] = [a * inv % P for a in row]
        chosen.add(idx)
        if lead == n or len(echelon) == n + 1:
            break
    return chosen


def _satisfied(eq: LinearForm, sol: "SolutionSpace") -> bool:
    names = sol.unknowns
    if eq.evaluate([sol.particular[k] for k in names]):
        return False
    for vec in sol.basis:
        if Scalar.sum([c * vec[names[i]] for i, c in eq.coeffs.items() if vec[names[i]]]):
            return False
    return True


def _sampler(seed: int):
    point = ModularPoint(seed)
    P = point.PRIME

    def ok(eq: LinearForm, sol: "SolutionSpace") -> bool:
        names = sol.unknowns
        try:
            vals = {i: point(c) for i, c in eq.coeffs.items()}
            const = point(eq.const) if eq.const else 0
            if (const + sum(v * point(sol.particular[names[i]]) for i, v in vals.items())) % P:
                return False
            return all(sum(v * point(vec[names[i]]) for i, v in vals.items()) % P == 0
                       for vec in sol.basis)
        except (ZeroDivisionError, ValueError):
            return _satisfied(eq, sol)

    return ok


def _eliminate(unknowns: Sequence[str], eqs: list, policy: PivotPolicy):
    n = len(unknowns)
    eqs = sorted(eqs, key=_simplicity)
    pivots: dict = {}  # unknown -> LinearForm with coeff 1 on the unknown
    for idx, eq in enumerate(eqs):
        row = LinearForm(dict(eq.coeffs), eq.const)
        for var in [v for v in row.coeffs if v in pivots]:
            c = row.coeffs.get(var)
            if c is None:
                continue
            _axpy(row, -c, pivots[var])
        if not row.coeffs:
            if row.const:
                return Inconsistent(row.const, idx, list(policy.used))
            continue
        var = min(row.coeffs, key=lambda v: (policy.score(row.coeffs[v]), v))
        p = row.coeffs[var]
        policy.record(p)
        inv = p.inverse()
        row = LinearForm({v: c * inv for v, c in row.coeffs.items()}, row.const * inv)
        row.coeffs[var] = ONE
        for other in pivots.values():
            c = other.coeffs.get(var)
            if c is not None:
                _axpy(other, -c, row)
        pivots[var] = row
    free = [v for v in range(n) if v not in pivots]
    particular = {unknowns[v]: ZERO for v in range(n)}
    for var, row in pivots.items():
        particular[unknowns[var]] = -row.const
    basis = []
    for f in free:
        vec = {unknowns[v]: ZERO for v in range(n)}
        vec[unknowns[f]] = ONE
        for var, row in pivots.items():
            c = row.coeffs.get(f)
            if c is not None:
                vec[unknowns[var]] = -c
        basis.append(vec)
    return SolutionSpace(
        list(unknowns), particular, basis, list(policy.used), [unknowns[f] for f in free]
    )


def _axpy(row: LinearForm, a: Scalar, other: LinearForm) -> None:
    for v, c in other.coeffs.items():
        row.add(v, a * c)
    if other.const:
        row.const = row.const + a * other.const


def minimal_polynomial(m: Sequence[Sequence[Scalar]], policy: Optional[PivotPolicy] = None):
    """Monic minimal polynomial of a square matrix over the function field.

    Returns coefficients ``[c_0, ..., c_{k-1}]`` with M^k + sum c_i M^i = 0.
    """
    n = len(m)
    powers = [[[ONE if i == j else ZERO for j in range(n)] for i in range(n)]]
    flat = lambda a: [a[i][j] for i in range(n) for j in range(n)]
    for k in range(1, n + 1):
        powers.append(matmul(powers[-1], m))
        names = [f"c{i}" for i in range(k)]
        eqs = []
        target = flat(powers[k])
        cols = [flat(p) for p in powers[:k]]
        for r in range(n * n):
            lf = LinearForm(const=target[r])
            for i in range(k):
                lf.add(i, cols[i][r])
            eqs.append(lf)
        sol = solve_linear(names, eqs, policy)
        if isinstance(sol, SolutionSpace):
            return [sol.particular[nm] for nm in names]
    raise AssertionError("Cayley-Hamilton bound exceeded")
