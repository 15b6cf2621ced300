import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvkit import linalg
from curvkit.context import Chart, Context
from curvkit.expr import ONE, ZERO
from curvkit.linalg import Inconsistent, LinearForm, PivotPolicy, SolutionSpace, solve_linear

CTX = Context(Chart(["u", "r", "x", "y"], positive=["x"]), ["a", "b"], {"w": ["u", "x", "y"]}, nonzero=["a"])
P = CTX.parse
ENTRIES = ["0", "1", "-2", "x", "a", "b*y", "x^2 - a", "w", "w_x/x", "u + r"]


def matrices(n):
    return st.lists(st.lists(st.sampled_from(ENTRIES), min_size=n, max_size=n), min_size=n, max_size=n).map(
        lambda rows: [[P(e) for e in row] for row in rows])


def _eq(coeffs, const="0"):
    lf = LinearForm(const=P(const))
    for i, c in enumerate(coeffs):
        lf.add(i, P(c))
    return lf


@given(matrices(3))
@settings(max_examples=40, deadline=None)
def test_inverse_and_determinant(m):
    det = linalg.determinant(m)
    if not det:
        with pytest.raises(linalg.SingularMatrixError):
            linalg.inverse(m)
        assert linalg.rank(m) < 3
        return
    inv = linalg.inverse(m)
    prod = linalg.matmul(m, inv)
    assert all(prod[i][j] == (ONE if i == j else ZERO) for i in range(3) for j in range(3))
    assert linalg.rank(m) == 3


@given(matrices(3))
@settings(max_examples=30, deadline=None)
def test_minimal_polynomial_annihilates(m):
    coeffs = linalg.minimal_polynomial(m)
    k = len(coeffs)
    acc = [[ZERO] * 3 for _ in range(3)]
    power = [[ONE if i == j else ZERO for j in range(3)] for i in range(3)]
    for i in range(k + 1):
        c = coeffs[i] if i < k else ONE
        acc = [[acc[r][s] + c * power[r][s] for s in range(3)] for r in range(3)]
        power = linalg.matmul(power, m)
    assert all(not v for row in acc for v in row)


def test_nilpotent_minimal_polynomial():
    m = [[ZERO, P("x"), ZERO], [ZERO, ZERO, ZERO], [ZERO, ZERO, ZERO]]
    assert linalg.minimal_polynomial(m) == [ZERO, ZERO]


def test_solution_space_and_membership():
    # x1 + a*x2 = b, free x3
    sol = solve_linear(["x1", "x2", "x3"], [_eq(["1", "a", "0"], "-b")])
    assert isinstance(sol, SolutionSpace)
    assert sol.dimension == 2
    assert sol.contains({"x1": P("b - a*u"), "x2": P("u"), "x3": P("w")})
    assert not sol.contains({"x1": P("b"), "x2": ONE, "x3": ZERO})


def test_inconsistent_certificate():
    res = solve_linear(["x1"], [_eq(["1"], "-1"), _eq(["1"], "-x")])
    assert isinstance(res, Inconsistent)
    assert res.residual in (P("x - 1"), P("1 - x"))


def test_symbolic_pivots_become_assumptions():
    sol = solve_linear(["x1"], [_eq(["b"], "-1")], PivotPolicy())
    assert sol.particular["x1"] == P("1/b")
    assert [str(a) for a in sol.assumptions] == ["b"]
    # a is declared nowhere zero, so dividing by it records nothing
    sol = solve_linear(["x1"], [_eq(["a"], "-1")], PivotPolicy(CTX.nonzero_generators))
    assert sol.assumptions == []


@pytest.mark.parametrize("seed", range(5))
def test_screened_solve_matches_plain_solve(seed):
    rng = random.Random(seed)
    names = [f"t{i}" for i in range(4)]
    # a consistent overdetermined system: random combinations of three base equations
    base = [[rng.choice(ENTRIES) for _ in names] for _ in range(3)]
    eqs = []
    for _ in range(20):
        k = [rng.randint(-2, 2) for _ in base]
        lf = LinearForm()
        for row, c in zip(base, k):
            for i, e in enumerate(row):
                lf.add(i, P(e) * c)
        eqs.append(lf)
    plain = solve_linear(names, eqs, screen=False)
    screened = solve_linear(names, eqs, screen=True, exact=False)
    exact = solve_linear(names, eqs, screen=True)
    assert plain.dimension == screened.dimension == exact.dimension
    for t in itertools.product(range(-1, 2), repeat=plain.dimension):
        assert screened.contains(plain.member(list(t)))
        assert exact.contains(plain.member(list(t)))


def test_screened_solve_notices_an_inconsistent_extra_equation():
    names = ["t0", "t1"]
    eqs = [_eq(["1", "x"]) for _ in range(10)] + [_eq(["0", "1"], "-1"), _eq(["1", "0"])]
    for exact in (False, True):
        assert isinstance(solve_linear(names, eqs, screen=True, exact=exact), Inconsistent)
