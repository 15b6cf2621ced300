import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import shared
from curvkit.context import Chart, Context
from curvkit.curvature import (
    Curvature,
    DerivedKind,
    cyclic_sum,
    derived_tensor,
    dot_action,
    kulkarni_nomizu,
    q_operator,
    ricci_power,
)
from curvkit.geometry import Metric, Tensor, contract
from curvkit.linalg import matmul

CTX = Context(Chart(["u", "r", "x", "y"], positive=["x"]))
ENTRIES = ["0", "0", "1", "-2", "x", "u*y", "1/x", "exp(y)", "r^2 + 1"]


def P(text):
    return CTX.parse(text)


def diagonal(entries):
    rows = [[P("0")] * 4 for _ in range(4)]
    for i, e in enumerate(entries):
        rows[i][i] = P(e)
    return Metric(rows, CTX)


def symmetric_tensors():
    cells = list(itertools.combinations_with_replacement(range(4), 2))
    return st.lists(st.sampled_from(ENTRIES), min_size=len(cells), max_size=len(cells)).map(
        lambda es: _symmetric(dict(zip(cells, es))))


def _symmetric(values):
    t = Tensor.zeros(4, "dd", CTX.chart)
    for (i, j), e in values.items():
        t.data[i, j] = t.data[j, i] = P(e)
    return t


MINKOWSKI = diagonal(["-1", "1", "1", "1"])


# -- algebraic operators ----------------------------------------------------------


@given(symmetric_tensors(), symmetric_tensors())
@settings(max_examples=25, deadline=None)
def test_kulkarni_nomizu_is_curvature_like(A, E):
    t = kulkarni_nomizu(A, E)
    assert t.check_symmetry()
    assert cyclic_sum(t, (2, 3, 4)).is_zero()
    assert t == kulkarni_nomizu(E, A)


@given(symmetric_tensors(), symmetric_tensors())
@settings(max_examples=25, deadline=None)
def test_q_operator_identities(A, H):
    assert q_operator(A, A).is_zero()
    q = q_operator(A, H)
    assert q == -q.transpose((0, 1, 3, 2))
    assert q == -q_operator(H, A)


def test_q_operator_rejects_bad_valence(prm):
    with pytest.raises(ValueError):
        q_operator(prm.riemann, prm.ricci)
    with pytest.raises(ValueError):
        q_operator(prm.ricci, prm.riemann_up)


def test_ricci_power_levels(catalog_name):
    g = shared.metric(catalog_name)
    S = g.ricci
    assert ricci_power(S, 1, g) == S
    expected = np.array(matmul(matmul(S.data.tolist(), g.inverse.data.tolist()), S.data.tolist()), dtype=object)
    assert ricci_power(S, 2, g) == Tensor(expected, "dd", g.chart)
    with pytest.raises(ValueError):
        ricci_power(S, 0, g)


def test_cyclic_sum_rejects_bad_slots(prm):
    with pytest.raises(ValueError):
        cyclic_sum(prm.riemann, (1, 2, 2))
    with pytest.raises(ValueError):
        cyclic_sum(prm.riemann, (2, 3, 5))


# -- derived tensors ----------------------------------------------------------------


@pytest.mark.parametrize("name", ["R", "C", "W", "K", "Grot"])
def test_curvature_tensors_annihilate_the_metric(catalog_name, name):
    c = shared.curvature(catalog_name)
    assert dot_action(c.tensor(name), c.g, c.metric).is_zero()


def test_projective_tensor_shape(catalog_name):
    c = shared.curvature(catalog_name)
    P_ = c.P
    assert P_ == -P_.transpose((1, 0, 2, 3))
    # the (1,4)-trace of the projective tensor vanishes
    assert contract(P_, 0, 3, c.metric).is_zero()


def test_trace_free_parts(catalog_name):
    c = shared.curvature(catalog_name)
    g = c.metric
    assert contract(c.C, 0, 3, g).is_zero()
    assert contract(contract(c.W, 0, 3, g), 0, 1, g).data[()] == P("0")
    assert contract(c.Grot, 0, 3, g) == c.g * P("3")


def test_energy_momentum_trace(catalog_name):
    c = shared.curvature(catalog_name)
    k = c.metric.context.parse("c^4/(8*pi*G)")
    assert contract(c.T, 0, 1, c.metric).data[()] == -(c.kappa * k)


def test_constant_curvature_has_vanishing_weyl_and_concircular():
    c = Curvature(diagonal(["-1/x^2", "1/x^2", "1/x^2", "1/x^2"]))
    assert not c.R.is_zero()
    assert c.C.is_zero()
    assert c.W.is_zero()


def test_conformally_flat_metric():
    factor = "1 + x^2 + u^2"
    c = Curvature(diagonal([f"-({factor})", factor, factor, factor]))
    assert not c.R.is_zero()
    assert c.C.is_zero()
    assert not c.W.is_zero()


def test_minkowski_is_flat_for_every_tensor():
    c = Curvature(MINKOWSKI)
    for name in ("R", "S", "C", "W", "K", "P"):
        assert c.tensor(name).is_zero(), name


def test_derived_kind_accepts_names():
    g = shared.metric("ppw")
    assert derived_tensor("C", g) == derived_tensor(DerivedKind.CONFORMAL, g)
    with pytest.raises(ValueError):
        derived_tensor("Z", g)


def test_curvature_name_lookup(prm):
    c = Curvature(prm)
    assert c.tensor("G") is prm.g
    assert c.nabla("S") is c.nabla("S")
    with pytest.raises(KeyError):
        c.tensor("Z")


def test_kulkarni_nomizu_of_minkowski():
    g = diagonal(["1", "-1", "-1", "-1"])
    assert kulkarni_nomizu(g.g, g.g)[1, 2, 2, 1] == P("-2")


def test_rank_one_ricci_squares_to_zero(prm):
    assert kulkarni_nomizu(prm.ricci, prm.ricci).is_zero()


def test_vanishing_scalar_curvature_identifies_tensors(catalog_name):
    c = shared.curvature(catalog_name)
    if c.kappa:
        pytest.skip("scalar curvature is nonzero")
    assert c.W == c.R
    assert c.K == c.C
