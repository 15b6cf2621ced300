import itertools

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

import oracles
import shared
from curvkit.context import Chart, Context
from curvkit.curvature import cyclic_sum, divergence
from curvkit.geometry import Metric, SingularMetricError, Tensor, contract, covariant_derivative, raise_lower

CTX = Context(Chart(["u", "r", "x", "y"], positive=["x"]))
DIAGONAL = ["1", "-1", "x", "x^2 + 1", "-(1 + y^2)", "exp(x*y)", "1 + u^2", "2 + x*y^2", "-x^3"]
OFF = ["0", "0", "1", "x", "u*y", "r"]


@st.composite
def metrics(draw):
    rows = [["0"] * 4 for _ in range(4)]
    for i in range(4):
        rows[i][i] = draw(st.sampled_from(DIAGONAL))
    i, j = draw(st.sampled_from(list(itertools.combinations(range(4), 2))))
    rows[i][j] = rows[j][i] = draw(st.sampled_from(OFF))
    try:
        return Metric([[CTX.parse(e) for e in row] for row in rows], CTX, "random")
    except SingularMetricError:
        assume(False)


def _identities(g):
    R, nR = g.riemann, covariant_derivative(g.riemann, g)
    assert R.check_symmetry()
    assert cyclic_sum(R, (2, 3, 4)).is_zero()
    assert cyclic_sum(nR, (3, 4, 5)).is_zero()
    assert covariant_derivative(g.g, g).is_zero()
    # contracted Bianchi: the Einstein tensor is divergence free
    einstein = g.ricci - g.g * (g.scalar / 2)
    assert divergence(einstein, 1, g).is_zero()


def test_catalog_identities(catalog_name):
    _identities(shared.metric(catalog_name))


def test_lowered_riemann_has_pair_symmetry(catalog_name):
    g = shared.metric(catalog_name)
    lowered = raise_lower(g.riemann_up, 4, g)
    for i, j, k, l in itertools.product(range(4), repeat=4):
        v = lowered.data[i, j, k, l]
        assert v == -lowered.data[j, i, k, l] == -lowered.data[i, j, l, k] == lowered.data[k, l, i, j]


def test_ricci_is_trace_of_riemann(catalog_name):
    g = shared.metric(catalog_name)
    assert contract(g.riemann, 0, 3, g) == g.ricci
    assert contract(g.ricci, 0, 1, g).data[()] == g.scalar


@given(metrics())
@settings(max_examples=12, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_random_metric_identities(g):
    _identities(g)


@given(metrics(), st.integers(0, 10_000))
@settings(max_examples=8, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_random_metric_against_finite_differences(g, seed):
    for point in oracles.sample_points(2, seed):
        fd = oracles.FiniteDifferenceGeometry(g, point)
        for idx in itertools.product(range(4), repeat=4):
            exact = oracles.evaluate_scalar(g, g.riemann.data[idx], point)
            assert oracles.relative_error(exact, fd.riemann[idx]) < 1e-6
        for idx in itertools.product(range(4), repeat=2):
            exact = oracles.evaluate_scalar(g, g.ricci.data[idx], point)
            assert oracles.relative_error(exact, fd.ricci[idx]) < 1e-6


def test_flat_metric_has_no_curvature():
    g = Metric([[CTX.parse(e) for e in row] for row in
                [["0", "1", "0", "0"], ["1", "0", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]], CTX)
    assert g.christoffel.is_zero()
    assert g.riemann.is_zero()


def test_constant_curvature_half_space():
    # (-du^2 + dr^2 + dx^2 + dy^2)/x^2; the adopted curvature sign makes S = +3g here
    rows = [["0"] * 4 for _ in range(4)]
    for i, e in enumerate(["-1/x^2", "1/x^2", "1/x^2", "1/x^2"]):
        rows[i][i] = e
    g = Metric([[CTX.parse(e) for e in row] for row in rows], CTX)
    assert g.ricci == g.g * CTX.parse("3")
    assert g.scalar == CTX.parse("12")
    assert covariant_derivative(g.ricci, g).is_zero()


def test_metric_validation():
    rows = [[CTX.parse("0")] * 4 for _ in range(4)]
    with pytest.raises(SingularMetricError):
        Metric(rows, CTX)
    bad = [[CTX.parse("1") if i == j else CTX.parse("0") for j in range(4)] for i in range(4)]
    bad[0][1] = CTX.parse("x")
    with pytest.raises(ValueError, match="symmetric"):
        Metric(bad, CTX)
    with pytest.raises(ValueError):
        Metric([[CTX.parse("1")]], CTX)


def test_tensor_indexing_is_one_based():
    g = shared.metric("prm")
    assert g.g[1, 2] == g.g.data[0, 1]
    with pytest.raises(IndexError):
        g.g[0, 1]
    with pytest.raises(IndexError):
        g.g[1, 2, 3]
    with pytest.raises(ValueError):
        Tensor(g.g.data, "ddd")
