import numpy as np
import pytest

import shared
from curvkit.classify import (
    FAILS,
    HOLDS,
    HOLDS_UNDER,
    PROPERTIES,
    ClassificationReport,
    Classifier,
    PropertyVerdict,
    compare,
    ein_level,
    frame_decomposition,
    quasi_einstein_level,
    rank_one_factor,
    zero_verdict,
)
from curvkit.context import Chart, Context
from curvkit.curvature import ricci_power
from curvkit.geometry import Metric, Tensor

CTX = Context(Chart(["u", "r", "x", "y"], positive=["x"]))


def diagonal(entries):
    rows = [[CTX.parse("0")] * 4 for _ in range(4)]
    for i, e in enumerate(entries):
        rows[i][i] = CTX.parse(e)
    return Metric(rows, CTX, "diag")


@pytest.fixture(scope="module")
def battery_reports():
    return {name: shared.classifier(name).battery() for name in shared.CATALOG}


def test_battery_covers_every_property(battery_reports):
    for report in battery_reports.values():
        assert list(report.verdicts) == list(PROPERTIES)
        assert all(v.status in (HOLDS, HOLDS_UNDER, FAILS, "vacuous") for v in report.verdicts.values())


def test_battery_respects_implications(battery_reports):
    for name, report in battery_reports.items():
        assert not [i for i in report.implications if i[2] == "VIOLATED"], name


@pytest.mark.parametrize("name, prop, expected", [
    ("prm", "scalar_curvature_zero", True),
    ("prm", "ricci_simple", True),
    ("prm", "einstein", False),
    ("prm", "semisymmetric", True),
    ("prm", "P.Rup", False),
    ("prm", "ricci_recurrent", False),
    ("ppw", "ricci_recurrent", True),
    ("ppw", "semisymmetric", True),
    ("ppw", "null_parallel_covector", True),
    ("gppw", "ricci_simple", False),
    ("gppw", "R.R=cQ(S,R)", True),
    ("gppw", "semisymmetric", False),
])
def test_spot_verdicts(battery_reports, name, prop, expected):
    assert battery_reports[name][prop].holds is expected


def test_ricci_simple_witness_reconstructs_ricci(prm):
    v = shared.classifier("prm").ricci_simple()
    beta, eta = v.witness["beta"], v.witness["eta"]
    S = prm.ricci
    for i in range(4):
        for j in range(4):
            assert S.data[i, j] == beta * eta[i] * eta[j]
    # pure radiation: the Ricci direction is null
    assert not v.witness["eta_norm"]


def test_ein_level_witness_annihilates_ricci_operator(catalog_name):
    v = shared.classifier(catalog_name).ein_level()
    g = shared.metric(catalog_name)
    total = ricci_power(g.ricci, v.witness["degree"], g)
    for i, c in enumerate(v.witness["coefficients"]):
        # level 0 is the metric itself
        total = total + (g.g if i == 0 else ricci_power(g.ricci, i, g)) * c
    assert total.is_zero()


def test_flat_and_constant_curvature_levels():
    flat = Classifier(diagonal(["-1", "1", "1", "1"]))
    assert quasi_einstein_level(flat.metric).witness["level"] == 0
    assert flat.ein_level().witness["degree"] == 1
    hyperbolic = diagonal(["-1/x^2", "1/x^2", "1/x^2", "1/x^2"])
    assert PROPERTIES["einstein"](Classifier(hyperbolic)).holds
    assert ein_level(hyperbolic).witness["degree"] == 1
    assert not PROPERTIES["scalar_curvature_zero"](Classifier(hyperbolic)).holds
    assert PROPERTIES["semisymmetric"](Classifier(hyperbolic)).holds


def test_assumptions_reach_the_classifier():
    # w linear in x and y makes the prm metric Ricci flat
    metric, assumptions = shared.with_bindings("prm", [("w", "u*(x + y)")])
    c = Classifier(metric, assumptions)
    assert metric.ricci.is_zero()
    assert PROPERTIES["einstein"](c).holds


def test_zero_verdict_certificate(prm):
    assert zero_verdict("flat", prm.g - prm.g).status == HOLDS
    v = zero_verdict("flat", prm.g)
    assert v.status == FAILS and v.certificate[0] == (1, 1)
    assert v.line().startswith("flat: fails")


def test_verdict_line_lists_assumptions():
    v = PropertyVerdict("p", HOLDS_UNDER, assumptions=["w_xx + w_yy"])
    assert v.holds
    assert v.line() == "p: holds-under-assumptions [assuming w_xx + w_yy != 0]"


def test_report_rejects_duplicates():
    report = ClassificationReport("m", None)
    report.add(PropertyVerdict("p", HOLDS))
    with pytest.raises(ValueError):
        report.add(PropertyVerdict("p", FAILS))
    with pytest.raises(KeyError):
        shared.classifier("ppw").battery(["no_such_property"])


def test_compare_is_reflexive():
    c = shared.classifier("ppw")
    similar, dissimilar = compare(c, c, ["scalar_curvature_zero", "ricci_recurrent"])
    assert [p for p, _, _ in similar] == ["scalar_curvature_zero", "ricci_recurrent"]
    assert not dissimilar


def test_rank_one_factor():
    eta = [CTX.parse(e) for e in ("1", "0", "x", "2")]
    beta = CTX.parse("u^2 + 1")
    data = np.empty((4, 4), dtype=object)
    for i in range(4):
        for j in range(4):
            data[i, j] = beta * eta[i] * eta[j]
    got = rank_one_factor(Tensor(data, "dd", CTX.chart))
    assert got == (beta, eta)
    data[1, 1] = CTX.parse("1")
    assert rank_one_factor(Tensor(data, "dd", CTX.chart)) is None


def test_frame_decomposition_of_stress_tensor():
    c = shared.curvature("prm")
    parts = frame_decomposition(c.T, c.g)
    assert parts is not None
    assert set(parts["coefficients"]) <= {(1, 1), (1, 3), (1, 4), (3, 3), (3, 4), (4, 4)}
