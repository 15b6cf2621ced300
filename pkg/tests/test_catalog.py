import pytest

import shared
from curvkit.catalog import (
    BUILTIN_NAMES,
    SPECIALIZATIONS,
    DocumentError,
    apply_specialization,
    builtin_document,
    declare_free_constants,
    load_metric_document,
    parse_assumption,
    parse_document,
    specialization,
)
from curvkit.expr import AssumptionSet, Scalar
from curvkit.geometry import SingularMetricError
from curvkit.syntax import format_scalar

HEADER = "[coords]\nu\nr\nx : positive\ny\n"


def texts(tensor):
    return {idx: format_scalar(v) for idx, v in tensor.items()}


def test_builtin_names():
    assert set(BUILTIN_NAMES) == set(shared.CATALOG)
    with pytest.raises(KeyError, match="choose from"):
        builtin_document("schwarzschild")


def test_document_round_trip(catalog_name):
    doc = builtin_document(catalog_name)
    again = parse_document(doc.serialize())
    assert again == doc
    assert again.build()[0].g == doc.build()[0].g


def test_module_example_document():
    doc = parse_document("""
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
g[2][1] = 1   # the mirror entry may be repeated when it agrees
g[3][3] = -1/p^2
g[4][4] = -1/p^2
[assumptions]
nonzero: w_xx + w_yy
set: p = 2
""")
    metric, assumptions = doc.build()
    assert metric.name == "prm"
    assert format_scalar(metric.g[3, 3]) == "-1/4"
    assert len(assumptions.nonzero) == 1


@pytest.mark.parametrize("body, line, message", [
    ("[bogus]\n", 6, "unknown section"),
    ("[constants\n", 6, "malformed"),
    ("[constants]\nx\n", 7, "declared twice"),
    ("[constants]\nq : positive\n", 7, "unknown constant flag"),
    ("[functions]\nw : u z\n", 7, "unknown coordinates"),
    ("[components]\ng[5][1] = 1\n", 7, "outside"),
    ("[components]\ng[1][2] = 1\ng[2][1] = 2\n", 8, "duplicate"),
    ("[components]\ng11 = 1\n", 7, "expected 'g"),
    ("[assumptions]\nassume: x = 1\n", 7, "expected 'nonzero"),
    ("[assumptions]\nset: x\n", 7, "expected 'set"),
    ("[components]\ng[1][2] = 1 +* x\n", 7, "g\\[1\\]\\[2\\]"),
])
def test_document_errors_carry_line_numbers(body, line, message):
    with pytest.raises(DocumentError, match=message) as err:
        parse_document(HEADER + body)
    assert err.value.line == line


def test_document_errors_without_position():
    with pytest.raises(DocumentError, match="three coordinates"):
        parse_document("[coords]\nu\nr\n")
    with pytest.raises(DocumentError, match="name = "):
        parse_document("title = x\n" + HEADER)


def test_singular_document():
    with pytest.raises(SingularMetricError):
        load_metric_document(HEADER + "[components]\ng[1][1] = 1\n")


def test_parse_assumption_checks_bindings(prm):
    ctx = prm.context
    subs, nonzero = parse_assumption(("set", "w", "u*x"), ctx)
    assert len(subs) == 1 and not nonzero
    with pytest.raises(ValueError, match="coordinate r"):
        parse_assumption(("set", "w", "r"), ctx)
    (target, image), = parse_assumption(("set", "w_xx", "-w_yy"), ctx)[0]
    assert Scalar.symbol(target) == ctx.parse("w_xx") and image == ctx.parse("-w_yy")
    with pytest.raises(ValueError, match="left side"):
        parse_assumption(("set", "2*w", "0"), ctx)


def test_declare_free_constants(prm):
    ctx = declare_free_constants("k*w_x + p*q", prm.context)
    assert {"k", "q"} <= set(ctx.constants)
    assert "w" not in ctx.constants


@pytest.mark.parametrize("source, target", sorted(SPECIALIZATIONS))
def test_specializations_reproduce_catalog_metrics(source, target):
    src = shared.metric(source)
    special = apply_specialization(src, specialization(src, target), target)
    expected = shared.metric(target)
    # the two metrics live in different contexts, so compare printed components
    assert texts(special.g) == texts(expected.g)
    assert texts(special.ricci) == texts(expected.ricci)


def test_specialization_errors(prm, gprm):
    with pytest.raises(KeyError):
        specialization(prm, "gprm")
    f = gprm.context.lookup("f")
    with pytest.raises(SingularMetricError, match="degenerate"):
        apply_specialization(gprm, AssumptionSet([(f, gprm.context.parse("0"))]))


def test_specialization_drops_bound_constants(gprm):
    special = apply_specialization(gprm, specialization(gprm, "prm"))
    assert "p" in special.context.nonzero_names
    assert "a" not in special.context.nonzero_names
