"""Cached catalog objects shared by the test modules."""
from functools import lru_cache

from curvkit.catalog import builtin_document, builtin_metric
from curvkit.classify import Classifier
from curvkit.curvature import Curvature

CATALOG = ("prm", "gprm", "ppw", "gppw")


@lru_cache(maxsize=None)
def metric(name):
    return builtin_metric(name)[0]


@lru_cache(maxsize=None)
def curvature(name):
    return Curvature(metric(name))


@lru_cache(maxsize=None)
def classifier(name):
    return Classifier(metric(name))


def with_bindings(name, bindings, constants=(), nonzero=()):
    """Catalog metric with ("set", lhs, rhs) bindings applied; returns (metric, assumptions)."""
    doc = builtin_document(name)
    doc.constants.extend(constants)
    doc.nonzero_names.extend(nonzero)
    for lhs, rhs in bindings:
        doc.assumptions.append(("set", lhs, rhs))
    return doc.build()
