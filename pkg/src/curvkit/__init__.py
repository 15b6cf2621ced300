"""Exact curvature analysis of four-dimensional metrics.

Scalars live in a canonical rational-function field over coordinates,
constants and abstract functions; tensors are dense arrays of such scalars.
"""
__version__ = "0.1.0"

from .catalog import (
    BUILTIN_NAMES,
    apply_specialization,
    builtin_metric,
    load_metric_document,
    specialization,
)
from .classify import PROPERTIES, ClassificationReport, Classifier, PropertyVerdict, compare
from .context import Chart, Context
from .curvature import Curvature, DerivedKind, derived_tensor, dot_action, kulkarni_nomizu, q_operator
from .expr import AssumptionSet, Scalar, differentiate, is_zero, substitute
from .geometry import Metric, Tensor, covariant_derivative
from .syntax import format_scalar, parse_expression

__all__ = [
    "AssumptionSet",
    "BUILTIN_NAMES",
    "Chart",
    "ClassificationReport",
    "Classifier",
    "Context",
    "Curvature",
    "DerivedKind",
    "Metric",
    "PROPERTIES",
    "PropertyVerdict",
    "Scalar",
    "Tensor",
    "apply_specialization",
    "builtin_metric",
    "compare",
    "covariant_derivative",
    "derived_tensor",
    "differentiate",
    "dot_action",
    "format_scalar",
    "is_zero",
    "kulkarni_nomizu",
    "load_metric_document",
    "parse_expression",
    "q_operator",
    "specialization",
    "substitute",
]
