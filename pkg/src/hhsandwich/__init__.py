"""Certified two-sided integral enclosures for convex functions from the
composite midpoint/trapezoid sandwich, with the associated interpolating maps
and Ostrowski-type bounds."""

from .funcspec import (
    ConvexGeneratorConfig,
    EvaluationError,
    FunctionSpec,
    ParseError,
    ShapeError,
    check_shape,
    evaluate,
    generate_convex,
    parse_expression,
)
from .oracle import OracleConfig, OracleError, reference_integral
from .quadrature import (
    Enclosure,
    Interval,
    SecondDerivativeBound,
    UniformPartition,
    classical_hh,
    hh_enclosure,
    midpoint_sum,
    trapezoid_sum,
)
from .refine import RefinementPolicy, convergence_order, integrate_to_tolerance

__version__ = "0.1.0"
