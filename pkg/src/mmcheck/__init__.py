"""Numerical certification of matrix monotonicity and convexity of order n."""

__version__ = "0.1.0"

from mmcheck.classify import (
    CERTIFIED,
    MARGINAL,
    REFUTED,
    CertificationReport,
    CertificationRequest,
    ConvexCertifier,
    DividedDifferenceFunction,
    MonotoneCertifier,
    certify_convex,
    certify_monotone,
    definition_oracle_convex,
    definition_oracle_monotone,
    divided_connection_defect,
    monotone_from_convex,
)
from mmcheck.divided import PointTuple, divided_difference, divided_difference_contour, mean_value_bounds
from mmcheck.errors import DomainError, MmcheckError, OrderError, ParseError
from mmcheck.expr import ExpressionFunction, catalog, derivative, parse, resolvent
from mmcheck.kernels import PiecewisePolynomial, weight_i, weight_j
from mmcheck.matrices import (
    coeff_matrix,
    hankel_k,
    hankel_m,
    jacobi_eigh,
    kraus,
    loewner,
    matrix_function,
    psd_verdict,
)
from mmcheck.represent import verify_kraus_representation, verify_loewner_representation

__all__ = [
    "CERTIFIED",
    "MARGINAL",
    "REFUTED",
    "CertificationReport",
    "CertificationRequest",
    "ConvexCertifier",
    "DividedDifferenceFunction",
    "DomainError",
    "ExpressionFunction",
    "MmcheckError",
    "MonotoneCertifier",
    "OrderError",
    "ParseError",
    "PiecewisePolynomial",
    "PointTuple",
    "catalog",
    "certify_convex",
    "certify_monotone",
    "coeff_matrix",
    "definition_oracle_convex",
    "definition_oracle_monotone",
    "derivative",
    "divided_connection_defect",
    "divided_difference",
    "divided_difference_contour",
    "hankel_k",
    "hankel_m",
    "jacobi_eigh",
    "kraus",
    "loewner",
    "matrix_function",
    "mean_value_bounds",
    "monotone_from_convex",
    "parse",
    "psd_verdict",
    "resolvent",
    "verify_kraus_representation",
    "verify_loewner_representation",
    "weight_i",
    "weight_j",
]
