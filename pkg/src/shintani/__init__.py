"""Signed fundamental domains for totally positive unit actions."""

__version__ = "0.1.0"

from .numfield import NumberField, FieldElement, embed, is_totally_positive, norm_exact  # noqa: E402
from .complexes import (OrderedComplex, OrderedSimplex, build_domain_complex,  # noqa: E402
                        lambda_complex_check, raise_complex)
from .twisters import Twister, construct_twister, validate_twister  # noqa: E402
from .domain import SignedCone, SignedDomain, build_signed_domain, contains, sign_mu  # noqa: E402
from .verify import enumeration_bound, run_property_suite, signed_count  # noqa: E402

__all__ = [
    "NumberField", "FieldElement", "embed", "is_totally_positive", "norm_exact",
    "OrderedComplex", "OrderedSimplex", "build_domain_complex", "lambda_complex_check",
    "raise_complex", "Twister", "construct_twister", "validate_twister", "SignedCone",
    "SignedDomain", "build_signed_domain", "contains", "sign_mu", "enumeration_bound",
    "run_property_suite", "signed_count", "__version__",
]
