"""Computational Galois theory for finite extensions of the rationals."""

from .factor import Factorization, factor, factor_ext, factor_q, norm
from .fields import QQ, FractionField, NFElem, NumberField, RationalField, URat
from .groups import (
    FiniteRationalGroup,
    GroupVerdict,
    InvariantCheck,
    NotAGroup,
    difference_numerator,
    generating_invariant_check,
    verify_group,
)
from .hopf import HopfReport, NotExpressible, affine_law, hopf_comorphisms, multiplicative_law
from .io import element, number_field_from_json, number_field_to_json, poly_from_coeffs, rational_map
from .tensor import (
    CRTComponent,
    DisjointnessResult,
    IsolatedIsomorphism,
    SplitResult,
    bezout,
    crt_decomposition,
    crt_reconstruct,
    cubic_discriminant,
    cubic_discriminant_resultant,
    is_galois,
    linear_disjointness_probe,
    relation_holds,
    split_tensor,
)
from .unipoly import UniPoly, qpoly

__all__ = [
    "CRTComponent",
    "DisjointnessResult",
    "Factorization",
    "FiniteRationalGroup",
    "FractionField",
    "GroupVerdict",
    "HopfReport",
    "InvariantCheck",
    "IsolatedIsomorphism",
    "NFElem",
    "NotAGroup",
    "NotExpressible",
    "NumberField",
    "QQ",
    "RationalField",
    "SplitResult",
    "URat",
    "UniPoly",
    "affine_law",
    "bezout",
    "crt_decomposition",
    "crt_reconstruct",
    "cubic_discriminant",
    "cubic_discriminant_resultant",
    "difference_numerator",
    "element",
    "factor",
    "factor_ext",
    "factor_q",
    "generating_invariant_check",
    "hopf_comorphisms",
    "is_galois",
    "linear_disjointness_probe",
    "multiplicative_law",
    "norm",
    "number_field_from_json",
    "number_field_to_json",
    "poly_from_coeffs",
    "qpoly",
    "rational_map",
    "relation_holds",
    "split_tensor",
    "verify_group",
]
