"""Exact symbolic toolkit for quantized enveloping algebras, their Drinfeld pairing
and Lusztig's braid automorphisms."""
from .cartan import PRESETS, CartanDatum, CartanError, cartan_type, load_gcm
from .scalars import ONE, Q, ZERO, LaurentPoly, Scalar, qpow, q_factorial, q_int
from .algebra import Element, Mono, TensorElement, parse
from .pairing import GramBlock, canonical_form, equality_oracle, gram_block, tau, theta
from .repr import WeightModule, build_highest, build_lowest, tensor_module

__all__ = [
    "PRESETS", "CartanDatum", "CartanError", "cartan_type", "load_gcm",
    "ONE", "Q", "ZERO", "LaurentPoly", "Scalar", "qpow", "q_factorial", "q_int",
    "Element", "Mono", "TensorElement", "parse",
    "GramBlock", "canonical_form", "equality_oracle", "gram_block", "tau", "theta",
    "WeightModule", "build_highest", "build_lowest", "tensor_module",
]
