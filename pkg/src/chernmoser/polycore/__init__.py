"""Exact polynomial arithmetic for the normalization pipeline."""

from .crational import CRational, I, ONE, ZERO, as_crational, parse_rational
from .poly import (MAX_WEIGHT, HoloPoly, RealityError, RealPoly, SesquiPoly,
                   holo_from_real, real_from_holo)
from .jets import (PIPELINE_TRUNCATION, HoloJet, JetError, Truncation,
                   compose_truncated, linear_change, model_restrict, pullback,
                   solve_graph)


def weighted_component(P, d: int):
    return P.weighted_component(d)


def bidegree_component(P: RealPoly, p: int, q: int, k: int) -> RealPoly:
    return P.bidegree_component(p, q, k)


__all__ = [
    "CRational", "I", "ONE", "ZERO", "as_crational", "parse_rational",
    "MAX_WEIGHT", "HoloPoly", "RealityError", "RealPoly", "SesquiPoly",
    "holo_from_real", "real_from_holo",
    "PIPELINE_TRUNCATION", "HoloJet", "JetError", "Truncation",
    "compose_truncated", "linear_change", "model_restrict", "pullback", "solve_graph",
    "weighted_component", "bidegree_component",
]
