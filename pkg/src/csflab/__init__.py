"""Numerical laboratory for an ancient compact non-convex curve shortening flow.

The package builds the rotating Yin-Yang soliton profile, assembles closed
admissible curves gluing Grim Reaper caps into the soliton corridor, evolves
curves by curve shortening, and evaluates hyperbolic barrier supersolutions
used to control the flow inside the corridor.
"""
from .yinyang import (
    CorridorQuery,
    IntegrationError,
    YinYangProfile,
    corridor_width,
    curvature_identities,
    find_H_inflection,
    full_turn_partner,
    identity_suite,
    integrate_profile,
    lifted_angle,
)

__all__ = [
    "CorridorQuery",
    "IntegrationError",
    "YinYangProfile",
    "corridor_width",
    "curvature_identities",
    "find_H_inflection",
    "full_turn_partner",
    "identity_suite",
    "integrate_profile",
    "lifted_angle",
]

__version__ = "0.1.0"
