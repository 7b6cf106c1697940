"""Graph transformations and constructive procedures."""

from .overlay import overlay
from .peel import AbOutcome, ab_witness, greedy_peel, halves
from .reduce import (
    MetanodeState,
    ReduceMap,
    butterfly_family,
    irrepairable_edges,
    lift_path,
    metanode_states,
    reduce,
)
from ..routing import MalformedEncoding, Routing, decode_permutation, encode_permutation, route_pairing

__all__ = [
    "AbOutcome",
    "MalformedEncoding",
    "MetanodeState",
    "ReduceMap",
    "Routing",
    "ab_witness",
    "butterfly_family",
    "decode_permutation",
    "encode_permutation",
    "greedy_peel",
    "halves",
    "irrepairable_edges",
    "lift_path",
    "metanode_states",
    "overlay",
    "reduce",
    "route_pairing",
]
