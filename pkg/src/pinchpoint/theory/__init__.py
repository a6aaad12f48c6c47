"""Half-plane pinch-point weights, universal partition functions, and
polygon densities, with finite-difference verifiers for the null-state
PDE system and the conformal Ward identities."""

from .crossratios import CrossRatios
from .weights import (
    weight_pi12,
    weight_pi12_halfplane_limit,
    weight_full_polygon,
    rect_one_pp_weight,
    rect_block_G,
    hex_block_H,
    hex_two_pp_weight,
    hex_one_pp_combo,
)
from .partition import (
    FfbcEvent,
    PinchEvent,
    universal_partition,
    partition_ffbc_rect,
    partition_ffbc_hex,
)
from .density import density_rect, density_hex, hex_i2_integral
from .verify import verify_null_state, verify_ward

__all__ = [
    "CrossRatios",
    "FfbcEvent",
    "PinchEvent",
    "weight_pi12",
    "weight_pi12_halfplane_limit",
    "weight_full_polygon",
    "rect_one_pp_weight",
    "rect_block_G",
    "hex_block_H",
    "hex_two_pp_weight",
    "hex_one_pp_combo",
    "universal_partition",
    "partition_ffbc_rect",
    "partition_ffbc_hex",
    "density_rect",
    "density_hex",
    "hex_i2_integral",
    "verify_null_state",
    "verify_ward",
]
