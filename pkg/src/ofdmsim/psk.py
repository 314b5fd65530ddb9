"""M-PSK mapping and nearest-phase hard demapping with Gray bit labels."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import LengthError, OrderError


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def gray_encode(n: int) -> int:
    """Binary-reflected Gray code of ``n``."""
    return n ^ (n >> 1)


@dataclass(frozen=True)
class Constellation:
    """Unit-circle PSK constellation in angular order.

    ``points[p] == exp(2j*pi*p/order)`` for p = 0..order-1, so consecutive
    points are exactly 2*pi/order apart.  ``labels[p]`` is the bit group
    carried at angular position p; labels follow the binary-reflected Gray
    code, so angular neighbours (including the wrap) differ in exactly one
    bit.  The label of position 0 is 0, fixing the reference phase.
    """

    order: int
    points: np.ndarray
    labels: np.ndarray
    label_to_position: np.ndarray

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1


@lru_cache(maxsize=None)
def make_constellation(order: int) -> Constellation:
    if not (is_power_of_two(order) and order >= 2):
        raise OrderError(f"modulation order must be a power of two >= 2, got {order}")
    positions = np.arange(order)
    labels = positions ^ (positions >> 1)
    label_to_position = np.empty(order, dtype=np.int64)
    label_to_position[labels] = positions
    points = np.exp(2j * np.pi * positions / order)
    return Constellation(
        order=order,
        points=points,
        labels=labels.astype(np.int64),
        label_to_position=label_to_position,
    )


def _group_bits(bits: np.ndarray, b: int) -> np.ndarray:
    """Pack consecutive b-bit groups (MSB first) into integers."""
    weights = 1 << np.arange(b - 1, -1, -1)
    return bits.reshape(-1, b).astype(np.int64) @ weights


def _ungroup_bits(groups: np.ndarray, b: int) -> np.ndarray:
    shifts = np.arange(b - 1, -1, -1)
    return ((groups[:, None] >> shifts) & 1).astype(np.uint8).ravel()


def map_psk(bits: np.ndarray, order: int) -> np.ndarray:
    """Map a bit block onto unit-energy M-PSK symbols.

    Bits are consumed in b-bit groups, MSB first; the group's Gray label
    selects the angular position (group 0 -> phase 0, group 1 -> phase
    2*pi/order).
    """
    const = make_constellation(order)
    b = const.bits_per_symbol
    bits = np.asarray(bits)
    if bits.size % b != 0:
        raise LengthError(
            f"bit count {bits.size} is not divisible by {b} (order {order})"
        )
    groups = _group_bits(bits, b)
    return const.points[const.label_to_position[groups]]


def demap_psk(symbols: np.ndarray, order: int) -> np.ndarray:
    """Hard-demap symbols to bits by nearest phase.

    The decision is phase-only, so any positive scaling of a symbol leaves
    the result unchanged.  A symbol exactly on the boundary between angular
    sectors k and k+1 resolves to k (indices before the modulo wrap), and a
    zero symbol resolves deterministically to position 0.
    """
    const = make_constellation(order)
    b = const.bits_per_symbol
    symbols = np.asarray(symbols)
    sector_width = 2.0 * np.pi / order
    u = np.angle(symbols) / sector_width
    positions = np.ceil(u - 0.5).astype(np.int64) % order
    return _ungroup_bits(const.labels[positions], b)
