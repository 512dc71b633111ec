from typing import Tuple
import numpy as np

from bitparticle_sim.exceptions import InvalidParameter, SchedulingError
from bitparticle_sim.macunit._mac_unit import MacVariant
from bitparticle_sim.macunit._tables import (
    VALUE_OFFSET,
    cycle_table,
    product_table,
)

_WRAP = np.int64(1 << 32)
_HALF = np.int64(1 << 31)


def _wrap32(values: np.ndarray) -> np.ndarray:
    return (values + _HALF) % _WRAP - _HALF


class MacUnitBank:
    """A grid of MAC units stepped together.

    The bank follows the same offer/step protocol as `MacUnit`, one unit
    per grid position, but looks up each operation's cycle count and
    product in tables instead of assembling partial products cycle by
    cycle. Operands are signed integer values in [-127, 127].

    Parameters
    ----------
    shape : tuple of int
        Grid shape, e.g. (rows, cols).
    variant : MacVariant
        Exact or approximate datapath.
    queue_capacity : int
        Per-unit operand queue capacity Q.
    """

    def __init__(self, shape: Tuple[int, ...],
                 variant: MacVariant = MacVariant.EXACT,
                 queue_capacity: int = 0):
        if queue_capacity < 0:
            raise InvalidParameter(f"Queue capacity must be >= 0. Got: "
                                   f"{queue_capacity}")
        self.shape = tuple(shape)
        self.variant = variant
        self.queue_capacity = queue_capacity
        n = int(np.prod(self.shape))
        self._cycles = cycle_table(variant)
        self._products = product_table(variant)

        self.remaining = np.zeros(n, dtype=np.int16)
        self.current_product = np.zeros(n, dtype=np.int64)
        self.accumulator = np.zeros(n, dtype=np.int64)
        slots = max(queue_capacity, 1)
        self.queue_cost = np.zeros((n, slots), dtype=np.int16)
        self.queue_product = np.zeros((n, slots), dtype=np.int64)
        self.queue_head = np.zeros(n, dtype=np.intp)
        self.queue_len = np.zeros(n, dtype=np.intp)

        self.busy_cycles = np.zeros(n, dtype=np.int64)
        self.ops_accepted = np.zeros(n, dtype=np.int64)
        self.ops_filtered = np.zeros(n, dtype=np.int64)
        self.ops_finished = np.zeros(n, dtype=np.int64)
        self._offered = np.zeros(n, dtype=bool)

    @property
    def size(self) -> int:
        return self.remaining.size

    def busy(self) -> np.ndarray:
        return (self.remaining > 0).reshape(self.shape)

    def free(self) -> np.ndarray:
        """Units whose operand buffer could take a pair right now."""
        return ((self.remaining == 0) & (self.queue_len == 0)) \
            .reshape(self.shape)

    def drained(self) -> bool:
        return not (self.remaining.any() or self.queue_len.any())

    def step(self) -> Tuple[np.ndarray, np.ndarray]:
        """Execute one cycle on every unit.

        Returns
        -------
        tuple of np.ndarray
            Boolean grids of units that loaded a queued operation and of
            units that finished an operation in this cycle.
        """
        self._offered[:] = False
        busy = self.remaining > 0
        self.busy_cycles += busy
        self.remaining -= busy
        finished = busy & (self.remaining == 0)
        idx = np.flatnonzero(finished)
        if idx.size:
            self.accumulator[idx] = _wrap32(self.accumulator[idx] +
                                            self.current_product[idx])
            self.ops_finished[idx] += 1

        loaded = (self.remaining == 0) & (self.queue_len > 0)
        idx = np.flatnonzero(loaded)
        if idx.size:
            head = self.queue_head[idx]
            self.remaining[idx] = self.queue_cost[idx, head]
            self.current_product[idx] = self.queue_product[idx, head]
            self.queue_head[idx] = (head + 1) % self.queue_capacity
            self.queue_len[idx] -= 1
        return loaded.reshape(self.shape), finished.reshape(self.shape)

    def offer(self, mask: np.ndarray, a_values: np.ndarray,
              w_values: np.ndarray, zero_filter: bool = False) -> np.ndarray:
        """Offer operand pairs to the units selected by `mask`.

        Parameters
        ----------
        mask : np.ndarray of bool
            Grid of units receiving an offer this cycle.
        a_values, w_values : np.ndarray of int
            Grids of operand values; only entries under `mask` are read.
        zero_filter : bool
            Accept zero-valued pairs without queueing them.

        Returns
        -------
        np.ndarray of bool
            Grid of units that accepted their pair.

        Raises
        ------
        SchedulingError
            If a unit is offered twice in one cycle.
        """
        mask = np.asarray(mask, dtype=bool).ravel()
        if (self._offered & mask).any():
            raise SchedulingError("A MAC unit accepts at most one offer "
                                  "per cycle.")
        self._offered |= mask
        accepted = np.zeros(self.size, dtype=bool)
        idx = np.flatnonzero(mask)
        a = np.asarray(a_values).ravel()[idx].astype(np.intp)
        w = np.asarray(w_values).ravel()[idx].astype(np.intp)

        if zero_filter:
            zero = (a == 0) | (w == 0)
            filtered = idx[zero]
            accepted[filtered] = True
            self.ops_filtered[filtered] += 1
            idx, a, w = idx[~zero], a[~zero], w[~zero]

        cost = self._cycles[np.abs(a), np.abs(w)]
        product = self._products[a + VALUE_OFFSET, w + VALUE_OFFSET]

        direct = (self.remaining[idx] == 0) & (self.queue_len[idx] == 0)
        loaded = idx[direct]
        self.remaining[loaded] = cost[direct]
        self.current_product[loaded] = product[direct]
        accepted[loaded] = True

        queued = ~direct & (self.queue_len[idx] < self.queue_capacity)
        enqueued = idx[queued]
        if enqueued.size:
            slot = (self.queue_head[enqueued] + self.queue_len[enqueued]) \
                % self.queue_capacity
            self.queue_cost[enqueued, slot] = cost[queued]
            self.queue_product[enqueued, slot] = product[queued]
            self.queue_len[enqueued] += 1
            accepted[enqueued] = True

        self.ops_accepted += accepted
        return accepted.reshape(self.shape)
