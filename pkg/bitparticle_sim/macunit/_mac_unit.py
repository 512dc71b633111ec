from collections import deque, namedtuple
from enum import Enum
from typing import Dict, Tuple
import logging

from bitparticle_sim.exceptions import (
    AccumulatorOverflow,
    InvalidParameter,
    SchedulingError,
)
from bitparticle_sim.smcore import (
    GROUPS,
    SignMagnitude8,
    build_ir,
    concat_pp,
)

logger = logging.getLogger(__name__)

INT32_MIN = -(1 << 31)
INT32_MAX = (1 << 31) - 1

# groups 1-4 and 0
APPROX_DISCARDED_GROUPS = (0, 1)


class MacVariant(Enum):
    EXACT = 'exact'
    APPROX = 'approx'

    @property
    def discarded_groups(self) -> Tuple[int, ...]:
        if self is MacVariant.APPROX:
            return APPROX_DISCARDED_GROUPS
        return ()

    @property
    def mask(self) -> int:
        """16-bit mask of the IR positions this variant computes."""
        discarded = 0
        for k in self.discarded_groups:
            discarded |= GROUPS[k].mask
        return 0xffff & ~discarded

    @classmethod
    def parse(cls, value) -> 'MacVariant':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidParameter(f"Unknown MAC variant: '{value}'. "
                                   f"Expected one of "
                                   f"{[v.value for v in cls]}.")


def wrap_int32(value: int) -> int:
    return ((value - INT32_MIN) & 0xffffffff) + INT32_MIN


def _cycles_for_mask(mask: int) -> int:
    return max(1, max(bin(mask & g.mask).count('1') for g in GROUPS))


def cycles_required(a: SignMagnitude8, w: SignMagnitude8,
                    variant: MacVariant = MacVariant.EXACT) -> int:
    """Selection cycles one multiplication occupies, 1 to 4.

    A zero-valued multiplication still takes the mandatory first cycle.
    """
    return _cycles_for_mask(build_ir(a, w).nonzero & variant.mask)


_selection_named = namedtuple('Selection', ['set0', 'set1'])


class Selection(_selection_named):
    """One cycle's one-hot choices: group index to position ID, per set."""
    __slots__ = ()

    def ids(self) -> Tuple[int, ...]:
        return tuple(sorted(list(self.set0.values()) +
                            list(self.set1.values())))


_report_named = namedtuple('CycleReport', ['accepted_new_op', 'finished_op',
                                           'pp0', 'pp1'])


class CycleReport(_report_named):
    __slots__ = ()

    def to_dict(self) -> Dict:
        return self._asdict()


IDLE_REPORT = CycleReport(False, False, 0, 0)


class MacUnit:
    """Cycle-accurate state machine of one MAC unit.

    Parameters
    ----------
    variant : MacVariant
        Exact or approximate datapath.
    queue_capacity : int
        Capacity Q of the operand queue in front of the operand buffer.

    Notes
    -----
    Each cycle the array calls `step` (execute) and then at most one
    `offer`. An operand pair accepted into a free buffer is written in the
    offering cycle and computes from the next `step` on; a pair waiting in
    the queue is written in the cycle the previous operation finishes.
    """

    def __init__(self, variant: MacVariant = MacVariant.EXACT,
                 queue_capacity: int = 0):
        if queue_capacity < 0:
            raise InvalidParameter(f"Queue capacity must be >= 0. Got: "
                                   f"{queue_capacity}")
        self.variant = variant
        self.queue_capacity = queue_capacity
        self.queue = deque()
        self.ir = None
        self.nonzero_reg = 0
        self.accumulator = 0
        self.cycle_in_op = 0
        self.busy_cycles = 0
        self.ops_accepted = 0
        self.ops_filtered = 0
        self.ops_finished = 0
        self._remaining = 0
        self._offered = False

    @property
    def busy(self) -> bool:
        return self._remaining > 0

    @property
    def drained(self) -> bool:
        return not self.busy and not self.queue

    def _load(self, a: SignMagnitude8, w: SignMagnitude8):
        self.ir = build_ir(a, w)
        # discarded groups never enter the register
        self.nonzero_reg = self.ir.nonzero & self.variant.mask
        self._remaining = _cycles_for_mask(self.nonzero_reg)
        self.cycle_in_op = 0

    def _accumulate(self, delta: int):
        total = self.accumulator + delta
        if __debug__ and not INT32_MIN <= total <= INT32_MAX:
            raise AccumulatorOverflow(f"Accumulator left the 32-bit range: "
                                      f"{total}")
        self.accumulator = wrap_int32(total)

    def select_cycle(self) -> Selection:
        """Pick the lowest surviving ID of every group and clear it."""
        chosen = ({}, {})
        for group in GROUPS:
            surviving = self.nonzero_reg & group.mask
            if surviving:
                lowest = surviving & -surviving
                chosen[group.set][group.k] = lowest.bit_length() - 1
                self.nonzero_reg &= ~lowest
        return Selection(*chosen)

    def step(self) -> CycleReport:
        self._offered = False
        if not self.busy and not self.queue:
            return IDLE_REPORT

        accepted = finished = False
        pp0 = pp1 = 0
        if self.busy:
            selection = self.select_cycle()
            pp0 = concat_pp({k: self.ir.at(id_)
                             for k, id_ in selection.set0.items()}, 0)
            pp1 = concat_pp({k: self.ir.at(id_)
                             for k, id_ in selection.set1.items()}, 1)
            magnitude = pp0 + pp1
            self._accumulate(-magnitude if self.ir.product_sign
                             else magnitude)
            self._remaining -= 1
            self.cycle_in_op += 1
            self.busy_cycles += 1
            if not self._remaining:
                finished = True
                self.ops_finished += 1

        if not self.busy and self.queue:
            self._load(*self.queue.popleft())
            accepted = True
        return CycleReport(accepted, finished, pp0, pp1)

    def offer(self, a: SignMagnitude8, w: SignMagnitude8,
              zero_filter: bool = False) -> bool:
        """Offer one operand pair; return whether it was accepted.

        Raises
        ------
        SchedulingError
            If the unit was already offered a pair in this cycle.
        """
        if self._offered:
            raise SchedulingError("A MAC unit accepts at most one offer "
                                  "per cycle.")
        self._offered = True

        if zero_filter and (a.magnitude == 0 or w.magnitude == 0):
            self.ops_accepted += 1
            self.ops_filtered += 1
            return True
        if self.drained:
            self._load(a, w)
        elif len(self.queue) < self.queue_capacity:
            self.queue.append((a, w))
        else:
            return False
        self.ops_accepted += 1
        return True


def mac_functional(a: SignMagnitude8, w: SignMagnitude8,
                   variant: MacVariant = MacVariant.EXACT) -> int:
    """Run one multiplication through the selection loop to completion."""
    unit = MacUnit(variant)
    unit.offer(a, w)
    while unit.busy:
        unit.step()
    return unit.accumulator
