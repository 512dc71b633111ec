from collections import namedtuple
from typing import Dict
import numpy as np

from bitparticle_sim.exceptions import InvalidParameter
from bitparticle_sim.macunit import MacVariant, cycle_table
from bitparticle_sim.metrics._skipped import SkippedCalculations
from bitparticle_sim.workload import (
    OperandStreams,
    SparsityProfile,
    sample_operands,
)

# steps per oracle chunk, bounds the (rows, cols, chunk) temporary
_ORACLE_CHUNK = 4096

_report_named = namedtuple('MetricsReport', [
    'total_cycles', 'col_steps', 'utilization', 'avg_cycles_per_step',
    'throughput_steps_per_cycle', 'avg_cycles_per_op', 'skipped',
    'max_divergence', 'ops_executed', 'ops_filtered', 'busy_cycles',
])


class MetricsReport(_report_named):
    """Summary of one array run.

    Attributes
    ----------
    total_cycles : int
        Counted cycles, excluding the initial operand write.
    col_steps : tuple of int
        Steps accepted by each column.
    utilization : float
        Busy unit-cycles over units x total_cycles.
    avg_cycles_per_step : float
        total_cycles over the mean column step count.
    throughput_steps_per_cycle : float
        Reciprocal of `avg_cycles_per_step`.
    avg_cycles_per_op : float
        Busy unit-cycles per executed (unfiltered) operation.
    skipped : SkippedCalculations
        Mean skipped single-bit products over the run's operand pairs.
    max_divergence : int
        Largest column step lead observed in any cycle.
    ops_executed, ops_filtered : int
        Operations computed and operations removed by zero filtering.
    busy_cycles : int
        Busy unit-cycles summed over the array.
    """
    __slots__ = ()

    @classmethod
    def from_counts(cls, total_cycles, col_steps, units, busy_cycles,
                    ops_executed, ops_filtered, max_divergence,
                    skipped) -> 'MetricsReport':
        col_steps = tuple(int(s) for s in col_steps)
        mean_steps = np.mean(col_steps)
        per_step = total_cycles / mean_steps
        return cls(
            total_cycles=int(total_cycles),
            col_steps=col_steps,
            utilization=busy_cycles / (units * total_cycles),
            avg_cycles_per_step=per_step,
            throughput_steps_per_cycle=1.0 / per_step,
            avg_cycles_per_op=(busy_cycles / ops_executed if ops_executed
                               else 0.0),
            skipped=skipped,
            max_divergence=int(max_divergence),
            ops_executed=int(ops_executed),
            ops_filtered=int(ops_filtered),
            busy_cycles=int(busy_cycles),
        )

    def to_dict(self) -> Dict:
        report = self._asdict()
        report['col_steps'] = list(self.col_steps)
        report['skipped'] = self.skipped.to_dict()
        return report


def avg_cycles_per_op(profile: SparsityProfile,
                      variant: MacVariant = MacVariant.EXACT,
                      samples: int = 1_000_000, seed: int = 0) -> float:
    """Monte-Carlo mean of the cycles a standalone unit spends per
    operation, with no queueing or stall effects."""
    a, w = sample_operands(profile, samples, seed)
    cycles = cycle_table(MacVariant.parse(variant))
    return float(cycles[np.abs(a.astype(np.intp)),
                        np.abs(w.astype(np.intp))].mean())


def strict_sync_cycles(streams: OperandStreams,
                       variant: MacVariant = MacVariant.EXACT) -> int:
    """Total cycles of a strictly synchronous array: every step lasts as
    long as its slowest unit."""
    cycles = cycle_table(MacVariant.parse(variant))
    w_mags = np.abs(streams.weight.astype(np.intp))
    a_mags = np.abs(streams.activation.astype(np.intp))
    total = 0
    for start in range(0, streams.steps, _ORACLE_CHUNK):
        chunk = slice(start, start + _ORACLE_CHUNK)
        # (cols, rows, chunk)
        per_unit = cycles[a_mags[:, None, chunk], w_mags[None, :, chunk]]
        total += int(per_unit.max(axis=(0, 1)).sum())
    return total


def strict_sync_oracle(streams: OperandStreams,
                       variant: MacVariant = MacVariant.EXACT) -> float:
    """Average cycles per step of a strictly synchronous array."""
    if streams.steps < 1:
        raise InvalidParameter("Streams hold no steps.")
    return strict_sync_cycles(streams, variant) / streams.steps
