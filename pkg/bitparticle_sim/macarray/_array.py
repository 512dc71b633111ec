from collections import namedtuple
from typing import Dict, Optional, Tuple, Union
import logging
import numpy as np

from bitparticle_sim._logging import timeit
from bitparticle_sim.exceptions import (
    ConfigurationError,
    InvalidParameter,
    SchedulingError,
)
from bitparticle_sim.macunit import MacUnitBank, MacVariant
from bitparticle_sim.metrics import MetricsReport, stream_skipped
from bitparticle_sim.workload import OperandStreams

logger = logging.getLogger(__name__)

_config_named = namedtuple('ArrayConfig', [
    'rows', 'cols', 'E', 'Q', 'zero_filter', 'variant', 'steps', 'seed',
    'lockstep',
])


class ArrayConfig(_config_named):
    """Parameters of one array run.

    Attributes
    ----------
    rows, cols : int
        Array shape. Each column is a group that advances one step at a
        time.
    E : int
        Maximum step lead of the fastest column over the slowest.
    Q : int
        Per-unit operand queue capacity.
    zero_filter : bool
        Accept zero-valued operand pairs without queueing them.
    variant : MacVariant
        Exact or approximate MAC units.
    steps : int
        Steps N every column must accept.
    seed : int
        Seed of the operand streams, echoed in results.
    lockstep : bool
        Model a strictly synchronous array instead: a step is committed
        only in a cycle where every unit accepts it. Needs E=0 and Q=0.
    """
    __slots__ = ()

    def __new__(cls, rows=16, cols=32, E=0, Q=0, zero_filter=False,
                variant=MacVariant.EXACT, steps=20_000, seed=0,
                lockstep=False):
        try:
            variant = MacVariant.parse(variant)
        except InvalidParameter as e:
            raise ConfigurationError(str(e))
        for name, value, low in (('rows', rows, 1), ('cols', cols, 1),
                                 ('steps', steps, 1), ('E', E, 0),
                                 ('Q', Q, 0)):
            if int(value) != value or value < low:
                raise ConfigurationError(f"'{name}' must be an integer >= "
                                         f"{low}. Got: {value}")
        if lockstep and (E or Q):
            raise ConfigurationError(f"Lockstep mode needs E=0 and Q=0. "
                                     f"Got: E={E}, Q={Q}")
        return super().__new__(cls, int(rows), int(cols), int(E), int(Q),
                               bool(zero_filter), variant, int(steps),
                               int(seed), bool(lockstep))

    @property
    def units(self) -> int:
        return self.rows * self.cols

    @property
    def label(self) -> str:
        return f"E{self.E}Q{self.Q}"

    def to_dict(self) -> Dict:
        config = self._asdict()
        config['variant'] = self.variant.value
        return config


class ArrayState:
    """Everything the scheduler tracks between cycles.

    Attributes
    ----------
    bank : MacUnitBank
        The rows x cols MAC units.
    col_step : np.ndarray
        Steps committed by each column; column `c` is working on step
        ``col_step[c]``.
    accepted : np.ndarray of bool
        ``accepted[r, c]`` is set once row `r` of column `c` took the
        column's current step. Cleared when the column advances.
    last_step : np.ndarray
        Step index of the most recent pair each unit accepted.
    cycle : int
        Counted cycles so far.
    max_divergence : int
        Largest ``max(col_step) - min(col_step)`` seen after any cycle.
    """

    def __init__(self, cfg: ArrayConfig, streams: OperandStreams):
        if streams.rows != cfg.rows or streams.cols != cfg.cols:
            raise ConfigurationError(
                f"Streams are {streams.rows}x{streams.cols} but the array "
                f"is {cfg.rows}x{cfg.cols}.")
        if streams.steps < cfg.steps:
            raise ConfigurationError(f"Streams hold {streams.steps} steps, "
                                     f"{cfg.steps} are required.")
        self.cfg = cfg
        self.weight = streams.weight[:, :cfg.steps]
        self.activation = streams.activation[:, :cfg.steps]
        self.bank = MacUnitBank((cfg.rows, cfg.cols), cfg.variant, cfg.Q)
        self.col_step = np.zeros(cfg.cols, dtype=np.int64)
        self.accepted = np.zeros((cfg.rows, cfg.cols), dtype=bool)
        self.last_step = np.full((cfg.rows, cfg.cols), -1, dtype=np.int64)
        self.cycle = 0
        self.max_divergence = 0
        self._col_index = np.arange(cfg.cols)

    @property
    def divergence(self) -> int:
        return int(self.col_step.max() - self.col_step.min())

    def weight_window(self) -> Tuple[int, int]:
        """Step indices of the weights the row buffers must hold."""
        slowest = int(self.col_step.min())
        return slowest - 1, slowest + self.cfg.E

    @property
    def finished(self) -> bool:
        return bool((self.col_step == self.cfg.steps).all()) and \
            self.bank.drained()

    def operands(self) -> Tuple[np.ndarray, np.ndarray]:
        """Activation and weight grids of every column's current step."""
        steps = np.minimum(self.col_step, self.cfg.steps - 1)
        w = self.weight[:, steps]
        a = np.broadcast_to(self.activation[self._col_index, steps],
                            w.shape)
        return a, w


def window_check(state: ArrayState,
                 c: Optional[int] = None) -> Union[bool, np.ndarray]:
    """Whether column `c` may offer its current step.

    A column is eligible while it has steps left and is at most E steps
    ahead of the slowest column. Without `c` the mask of all columns is
    returned.
    """
    col_step = state.col_step
    eligible = (col_step < col_step.min() + state.cfg.E + 1) & \
        (col_step < state.cfg.steps)
    if c is None:
        return eligible
    return bool(eligible[c])


def _check_weight_window(state, columns):
    low, high = state.weight_window()
    steps = state.col_step[columns]
    if ((steps < low) | (steps > high)).any():
        raise SchedulingError(f"Weight for step {steps.tolist()} read "
                              f"outside the buffered window [{low}, "
                              f"{high}].")


def _record_acceptance(state, newly):
    steps = np.broadcast_to(state.col_step, newly.shape)
    if (steps[newly] <= state.last_step[newly]).any():
        raise SchedulingError("A unit received operand pairs out of step "
                              "order.")
    state.last_step[newly] = steps[newly]
    state.accepted |= newly


def offer_phase(state: ArrayState,
                c: Union[int, np.ndarray]) -> Union[bool, np.ndarray]:
    """Offer the current step of column(s) `c` to rows that have not taken
    it yet.

    Rows keep their acceptance across cycles until the column advances. In
    lockstep mode nothing persists: the step goes out only if every unit
    of the array can take it in this cycle.

    Returns
    -------
    bool or np.ndarray of bool
        Whether every row of the column accepted, one entry per column when
        `c` is an array.
    """
    columns = np.atleast_1d(np.asarray(c, dtype=np.intp))
    _check_weight_window(state, columns)
    a, w = state.operands()
    mask = np.zeros(state.accepted.shape, dtype=bool)
    mask[:, columns] = True
    zero_filter = state.cfg.zero_filter

    if state.cfg.lockstep:
        able = state.bank.free()
        if zero_filter:
            able |= (a == 0) | (w == 0)
        if columns.size != state.cfg.cols or not able.all():
            mask[:] = False
    else:
        mask &= ~state.accepted

    if mask.any():
        accepted = state.bank.offer(mask, a, w, zero_filter)
        _record_acceptance(state, accepted)
    all_accepted = state.accepted[:, columns].all(axis=0)
    if np.ndim(c) == 0:
        return bool(all_accepted[0])
    return all_accepted


def advance(state: ArrayState, ready: np.ndarray) -> np.ndarray:
    """Advance ready columns as far as the divergence bound allows.

    A ready column moves on only if its new step stays within E of the
    slowest column after this cycle's advances, so with E=0 all columns
    advance in the same cycle.
    """
    tentative = state.col_step + ready
    allowed = ready & (tentative <= tentative.min() + state.cfg.E)
    state.col_step += allowed
    state.accepted[:, allowed] = False
    return allowed


class QuasiSyncArray:
    """Cycle-accurate model of the MAC array.

    Each counted cycle runs, in order, one execute step on every unit, the
    offer phase of every eligible column, and the advance of columns whose
    rows all accepted. Cycle 0 only writes the first operands and is not
    counted.

    Parameters
    ----------
    cfg : ArrayConfig
        Array parameters.
    streams : OperandStreams
        Operands, at least `cfg.steps` per lane.
    """

    def __init__(self, cfg: ArrayConfig, streams: OperandStreams):
        self.cfg = cfg
        self.state = ArrayState(cfg, streams)
        # loose upper bound, every step costs at most 4 cycles per unit
        self._max_cycles = 8 * cfg.steps + 16

    @property
    def accumulators(self) -> np.ndarray:
        return self.state.bank.accumulator.reshape(self.state.bank.shape)

    def cycle(self, execute: bool = True) -> np.ndarray:
        """Run one cycle and return the mask of columns that advanced."""
        state = self.state
        if execute:
            state.bank.step()
            state.cycle += 1
        columns = np.flatnonzero(window_check(state))
        ready = np.zeros(self.cfg.cols, dtype=bool)
        if columns.size:
            ready[columns] = offer_phase(state, columns)
        advanced = advance(state, ready)
        self._check_divergence()
        return advanced

    def _check_divergence(self):
        state = self.state
        divergence = state.divergence
        if divergence > self.cfg.E:
            raise SchedulingError(f"Column steps diverged by {divergence} "
                                  f"at cycle {state.cycle}, E={self.cfg.E}.")
        state.max_divergence = max(state.max_divergence, divergence)

    def run(self) -> MetricsReport:
        state = self.state
        self.cycle(execute=False)
        while True:
            self.cycle()
            if state.finished:
                break
            if state.cycle > self._max_cycles:
                raise SchedulingError(f"Array did not drain within "
                                      f"{self._max_cycles} cycles.")
        return self.report()

    def report(self) -> MetricsReport:
        state = self.state
        bank = state.bank
        streams = OperandStreams(state.weight, state.activation)
        return MetricsReport.from_counts(
            total_cycles=state.cycle,
            col_steps=state.col_step,
            units=self.cfg.units,
            busy_cycles=int(bank.busy_cycles.sum()),
            ops_executed=int(bank.ops_finished.sum()),
            ops_filtered=int(bank.ops_filtered.sum()),
            max_divergence=state.max_divergence,
            skipped=stream_skipped(streams),
        )


@timeit('simulate')
def simulate(cfg: ArrayConfig, streams: OperandStreams) -> MetricsReport:
    """Run the array on `streams` until every column accepted all steps and
    every unit drained."""
    report = QuasiSyncArray(cfg, streams).run()
    logger.debug('%(label)s: %(cycles)d cycles, utilization %(util).4f',
                 {'label': cfg.label, 'cycles': report.total_cycles,
                  'util': report.utilization})
    return report
