from collections import namedtuple
from enum import Enum
from functools import lru_cache
from typing import Dict
import numpy as np

from bitparticle_sim.exceptions import InvalidParameter
from bitparticle_sim.macunit import APPROX_DISCARDED_GROUPS
from bitparticle_sim.smcore import (
    MAGNITUDE_BITS,
    MAX_MAGNITUDE,
    PARTICLE_WIDTHS,
    SignMagnitude8,
    group_index_matrix,
    magnitude_tables,
)
from bitparticle_sim.workload import (
    OperandStreams,
    SparsityProfile,
    sample_operands,
)

SINGLE_BIT_PRODUCTS = MAGNITUDE_BITS * MAGNITUDE_BITS


class SkipScheme(Enum):
    IDEAL = 'ideal'
    BIT_SERIAL = 'bit_serial'
    BP_EXACT = 'bp_exact'
    BP_APPROX = 'bp_approx'


_skipped_named = namedtuple('SkippedCalculations',
                            [scheme.value for scheme in SkipScheme])


class SkippedCalculations(_skipped_named):
    """Mean fraction of the 49 single-bit products skipped per scheme."""
    __slots__ = ()

    def relative_to_ideal(self) -> Dict[str, float]:
        """Each scheme's mean as a fraction of the ideal scheme's mean."""
        if self.ideal == 0:
            return {name: float('nan') for name in self._fields}
        return {name: value / self.ideal
                for name, value in self._asdict().items()}

    def to_dict(self) -> Dict[str, float]:
        return {name: float(value) for name, value in self._asdict().items()}


def _popcount(mags: np.ndarray) -> np.ndarray:
    return ((mags[..., None] >> np.arange(MAGNITUDE_BITS)) & 1).sum(axis=-1)


@lru_cache(maxsize=None)
def skipped_tables() -> Dict[SkipScheme, np.ndarray]:
    """Skipped fraction for every magnitude pair, one (128, 128) table per
    scheme, indexed ``[|a|, |w|]``."""
    mags = np.arange(MAX_MAGNITUDE + 1)
    ones = _popcount(mags)
    widths = np.array(PARTICLE_WIDTHS)
    width_matrix = np.outer(widths, widths)
    zero_ir = magnitude_tables() == 0
    discarded = np.isin(group_index_matrix(), APPROX_DISCARDED_GROUPS)

    tables = {
        SkipScheme.IDEAL: SINGLE_BIT_PRODUCTS - np.outer(ones, ones),
        SkipScheme.BIT_SERIAL: np.broadcast_to(
            MAGNITUDE_BITS * (MAGNITUDE_BITS - ones)[None, :],
            (mags.size, mags.size)),
        SkipScheme.BP_EXACT: (zero_ir * width_matrix).sum(axis=(2, 3)),
        SkipScheme.BP_APPROX: ((zero_ir | discarded) *
                               width_matrix).sum(axis=(2, 3)),
    }
    for scheme, table in tables.items():
        table = table / SINGLE_BIT_PRODUCTS
        table.setflags(write=False)
        tables[scheme] = table
    return tables


def skipped_ratio(a: SignMagnitude8, w: SignMagnitude8,
                  scheme: SkipScheme) -> float:
    """Fraction of the 49 single-bit products of ``|a| x |w|`` a scheme
    skips.

    `IDEAL` skips every product with a zero bit. `BIT_SERIAL` skips the
    zero bits of the serial operand `w` only. `BP_EXACT` skips the bits
    covered by zero intermediate results and `BP_APPROX` additionally the
    unconditionally discarded low groups.

    Examples
    --------
    >>> from bitparticle_sim.smcore import encode_sm8
    >>> skipped_ratio(encode_sm8(127), encode_sm8(0), SkipScheme.BP_EXACT)
    1.0
    """
    return float(skipped_tables()[SkipScheme(scheme)][a.magnitude,
                                                      w.magnitude])


def _table_mean(scheme, a_mags, w_mags):
    return float(skipped_tables()[scheme][a_mags, w_mags].mean())


def mean_skipped(profile: SparsityProfile, samples: int,
                 seed: int) -> SkippedCalculations:
    """Monte-Carlo mean skipped fractions over i.i.d. operand pairs."""
    a, w = sample_operands(profile, samples, seed)
    a_mags = np.abs(a.astype(np.intp))
    w_mags = np.abs(w.astype(np.intp))
    return SkippedCalculations(*(_table_mean(scheme, a_mags, w_mags)
                                 for scheme in SkipScheme))


def stream_skipped(streams: OperandStreams) -> SkippedCalculations:
    """Mean skipped fractions over every (row, column, step) pair that an
    array run multiplies.

    Uses per-step magnitude histograms so the cost is linear in the number
    of steps rather than in rows x columns x steps.
    """
    bins = MAX_MAGNITUDE + 1
    steps = np.arange(streams.steps)

    def histogram(values):
        hist = np.zeros((streams.steps, bins))
        mags = np.abs(values.astype(np.intp))
        np.add.at(hist, (np.broadcast_to(steps, mags.shape), mags), 1)
        return hist

    hw = histogram(streams.weight)
    ha = histogram(streams.activation)
    pairs = streams.rows * streams.cols * streams.steps
    # tables are indexed [|a|, |w|]
    return SkippedCalculations(*(
        float(np.einsum('sa,aw,sw->', ha, skipped_tables()[scheme], hw)
              / pairs)
        for scheme in SkipScheme))


def bitserial_ideal_ratio_analytic(bs: float) -> float:
    """Expected bit-serial skipped fraction over the ideal one, 1/(2 - bs),
    under i.i.d. per-bit zeroing."""
    if not 0.0 < bs <= 1.0:
        raise InvalidParameter(f"bs must be in (0, 1]. Got: {bs}")
    return 1.0 / (2.0 - bs)


def bp_exact_ideal_ratio_analytic(bs: float) -> float:
    """Expected exact dual-factor skipped fraction over the ideal one under
    i.i.d. per-bit zeroing and no value sparsity.

    A 2-bit particle is non-zero with probability ``1 - bs**2`` and the
    1-bit particle with probability ``1 - bs``.
    """
    if not 0.0 < bs <= 1.0:
        raise InvalidParameter(f"bs must be in (0, 1]. Got: {bs}")
    expected_width = sum(width * (1 - bs ** width)
                         for width in PARTICLE_WIDTHS)
    bp_exact = (SINGLE_BIT_PRODUCTS - expected_width ** 2) / \
        SINGLE_BIT_PRODUCTS
    ideal = 1 - (1 - bs) ** 2
    return bp_exact / ideal
