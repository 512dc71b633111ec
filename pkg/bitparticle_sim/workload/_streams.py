from collections import namedtuple
from typing import Dict, Tuple
import logging
import numpy as np
import pandas as pd

from bitparticle_sim._logging import timeit
from bitparticle_sim.exceptions import (
    ConfigurationError,
    InvalidParameter,
    ProfileFormatError,
)
from bitparticle_sim.smcore import MAGNITUDE_BITS

logger = logging.getLogger(__name__)

PROFILE_COLUMNS = ['layer_name', 'macs', 'bs_w', 'bs_a', 'vs_w', 'vs_a']
PROBABILITY_COLUMNS = PROFILE_COLUMNS[2:]

# substream roles, part of every spawn key
ROLE_WEIGHT = 0
ROLE_ACTIVATION = 1
ROLE_SAMPLE = 2

_profile_named = namedtuple('SparsityProfile', ['bs_w', 'bs_a', 'vs_w',
                                                'vs_a', 'sign_p'])


class SparsityProfile(_profile_named):
    """Bit- and value-level zero probabilities of weights and activations.

    Attributes
    ----------
    bs_w, bs_a : float
        Probability that a magnitude bit of a non-zero weight (activation)
        is 0.
    vs_w, vs_a : float
        Probability that a weight (activation) is zero as a whole.
    sign_p : float
        Probability of a negative sign.
    """
    __slots__ = ()

    def __new__(cls, bs_w, bs_a, vs_w=0.0, vs_a=0.0, sign_p=0.5):
        values = dict(bs_w=bs_w, bs_a=bs_a, vs_w=vs_w, vs_a=vs_a,
                      sign_p=sign_p)
        for name, value in values.items():
            if not 0.0 <= value <= 1.0:
                raise InvalidParameter(f"'{name}' must be a probability in "
                                       f"[0, 1]. Got: {value}")
        return super().__new__(cls, *(float(v) for v in values.values()))

    @classmethod
    def uniform(cls, bs, vs_w=0.0, vs_a=0.0, sign_p=0.5):
        return cls(bs, bs, vs_w, vs_a, sign_p)

    def to_dict(self) -> Dict:
        return self._asdict()


class OperandStreams:
    """Per-step operands of an array run.

    Weights are indexed ``weight[r, s]`` for row `r` and step `s`;
    activations ``activation[c, s]`` for column `c`. Values are the signed
    integers of 8-bit sign-magnitude operands.
    """

    def __init__(self, weight: np.ndarray, activation: np.ndarray):
        weight = np.asarray(weight, dtype=np.int8)
        activation = np.asarray(activation, dtype=np.int8)
        if weight.ndim != 2 or activation.ndim != 2:
            raise ConfigurationError("Streams must be 2-D (lane x step).")
        if weight.shape[1] != activation.shape[1]:
            raise ConfigurationError(
                f"Weight and activation streams disagree on step count: "
                f"{weight.shape[1]} != {activation.shape[1]}")
        if np.any(weight == -128) or np.any(activation == -128):
            raise ConfigurationError("-128 is not a sign-magnitude value.")
        self.weight = weight
        self.activation = activation

    @property
    def rows(self) -> int:
        return self.weight.shape[0]

    @property
    def cols(self) -> int:
        return self.activation.shape[0]

    @property
    def steps(self) -> int:
        return self.weight.shape[1]

    def __repr__(self) -> str:
        return (f"OperandStreams(rows={self.rows}, cols={self.cols}, "
                f"steps={self.steps})")


def substream(seed: int, role: int, index: int,
              layer: int = 0) -> np.random.Generator:
    """A Philox generator keyed by (seed, role, index, layer).

    Keys are independent of how many other lanes exist, so adding rows or
    columns never perturbs an existing lane.
    """
    sequence = np.random.SeedSequence(entropy=seed,
                                      spawn_key=(role, index, layer))
    return np.random.Generator(np.random.Philox(sequence))


def draw_values(rng: np.random.Generator, n: int, bs: float, vs: float,
                sign_p: float = 0.5) -> np.ndarray:
    """Draw `n` operand values: value zeroing, then per-bit zeroing."""
    u = rng.random((n, 2 + MAGNITUDE_BITS))
    bits = u[:, 2:] >= bs
    mags = bits.astype(np.int16) @ (1 << np.arange(MAGNITUDE_BITS))
    mags[u[:, 0] < vs] = 0
    values = np.where(u[:, 1] < sign_p, -mags, mags)
    return values.astype(np.int8)


def _gen_layer(profile: SparsityProfile, rows: int, cols: int, steps: int,
               seed: int, layer: int) -> Tuple[np.ndarray, np.ndarray]:
    weight = np.empty((rows, steps), dtype=np.int8)
    activation = np.empty((cols, steps), dtype=np.int8)
    for r in range(rows):
        weight[r] = draw_values(substream(seed, ROLE_WEIGHT, r, layer),
                                steps, profile.bs_w, profile.vs_w,
                                profile.sign_p)
    for c in range(cols):
        activation[c] = draw_values(substream(seed, ROLE_ACTIVATION, c,
                                              layer),
                                    steps, profile.bs_a, profile.vs_a,
                                    profile.sign_p)
    return weight, activation


def _check_dims(rows, cols, steps):
    for name, value in (('rows', rows), ('cols', cols), ('steps', steps)):
        if value < 1:
            raise InvalidParameter(f"'{name}' must be >= 1. Got: {value}")


@timeit('gen_iid')
def gen_iid(profile: SparsityProfile, rows: int, cols: int, steps: int,
            seed: int) -> OperandStreams:
    """Independent operands following one sparsity profile.

    Parameters
    ----------
    profile : SparsityProfile
        Zero probabilities.
    rows, cols : int
        Number of weight lanes (array rows) and activation lanes (columns).
    steps : int
        Operands per lane, N.
    seed : int
        Root seed; identical arguments give bit-identical streams.

    Returns
    -------
    OperandStreams
    """
    _check_dims(rows, cols, steps)
    return OperandStreams(*_gen_layer(profile, rows, cols, steps, seed, 0))


def read_profile(path) -> pd.DataFrame:
    """Read and validate a per-layer sparsity profile file.

    The file is UTF-8 CSV with the header
    ``layer_name,macs,bs_w,bs_a,vs_w,vs_a``.

    Raises
    ------
    ProfileFormatError
        If the file cannot be parsed or a record is invalid. The message
        names the offending line.
    """
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False,
                         skipinitialspace=True, skip_blank_lines=False,
                         encoding='utf-8')
    except pd.errors.EmptyDataError:
        raise ProfileFormatError("Profile file is empty.", lineno=1)
    except pd.errors.ParserError as e:
        raise ProfileFormatError(f"Malformed profile: {e}")
    except UnicodeDecodeError as e:
        raise ProfileFormatError(f"Profile is not UTF-8: {e}")
    except OSError as e:
        raise ProfileFormatError(f"Cannot read profile: {e}")

    columns = [col.strip() for col in df.columns]
    if columns != PROFILE_COLUMNS:
        raise ProfileFormatError(f"Expected header {PROFILE_COLUMNS}. "
                                 f"Got: {columns}", lineno=1)
    df.columns = columns

    records = []
    for offset, row in enumerate(df.itertuples(index=False)):
        lineno = offset + 2
        fields = ['' if pd.isna(value) else str(value).strip()
                  for value in row]
        if not any(fields):
            continue
        if not all(fields):
            raise ProfileFormatError("Missing field.", lineno=lineno)
        record = {'layer_name': fields[0]}
        try:
            numbers = [float(value) for value in fields[1:]]
        except ValueError:
            raise ProfileFormatError(f"Non-numeric field in {fields[1:]}.",
                                     lineno=lineno)
        record['macs'] = numbers[0]
        if not record['macs'] > 0:
            raise ProfileFormatError(f"'macs' must be positive. Got: "
                                     f"{fields[1]}", lineno=lineno)
        for name, value in zip(PROBABILITY_COLUMNS, numbers[1:]):
            if not 0.0 <= value <= 1.0:
                raise ProfileFormatError(f"'{name}' must be in [0, 1]. "
                                         f"Got: {value}", lineno=lineno)
            record[name] = value
        records.append(record)

    if not records:
        raise ProfileFormatError("Profile has no records.", lineno=2)
    return pd.DataFrame(records, columns=PROFILE_COLUMNS)


def apportion(weights, total: int) -> np.ndarray:
    """Split `total` into integer parts proportional to `weights`.

    Uses the largest-remainder method; ties go to the earlier entry.
    """
    weights = np.asarray(weights, dtype=float)
    quotas = weights / weights.sum() * total
    counts = np.floor(quotas).astype(int)
    short = total - counts.sum()
    order = np.argsort(-(quotas - counts), kind='stable')
    counts[order[:short]] += 1
    return counts


@timeit('gen_from_profile_file')
def gen_from_profile_file(path, rows: int, cols: int, steps: int,
                          seed: int) -> OperandStreams:
    """Operands drawn layer by layer from a sparsity profile file.

    Steps are split among layers in proportion to their MAC counts and laid
    out contiguously in file order. A single-record file produces the same
    streams as `gen_iid` with that record's probabilities.
    """
    _check_dims(rows, cols, steps)
    records = read_profile(path)
    counts = apportion(records['macs'].values, steps)
    weights, activations = [], []
    for layer, (record, count) in enumerate(zip(
            records.itertuples(index=False), counts)):
        if not count:
            continue
        profile = SparsityProfile(record.bs_w, record.bs_a, record.vs_w,
                                  record.vs_a)
        logger.debug('layer %(name)s: %(count)d steps',
                     {'name': record.layer_name, 'count': count})
        weight, activation = _gen_layer(profile, rows, cols, int(count),
                                        seed, layer)
        weights.append(weight)
        activations.append(activation)
    return OperandStreams(np.concatenate(weights, axis=1),
                          np.concatenate(activations, axis=1))


def sample_operands(profile: SparsityProfile, n: int,
                    seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """`n` independent (activation, weight) value pairs."""
    if n < 1:
        raise InvalidParameter(f"Sample count must be >= 1. Got: {n}")
    a = draw_values(substream(seed, ROLE_SAMPLE, 0), n, profile.bs_a,
                    profile.vs_a, profile.sign_p)
    w = draw_values(substream(seed, ROLE_SAMPLE, 1), n, profile.bs_w,
                    profile.vs_w, profile.sign_p)
    return a, w
