from functools import lru_cache
import numpy as np

from bitparticle_sim.macunit._mac_unit import MacVariant
from bitparticle_sim.smcore import (
    GROUPS,
    MAX_MAGNITUDE,
    N_PARTICLES,
    group_index_matrix,
    magnitude_tables,
)

VALUE_OFFSET = MAX_MAGNITUDE


def _keep_matrix(variant: MacVariant) -> np.ndarray:
    keep = np.ones((N_PARTICLES, N_PARTICLES), dtype=bool)
    for k in variant.discarded_groups:
        keep &= group_index_matrix() != k
    return keep


@lru_cache(maxsize=None)
def cycle_table(variant: MacVariant = MacVariant.EXACT) -> np.ndarray:
    """Cycles required for every pair of magnitudes, shape (128, 128)."""
    nonzero = (magnitude_tables() != 0) & _keep_matrix(variant)
    groups = group_index_matrix()
    counts = np.stack([nonzero[..., groups == g.k].sum(axis=-1)
                       for g in GROUPS], axis=-1)
    table = np.maximum(1, counts.max(axis=-1)).astype(np.int16)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def magnitude_product_table(variant: MacVariant = MacVariant.EXACT) \
        -> np.ndarray:
    weights = 4 ** group_index_matrix() * _keep_matrix(variant)
    table = (magnitude_tables().astype(np.int64) * weights).sum(axis=(2, 3))
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def product_table(variant: MacVariant = MacVariant.EXACT) -> np.ndarray:
    """Signed products indexed by ``[a + 127, w + 127]``, shape (255, 255)."""
    values = np.arange(-MAX_MAGNITUDE, MAX_MAGNITUDE + 1)
    mags = np.abs(values)
    signs = np.sign(values)
    table = np.outer(signs, signs) * \
        magnitude_product_table(variant)[np.ix_(mags, mags)]
    table.setflags(write=False)
    return table


def approx_error_table() -> np.ndarray:
    """Exact minus approximate product for every value pair."""
    return product_table(MacVariant.EXACT) - product_table(MacVariant.APPROX)
