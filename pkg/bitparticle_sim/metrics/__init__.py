from bitparticle_sim.metrics._skipped import (
    SINGLE_BIT_PRODUCTS,
    SkippedCalculations,
    SkipScheme,
    bitserial_ideal_ratio_analytic,
    bp_exact_ideal_ratio_analytic,
    mean_skipped,
    skipped_ratio,
    skipped_tables,
    stream_skipped,
)
from bitparticle_sim.metrics._report import (
    MetricsReport,
    avg_cycles_per_op,
    strict_sync_cycles,
    strict_sync_oracle,
)

__all__ = [
    'SINGLE_BIT_PRODUCTS',
    'MetricsReport',
    'SkippedCalculations',
    'SkipScheme',
    'avg_cycles_per_op',
    'bitserial_ideal_ratio_analytic',
    'bp_exact_ideal_ratio_analytic',
    'mean_skipped',
    'skipped_ratio',
    'skipped_tables',
    'stream_skipped',
    'strict_sync_cycles',
    'strict_sync_oracle',
]
