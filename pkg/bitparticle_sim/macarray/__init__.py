from bitparticle_sim.macarray._array import (
    ArrayConfig,
    ArrayState,
    QuasiSyncArray,
    advance,
    offer_phase,
    simulate,
    window_check,
)

__all__ = [
    'ArrayConfig',
    'ArrayState',
    'QuasiSyncArray',
    'advance',
    'offer_phase',
    'simulate',
    'window_check',
]
