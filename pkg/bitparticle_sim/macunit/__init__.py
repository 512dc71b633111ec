from bitparticle_sim.macunit._mac_unit import (
    APPROX_DISCARDED_GROUPS,
    INT32_MAX,
    INT32_MIN,
    CycleReport,
    MacUnit,
    MacVariant,
    Selection,
    cycles_required,
    mac_functional,
    wrap_int32,
)
from bitparticle_sim.macunit._tables import (
    approx_error_table,
    cycle_table,
    magnitude_product_table,
    product_table,
)
from bitparticle_sim.macunit._bank import MacUnitBank

__all__ = [
    'APPROX_DISCARDED_GROUPS',
    'INT32_MAX',
    'INT32_MIN',
    'CycleReport',
    'MacUnit',
    'MacUnitBank',
    'MacVariant',
    'Selection',
    'approx_error_table',
    'cycle_table',
    'cycles_required',
    'mac_functional',
    'magnitude_product_table',
    'product_table',
    'wrap_int32',
]
