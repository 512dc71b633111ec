from bitparticle_sim.smcore._sign_magnitude import (
    MAGNITUDE_BITS,
    MAX_MAGNITUDE,
    SignMagnitude8,
    encode_sm8,
    decode_sm8,
    multiply_reference,
    all_operands,
)
from bitparticle_sim.smcore._particles import (
    PARTICLE_WIDTHS,
    PARTICLE_MAX,
    N_PARTICLES,
    N_IRS,
    PP_BITS,
    IR_VALUES,
    GROUPS,
    GROUP_SETS,
    GROUP_OF_ID,
    ParticleSplit,
    Group,
    IrState,
    particlize,
    build_ir,
    ir_encode3,
    ir_decode3,
    concat_pp,
    position_id,
    position_of,
    magnitude_tables,
    group_index_matrix,
)

__all__ = [
    'MAGNITUDE_BITS',
    'MAX_MAGNITUDE',
    'SignMagnitude8',
    'encode_sm8',
    'decode_sm8',
    'multiply_reference',
    'all_operands',
    'PARTICLE_WIDTHS',
    'PARTICLE_MAX',
    'N_PARTICLES',
    'N_IRS',
    'PP_BITS',
    'IR_VALUES',
    'GROUPS',
    'GROUP_SETS',
    'GROUP_OF_ID',
    'ParticleSplit',
    'Group',
    'IrState',
    'particlize',
    'build_ir',
    'ir_encode3',
    'ir_decode3',
    'concat_pp',
    'position_id',
    'position_of',
    'magnitude_tables',
    'group_index_matrix',
]
