from bitparticle_sim.workload._streams import (
    PROFILE_COLUMNS,
    OperandStreams,
    SparsityProfile,
    apportion,
    draw_values,
    gen_from_profile_file,
    gen_iid,
    read_profile,
    sample_operands,
    substream,
)
from bitparticle_sim.workload._networks import (
    NETWORK_PROFILES,
    network_profile,
)
from bitparticle_sim.workload._dataflow import (
    REPRESENTATIVE_LAYERS,
    DataflowChoice,
    DataflowKind,
    LayerShape,
    best_dataflow,
    candidate_dataflows,
    spatial_utilization,
    unroll_efficiency,
)

__all__ = [
    'PROFILE_COLUMNS',
    'REPRESENTATIVE_LAYERS',
    'DataflowChoice',
    'DataflowKind',
    'LayerShape',
    'NETWORK_PROFILES',
    'OperandStreams',
    'SparsityProfile',
    'apportion',
    'best_dataflow',
    'candidate_dataflows',
    'draw_values',
    'gen_from_profile_file',
    'gen_iid',
    'network_profile',
    'read_profile',
    'sample_operands',
    'spatial_utilization',
    'substream',
    'unroll_efficiency',
]
