from collections import namedtuple
from enum import Enum
from typing import Dict, List

from bitparticle_sim.exceptions import UnknownPreset
from bitparticle_sim.workload import NETWORK_PROFILES

BIT_SPARSITIES = [0.5, 0.6, 0.7, 0.8, 0.9]
ELASTICITIES = [0, 1, 3, 7]
QUEUE_CAPACITIES = [0, 1, 2, 4]


class PresetKind(Enum):
    # cycle-accurate array runs
    ARRAY = 'array'
    # Monte-Carlo statistics of standalone operations
    PER_OP = 'per_op'
    APPROX_ERROR = 'approx_error'
    LAYER_MAPPING = 'layer_mapping'
    # array runs on bundled per-layer network profiles
    NETWORK = 'network'

    @property
    def takes_grid(self) -> bool:
        return self in (PresetKind.ARRAY, PresetKind.PER_OP,
                        PresetKind.NETWORK)


_preset_named = namedtuple('Preset', ['name', 'kind', 'grid',
                                      'description'])


class Preset(_preset_named):
    __slots__ = ()

    def to_dict(self) -> Dict:
        return {'name': self.name, 'kind': self.kind.value,
                'grid': dict(self.grid), 'description': self.description}


PRESETS = {preset.name: preset for preset in (
    Preset('table3_cycles', PresetKind.PER_OP,
           {'bs': BIT_SPARSITIES, 'variant': ['exact', 'approx']},
           'Mean cycles per operation of a standalone unit.'),
    Preset('fig8_utilization', PresetKind.ARRAY,
           {'E': ELASTICITIES, 'Q': QUEUE_CAPACITIES, 'bs': BIT_SPARSITIES},
           'Array utilization across inter- and intra-group elasticity.'),
    Preset('fig9_cycles_per_step', PresetKind.ARRAY,
           {'E': ELASTICITIES, 'Q': QUEUE_CAPACITIES, 'bs': BIT_SPARSITIES},
           'Cycles per column step across inter- and intra-group '
           'elasticity.'),
    Preset('fig7_zero_filter', PresetKind.ARRAY,
           {'E': [3], 'Q': [2], 'bs': [0.65],
            'vs_a': [0.0, 0.2, 0.4, 0.6, 0.8],
            'zero_filter': [False, True]},
           'Cycles per step with and without zero-value filtering as '
           'activation value sparsity grows.'),
    Preset('fig9_skipped', PresetKind.PER_OP,
           {'bs': [0.6, 0.7, 0.8, 0.9], 'variant': ['exact']},
           'Skipped single-bit products against the ideal and bit-serial '
           'references.'),
    Preset('network_zero_filter', PresetKind.NETWORK,
           {'network': list(NETWORK_PROFILES), 'E': [3], 'Q': [2],
            'zero_filter': [False, True]},
           'Throughput with and without zero-value filtering on the '
           'bundled network sparsity profiles.'),
    Preset('approx_error', PresetKind.APPROX_ERROR, {},
           'Exhaustive error histogram of the approximate unit.'),
    Preset('layer_mapping', PresetKind.LAYER_MAPPING, {},
           'Spatial utilization of every dataflow on representative '
           'layers.'),
    Preset('custom', PresetKind.ARRAY, {'bs': [0.7], 'E': [3], 'Q': [2]},
           'Array runs over a user supplied grid.'),
)}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset(f"Unknown preset: '{name}'. Expected one of "
                            f"{list(PRESETS)}.")


def list_presets() -> List[Preset]:
    return list(PRESETS.values())
