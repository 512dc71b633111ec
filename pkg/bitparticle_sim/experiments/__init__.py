from bitparticle_sim.experiments._presets import (
    PRESETS,
    Preset,
    PresetKind,
    get_preset,
    list_presets,
)
from bitparticle_sim.experiments._spec import (
    GRID_KEYS,
    ExperimentSpec,
    normalize_grid,
    parse_grid_arg,
)
from bitparticle_sim.experiments._runner import (
    APPROX_ERROR_COLUMNS,
    LAYER_MAPPING_COLUMNS,
    NETWORK_COLUMNS,
    RESULT_COLUMNS,
    check_output,
    format_results,
    run,
    write_results,
)
from bitparticle_sim.experiments._verify import (
    CHECKS,
    Check,
    KNOWN_DEVIATIONS,
    verify,
)

__all__ = [
    'APPROX_ERROR_COLUMNS',
    'CHECKS',
    'Check',
    'KNOWN_DEVIATIONS',
    'ExperimentSpec',
    'GRID_KEYS',
    'LAYER_MAPPING_COLUMNS',
    'NETWORK_COLUMNS',
    'PRESETS',
    'Preset',
    'PresetKind',
    'RESULT_COLUMNS',
    'check_output',
    'format_results',
    'get_preset',
    'list_presets',
    'normalize_grid',
    'parse_grid_arg',
    'run',
    'verify',
    'write_results',
]
