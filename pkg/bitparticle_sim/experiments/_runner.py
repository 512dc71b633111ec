from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Tuple
import json
import logging
import os
import sys
import numpy as np
import pandas as pd

from bitparticle_sim._logging import timeit
from bitparticle_sim.exceptions import ConfigurationError
from bitparticle_sim.experiments._presets import PresetKind, get_preset
from bitparticle_sim.experiments._spec import ExperimentSpec
from bitparticle_sim.macarray import ArrayConfig, simulate
from bitparticle_sim.macunit import MacVariant, approx_error_table
from bitparticle_sim.metrics import (
    MetricsReport,
    avg_cycles_per_op,
    mean_skipped,
)
from bitparticle_sim.smcore import MAX_MAGNITUDE, all_operands
from bitparticle_sim.workload import (
    REPRESENTATIVE_LAYERS,
    SparsityProfile,
    best_dataflow,
    candidate_dataflows,
    gen_from_profile_file,
    gen_iid,
    network_profile,
    read_profile,
    spatial_utilization,
)

logger = logging.getLogger(__name__)

RESULT_COLUMNS = [
    'preset', 'seed', 'bs_w', 'bs_a', 'vs_w', 'vs_a', 'E', 'Q', 'variant',
    'zero_filter', 'rows', 'cols', 'N', 'utilization', 'cycles_per_step',
    'cycles_per_op', 'throughput', 'skipped_ideal', 'skipped_bitserial',
    'skipped_bp',
]
APPROX_ERROR_COLUMNS = ['preset', 'variant', 'error', 'count',
                        'max_abs_error', 'mean_abs_error']
LAYER_MAPPING_COLUMNS = ['preset', 'layer', 'B', 'K', 'C', 'OY', 'OX', 'FY',
                         'FX', 'dataflow', 'spatial_utilization', 'best']
NETWORK_COLUMNS = ['preset', 'network', 'seed', 'E', 'Q', 'variant',
                   'zero_filter', 'rows', 'cols', 'N', 'utilization',
                   'cycles_per_step', 'cycles_per_op', 'throughput']


def _profile(point: Dict) -> SparsityProfile:
    return SparsityProfile(point['bs_w'], point['bs_a'], point['vs_w'],
                           point['vs_a'])


def _skipped_columns(skipped, variant: MacVariant) -> Dict:
    bp = skipped.bp_approx if variant is MacVariant.APPROX \
        else skipped.bp_exact
    return {'skipped_ideal': skipped.ideal,
            'skipped_bitserial': skipped.bit_serial,
            'skipped_bp': bp}


def _simulate_point(spec: ExperimentSpec, point: Dict, seed: int,
                    profile_path=None) -> Tuple[Dict, MetricsReport]:
    cfg = ArrayConfig(rows=spec.rows, cols=spec.cols, E=point['E'],
                      Q=point['Q'], zero_filter=point['zero_filter'],
                      variant=point['variant'], steps=spec.steps, seed=seed)
    if profile_path:
        streams = gen_from_profile_file(profile_path, spec.rows, spec.cols,
                                        spec.steps, seed)
    else:
        streams = gen_iid(_profile(point), spec.rows, spec.cols,
                          spec.steps, seed)
    report = simulate(cfg, streams)
    row = {'preset': spec.preset, 'seed': seed,
           'E': cfg.E, 'Q': cfg.Q, 'variant': cfg.variant.value,
           'zero_filter': cfg.zero_filter, 'rows': cfg.rows,
           'cols': cfg.cols, 'N': cfg.steps,
           'utilization': report.utilization,
           'cycles_per_step': report.avg_cycles_per_step,
           'cycles_per_op': report.avg_cycles_per_op,
           'throughput': report.throughput_steps_per_cycle}
    return row, report


def array_row(spec: ExperimentSpec, point: Dict, seed: int) -> Dict:
    """Simulate one grid point on the array.

    A `network` point or a spec profile replaces the i.i.d. generator; the
    sparsity columns are then left empty.
    """
    if point.get('network'):
        profile_path = network_profile(point['network'])
    else:
        profile_path = spec.profile
    row, report = _simulate_point(spec, point, seed, profile_path)
    if profile_path:
        row.update(dict.fromkeys(['bs_w', 'bs_a', 'vs_w', 'vs_a']))
    else:
        row.update({key: point[key]
                    for key in ('bs_w', 'bs_a', 'vs_w', 'vs_a')})
    row.update(_skipped_columns(report.skipped, MacVariant(row['variant'])))
    return row


def network_row(spec: ExperimentSpec, point: Dict, seed: int) -> Dict:
    """Simulate one grid point on a bundled network profile."""
    if not point.get('network'):
        raise ConfigurationError(f"Preset '{spec.preset}' needs a "
                                 f"'network' grid value.")
    row, _ = _simulate_point(spec, point, seed,
                             network_profile(point['network']))
    row['network'] = point['network']
    return row


def per_op_row(spec: ExperimentSpec, point: Dict, seed: int) -> Dict:
    """Monte-Carlo statistics of a standalone unit for one grid point.

    Array columns do not apply and are left empty; N holds the sample
    count.
    """
    variant = MacVariant.parse(point['variant'])
    profile = _profile(point)
    row = {'preset': spec.preset, 'seed': seed,
           **{key: point[key] for key in ('bs_w', 'bs_a', 'vs_w', 'vs_a')},
           'E': None, 'Q': None, 'variant': variant.value,
           'zero_filter': None, 'rows': None, 'cols': None,
           'N': spec.samples, 'utilization': None, 'cycles_per_step': None,
           'cycles_per_op': avg_cycles_per_op(profile, variant,
                                              spec.samples, seed),
           'throughput': None}
    row.update(_skipped_columns(mean_skipped(profile, spec.samples, seed),
                                variant))
    return row


_ROW_BUILDERS = {
    PresetKind.ARRAY: array_row,
    PresetKind.PER_OP: per_op_row,
    PresetKind.NETWORK: network_row,
}
_ROW_COLUMNS = {
    PresetKind.ARRAY: RESULT_COLUMNS,
    PresetKind.PER_OP: RESULT_COLUMNS,
    PresetKind.NETWORK: NETWORK_COLUMNS,
}


def _evaluate(task: Tuple) -> Dict:
    kind, spec, point, seed = task
    return _ROW_BUILDERS[kind](spec, point, seed)


def approx_error_rows(spec: ExperimentSpec) -> List[Dict]:
    """Histogram of exact minus approximate products over every pair of
    8-bit sign-magnitude encodings."""
    values = np.array([operand.value for operand in all_operands()])
    index = values + MAX_MAGNITUDE
    errors = approx_error_table()[np.ix_(index, index)].ravel()
    magnitudes = np.abs(errors)
    max_abs, mean_abs = int(magnitudes.max()), float(magnitudes.mean())
    distinct, counts = np.unique(errors, return_counts=True)
    return [{'preset': spec.preset, 'variant': MacVariant.APPROX.value,
             'error': int(error), 'count': int(count),
             'max_abs_error': max_abs, 'mean_abs_error': mean_abs}
            for error, count in zip(distinct, counts)]


def layer_mapping_rows(spec: ExperimentSpec) -> List[Dict]:
    rows = []
    for name, shape in REPRESENTATIVE_LAYERS:
        best = best_dataflow(shape, spec.rows, spec.cols)
        for df in candidate_dataflows(spec.rows, spec.cols):
            rows.append({'preset': spec.preset, 'layer': name,
                         **shape.to_dict(), 'dataflow': df.label,
                         'spatial_utilization': spatial_utilization(
                             shape, df, spec.rows, spec.cols),
                         'best': df == best})
    return rows


def _map(tasks, workers):
    if workers == 1 or len(tasks) <= 1:
        return [_evaluate(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map yields in submission order
        return list(pool.map(_evaluate, tasks))


@timeit('run')
def run(spec: ExperimentSpec) -> pd.DataFrame:
    """Execute every point of an experiment and return its result table.

    Rows follow grid order, seeds innermost, whatever order the workers
    finish in.
    """
    kind = get_preset(spec.preset).kind
    if kind is PresetKind.APPROX_ERROR:
        return pd.DataFrame(approx_error_rows(spec),
                            columns=APPROX_ERROR_COLUMNS)
    if kind is PresetKind.LAYER_MAPPING:
        return pd.DataFrame(layer_mapping_rows(spec),
                            columns=LAYER_MAPPING_COLUMNS)

    if spec.profile:
        if kind is PresetKind.NETWORK:
            raise ConfigurationError(f"Preset '{spec.preset}' reads its "
                                     f"bundled network profiles, not "
                                     f"--profile.")
        read_profile(spec.profile)
    tasks = [(kind, spec, point, seed) for point, seed in spec.points()]
    logger.info('%(preset)s: %(n)d grid points',
                {'preset': spec.preset, 'n': len(tasks)})
    return pd.DataFrame(_map(tasks, spec.workers),
                        columns=_ROW_COLUMNS[kind])


def format_results(spec: ExperimentSpec, results: pd.DataFrame) -> str:
    if spec.format == 'csv':
        return results.to_csv(index=False)
    document = {'config': spec.to_dict(),
                'rows': json.loads(results.to_json(orient='records'))}
    return json.dumps(document, indent=2) + '\n'


def write_results(spec: ExperimentSpec, results: pd.DataFrame):
    text = format_results(spec, results)
    if spec.out is None:
        sys.stdout.write(text)
        return
    try:
        with open(spec.out, 'w', encoding='utf-8', newline='') as fp:
            fp.write(text)
    except OSError as e:
        raise ConfigurationError(f"Cannot write results: {e}")


def check_output(path):
    """Fail before any work is done when `path` cannot take the results."""
    if path is None:
        return
    directory = os.path.dirname(os.path.abspath(path))
    if os.path.isdir(path):
        raise ConfigurationError(f"Cannot write results: '{path}' is a "
                                 f"directory.")
    if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
        raise ConfigurationError(f"Cannot write results: directory "
                                 f"'{directory}' is not writable.")
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise ConfigurationError(f"Cannot write results: '{path}' is not "
                                 f"writable.")
