from unittest import TestCase

from bitparticle_sim.config import load_config
from bitparticle_sim.exceptions import ConfigurationError, UnknownPreset
from bitparticle_sim.experiments import (
    PRESETS,
    ExperimentSpec,
    PresetKind,
    get_preset,
    normalize_grid,
    parse_grid_arg,
)


def make_spec(**overrides):
    return ExperimentSpec.from_config(load_config(overrides=overrides))


class PresetTests(TestCase):

    def test_known_presets(self):
        self.assertEqual(set(PRESETS), {
            'table3_cycles', 'fig8_utilization', 'fig9_cycles_per_step',
            'fig7_zero_filter', 'fig9_skipped', 'network_zero_filter',
            'approx_error', 'layer_mapping', 'custom'})

    def test_unknown(self):
        with self.assertRaises(UnknownPreset):
            get_preset('fig99')

    def test_fig8_grid(self):
        preset = get_preset('fig8_utilization')
        self.assertIs(preset.kind, PresetKind.ARRAY)
        self.assertEqual(preset.grid['E'], [0, 1, 3, 7])
        self.assertEqual(preset.grid['Q'], [0, 1, 2, 4])

    def test_network_grid(self):
        preset = get_preset('network_zero_filter')
        self.assertIs(preset.kind, PresetKind.NETWORK)
        self.assertEqual(preset.grid['network'],
                         ['resnet18', 'mobilenetv2', 'alexnet', 'vgg16'])


class GridParsingTests(TestCase):

    def test_parse_grid_arg(self):
        self.assertEqual(parse_grid_arg('E=0, 3'), ('E', ['0', '3']))
        for bad in ('E', 'E=', 'E= '):
            with self.assertRaises(ConfigurationError):
                parse_grid_arg(bad)
        with self.assertRaises(ConfigurationError):
            normalize_grid(dict([parse_grid_arg('=1')]))

    def test_typed_values(self):
        grid = normalize_grid({'E': ['0', '3'], 'bs': ['0.5'],
                               'zero_filter': ['on', 'false'],
                               'variant': ['Approx']})
        self.assertEqual(grid, {'E': [0, 3], 'bs': [0.5],
                                'zero_filter': [True, False],
                                'variant': ['approx']})

    def test_bad_values(self):
        for grid in ({'E': ['1.5']}, {'zero_filter': ['maybe']},
                     {'variant': ['booth']}, {'bs': ['high']},
                     {'depth': ['1']}, {'E': []}):
            with self.assertRaises(ConfigurationError):
                normalize_grid(grid)

    def test_network_names(self):
        self.assertEqual(normalize_grid({'network': [' ResNet18', 'vgg16']}),
                         {'network': ['resnet18', 'vgg16']})
        with self.assertRaises(ConfigurationError):
            normalize_grid({'network': ['lenet']})


class ExperimentSpecTests(TestCase):

    def test_defaults(self):
        spec = make_spec(preset='fig8_utilization')
        self.assertEqual(spec.seeds, (0, 1, 2))
        self.assertEqual((spec.rows, spec.cols, spec.steps), (16, 32, 20000))
        self.assertEqual(spec.samples, 1_000_000)
        self.assertEqual(spec.format, 'csv')

    def test_user_grid_replaces_preset_values(self):
        spec = make_spec(preset='fig8_utilization', grid={'E': ['3']})
        self.assertEqual(spec.grid['E'], [3])
        self.assertEqual(spec.grid['Q'], [0, 1, 2, 4])

    def test_seed_grid(self):
        spec = make_spec(preset='custom', grid={'seed': [7, 9]})
        self.assertEqual(spec.seeds, (7, 9))
        self.assertNotIn('seed', spec.grid)

    def test_replicates(self):
        spec = make_spec(preset='custom', seed=10, replicates=2)
        self.assertEqual(spec.seeds, (10, 11))

    def test_missing_preset(self):
        with self.assertRaises(ConfigurationError):
            make_spec()

    def test_grid_on_fixed_preset(self):
        with self.assertRaises(ConfigurationError):
            make_spec(preset='approx_error', grid={'E': [1]})

    def test_points_order(self):
        spec = make_spec(preset='custom', replicates=2,
                         grid={'E': [0, 1], 'bs': [0.6]})
        points = [(point['E'], point['Q'], point['bs_w'], seed)
                  for point, seed in spec.points()]
        self.assertEqual(points, [(0, 2, 0.6, 0), (0, 2, 0.6, 1),
                                  (1, 2, 0.6, 0), (1, 2, 0.6, 1)])

    def test_bs_sets_both_operands(self):
        spec = make_spec(preset='custom', grid={'bs': [0.8],
                                                'bs_a': [0.6]})
        point, _ = next(spec.points())
        self.assertEqual((point['bs_w'], point['bs_a']), (0.8, 0.6))

    def test_to_dict(self):
        spec = make_spec(preset='custom')
        self.assertEqual(spec.to_dict()['seeds'], [0, 1, 2])
