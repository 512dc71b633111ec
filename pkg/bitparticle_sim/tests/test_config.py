from bitparticle_sim.config import DEFAULT_CONFIG, load_config, validate
from bitparticle_sim.exceptions import ConfigurationError
from bitparticle_sim.utils.testing import TempfileTestCase


class ConfigTests(TempfileTestCase):

    def test_defaults(self):
        validate(DEFAULT_CONFIG)
        config = load_config()
        self.assertEqual(config['steps'], 20000)
        self.assertEqual(config['replicates'], 3)
        self.assertEqual(config['samples'], 1_000_000)
        self.assertIsNone(config['workers'])

    def test_defaults_are_not_shared(self):
        load_config()['grid']['E'] = [1]
        self.assertEqual(load_config()['grid'], {})

    def test_file_and_overrides(self):
        path = self.write_tempfile('preset: custom\nsteps: 500\n'
                                   'grid:\n  E: [0, 3]\n', suffix='.yml')
        config = load_config(path, {'steps': 100, 'seed': None})
        self.assertEqual(config['preset'], 'custom')
        self.assertEqual(config['steps'], 100)
        self.assertEqual(config['seed'], 0)
        self.assertEqual(config['grid'], {'E': [0, 3]})

    def test_empty_file(self):
        path = self.write_tempfile('', suffix='.yml')
        self.assertEqual(load_config(path)['rows'], 16)

    def test_invalid_values(self):
        for text in ('steps: 0\n', 'format: xml\n', 'depth: 3\n',
                     'grid:\n  E: []\n'):
            path = self.write_tempfile(text, suffix='.yml')
            with self.assertRaises(ConfigurationError):
                load_config(path)

    def test_malformed_yaml(self):
        path = self.write_tempfile('steps: [1, 2\n', suffix='.yml')
        with self.assertRaises(ConfigurationError):
            load_config(path)

    def test_missing_file(self):
        with self.assertRaises(ConfigurationError):
            load_config('/nonexistent/config.yml')
