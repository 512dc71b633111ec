from unittest import TestCase
import numpy as np
import numpy.testing as npt

from bitparticle_sim.exceptions import (
    ConfigurationError,
    InvalidParameter,
    ProfileFormatError,
)
from bitparticle_sim.utils.testing import TempfileTestCase
from bitparticle_sim.workload import (
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


def zero_bit_rate(values):
    mags = np.abs(values.astype(np.int16))
    bits = (mags[:, None] >> np.arange(7)) & 1
    return 1 - bits.mean()


class SparsityProfileTests(TestCase):

    def test_validation(self):
        with self.assertRaises(InvalidParameter):
            SparsityProfile(1.2, 0.5)
        with self.assertRaises(InvalidParameter):
            SparsityProfile(0.5, 0.5, vs_a=-0.1)

    def test_uniform(self):
        self.assertEqual(SparsityProfile.uniform(0.7, vs_a=0.2),
                         SparsityProfile(0.7, 0.7, 0.0, 0.2, 0.5))


class OperandStreamsTests(TestCase):

    def test_mismatched_steps(self):
        with self.assertRaises(ConfigurationError):
            OperandStreams(np.zeros((2, 3)), np.zeros((2, 4)))

    def test_dimensions(self):
        streams = OperandStreams(np.zeros((2, 5)), np.ones((3, 5)))
        self.assertEqual((streams.rows, streams.cols, streams.steps),
                         (2, 3, 5))
        self.assertEqual(streams.weight.dtype, np.int8)


class DrawValuesTests(TestCase):

    def test_extremes(self):
        rng = substream(1, 0, 0)
        self.assertTrue((draw_values(rng, 1000, 1.0, 0.0) == 0).all())
        values = draw_values(rng, 1000, 0.0, 0.0)
        self.assertTrue((np.abs(values) == 127).all())

    def test_bit_rate(self):
        values = draw_values(substream(3, 0, 0), 200_000, 0.65, 0.0)
        self.assertAlmostEqual(zero_bit_rate(values), 0.65, delta=0.002)

    def test_value_sparsity(self):
        values = draw_values(substream(3, 0, 0), 200_000, 0.0, 0.3)
        # 3 sigma binomial bound
        self.assertAlmostEqual((values == 0).mean(), 0.3,
                               delta=3 * np.sqrt(0.3 * 0.7 / 200_000))

    def test_sign(self):
        values = draw_values(substream(4, 0, 0), 100_000, 0.0, 0.0,
                             sign_p=0.25)
        self.assertAlmostEqual((values < 0).mean(), 0.25, delta=0.005)

    def test_no_negative_zero(self):
        values = draw_values(substream(5, 0, 0), 10_000, 0.9, 0.5)
        self.assertFalse((values == -128).any())


class GenIidTests(TestCase):

    def test_deterministic(self):
        profile = SparsityProfile.uniform(0.6)
        first = gen_iid(profile, 4, 8, 100, seed=11)
        second = gen_iid(profile, 4, 8, 100, seed=11)
        npt.assert_array_equal(first.weight, second.weight)
        npt.assert_array_equal(first.activation, second.activation)

    def test_seed_changes_streams(self):
        profile = SparsityProfile.uniform(0.6)
        first = gen_iid(profile, 2, 2, 100, seed=1)
        second = gen_iid(profile, 2, 2, 100, seed=2)
        self.assertFalse(np.array_equal(first.weight, second.weight))

    def test_lanes_independent_of_array_size(self):
        profile = SparsityProfile.uniform(0.5)
        small = gen_iid(profile, 2, 3, 50, seed=9)
        large = gen_iid(profile, 16, 32, 50, seed=9)
        npt.assert_array_equal(small.weight, large.weight[:2])
        npt.assert_array_equal(small.activation, large.activation[:3])

    def test_roles_differ(self):
        streams = gen_iid(SparsityProfile.uniform(0.5), 1, 1, 200, seed=0)
        self.assertFalse(np.array_equal(streams.weight, streams.activation))

    def test_bad_dimensions(self):
        with self.assertRaises(InvalidParameter):
            gen_iid(SparsityProfile.uniform(0.5), 0, 1, 10, seed=0)


class ApportionTests(TestCase):

    def test_largest_remainder(self):
        npt.assert_array_equal(apportion([1, 1, 1], 10), [4, 3, 3])
        npt.assert_array_equal(apportion([1, 3], 8), [2, 6])
        npt.assert_array_equal(apportion([5, 1, 4], 7), [3, 1, 3])

    def test_sums_to_total(self):
        weights = np.random.default_rng(0).random(13)
        self.assertEqual(apportion(weights, 20_000).sum(), 20_000)


class ProfileTests(TempfileTestCase):

    def test_read(self):
        path = self.write_profile([('conv1', 100, 0.6, 0.7, 0.0, 0.4),
                                   ('fc', 300, 0.8, 0.5, 0.1, 0.0)])
        df = read_profile(path)
        self.assertEqual(list(df['layer_name']), ['conv1', 'fc'])
        self.assertEqual(df.loc[1, 'bs_w'], 0.8)
        self.assertEqual(df.loc[0, 'macs'], 100.0)

    def test_single_record_equals_iid(self):
        path = self.write_profile([('only', 42, 0.6, 0.7, 0.1, 0.3)])
        from_file = gen_from_profile_file(path, 3, 4, 64, seed=5)
        iid = gen_iid(SparsityProfile(0.6, 0.7, 0.1, 0.3), 3, 4, 64, seed=5)
        npt.assert_array_equal(from_file.weight, iid.weight)
        npt.assert_array_equal(from_file.activation, iid.activation)

    def test_layer_split(self):
        path = self.write_profile([('dense', 1, 0.0, 0.0, 0.0, 0.0),
                                   ('sparse', 3, 1.0, 1.0, 0.0, 0.0)])
        streams = gen_from_profile_file(path, 2, 2, 100, seed=0)
        self.assertEqual(streams.steps, 100)
        self.assertTrue((np.abs(streams.weight[:, :25]) == 127).all())
        self.assertTrue((streams.weight[:, 25:] == 0).all())

    def test_bad_header(self):
        path = self.write_tempfile('name,macs\nconv1,1\n')
        with self.assertRaisesRegex(ProfileFormatError, 'line 1'):
            read_profile(path)

    def test_bad_probability_names_line(self):
        path = self.write_profile([('a', 1, 0.5, 0.5, 0, 0),
                                   ('b', 1, 1.5, 0.5, 0, 0)])
        with self.assertRaises(ProfileFormatError) as cm:
            read_profile(path)
        self.assertEqual(cm.exception.lineno, 3)
        self.assertIn('line 3', str(cm.exception))

    def test_non_numeric(self):
        path = self.write_profile([('a', 'many', 0.5, 0.5, 0, 0)])
        with self.assertRaisesRegex(ProfileFormatError, 'line 2'):
            read_profile(path)

    def test_missing_field(self):
        path = self.write_profile([('a', 1, 0.5, 0.5, 0)])
        with self.assertRaisesRegex(ProfileFormatError, 'line 2'):
            read_profile(path)

    def test_extra_field(self):
        path = self.write_profile([('a', 1, 0.5, 0.5, 0, 0),
                                   ('b', 1, 0.5, 0.5, 0, 0, 9)])
        with self.assertRaisesRegex(ProfileFormatError, 'line 3'):
            read_profile(path)

    def test_non_positive_macs(self):
        path = self.write_profile([('a', 0, 0.5, 0.5, 0, 0)])
        with self.assertRaises(ProfileFormatError):
            read_profile(path)

    def test_empty(self):
        path = self.write_tempfile('')
        with self.assertRaises(ProfileFormatError):
            read_profile(path)
        path = self.write_profile([])
        with self.assertRaisesRegex(ProfileFormatError, 'no records'):
            read_profile(path)

    def test_unreadable(self):
        with self.assertRaisesRegex(ProfileFormatError, 'Cannot read'):
            read_profile('/nonexistent/profile.csv')
        with self.assertRaises(ProfileFormatError):
            gen_from_profile_file('/nonexistent/profile.csv', 2, 2, 10, 0)


class SampleOperandsTests(TestCase):

    def test_shapes_and_determinism(self):
        profile = SparsityProfile.uniform(0.7)
        a, w = sample_operands(profile, 1000, seed=3)
        a2, w2 = sample_operands(profile, 1000, seed=3)
        self.assertEqual(a.shape, (1000,))
        npt.assert_array_equal(a, a2)
        npt.assert_array_equal(w, w2)
        self.assertFalse(np.array_equal(a, w))

    def test_bad_count(self):
        with self.assertRaises(InvalidParameter):
            sample_operands(SparsityProfile.uniform(0.5), 0, seed=0)
