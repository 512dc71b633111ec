from unittest import TestCase
import numpy as np

from bitparticle_sim.exceptions import InvalidParameter
from bitparticle_sim.metrics import (
    SkippedCalculations,
    SkipScheme,
    bitserial_ideal_ratio_analytic,
    bp_exact_ideal_ratio_analytic,
    mean_skipped,
    skipped_ratio,
    skipped_tables,
    stream_skipped,
)
from bitparticle_sim.smcore import build_ir, encode_sm8
from bitparticle_sim.workload import SparsityProfile, gen_iid

IDEAL = SkipScheme.IDEAL
BIT_SERIAL = SkipScheme.BIT_SERIAL
BP_EXACT = SkipScheme.BP_EXACT
BP_APPROX = SkipScheme.BP_APPROX


class SkippedRatioTests(TestCase):

    def test_dense_operands(self):
        a = w = encode_sm8(127)
        for scheme in (IDEAL, BIT_SERIAL, BP_EXACT):
            self.assertEqual(skipped_ratio(a, w, scheme), 0.0)
        # groups 0 and 1 cover 4 + 4 + 4 bit products
        self.assertAlmostEqual(skipped_ratio(a, w, BP_APPROX), 12 / 49)

    def test_zero_weight(self):
        a, w = encode_sm8(127), encode_sm8(0)
        for scheme in (IDEAL, BIT_SERIAL, BP_EXACT, BP_APPROX):
            self.assertEqual(skipped_ratio(a, w, scheme), 1.0)

    def test_bit_serial_only_sees_weight(self):
        self.assertEqual(skipped_ratio(encode_sm8(0), encode_sm8(127),
                                       BIT_SERIAL), 0.0)
        self.assertEqual(skipped_ratio(encode_sm8(0), encode_sm8(127),
                                       IDEAL), 1.0)

    def test_string_scheme(self):
        self.assertEqual(skipped_ratio(encode_sm8(5), encode_sm8(3),
                                       'ideal'),
                         skipped_ratio(encode_sm8(5), encode_sm8(3), IDEAL))

    def test_bp_exact_counts_zero_irs(self):
        rng = np.random.default_rng(0)
        for a_val, w_val in rng.integers(-127, 128, size=(200, 2)):
            a, w = encode_sm8(int(a_val)), encode_sm8(int(w_val))
            state = build_ir(a, w)
            widths = (2, 2, 2, 1)
            expected = sum(widths[i] * widths[j]
                           for i in range(4) for j in range(4)
                           if state.ir[i][j] == 0) / 49
            self.assertAlmostEqual(skipped_ratio(a, w, BP_EXACT), expected)

    def test_bounded_by_ideal(self):
        tables = skipped_tables()
        self.assertTrue((tables[BP_EXACT] <= tables[IDEAL] + 1e-12).all())
        self.assertTrue((tables[BIT_SERIAL] <= tables[IDEAL] + 1e-12).all())
        self.assertTrue((tables[BP_EXACT] <= tables[BP_APPROX]).all())


class AnalyticTests(TestCase):

    def test_bitserial(self):
        self.assertAlmostEqual(bitserial_ideal_ratio_analytic(0.6), 1 / 1.4)
        self.assertAlmostEqual(bitserial_ideal_ratio_analytic(0.9), 0.909,
                               places=3)
        self.assertEqual(bitserial_ideal_ratio_analytic(1.0), 1.0)

    def test_bp_exact_close_to_reference(self):
        for bs, expected in [(0.6, 0.745), (0.7, 0.840), (0.8, 0.920),
                             (0.9, 0.977)]:
            self.assertAlmostEqual(bp_exact_ideal_ratio_analytic(bs),
                                   expected, delta=0.01)

    def test_domain(self):
        with self.assertRaises(InvalidParameter):
            bitserial_ideal_ratio_analytic(0.0)
        with self.assertRaises(InvalidParameter):
            bp_exact_ideal_ratio_analytic(1.5)


class MeanSkippedTests(TestCase):

    def test_matches_analytic(self):
        for seed, bs in enumerate((0.6, 0.7, 0.8, 0.9)):
            relative = mean_skipped(SparsityProfile.uniform(bs), 1_000_000,
                                    seed=seed).relative_to_ideal()
            self.assertAlmostEqual(relative['bit_serial'],
                                   bitserial_ideal_ratio_analytic(bs),
                                   delta=0.003)
            self.assertAlmostEqual(relative['bp_exact'],
                                   bp_exact_ideal_ratio_analytic(bs),
                                   delta=0.003)

    def test_reference_ratios(self):
        expected = {0.6: (0.745, 0.714), 0.7: (0.840, 0.769),
                    0.8: (0.920, 0.833), 0.9: (0.977, 0.909)}
        for bs, (bp, serial) in expected.items():
            relative = mean_skipped(SparsityProfile.uniform(bs), 1_000_000,
                                    seed=1).relative_to_ideal()
            self.assertAlmostEqual(relative['bp_exact'], bp, delta=0.01)
            self.assertAlmostEqual(relative['bit_serial'], serial,
                                   delta=0.01)

    def test_relative_of_empty_ideal(self):
        skipped = SkippedCalculations(0.0, 0.0, 0.0, 0.0)
        self.assertTrue(np.isnan(skipped.relative_to_ideal()['bp_exact']))


class StreamSkippedTests(TestCase):

    def test_matches_pairwise_mean(self):
        streams = gen_iid(SparsityProfile.uniform(0.6), 3, 5, 40, seed=2)
        result = stream_skipped(streams)
        tables = skipped_tables()
        w = np.abs(streams.weight.astype(int))
        a = np.abs(streams.activation.astype(int))
        for scheme in SkipScheme:
            pairwise = tables[scheme][a[None, :, :], w[:, None, :]].mean()
            self.assertAlmostEqual(getattr(result, scheme.value), pairwise)
