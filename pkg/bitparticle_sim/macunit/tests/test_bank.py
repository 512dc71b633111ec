from unittest import TestCase
import numpy as np
import numpy.testing as npt

from bitparticle_sim.exceptions import SchedulingError
from bitparticle_sim.macunit import MacUnit, MacUnitBank, MacVariant
from bitparticle_sim.smcore import encode_sm8


class MacUnitBankTests(TestCase):

    def _compare(self, variant, queue_capacity, zero_filter, seed):
        rng = np.random.default_rng(seed)
        shape = (3, 4)
        bank = MacUnitBank(shape, variant, queue_capacity)
        units = [[MacUnit(variant, queue_capacity) for _ in range(4)]
                 for _ in range(3)]
        for _ in range(400):
            loaded, finished = bank.step()
            for r in range(3):
                for c in range(4):
                    report = units[r][c].step()
                    self.assertEqual(report.finished_op, finished[r, c])
                    self.assertEqual(report.accepted_new_op, loaded[r, c])

            mask = rng.random(shape) < 0.6
            a = rng.integers(-127, 128, size=shape)
            w = rng.integers(-127, 128, size=shape)
            a[rng.random(shape) < 0.2] = 0
            accepted = bank.offer(mask, a, w, zero_filter)
            for r in range(3):
                for c in range(4):
                    if not mask[r, c]:
                        continue
                    exp = units[r][c].offer(encode_sm8(int(a[r, c])),
                                            encode_sm8(int(w[r, c])),
                                            zero_filter)
                    self.assertEqual(exp, accepted[r, c])

            busy = bank.busy()
            for r in range(3):
                for c in range(4):
                    self.assertEqual(units[r][c].busy, busy[r, c])

        # accumulators agree only once every operation has finished
        for _ in range(4 * (queue_capacity + 1)):
            bank.step()
            for row in units:
                for unit in row:
                    unit.step()
        self.assertTrue(bank.drained())
        self.assertTrue(all(unit.drained for row in units for unit in row))

        exp_acc = np.array([[u.accumulator for u in row] for row in units])
        exp_busy = np.array([[u.busy_cycles for u in row] for row in units])
        exp_filtered = np.array([[u.ops_filtered for u in row]
                                 for row in units])
        npt.assert_array_equal(bank.accumulator.reshape(shape), exp_acc)
        npt.assert_array_equal(bank.busy_cycles.reshape(shape), exp_busy)
        npt.assert_array_equal(bank.ops_filtered.reshape(shape),
                               exp_filtered)

    def test_matches_scalar_units(self):
        for variant in (MacVariant.EXACT, MacVariant.APPROX):
            for q in (0, 1, 2):
                for zero_filter in (False, True):
                    self._compare(variant, q, zero_filter, seed=q + 11)

    def test_drained(self):
        bank = MacUnitBank((2, 2))
        self.assertTrue(bank.drained())
        mask = np.array([[True, False], [False, False]])
        full = np.full((2, 2), 127)
        self.assertTrue(bank.offer(mask, full, full)[0, 0])
        self.assertFalse(bank.drained())
        for _ in range(4):
            bank.step()
        self.assertTrue(bank.drained())
        self.assertEqual(bank.accumulator[0], 16129)

    def test_free(self):
        bank = MacUnitBank((1, 2), queue_capacity=1)
        full = np.full((1, 2), 127)
        bank.offer(np.array([[True, False]]), full, full)
        npt.assert_array_equal(bank.free(), [[False, True]])

    def test_double_offer(self):
        bank = MacUnitBank((1, 1), queue_capacity=2)
        ones = np.ones((1, 1), dtype=int)
        bank.offer(np.ones((1, 1), dtype=bool), ones, ones)
        with self.assertRaises(SchedulingError):
            bank.offer(np.ones((1, 1), dtype=bool), ones, ones)
        bank.step()
        bank.offer(np.ones((1, 1), dtype=bool), ones, ones)
