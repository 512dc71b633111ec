from bitparticle_sim.utils.testing import TempfileTestCase, constant_streams
from bitparticle_sim.workload import read_profile


class ConstantStreamsTests(TempfileTestCase):

    def test_shape(self):
        streams = constant_streams(5, 2, 3, 7)
        self.assertEqual((streams.rows, streams.cols, streams.steps),
                         (2, 3, 7))
        self.assertTrue((streams.weight == 5).all())

    def test_write_profile(self):
        path = self.write_profile([('l0', 10, 0.5, 0.5, 0, 0)])
        self.assertEqual(len(read_profile(path)), 1)
