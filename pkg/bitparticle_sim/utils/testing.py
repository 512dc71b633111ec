import os
import tempfile
from unittest import skipUnless
from unittest.case import TestCase
import numpy as np

from bitparticle_sim.workload import PROFILE_COLUMNS, OperandStreams

SLOW_TESTS = os.getenv('BPSIM_SLOW_TESTS') == '1'

slow_test = skipUnless(SLOW_TESTS, 'set BPSIM_SLOW_TESTS=1 to run '
                                   'statistical acceptance runs')


def constant_streams(value, rows, cols, steps):
    return OperandStreams(np.full((rows, steps), value, dtype=np.int8),
                          np.full((cols, steps), value, dtype=np.int8))


class TempfileTestCase(TestCase):

    def setUp(self):
        self._tempfiles = []

    def create_tempfile(self, **named_temporary_file_kwargs):
        # See the docs here for kwargs:
        # https://docs.python.org/3/library/tempfile.html
        new_tempfile = tempfile.NamedTemporaryFile(
            **named_temporary_file_kwargs)
        self._tempfiles.append(new_tempfile)
        return new_tempfile

    def write_tempfile(self, text, suffix=''):
        tempfile_ = self.create_tempfile(mode='w', suffix=suffix,
                                         encoding='utf-8')
        tempfile_.write(text)
        tempfile_.flush()
        return tempfile_.name

    def write_profile(self, records, header=','.join(PROFILE_COLUMNS)):
        lines = [header] + [','.join(str(v) for v in record)
                            for record in records]
        return self.write_tempfile('\n'.join(lines) + '\n', suffix='.csv')

    def tearDown(self):
        for tempfile_ in self._tempfiles:
            tempfile_.close()
