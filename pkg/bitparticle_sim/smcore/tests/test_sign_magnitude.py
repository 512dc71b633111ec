from unittest import TestCase

from bitparticle_sim.exceptions import OperandRangeError
from bitparticle_sim.smcore import (
    SignMagnitude8,
    encode_sm8,
    decode_sm8,
    multiply_reference,
    all_operands,
)


class SignMagnitude8Tests(TestCase):

    def test_encode(self):
        self.assertEqual(encode_sm8(0), SignMagnitude8(0, 0))
        self.assertEqual(encode_sm8(-5), SignMagnitude8(1, 5))
        self.assertEqual(encode_sm8(127), SignMagnitude8(0, 127))
        self.assertEqual(encode_sm8(-127), SignMagnitude8(1, 127))

    def test_encode_out_of_range(self):
        with self.assertRaises(OperandRangeError):
            encode_sm8(128)
        with self.assertRaises(OperandRangeError):
            encode_sm8(-128)

    def test_decode(self):
        self.assertEqual(decode_sm8(SignMagnitude8(1, 5)), -5)
        self.assertEqual(decode_sm8(SignMagnitude8(0, 0)), 0)
        self.assertEqual(decode_sm8(SignMagnitude8(0, 127)), 127)

    def test_round_trip(self):
        for v in range(-127, 128):
            self.assertEqual(decode_sm8(encode_sm8(v)), v)

    def test_canonical_zero(self):
        negative_zero = SignMagnitude8(1, 0)
        self.assertEqual(negative_zero.sign, 0)
        self.assertEqual(negative_zero, encode_sm8(0))
        self.assertEqual(SignMagnitude8.from_code(0x80), SignMagnitude8(0, 0))

    def test_invalid_fields(self):
        with self.assertRaises(OperandRangeError):
            SignMagnitude8(2, 1)
        with self.assertRaises(OperandRangeError):
            SignMagnitude8(0, 128)
        with self.assertRaises(OperandRangeError):
            SignMagnitude8.from_code(256)

    def test_code(self):
        self.assertEqual(SignMagnitude8.from_code(0x85), SignMagnitude8(1, 5))
        self.assertEqual(SignMagnitude8(1, 5).code, 0x85)
        self.assertEqual(SignMagnitude8(1, 5).value, -5)
        self.assertEqual(str(SignMagnitude8(1, 5)), '-5')
        self.assertDictEqual(SignMagnitude8(1, 5).to_dict(),
                             {'sign': 1, 'magnitude': 5})

    def test_multiply_reference(self):
        self.assertEqual(multiply_reference(encode_sm8(85), encode_sm8(85)),
                         7225)
        self.assertEqual(multiply_reference(encode_sm8(-127),
                                            encode_sm8(127)),
                         -16129)
        self.assertEqual(multiply_reference(encode_sm8(-13), encode_sm8(0)),
                         0)

    def test_all_operands(self):
        operands = all_operands()
        self.assertEqual(len(operands), 256)
        self.assertEqual(len(set(operands)), 255)
        self.assertEqual({op.value for op in operands},
                         set(range(-127, 128)))
