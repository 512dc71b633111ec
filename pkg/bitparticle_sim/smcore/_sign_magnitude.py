from collections import namedtuple
from typing import Dict, List
from bitparticle_sim.exceptions import OperandRangeError

MAGNITUDE_BITS = 7
MAX_MAGNITUDE = (1 << MAGNITUDE_BITS) - 1

_sm8_named = namedtuple('SignMagnitude8', ['sign', 'magnitude'])


class SignMagnitude8(_sm8_named):
    """An 8-bit sign-magnitude operand.

    Attributes
    ----------
    sign : int
        1 if the operand is negative, else 0.
    magnitude : int
        The 7-bit unsigned magnitude.

    Notes
    -----
    A zero magnitude is always stored with a positive sign, so the encoding
    of zero is unique.
    """
    __slots__ = ()

    def __new__(cls, sign, magnitude):
        if sign not in (0, 1):
            raise OperandRangeError(f"Sign bit must be 0 or 1. Got: {sign}")
        if not 0 <= magnitude <= MAX_MAGNITUDE:
            raise OperandRangeError(f"Magnitude must be in "
                                    f"[0, {MAX_MAGNITUDE}]. Got: {magnitude}")
        if magnitude == 0:
            sign = 0
        return super().__new__(cls, int(sign), int(magnitude))

    @classmethod
    def from_code(cls, code: int) -> 'SignMagnitude8':
        """Build an operand from its raw 8-bit encoding (sign in bit 7)."""
        if not 0 <= code <= 0xff:
            raise OperandRangeError(f"Raw code must fit in 8 bits. "
                                    f"Got: {code}")
        return cls(code >> MAGNITUDE_BITS, code & MAX_MAGNITUDE)

    @property
    def code(self) -> int:
        return (self.sign << MAGNITUDE_BITS) | self.magnitude

    @property
    def value(self) -> int:
        return decode_sm8(self)

    def to_dict(self) -> Dict:
        return self._asdict()

    def __str__(self) -> str:
        return str(self.value)


def encode_sm8(v: int) -> SignMagnitude8:
    """Encode a signed integer as an 8-bit sign-magnitude operand.

    Raises
    ------
    OperandRangeError
        If `v` is outside [-127, 127].

    Examples
    --------
    >>> encode_sm8(-5)
    SignMagnitude8(sign=1, magnitude=5)
    """
    if not -MAX_MAGNITUDE <= v <= MAX_MAGNITUDE:
        raise OperandRangeError(f"Value {v} is not representable in 8-bit "
                                f"sign-magnitude.")
    return SignMagnitude8(int(v < 0), abs(int(v)))


def decode_sm8(x: SignMagnitude8) -> int:
    return -x.magnitude if x.sign else x.magnitude


def multiply_reference(a: SignMagnitude8, w: SignMagnitude8) -> int:
    # plain integer multiply, the ground truth for every other path
    return decode_sm8(a) * decode_sm8(w)


def all_operands() -> List[SignMagnitude8]:
    """Every raw 8-bit encoding, in code order.

    The non-canonical -0 code (0x80) is normalized to +0, so +0 appears
    twice. Exhaustive checks iterate over this list to cover all 2**16
    encoded pairs.
    """
    return [SignMagnitude8.from_code(code) for code in range(256)]
