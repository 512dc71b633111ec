from collections import namedtuple
from functools import lru_cache
from typing import Dict, Mapping, Optional, Tuple
import numpy as np

from bitparticle_sim.exceptions import (
    FieldOverflow,
    InvalidIRValue,
    InvalidParameter,
    OperandRangeError,
)
from bitparticle_sim.smcore._sign_magnitude import (
    MAX_MAGNITUDE,
    SignMagnitude8,
)

# index 0 is the least significant particle
PARTICLE_WIDTHS = (2, 2, 2, 1)
PARTICLE_SHIFTS = (0, 2, 4, 6)
PARTICLE_MAX = tuple((1 << width) - 1 for width in PARTICLE_WIDTHS)
N_PARTICLES = len(PARTICLE_WIDTHS)
N_IRS = N_PARTICLES * N_PARTICLES
PP_BITS = 13

IR_VALUES = frozenset({0, 1, 2, 3, 4, 6, 9})
_IR_ENCODE = {0: 0b000, 1: 0b001, 2: 0b010, 3: 0b011, 4: 0b100,
              6: 0b110, 9: 0b111}
_IR_DECODE = {code: value for value, code in _IR_ENCODE.items()}


def position_id(i: int, j: int) -> int:
    return N_PARTICLES * i + j


def position_of(id_: int) -> Tuple[int, int]:
    return divmod(id_, N_PARTICLES)


_particle_named = namedtuple('ParticleSplit', ['p0', 'p1', 'p2', 'p3'])


class ParticleSplit(_particle_named):
    """The four particles of a 7-bit magnitude, least significant first.

    `p0`, `p1` and `p2` are 2-bit slices (bits 1:0, 3:2, 5:4) and `p3` is
    bit 6. Indexing works as for any tuple, so ``split[3]`` is the 1-bit
    particle.
    """
    __slots__ = ()

    def recompose(self) -> int:
        return sum(p << shift for p, shift in zip(self, PARTICLE_SHIFTS))


def particlize(mag: int) -> ParticleSplit:
    if not 0 <= mag <= MAX_MAGNITUDE:
        raise OperandRangeError(f"Magnitude must be in [0, {MAX_MAGNITUDE}]. "
                                f"Got: {mag}")
    return ParticleSplit(*((mag >> shift) & pmax for shift, pmax in
                           zip(PARTICLE_SHIFTS, PARTICLE_MAX)))


_group_named = namedtuple('Group', ['k', 'members', 'lsb_weight', 'capacity',
                                    'set', 'field_width', 'mask'])


class Group(_group_named):
    """IRs lying on one anti-diagonal of the IR matrix.

    Attributes
    ----------
    k : int
        The anti-diagonal index, i + j.
    members : tuple of int
        Position IDs of the member IRs, ascending.
    lsb_weight : int
        Bit position of the least significant bit of every member, 2k.
    capacity : int
        Number of members.
    set : int
        The group set (0 for even k, 1 for odd k).
    field_width : int
        Bits needed for the largest value any member can take.
    mask : int
        The members as a 16-bit mask over position IDs.
    """
    __slots__ = ()

    @property
    def span(self) -> Tuple[int, int]:
        return self.lsb_weight, self.lsb_weight + self.field_width - 1

    def to_dict(self) -> Dict:
        return self._asdict()


def _build_group_table() -> Tuple[Group, ...]:
    groups = []
    for k in range(2 * N_PARTICLES - 1):
        pairs = [(i, k - i) for i in range(N_PARTICLES)
                 if 0 <= k - i < N_PARTICLES]
        members = tuple(sorted(position_id(i, j) for i, j in pairs))
        largest = max(PARTICLE_MAX[i] * PARTICLE_MAX[j] for i, j in pairs)
        groups.append(Group(k=k,
                            members=members,
                            lsb_weight=2 * k,
                            capacity=len(members),
                            set=k % 2,
                            field_width=largest.bit_length(),
                            mask=sum(1 << id_ for id_ in members),
                            ))
    return tuple(groups)


GROUPS = _build_group_table()
GROUP_SETS = {set_: tuple(g.k for g in GROUPS if g.set == set_)
              for set_ in (0, 1)}
GROUP_OF_ID = tuple(sum(position_of(id_)) for id_ in range(N_IRS))


_ir_named = namedtuple('IrState', ['ir', 'nonzero', 'product_sign'])


class IrState(_ir_named):
    """The 4x4 intermediate-result matrix of one multiplication.

    Attributes
    ----------
    ir : tuple of tuple of int
        ``ir[i][j]`` is particle `i` of the A operand times particle `j` of
        the W operand.
    nonzero : int
        16-bit mask with bit ``4*i + j`` set iff ``ir[i][j] != 0``.
    product_sign : int
        Sign bit of the product.
    """
    __slots__ = ()

    def at(self, id_: int) -> int:
        i, j = position_of(id_)
        return self.ir[i][j]

    def magnitude(self) -> int:
        return sum(self.ir[i][j] << (2 * (i + j))
                   for i in range(N_PARTICLES) for j in range(N_PARTICLES))

    def group_counts(self, mask: Optional[int] = None) -> Tuple[int, ...]:
        if mask is None:
            mask = self.nonzero
        return tuple(bin(mask & g.mask).count('1') for g in GROUPS)


def build_ir(a: SignMagnitude8, w: SignMagnitude8) -> IrState:
    pa = particlize(a.magnitude)
    pw = particlize(w.magnitude)
    ir = tuple(tuple(pa[i] * pw[j] for j in range(N_PARTICLES))
               for i in range(N_PARTICLES))
    nonzero = 0
    for i in range(N_PARTICLES):
        for j in range(N_PARTICLES):
            if ir[i][j]:
                nonzero |= 1 << position_id(i, j)
    return IrState(ir=ir, nonzero=nonzero, product_sign=a.sign ^ w.sign)


def ir_encode3(v: int) -> int:
    try:
        return _IR_ENCODE[v]
    except (KeyError, TypeError):
        raise InvalidIRValue(f"{v} is not a product of two 2-bit particles. "
                             f"Expected one of {sorted(IR_VALUES)}.")


def ir_decode3(c: int) -> int:
    try:
        return _IR_DECODE[c]
    except (KeyError, TypeError):
        raise InvalidIRValue(f"Code {c!r} is not a valid 3-bit IR code.")


def concat_pp(selections: Mapping[int, Optional[int]], set_: int) -> int:
    """Place one selected IR per group into a partial product.

    Parameters
    ----------
    selections : mapping of int to int or None
        Group index `k` to the selected IR value. Groups mapped to None, or
        absent, contribute nothing.
    set_ : int
        The group set, 0 or 1. Every selected group must belong to it.

    Returns
    -------
    int
        The concatenated partial product, below 2**13.

    Raises
    ------
    InvalidParameter
        If a group does not belong to `set_`.
    FieldOverflow
        If a value does not fit in its group's field.

    Examples
    --------
    >>> concat_pp({6: 1}, 0)
    4096
    """
    if set_ not in GROUP_SETS:
        raise InvalidParameter(f"Unknown group set: {set_}")
    pp = 0
    for k, value in selections.items():
        if value is None:
            continue
        if k not in GROUP_SETS[set_]:
            raise InvalidParameter(f"Group {k} is not in group set {set_}.")
        group = GROUPS[k]
        if not 0 <= value < (1 << group.field_width):
            raise FieldOverflow(f"Value {value} does not fit the "
                                f"{group.field_width}-bit field of "
                                f"group {k}.")
        pp |= value << group.lsb_weight
    return pp


@lru_cache(maxsize=None)
def magnitude_tables() -> np.ndarray:
    """IR tensor for every pair of magnitudes.

    Returns
    -------
    np.ndarray
        Read-only array of shape (128, 128, 4, 4); entry ``[a, w, i, j]``
        is particle `i` of magnitude `a` times particle `j` of magnitude
        `w`.
    """
    mags = np.arange(MAX_MAGNITUDE + 1)
    parts = (mags[:, None] >> np.array(PARTICLE_SHIFTS)) & \
        np.array(PARTICLE_MAX)
    ir = (parts[:, None, :, None] * parts[None, :, None, :]).astype(np.int16)
    ir.setflags(write=False)
    return ir


def group_index_matrix() -> np.ndarray:
    idx = np.add.outer(np.arange(N_PARTICLES), np.arange(N_PARTICLES))
    return idx
