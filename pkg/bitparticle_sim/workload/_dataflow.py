from collections import namedtuple
from enum import Enum
from typing import Dict, List
import math

from bitparticle_sim.exceptions import InvalidParameter

# candidate OY unrolling factors of kind A, in tie-break order
OY_UNROLLINGS = (1, 2, 4)

_layer_named = namedtuple('LayerShape', ['B', 'K', 'C', 'OY', 'OX', 'FY',
                                         'FX'])


class LayerShape(_layer_named):
    """The seven loop extents of a convolution or fully connected layer."""
    __slots__ = ()

    def __new__(cls, B, K, C, OY, OX, FY, FX):
        values = dict(B=B, K=K, C=C, OY=OY, OX=OX, FY=FY, FX=FX)
        for name, value in values.items():
            if int(value) != value or value < 1:
                raise InvalidParameter(f"Layer dimension '{name}' must be a "
                                       f"positive integer. Got: {value}")
        return super().__new__(cls, *(int(v) for v in values.values()))

    @property
    def macs(self) -> int:
        return math.prod(self)

    def to_dict(self) -> Dict:
        return self._asdict()


class DataflowKind(Enum):
    # K over rows, OX x OY over columns
    A = 'A'
    # K over rows, B over columns
    B = 'B'


_dataflow_named = namedtuple('DataflowChoice', ['kind', 'ku', 'oxu', 'oyu',
                                                'bu'])


class DataflowChoice(_dataflow_named):
    __slots__ = ()

    @classmethod
    def kind_a(cls, oxu: int, oyu: int, rows: int,
               cols: int) -> 'DataflowChoice':
        if oxu < 1 or oyu < 1 or oxu * oyu != cols:
            raise InvalidParameter(f"OXu x OYu must equal {cols} columns. "
                                   f"Got: {oxu} x {oyu}")
        return cls(DataflowKind.A, rows, oxu, oyu, 1)

    @classmethod
    def kind_b(cls, rows: int, cols: int) -> 'DataflowChoice':
        return cls(DataflowKind.B, rows, 1, 1, cols)

    @property
    def label(self) -> str:
        if self.kind is DataflowKind.A:
            return f"A({self.oxu},{self.oyu})"
        return 'B'

    def __str__(self) -> str:
        return self.label


def unroll_efficiency(extent: int, parallelism: int) -> float:
    """Fraction of PE slots doing useful work when a loop of `extent`
    iterations is unrolled over `parallelism` PEs."""
    if extent < 1 or parallelism < 1:
        raise InvalidParameter(f"Extent and parallelism must be >= 1. Got: "
                               f"{extent}, {parallelism}")
    return extent / (math.ceil(extent / parallelism) * parallelism)


def candidate_dataflows(rows: int, cols: int) -> List[DataflowChoice]:
    """Every dataflow the array supports, in tie-break order."""
    candidates = [DataflowChoice.kind_a(cols // oyu, oyu, rows, cols)
                  for oyu in OY_UNROLLINGS if cols % oyu == 0]
    candidates.append(DataflowChoice.kind_b(rows, cols))
    return candidates


def spatial_utilization(shape: LayerShape, df: DataflowChoice, rows: int,
                        cols: int) -> float:
    """Useful MACs over PE slots consumed by a layer under a dataflow.

    Dimensions that are not spatially unrolled run temporally and do not
    waste PE slots, so the result is the product of the per-dimension
    unrolling efficiencies.
    """
    if df.ku != rows or df.oxu * df.oyu * df.bu != cols:
        raise InvalidParameter(f"Dataflow {df} does not fit a {rows}x{cols} "
                               f"array.")
    utilization = unroll_efficiency(shape.K, rows)
    if df.kind is DataflowKind.A:
        utilization *= unroll_efficiency(shape.OX, df.oxu) * \
            unroll_efficiency(shape.OY, df.oyu)
    else:
        utilization *= unroll_efficiency(shape.B, df.bu)
    return utilization


def best_dataflow(shape: LayerShape, rows: int = 16,
                  cols: int = 32) -> DataflowChoice:
    """The candidate with the highest spatial utilization.

    Ties go to the earliest candidate in `candidate_dataflows` order.
    """
    return max(candidate_dataflows(rows, cols),
               key=lambda df: spatial_utilization(shape, df, rows, cols))


REPRESENTATIVE_LAYERS = (
    ('conv1', LayerShape(1, 64, 3, 112, 112, 7, 7)),
    ('conv2_x', LayerShape(1, 64, 64, 56, 56, 3, 3)),
    ('conv3_x', LayerShape(1, 128, 128, 28, 28, 3, 3)),
    ('conv4_x', LayerShape(1, 256, 256, 14, 14, 3, 3)),
    ('conv5_x', LayerShape(1, 512, 512, 7, 7, 3, 3)),
    ('fc', LayerShape(1, 1000, 512, 1, 1, 1, 1)),
    ('conv5_x_b32', LayerShape(32, 512, 512, 7, 7, 3, 3)),
    ('fc_b32', LayerShape(32, 1000, 512, 1, 1, 1, 1)),
)
