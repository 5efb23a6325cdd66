"""
Modelos de datos para el cálculo de cotas Max-Cut
"""

from .kernels import QuadSpec, WedgeParams, KernelValue, DEFAULT_QUAD
from .moments import (
    FirstMomentSolution,
    SaddleSolution,
    ScanRow,
    BetaMaximum,
    XlProbe,
    LowerBoundSearch,
)
from .oracles import (
    OccupancySpec,
    MomentQuery,
    ExactValue,
    MonteCarloEstimate,
    PoissonizationCheck,
)
from .graphs import MultiGraph, Cut
from .report import BoundsReport, ErrorResponse

__all__ = [
    # Núcleos
    'QuadSpec',
    'WedgeParams',
    'KernelValue',
    'DEFAULT_QUAD',

    # Momentos
    'FirstMomentSolution',
    'SaddleSolution',
    'ScanRow',
    'BetaMaximum',
    'XlProbe',
    'LowerBoundSearch',

    # Oráculos
    'OccupancySpec',
    'MomentQuery',
    'ExactValue',
    'MonteCarloEstimate',
    'PoissonizationCheck',

    # Grafos
    'MultiGraph',
    'Cut',

    # Informe
    'BoundsReport',
    'ErrorResponse',
]
