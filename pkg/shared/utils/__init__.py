"""
Utilidades para el cálculo de cotas Max-Cut
"""

from .errors import (
    MaxCutError,
    DomainError,
    BracketError,
    ConvergenceError,
    DivergenceError,
    InconsistencyError,
    ResourceLimitError,
    StorageError,
)

__all__ = [
    'MaxCutError',
    'DomainError',
    'BracketError',
    'ConvergenceError',
    'DivergenceError',
    'InconsistencyError',
    'ResourceLimitError',
    'StorageError',
]
