"""
Jerarquía de errores del cálculo de cotas.

Cada error lleva un código estable (usado en las respuestas JSON) y el
código de salida de la CLI que le corresponde.
"""

from typing import Any, Dict, Optional


class MaxCutError(Exception):
    """Error base con código y detalles serializables"""

    code = "MAXCUT_ERROR"
    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Forma usada en el bloque "error" de las respuestas"""
        error = {
            "code": self.code,
            "message": self.message,
            "type": type(self).__name__,
        }
        if self.details:
            error["details"] = self.details
        return error


class DomainError(MaxCutError):
    """Argumento fuera del dominio de la operación"""
    code = "DOMAIN_ERROR"
    exit_code = 2


class StorageError(MaxCutError):
    """No se pudo escribir un artefacto de salida"""
    code = "STORAGE_ERROR"
    exit_code = 2


class BracketError(MaxCutError):
    """Los extremos del intervalo no cumplen la condición de signo"""
    code = "BRACKET_ERROR"
    exit_code = 3


class ConvergenceError(MaxCutError):
    """Un método numérico no alcanzó la tolerancia pedida"""
    code = "CONVERGENCE_ERROR"
    exit_code = 3

    def __init__(self, message: str, achieved_error: float = float("nan"),
                 details: Optional[Dict[str, Any]] = None):
        details = dict(details or {})
        details.setdefault("achieved_error", achieved_error)
        super().__init__(message, details)
        self.achieved_error = achieved_error


class DivergenceError(MaxCutError):
    """La expansión del intervalo en θ superó el límite representable"""
    code = "DIVERGENCE_ERROR"
    exit_code = 3


class InconsistencyError(MaxCutError):
    """Clasificación no monótona durante la búsqueda de x_l"""
    code = "INCONSISTENCY_ERROR"
    exit_code = 3


class ResourceLimitError(MaxCutError):
    """Se excedió un presupuesto de enumeración o de tabla DP"""
    code = "RESOURCE_LIMIT"
    exit_code = 4
