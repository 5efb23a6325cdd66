"""
Modelos de entrada/salida de los núcleos gaussianos
"""

from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field


class QuadSpec(BaseModel):
    """Tolerancias y truncamiento de las cuadraturas sobre la semirrecta"""
    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default=1e-12, gt=0, description="Error absoluto objetivo")
    rel_tol: float = Field(default=1e-12, gt=0, description="Error relativo objetivo")
    truncation: float = Field(default=40.0, ge=10, description="Límite superior que reemplaza ∞, en desviaciones estándar")
    max_subintervals: int = Field(default=200, ge=50, description="Subintervalos máximos de la cuadratura adaptativa")


class WedgeParams(BaseModel):
    """Parámetros (θ, a₁, a₂) de la integral de cuña Q"""
    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., description="Inclinación θ (o θ₁, θ₂)")
    a1: float = Field(..., ge=0, description="Pendiente de la cuña")
    a2: float = Field(..., description="Desplazamiento")


class KernelValue(NamedTuple):
    """Valor de un núcleo junto con su logaritmo exacto"""
    value: float
    ln_value: float


DEFAULT_QUAD = QuadSpec()
