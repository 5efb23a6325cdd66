"""
Modelos de los oráculos combinatorios exactos y de Monte Carlo
"""

from fractions import Fraction
from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class OccupancySpec(BaseModel):
    """n urnas y μ_j bolas de cada color lanzadas uniformemente"""
    model_config = ConfigDict(frozen=True)

    bins: int = Field(..., ge=1, description="Número de urnas n")
    balls: List[int] = Field(..., description="Bolas μ_j por color (2 o 4 colores)")

    @field_validator("balls")
    @classmethod
    def _check_balls(cls, balls: List[int]) -> List[int]:
        if len(balls) not in (2, 4):
            raise ValueError("se esperan 2 o 4 colores de bolas")
        if any(b < 0 for b in balls):
            raise ValueError("los conteos de bolas deben ser ≥ 0")
        return balls

    def dp_cells(self) -> int:
        """Tamaño de la tabla DP: urnas × Π(μ_j + 1)"""
        cells = self.bins
        for b in self.balls:
            cells *= b + 1
        return cells


class MomentQuery(BaseModel):
    """Consulta (n, m, zn) para los momentos exactos de X(zn)"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2, description="Vértices (par)")
    m: int = Field(..., ge=0, description="Aristas del multigrafo de configuración")
    z_times_n: int = Field(..., ge=0, description="Tamaño objetivo del corte zn")
    balanced: bool = Field(default=False, description="Sólo cortes con |V₁| = n/2")

    @model_validator(mode="after")
    def _even_n(self):
        if self.n % 2:
            raise ValueError("n debe ser par")
        return self


class ExactValue(BaseModel):
    """Racional exacto con su aproximación decimal"""
    fraction: str
    decimal: float

    @classmethod
    def of(cls, value: Fraction) -> "ExactValue":
        return cls(fraction=str(value), decimal=float(value))


class MonteCarloEstimate(BaseModel):
    """Media muestral y error estándar de un estimador de Monte Carlo"""
    mean: float
    std_error: float
    samples: int
    seed: int
    count_loops: bool = Field(default=False, description="Lazos en la optimalidad local (convención de K)")


class PoissonizationCheck(BaseModel):
    """Ambos lados de la identidad de poissonización"""
    lhs: str
    rhs: str
    equal: bool
