"""
Modelos de resultados del primer y segundo momento
"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class FirstMomentSolution(BaseModel):
    """Par (x, θ(x)) con el exponente w(x) del primer momento"""
    model_config = ConfigDict(frozen=True)

    x: float = Field(..., description="Exceso normalizado del corte: |corte| = c/2 + x√c")
    theta: float = Field(..., description="Solución θ(x) de w₂(x, θ) = 0")
    w: float = Field(..., description="Exponente w(x) = w₁(x, θ(x))")
    residual: float = Field(..., description="w₂(x, θ) en la solución devuelta")

    @model_validator(mode="after")
    def _theta_in_bracket(self):
        if not (-self.x < self.theta < 0):
            raise ValueError(f"θ={self.theta} fuera de (−x, 0) para x={self.x}")
        return self


class SaddleSolution(BaseModel):
    """Punto de silla (t*, θ₁*, θ₂*) y W(x, β) para un par (x, β)"""
    model_config = ConfigDict(frozen=True)

    x: float
    beta: float = Field(..., gt=0, lt=0.5)
    t: float
    theta1: float
    theta2: float
    W: float = Field(..., description="W(x, β) = L(x, β, t*, θ₁*, θ₂*)")
    residuals: Tuple[float, float, float] = Field(
        ..., description="Residuos normalizados de las ecuaciones en θ₁, θ₂ y t"
    )
    boundary: Optional[Literal["lower", "upper"]] = Field(
        None, description="t* fijado en 0 (lower) o en x (upper) por signo constante"
    )

    @model_validator(mode="after")
    def _t_in_range(self):
        if not (0.0 <= self.t <= self.x):
            raise ValueError(f"t={self.t} fuera de [0, x={self.x}]")
        return self

    @property
    def max_residual(self) -> float:
        return max(abs(r) for r in self.residuals)


class ScanRow(BaseModel):
    """Fila del barrido W(x, β) frente a 2w(x); los fallos no llevan números"""
    model_config = ConfigDict(frozen=True)

    x: float
    beta: float
    t: Optional[float] = None
    theta1: Optional[float] = None
    theta2: Optional[float] = None
    W: Optional[float] = None
    two_w: Optional[float] = None
    gap: Optional[float] = None
    status: Literal["ok", "failed"] = "ok"
    error: Optional[str] = None

    @classmethod
    def from_saddle(cls, solution: "SaddleSolution", two_w: float) -> "ScanRow":
        return cls(
            x=solution.x, beta=solution.beta, t=solution.t,
            theta1=solution.theta1, theta2=solution.theta2,
            W=solution.W, two_w=two_w, gap=solution.W - two_w,
        )

    @classmethod
    def failed(cls, x: float, beta: float, error: str) -> "ScanRow":
        return cls(x=x, beta=beta, status="failed", error=error)

    @model_validator(mode="after")
    def _gap_consistent(self):
        if self.status == "ok":
            if self.W is None or self.two_w is None or self.gap is None:
                raise ValueError("una fila 'ok' necesita W, two_w y gap")
            if self.gap != self.W - self.two_w:
                raise ValueError("gap debe ser exactamente W − two_w")
        return self


class BetaMaximum(BaseModel):
    """Resultado de maximizar W(x, ·) sobre β"""
    x: float
    beta_star: float
    W_star: float
    two_w: float
    gap: float
    grid_points: int
    failed_points: List[float] = Field(default_factory=list)


class XlProbe(BaseModel):
    """Una clasificación above/below de la bisección de x_l"""
    x: float
    gap: float
    beta_star: float
    above: bool


class LowerBoundSearch(BaseModel):
    """Resultado auditable de la búsqueda de x_l"""
    x_l: float
    bracket: Tuple[float, float]
    tol_x: float
    gap_tol: float
    probes: List[XlProbe] = Field(default_factory=list)
