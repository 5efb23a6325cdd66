"""
Modelos del informe de cotas y de las respuestas de error
"""

import math
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, Field, model_validator


class BoundsReport(BaseModel):
    """Constantes x_u, x_l y los intervalos derivados para un c dado"""

    success: bool = Field(default=True)
    x_u: float = Field(..., description="Cota superior (primer momento con optimalidad local)")
    theta_u: float = Field(..., description="θ(x_u)")
    x_l: float = Field(..., description="Cota inferior (segundo momento con optimalidad local)")
    c: Optional[float] = Field(None, gt=0, description="Densidad de aristas")
    maxcut_interval: Optional[Tuple[float, float]] = Field(
        None, description="(c/2 + x_l√c, c/2 + x_u√c) para MC(c)/n"
    )
    ising_interval: Optional[Tuple[float, float]] = Field(
        None, description="(−2x_u√c, −2x_l√c) para la energía del estado base"
    )
    tolerances: Dict[str, float] = Field(default_factory=dict)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def assemble(
        cls,
        x_u: float,
        theta_u: float,
        x_l: float,
        c: Optional[float] = None,
        **kwargs,
    ) -> "BoundsReport":
        """Aplica el mapa afín de las constantes a los intervalos"""
        maxcut = ising = None
        if c is not None:
            root = math.sqrt(c)
            maxcut = (c / 2 + x_l * root, c / 2 + x_u * root)
            ising = (-2 * x_u * root, -2 * x_l * root)
        return cls(
            x_u=x_u, theta_u=theta_u, x_l=x_l, c=c,
            maxcut_interval=maxcut, ising_interval=ising, **kwargs
        )

    @model_validator(mode="after")
    def _consistent(self):
        if not self.x_l < self.x_u:
            raise ValueError(f"se esperaba x_l < x_u, llegó x_l={self.x_l}, x_u={self.x_u}")
        has_c = self.c is not None
        if has_c != (self.maxcut_interval is not None) or has_c != (self.ising_interval is not None):
            raise ValueError("los intervalos existen si y sólo si se da c")
        return self


class ErrorResponse(BaseModel):
    """Respuesta de error"""
    success: bool = Field(default=False)
    error: Dict = Field(..., description="Detalles del error")
    metadata: Optional[Dict] = Field(None, description="Metadata adicional")
