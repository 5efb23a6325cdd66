"""
Configuración del cálculo de cotas Max-Cut.

Las variables se leen del entorno (y de un archivo .env si existe), igual
que los servicios leen sus credenciales con os.getenv.
"""

import os
import logging
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from .utils.errors import DomainError


class Settings(BaseModel):
    """Parámetros de ejecución compartidos por la CLI y la función HTTP"""

    workers: int = Field(default=1, ge=1, description="Procesos para rejillas y Monte Carlo")
    beta_min: float = Field(default=1e-4, gt=0, lt=0.25, description="Piso de β en la búsqueda de x_l")
    gap_tol: float = Field(default=1e-9, gt=0, description="Umbral above/below de solve_xl")
    dp_budget: int = Field(default=100_000_000, ge=1, description="Máximo de celdas DP en los oráculos")
    output_dir: str = Field(default=".", description="Directorio base de los artefactos")
    log_level: str = Field(default="INFO", description="Nivel de logging")

    @classmethod
    def from_env(cls, env_file: Optional[str] = None) -> "Settings":
        """
        Construye la configuración desde variables MAXCUT_*.

        Raises:
            DomainError: si alguna variable no es un número válido o queda fuera de rango
        """
        load_dotenv(env_file)

        workers = os.getenv("MAXCUT_WORKERS")
        try:
            settings = cls(
                workers=int(workers) if workers else (os.cpu_count() or 1),
                beta_min=float(os.getenv("MAXCUT_BETA_MIN", "1e-4")),
                gap_tol=float(os.getenv("MAXCUT_GAP_TOL", "1e-9")),
                dp_budget=int(float(os.getenv("MAXCUT_DP_BUDGET", "1e8"))),
                output_dir=os.getenv("MAXCUT_OUTPUT_DIR", "."),
                log_level=os.getenv("MAXCUT_LOG_LEVEL", "INFO").upper(),
            )
        except ValueError as e:
            # ValidationError de pydantic también es ValueError
            raise DomainError(f"configuración MAXCUT_* inválida: {e}")
        logging.debug(f"⚙️ Settings cargados: {settings.model_dump()}")
        return settings
