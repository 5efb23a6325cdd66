"""
Orquestador del cálculo de cotas
Coordina x_u, x_l, el ensamblado del informe y los artefactos opcionales
"""

import logging
import traceback
from typing import Any, Dict, Optional, Tuple

from ..config import Settings
from ..generators.pdf_generator import PDFGenerator
from ..models.moments import LowerBoundSearch
from ..models.report import BoundsReport, ErrorResponse
from ..services.report_storage_service import ReportStorageService
from ..services.worker_pool import WorkerPoolService
from ..utils.errors import DomainError, MaxCutError
from .first_moment import solve_xu
from .second_moment import DEFAULT_TOL as SADDLE_TOL
from .second_moment import search_xl


class BoundsOrchestrator:
    """
    Orquestador de las constantes x_u, x_l y sus intervalos.

    Flujo:
    1. Validar parámetros
    2. Resolver x_u (primer momento)
    3. Bisección de x_l (segundo momento)
    4. Ensamblar el BoundsReport
    5. Generar PDF (opcional)
    """

    def __init__(self, settings: Optional[Settings] = None):
        """Inicializa los servicios necesarios"""
        self.settings = settings or Settings.from_env()
        self.pool = WorkerPoolService(self.settings.workers)
        self.storage = ReportStorageService(self.settings.output_dir)
        logging.info(f"✅ BoundsOrchestrator inicializado ({self.settings.workers} procesos)")

    def compute_bounds(
        self,
        c: Optional[float] = None,
        tol: float = 1e-8,
        tol_x: float = 1e-4,
        grid: int = 64,
        pdf_path: Optional[str] = None,
    ) -> Tuple[BoundsReport, LowerBoundSearch]:
        """
        Calcula el informe de cotas

        Args:
            c: Densidad de aristas para los intervalos (opcional)
            tol: Tolerancia de la bisección de x_u
            tol_x: Ancho final del intervalo de x_l
            grid: Puntos de rejilla en β por clasificación
            pdf_path: Ruta del PDF del informe (opcional)

        Returns:
            (BoundsReport, LowerBoundSearch)

        Raises:
            MaxCutError: parámetros inválidos o fallo de un solver
        """
        # ========================================
        # PASO 1: Validar parámetros
        # ========================================
        logging.info("📥 Paso 1: Validando parámetros...")
        if c is not None and not c > 0:
            raise DomainError(f"c debe ser > 0, llegó {c}")
        if not tol > 0 or not tol_x > 0:
            raise DomainError(f"las tolerancias deben ser > 0 (tol={tol}, tol_x={tol_x})")

        # ========================================
        # PASO 2: Cota superior x_u
        # ========================================
        logging.info("🔍 Paso 2: Resolviendo x_u...")
        upper = solve_xu(tol)

        # ========================================
        # PASO 3: Cota inferior x_l
        # ========================================
        logging.info("🔍 Paso 3: Bisección de x_l...")
        search = search_xl(
            tol_x=tol_x,
            gap_tol=self.settings.gap_tol,
            grid=grid,
            beta_min=self.settings.beta_min,
            pool=self.pool,
            x_u=upper.x,
        )

        # ========================================
        # PASO 4: Ensamblar informe
        # ========================================
        logging.info("🧮 Paso 4: Ensamblando informe...")
        report = BoundsReport.assemble(
            x_u=upper.x,
            theta_u=upper.theta,
            x_l=search.x_l,
            c=c,
            tolerances={
                "x_u": tol,
                "x_l": tol_x,
                "gap_tol": search.gap_tol,
                "saddle": SADDLE_TOL,
            },
            metadata={
                "theta_u_residual": upper.residual,
                "x_l_bracket": list(search.bracket),
                "x_l_probes": len(search.probes),
                "beta_min": self.settings.beta_min,
                "beta_grid": grid,
            },
        )
        logging.info(f"✅ x_u = {report.x_u:.8f}, x_l = {report.x_l:.6f}")

        # ========================================
        # PASO 5: PDF (opcional)
        # ========================================
        if pdf_path:
            logging.info("📄 Paso 5: Generando PDF...")
            pdf_bytes = PDFGenerator().generate(report, search)
            path = self.storage.save_bytes(pdf_bytes, pdf_path)
            report.metadata["pdf_path"] = str(path)
        else:
            logging.info("⏭️ Paso 5: PDF no solicitado, saltando...")

        return report, search

    def process(self, payload: Dict[str, Any]) -> Dict[str, Any]:
        """
        Procesa una petición {"c": ..., "tol": ...} y devuelve la respuesta

        Returns:
            Informe serializable o respuesta de error estructurada
        """
        try:
            report, _ = self.compute_bounds(
                c=payload.get("c"),
                tol=float(payload.get("tol", 1e-8)),
                tol_x=float(payload.get("tol_x", 1e-4)),
            )
            return report.model_dump()
        except MaxCutError as e:
            logging.error(f"❌ Error calculando cotas: {e.message}")
            return error_response(e)
        except Exception as e:
            logging.error(f"❌ Error calculando cotas: {str(e)}")
            logging.error(f"❌ Traceback: {traceback.format_exc()}")
            return error_response(e)


def error_response(error: Exception, **metadata) -> Dict[str, Any]:
    """Genera respuesta de error estructurada"""
    if isinstance(error, MaxCutError):
        detail = error.to_dict()
    else:
        detail = {"code": "INTERNAL_ERROR", "message": str(error), "type": type(error).__name__}
    return ErrorResponse(error=detail, metadata=metadata or {}).model_dump()
