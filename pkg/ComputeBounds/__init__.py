"""
Azure Function: ComputeBounds

Calcula las constantes x_u, x_l y, si se da c, los intervalos de Max-Cut
y de la energía del estado base de Ising.

Endpoint: POST /api/bounds
Payload: {"c": 100, "tol": 1e-8, "tol_x": 1e-4}  (todos opcionales)

Response:
{
    "success": true,
    "x_u": 0.55909...,
    "theta_u": -0.11079...,
    "x_l": 0.4752...,
    "c": 100,
    "maxcut_interval": [...],
    "ising_interval": [...],
    "tolerances": {...},
    "metadata": {...}
}
"""

import os
import sys
import json
import logging
import numbers
import azure.functions as func

# Agregar shared al path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from shared.core.orchestrator import BoundsOrchestrator
from shared.generators.report_writer import to_json

logging.basicConfig(level=logging.INFO)


def _json_response(body: dict, status_code: int) -> func.HttpResponse:
    return func.HttpResponse(
        to_json(body),
        status_code=status_code,
        mimetype="application/json",
        charset="utf-8"
    )


def _client_error(code: str, message: str, status_code: int = 400) -> func.HttpResponse:
    return _json_response({
        "success": False,
        "error": {
            "code": code,
            "message": message
        }
    }, status_code)


def _positive_number(value) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool) and value > 0


async def main(req: func.HttpRequest) -> func.HttpResponse:
    """
    HTTP Trigger para el cálculo de cotas.

    Flujo:
    1. Validar método y cuerpo
    2. Validar c y las tolerancias
    3. Resolver x_u y x_l con el orquestador
    4. Retornar el BoundsReport (200) o el error estructurado (500)
    """
    logging.info("=" * 60)
    logging.info("🚀 COTAS MAX-CUT - Función iniciada")
    logging.info("=" * 60)

    try:
        # Validar método
        if req.method != "POST":
            return _client_error("METHOD_NOT_ALLOWED", "Solo se acepta método POST", 405)

        # Obtener payload; cuerpo vacío = valores por defecto
        body = req.get_body()
        if body and body.strip():
            try:
                payload = req.get_json()
            except ValueError as e:
                logging.error(f"❌ Error parseando JSON: {str(e)}")
                return _client_error("INVALID_JSON", "El body de la petición no es un JSON válido")
        else:
            payload = {}

        if not isinstance(payload, dict):
            return _client_error("INVALID_PAYLOAD", "El body debe ser un objeto JSON")

        c = payload.get("c")
        if c is not None and not _positive_number(c):
            return _client_error("INVALID_C", "'c' debe ser un número positivo")
        for key in ("tol", "tol_x"):
            if key in payload and not _positive_number(payload[key]):
                return _client_error("INVALID_TOLERANCE", f"'{key}' debe ser un número positivo")

        logging.info(f"📥 Petición recibida: c={c if c is not None else 'N/A'}")

        logging.info("⚙️ Inicializando orquestador...")
        orchestrator = BoundsOrchestrator()

        logging.info("🔄 Calculando cotas...")
        result = orchestrator.process(payload)

        status_code = 200 if result.get("success", False) else 500

        logging.info("=" * 60)
        if result.get("success"):
            logging.info("✅ CÁLCULO EXITOSO")
        else:
            logging.error("❌ CÁLCULO FALLIDO")
        logging.info("=" * 60)

        return _json_response(result, status_code)

    except Exception as e:
        logging.error(f"❌ ERROR CRÍTICO: {str(e)}")
        import traceback
        logging.error(f"❌ TRACEBACK: {traceback.format_exc()}")

        return _json_response({
            "success": False,
            "error": {
                "code": "INTERNAL_ERROR",
                "message": str(e),
                "type": type(e).__name__
            },
            "metadata": {}
        }, 500)
