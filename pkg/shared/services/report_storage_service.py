"""
Servicio de almacenamiento de artefactos
Escritura de CSV, JSON y PDF bajo el directorio de salida configurado
"""

import os
import logging
from pathlib import Path
from typing import Optional, Union

from ..utils.errors import StorageError


class ReportStorageService:
    """Escribe artefactos en disco; las rutas relativas cuelgan de output_dir"""

    def __init__(self, output_dir: Optional[str] = None):
        self.output_dir = Path(output_dir or os.getenv("MAXCUT_OUTPUT_DIR", "."))
        logging.debug(f"✅ ReportStorageService inicializado: {self.output_dir}")

    def resolve(self, name: Union[str, Path]) -> Path:
        """Ruta final del artefacto"""
        path = Path(name)
        return path if path.is_absolute() else self.output_dir / path

    def save_bytes(self, content: bytes, name: Union[str, Path]) -> Path:
        """
        Guarda un artefacto binario

        Args:
            content: Contenido en bytes
            name: Nombre o ruta del artefacto (ej: "scans/x0.5.csv")

        Returns:
            Ruta escrita

        Raises:
            StorageError: si la ruta no es escribible
        """
        target = self.resolve(name)
        try:
            logging.info(f"📤 Guardando artefacto: {target}")
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(content)
        except OSError as e:
            logging.error(f"❌ Error guardando {target}: {str(e)}")
            raise StorageError(
                f"no se pudo escribir {target}: {e.strerror or e}",
                details={"path": str(target)},
            )
        logging.info(f"✅ Artefacto guardado: {target} ({len(content)} bytes)")
        return target

    def save_text(self, text: str, name: Union[str, Path]) -> Path:
        """Guarda texto UTF-8 con fin de línea \\n"""
        return self.save_bytes(text.encode("utf-8"), name)

    def load_text(self, name: Union[str, Path]) -> str:
        target = self.resolve(name)
        try:
            return target.read_text(encoding="utf-8")
        except OSError as e:
            raise StorageError(f"no se pudo leer {target}: {e.strerror or e}", details={"path": str(target)})
