"""
Script para reproducir los datos de las figuras W(x, β) frente a 2w(x)

Genera un CSV por cada x (x = 0.47523 y x = 0.5) con 97 puntos de β en
[0.01, 0.49] e imprime el resumen de cada barrido.
"""

import sys
from pathlib import Path

from dotenv import load_dotenv

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from shared.config import Settings
from shared.core.second_moment import scan
from shared.generators.report_writer import scan_to_csv
from shared.services import ReportStorageService, WorkerPoolService

# Cargar variables de entorno
load_dotenv()

FIGURES = {
    "x_l": 0.47523,
    "x_0.5": 0.5,
}

print("=" * 60)
print("📈 Reproducción de las figuras W(x, β)")
print("=" * 60)

settings = Settings.from_env()
pool = WorkerPoolService(settings.workers)
storage = ReportStorageService(settings.output_dir)

exit_code = 0
for label, x in FIGURES.items():
    print(f"\n🔍 x = {x} ({settings.workers} procesos)...")
    rows = scan(x, 0.01, 0.49, 97, pool=pool)
    path = storage.save_text(scan_to_csv(rows), f"figures/scan_{label}.csv")

    gaps = [r.gap for r in rows if r.status == "ok"]
    failed = len(rows) - len(gaps)
    print(f"   ✅ {path}")
    print(f"   max gap = {max(gaps):.3e}" if gaps else "   ❌ ningún punto resuelto")
    if failed:
        print(f"   ⚠️ {failed} puntos fallidos (NA en el CSV)")
        exit_code = 1

print("\n" + "=" * 60)
print("✅ Reproducción completada")
print("=" * 60)
sys.exit(exit_code)
