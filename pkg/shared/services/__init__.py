"""
Servicios del cálculo de cotas
"""

from .worker_pool import WorkerPoolService, SERIAL
from .report_storage_service import ReportStorageService

__all__ = [
    'WorkerPoolService',
    'SERIAL',
    'ReportStorageService',
]
