"""
Servicio de paralelismo determinista
Reparte tareas independientes entre procesos y ensambla en orden de entrada
"""

import logging
from multiprocessing import Pool
from typing import Callable, Iterable, List, Optional, TypeVar

from ..config import Settings

T = TypeVar("T")
R = TypeVar("R")


class WorkerPoolService:
    """
    Pool de procesos con ensamblado ordenado.

    Los resultados dependen sólo de las tareas (cada una lleva su propia
    semilla), nunca del número de procesos ni del orden de planificación.
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers if workers is not None else Settings.from_env().workers
        if self.workers < 1:
            raise ValueError(f"workers debe ser ≥ 1, llegó {self.workers}")
        logging.debug(f"✅ WorkerPoolService inicializado: {self.workers} procesos")

    def map_ordered(self, func: Callable[[T], R], items: Iterable[T], chunksize: int = 1) -> List[R]:
        """
        Aplica func a cada tarea y devuelve los resultados en el orden de entrada

        Args:
            func: Función de nivel de módulo (debe ser serializable)
            items: Tareas
            chunksize: Tareas por envío a cada proceso

        Returns:
            Lista de resultados alineada con items
        """
        tasks = list(items)
        if self.workers == 1 or len(tasks) <= 1:
            return [func(task) for task in tasks]

        processes = min(self.workers, len(tasks))
        logging.debug(f"🔄 Repartiendo {len(tasks)} tareas en {processes} procesos")
        with Pool(processes=processes) as pool:
            return pool.map(func, tasks, chunksize)


SERIAL = WorkerPoolService(workers=1)
