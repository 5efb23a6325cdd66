"""
Modelos de multigrafos de configuración y cortes
"""

from collections import Counter
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class MultiGraph(BaseModel):
    """Multigrafo con lazos y aristas repetidas (modelo de configuración)"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Número de vértices")
    edges: List[Tuple[int, int]] = Field(default_factory=list, description="Pares no ordenados de vértices")

    @model_validator(mode="after")
    def _endpoints_in_range(self):
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arista ({u}, {v}) fuera de [0, {self.n})")
        return self

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def loop_count(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    @property
    def non_loop_count(self) -> int:
        return self.m - self.loop_count

    def edge_array(self) -> np.ndarray:
        """Aristas como arreglo (m, 2) de enteros"""
        return np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)

    def degree(self) -> np.ndarray:
        """Grados con la convención usual: un lazo aporta 2"""
        edges = self.edge_array()
        return np.bincount(edges.ravel(), minlength=self.n)

    def is_simple(self) -> bool:
        keys = [(min(u, v), max(u, v)) for u, v in self.edges]
        return self.loop_count == 0 and len(set(keys)) == len(keys)

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "MultiGraph":
        """Reetiqueta los nodos a 0..n−1 en el orden de iteración"""
        index = {node: i for i, node in enumerate(graph.nodes())}
        edges = [(index[u], index[v]) for u, v in graph.edges()]
        return cls(n=len(index), edges=edges)

    def multiplicities(self) -> Counter:
        return Counter((min(u, v), max(u, v)) for u, v in self.edges)


class Cut(BaseModel):
    """Asignación de lados 0/1 por vértice y su valor de corte"""

    side: List[int] = Field(..., description="Lado de cada vértice (0 o 1)")
    value: int = Field(..., ge=0, description="Aristas no lazo con extremos en lados opuestos")
    locally_optimal: Optional[bool] = Field(None, description="Resultado de is_locally_optimal si se evaluó")
    flips: int = Field(default=0, ge=0, description="Volteos realizados por la búsqueda local")

    @field_validator("side")
    @classmethod
    def _binary(cls, side: List[int]) -> List[int]:
        if any(s not in (0, 1) for s in side):
            raise ValueError("los lados deben ser 0 o 1")
        return side

    @classmethod
    def from_sides(cls, graph: MultiGraph, side, **kwargs) -> "Cut":
        """Construye el corte recontando su valor sobre el grafo"""
        side = [int(s) for s in side]
        if len(side) != graph.n:
            raise ValueError(f"se esperaban {graph.n} lados, llegaron {len(side)}")
        value = sum(1 for u, v in graph.edges if side[u] != side[v])
        return cls(side=side, value=value, **kwargs)

    def recount(self, graph: MultiGraph) -> int:
        return sum(1 for u, v in graph.edges if self.side[u] != self.side[v])
