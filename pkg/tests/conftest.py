"""
Configuración compartida de pytest
"""

import os
import sys

import pytest

# Agregar la raíz del repositorio al path (igual que las funciones HTTP)
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False,
        help="ejecutar también las reproducciones largas",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="reproducción larga: usar --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def petersen():
    from shared.core.graph_sim import read_graph
    return read_graph(os.path.join(os.path.dirname(__file__), '..', 'data', 'petersen.graph'))
