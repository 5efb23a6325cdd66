"""
Módulos de cálculo de las cotas Max-Cut
"""

from .orchestrator import BoundsOrchestrator

__all__ = ["BoundsOrchestrator"]
