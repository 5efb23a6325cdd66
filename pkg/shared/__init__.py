"""
Cotas de Max-Cut para grafos aleatorios dispersos
"""
