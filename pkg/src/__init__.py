"""
FracLab - Laboratorio numerico de operadores fracionarios, normas H^1/BMO e capacidades.

Este é o pacote principal do FracLab.
"""

__version__ = "1.0.0"
