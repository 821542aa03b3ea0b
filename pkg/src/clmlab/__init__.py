"""Exact computations around Cohen-Lenstra-Martinet heuristics for finite groups.

Subpackages are imported on demand; the command-line entry point is
``clmlab.cli:main``.
"""

__version__ = "0.1.0"
