# klyachko/__init__.py
"""
Exact computations for toric vector bundles: Klyachko filtrations, global
sections, and bigness.
"""
__version__ = "1.0.0"
