# klyachko/commands/__init__.py
from . import bigness, model, sections

__all__ = ["bigness", "model", "sections"]
