"""Combinatorial sutured Floer homology over F2 with bordered gluing maps."""

from . import exactlin, glue, modules, sfc, strands, surface

__all__ = ["exactlin", "surface", "sfc", "strands", "modules", "glue"]
__version__ = "0.1.0"
