"""Verification toolkit for maximal and timelike minimal surfaces in Lorentz-Minkowski space."""

from . import catalog, expr, gauss, identities, jet, mesh, pde, weierstrass, wick
from .errors import (CatalogError, ContinuationError, DefinitionFileError, DomainError, LmsError,
                     MeshError, ParseError, QuadratureError)
from .report import TOOL_VERSION as __version__

__all__ = ["catalog", "expr", "gauss", "identities", "jet", "mesh", "pde", "weierstrass", "wick",
           "CatalogError", "ContinuationError", "DefinitionFileError", "DomainError", "LmsError",
           "MeshError", "ParseError", "QuadratureError"]
