"""Coordinate CR models: parsing, tangency, closure and symbols."""

from .fixtures import FIXTURES, fixture_catalog, load_fixture, load_model_file
from .model import (CRModel, SymmetryReport, closure, model_symbol, parse_model, realify,
                    verify_tangency)

__all__ = ["FIXTURES", "fixture_catalog", "load_fixture", "load_model_file", "CRModel",
           "SymmetryReport", "closure", "model_symbol", "parse_model", "realify", "verify_tangency"]
