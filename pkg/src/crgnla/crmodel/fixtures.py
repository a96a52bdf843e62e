"""The shipped coordinate models."""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from ..errors import UsageError
from .model import CRModel, parse_model

FIXTURES = ["ENG", "CAR", "2121", "2121_ainf", "2122", "2122_ab0", "2123", "G2B", "GOU5"]

# the stated and the computed regime boundaries of 2121 join the samples
_EXTRA_SAMPLES = {"2121": (Fraction(3, 2), Fraction(-3, 2), Fraction(3, 4), Fraction(-3, 4))}


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise UsageError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    return resources.files(__package__).joinpath("fixtures", f"{name}.crm").read_text("utf-8")


def load_fixture(name: str) -> CRModel:
    m = parse_model(fixture_text(name), name)
    m.extra_samples = _EXTRA_SAMPLES.get(name, ())
    return m


def fixture_catalog() -> list[CRModel]:
    return [load_fixture(n) for n in FIXTURES]


def load_model_file(path: str) -> CRModel:
    """Parse a model file; fixture names resolve to the shipped files."""
    import os

    base = os.path.splitext(os.path.basename(path))[0]
    if not os.path.exists(path) and base in FIXTURES:
        return load_fixture(base)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    m = parse_model(text, base)
    m.extra_samples = _EXTRA_SAMPLES.get(base, ())
    return m
