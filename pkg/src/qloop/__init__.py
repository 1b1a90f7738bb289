"""Exact computer algebra for quantum loop groups of symmetric Cartan type."""

from .cartan import CartanMatrix, load_cartan, preset
from .freealg import FreeElem, parse_word, straighten
from .multipoly import MLaurent, Var
from .scalars import QRat
from .shuffle import ShufElem, upsilon

__version__ = "0.1.0"

__all__ = [
    "CartanMatrix",
    "FreeElem",
    "MLaurent",
    "QRat",
    "ShufElem",
    "Var",
    "load_cartan",
    "parse_word",
    "preset",
    "straighten",
    "upsilon",
]
