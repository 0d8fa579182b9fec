"""Exact closed and open Gromov-Witten invariants of quadrics and odd projective spaces."""

from .geometry import Family, Space, make_space
from .open_engine import Engine
from .store import Store, canonical_key

__all__ = ["Engine", "Family", "Space", "Store", "canonical_key", "make_space"]
