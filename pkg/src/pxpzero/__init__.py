"""Exact zero-mode bounds for the PXP chain and their verification."""

from .combinatorics import SectorSpec, chiral_charges, fibonacci, lower_bound
from .spectra import zero_mode_count

__all__ = ["SectorSpec", "chiral_charges", "fibonacci", "lower_bound", "zero_mode_count"]
__version__ = "0.1.0"
