"""Numerical laboratory for Bohr radii of bounded analytic and quasiconformal harmonic maps."""

from .powser import TruncatedSeries, blaschke_product, disk_automorphism, majorant_sum
from .harmonic import HarmonicMap, QCParams, generate_instance

__version__ = "0.1.0"

__all__ = [
    "TruncatedSeries",
    "blaschke_product",
    "disk_automorphism",
    "majorant_sum",
    "HarmonicMap",
    "QCParams",
    "generate_instance",
]
