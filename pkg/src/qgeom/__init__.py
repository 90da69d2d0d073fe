"""qgeom: an exact workbench for small finite geometries.

Subspace lattices of F_q^v, subspace-design parameter machinery,
spreads, generalized quadrangles, and certified exhaustive searches for
spread/ovoid partitions, all over fields of order at most 16.
"""

from . import designs, gf, gq, projspace, search  # noqa: F401

__version__ = "0.1.0"
