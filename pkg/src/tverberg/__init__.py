"""Toolkit around almost r-embeddings of simplicial complexes.

Five pieces: exact bound formulas (``bounds``), binomial-gcd
certificates and modification plans (``numbercert``), simplicial
complexes with deleted-product enumeration (``complexes``), an exact
rational checker for the almost r-embedding property of simplexwise
linear maps (``plmaps``), and a numerically verified construction of
degree-zero equivariant self-maps of the matrix sphere (``eqmaps``).
The ``tverberg`` command line front end ties them together.
"""

from . import bounds, complexes, eqmaps, numbercert, plmaps

__version__ = "0.1.0"

__all__ = ["bounds", "complexes", "eqmaps", "numbercert", "plmaps", "__version__"]
