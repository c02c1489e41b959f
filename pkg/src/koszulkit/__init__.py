"""Exact computational homological algebra for Koszul cubes.

Modules: ``rings`` (ZZ, QQ, GF(p), polynomial rings), ``matrix``, ``snf``,
``groebner``, ``linalg``, ``fpmodules``, ``complexes``, ``cubes``,
``koszul``, ``witness`` (double complexes and zig-zag certificates),
``document`` (text format), ``suite`` and ``cli``.
"""

from .complexes import ChainComplex, ChainMap, cone, homology, is_quasi_iso
from .cubes import Cube, CubeMap, is_admissible, totalize, verify_totisom
from .document import Document, parse_document, parse_text
from .fpmodules import PresentedModule
from .koszul import (
    Inconclusive,
    MMParams,
    RegularSequence,
    is_in_MM,
    is_koszul_cube,
    quasi_split_witness,
    typ_cube,
    wgp_check,
)
from .rings import GF, QQ, ZZ, PolynomialRing, parse_ring
from .witness import DoubleComplex, DoubleMap, ZigzagCertificate, zigzag_to_tot

__version__ = "0.1.0"
