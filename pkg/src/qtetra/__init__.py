"""Exact 3D R and 3D K: quantum, combinatorial, birational and tropical forms.

Verifies the tetrahedron equation, the 3D reflection equations of types C
and B, and the F4 relation with exact integer Laurent-polynomial arithmetic.
"""

from .kmat import comb_k, k_elem, k_elem_oracle, kb_elem
from .qpoly import LaurentPoly, QRat, TruncPoly
from .rmat import comb_r, r_elem, r_elem_oracle, s_elem
from .tensorop import SlotSignature, SparseVec, apply_k, apply_r

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly",
    "QRat",
    "TruncPoly",
    "SparseVec",
    "SlotSignature",
    "r_elem",
    "r_elem_oracle",
    "s_elem",
    "comb_r",
    "k_elem",
    "k_elem_oracle",
    "kb_elem",
    "comb_k",
    "apply_r",
    "apply_k",
]
