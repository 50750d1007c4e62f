"""Normalize a small perturbation of the hyperquadric and read off its quartic.

Run with ``python demos/normal_form.py``.
"""

from chernmoser.hermitian import Signature, laplacian_l
from chernmoser.normalform import extract_cmw, normalize_to_order4
from chernmoser.polycore import CRational, RealPoly

sig = Signature(2, 1)
a, ab = RealPoly.z(0, 2), RealPoly.zbar(0, 2)
b, bb = RealPoly.z(1, 2), RealPoly.zbar(1, 2)

# -|z|^2_l plus a cubic and a quartic that is not yet harmonic
P = -RealPoly.norm_l(2, 1) + (a * a * bb + ab * ab * b) * CRational("1/3") \
    + (a * ab) * (a * ab) * 2

nf = normalize_to_order4(P, sig)
print("normal-form quartic s:", nf.s)
print("Laplacian of s vanishes:", laplacian_l(nf.s, sig).is_zero())

S = extract_cmw(nf)
print("tensor invariants:", S.check_invariants())
