"""Change the frame by (lambda, U) and check that the tensor transforms as predicted."""

from chernmoser.cmw import generate_pseudo_unitary, transform_frame
from chernmoser.hermitian import Signature
from chernmoser.normalform import extract_cmw, normalize_to_order4
from chernmoser.polycore import CRational, RealPoly, Truncation, linear_change

sig = Signature(3, 1)
z = [RealPoly.z(j, 3) for j in range(3)]
zb = [RealPoly.zbar(j, 3) for j in range(3)]

quartic = z[0] * z[1] * zb[0] * zb[2] + z[0] * z[2] * zb[0] * zb[1] \
    + (z[1] * zb[1]) * (z[1] * zb[1]) * CRational("1/2")
P = -RealPoly.norm_l(3, 1) + quartic + RealPoly.u(3) * (z[2] * zb[2])

U = generate_pseudo_unitary(sig, seed=1)
lam = CRational("3/2")

S = extract_cmw(normalize_to_order4(P, sig))
S2 = extract_cmw(normalize_to_order4(linear_change(P, lam, U, Truncation(8, 4)), sig))
print("tensor is nonzero:", not S.is_zero())
print("tensor recovered from the new frame:", transform_frame(S2, lam, U) == S)
