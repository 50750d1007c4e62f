"""The quartic perturbation of the sphere in signature (4, 2) has an indefinite tensor.

On the null vectors X1 = e1 + e3 and X2 = e2 + e4 the tensor takes values of
opposite sign, so no holomorphic map can carry the hypersurface into a sphere.
"""

from chernmoser.cmw import null_cone_definiteness
from chernmoser.hermitian import Signature
from chernmoser.hypersurfaces import sphere_perturbation_local
from chernmoser.normalform import extract_cmw, normalize_to_order4
from chernmoser.polycore import ONE, ZERO

sig = Signature(4, 2)
P, a = sphere_perturbation_local(4, 2, "1/100")
print("a =", a)

nf = normalize_to_order4(P, sig)
S = extract_cmw(nf)
X1 = [ONE, ZERO, ONE, ZERO]
X2 = [ZERO, ONE, ZERO, ONE]
print("graph quartic at X1, X2:", nf.s.evaluate(X1) / 4, nf.s.evaluate(X2) / 4)
print("tensor at X1, X2:", S.value_on(X1), S.value_on(X2))

report = null_cone_definiteness(S, sig, 64, seed=0)
print("verdict:", report.verdict, "with", len(report.witnesses), "witnesses")
