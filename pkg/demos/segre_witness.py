"""Exhibit a point of a Segre variety inside the Kohn-Nirenberg type domain.

The witness lies on the ray z = lambda' exp(i pi/6) of Q_p0 with p0 = (0, 1).
"""

from chernmoser.hypersurfaces import (KNParams, NoWitnessError, kn_eps_tilde,
                                      kohn_nirenberg_rho, pseudoconvexity_scan,
                                      segre_interior_witness)

params = KNParams()
eps = kn_eps_tilde(params)
print("eps_tilde =", eps)

w = segre_interior_witness(params, eps)
print("lambda'^2 =", w.lam2, " rho at witness =", w.rho_at_q, " inside:", w.in_domain)

try:
    segre_interior_witness(params, eps * 2)
except NoWitnessError as exc:
    print("above threshold:", exc)

scan = pseudoconvexity_scan(kohn_nirenberg_rho(params), m=200, seed=0)
print("strongly pseudoconvex on 200 samples:", scan.strongly_pseudoconvex,
      " min eigenvalue %.3e" % scan.min_eigenvalue)
