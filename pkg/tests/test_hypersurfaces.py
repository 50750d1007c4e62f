import json

import pytest
import sympy
from gmpy2 import mpq

from chernmoser.cmw import null_cone_definiteness
from chernmoser.hermitian import Signature
from chernmoser.hypersurfaces import (AlgebraicHypersurface, DegenerateSegreError, KNParams,
                                      NoWitnessError, evaluate_on_ray, hyperquadric,
                                      hyperquadric_surface, kn_eps_tilde, kn_lambda_prime_sq,
                                      kn_phi, kohn_nirenberg_rho, pseudoconvexity_scan, ray_value,
                                      segre_interior_witness, segre_variety, sphere,
                                      sphere_perturbation_chart, sphere_perturbation_homogeneous,
                                      sphere_perturbation_local)
from chernmoser.normalform import extract_cmw, normalize_to_order4, validate_prenormal
from chernmoser.polycore import CRational, HoloPoly, I, ONE, ZERO, RealPoly

# a for n = 4, l = 2, eps = 1/100, frozen from the series oracle below
A_GOLDEN = CRational("1/200")


def _series_a(n, l, eps):
    """x^4 coefficient of v(x) on the slice eta_1 = x real, other eta = 0, u = 0.

    With u = 0 the chart coordinate is sigma = v/4.  Solving the homogeneous
    equation for v as a power series in x gives v = -x^2 + a x^4 + O(x^6).
    """
    x, v = sympy.symbols("x v", real=True)
    sig_ = v / 4
    Z = [1 + sig_, x] + [0] * (l - 1) + [1 - sig_] + [0] * (n - l)
    total = sum(c ** 2 for c in Z)
    form = -sum(c ** 2 for c in Z[:l + 1]) + sum(c ** 2 for c in Z[l + 1:])
    rho = sympy.expand(total * form + sympy.Rational(eps) * (Z[1] ** 4 - Z[n + 1] ** 4))
    c2, c4 = sympy.symbols("c2 c4")
    trial = c2 * x ** 2 + c4 * x ** 4
    ser = sympy.expand(rho.subs(v, trial))
    sol = sympy.solve([ser.coeff(x, 2), ser.coeff(x, 4)], [c2, c4], dict=True)[0]
    return sol[c2], sol[c4]


def test_series_oracle_and_golden_value():
    c2, c4 = _series_a(4, 2, "1/100")
    assert c2 == -1
    assert CRational(str(c4)) == A_GOLDEN


def test_sphere_perturbation_local_coefficient():
    P, a = sphere_perturbation_local(4, 2, "1/100")
    assert a == A_GOLDEN
    sig = Signature(4, 2)
    validate_prenormal(P, sig)
    assert P.coeff((2, 0, 0, 0), (2, 0, 0, 0)) == -a
    assert P.coeff((0, 0, 0, 2), (0, 0, 0, 2)) == a


def test_sphere_pipeline_signs():
    sig = Signature(4, 2)
    P, a = sphere_perturbation_local(4, 2, "1/100")
    nf = normalize_to_order4(P, sig)
    S = extract_cmw(nf)
    X1 = [ONE, ZERO, ONE, ZERO]
    X2 = [ZERO, ONE, ZERO, ONE]
    assert nf.s.evaluate(X1) / 4 == -a and nf.s.evaluate(X2) / 4 == a
    assert S.value_on(X1) == -4 * a and S.value_on(X2) == 4 * a
    assert null_cone_definiteness(S, sig, 32).verdict == "obstructed"


@pytest.mark.parametrize("eps", ["1/1000", "1/50"])
def test_sphere_obstructed_for_other_eps(eps):
    sig = Signature(4, 2)
    P, a = sphere_perturbation_local(4, 2, eps)
    assert a == CRational(eps) / 2
    S = extract_cmw(normalize_to_order4(P, sig))
    assert null_cone_definiteness(S, sig, 32).verdict == "obstructed"


def test_sphere_eps_zero_is_flat():
    sig = Signature(4, 2)
    P, a = sphere_perturbation_local(4, 2, 0)
    assert a == ZERO
    assert P.truncate(4) == hyperquadric(sig)
    assert normalize_to_order4(P, sig).s.is_zero()


def test_sphere_argument_checks():
    with pytest.raises(ValueError):
        sphere_perturbation_local(4, 1, "1/100")
    with pytest.raises(ValueError):
        sphere_perturbation_homogeneous(4, 2, "-1/100")
    H = sphere_perturbation_homogeneous(4, 2, "1/100")
    assert H.n == 6 and H.is_real()
    chart = sphere_perturbation_chart(4, 2, "1/100")
    assert chart.contains([ZERO] * 5)


# --- hyperquadric and Segre varieties ---------------------------------------------

def test_hyperquadric_pipeline_and_surface():
    sig = Signature(3, 1)
    assert validate_prenormal(hyperquadric(sig), sig)
    H = hyperquadric_surface(sig)
    assert H.contains([ONE, ONE, ZERO, ZERO])
    Q = segre_variety(H, [ZERO] * 4)
    assert Q.poly == HoloPoly.w(3) * CRational(0, "-1/2")


def test_kohn_nirenberg_coefficients():
    p = KNParams()
    H = kohn_nirenberg_rho(p)
    rho = H.rho
    assert H.N == 2 and rho.is_real()
    eps0, c, eps = CRational(p.eps0), CRational(p.c), CRational(p.eps)
    expected = {
        (4, 0, 4, 0): eps0,
        (7, 0, 1, 0): eps0 * c / 2,
        (1, 0, 7, 0): eps0 * c / 2,
        (0, 1, 0, 1): ONE,
        (5, 0, 5, 0): ONE,
        (1, 0, 1, 0): eps,
        (0, 0, 0, 0): -ONE,
    }
    assert {k[:4]: v for k, v in rho.terms.items()} == expected
    assert H.contains([ZERO, ONE])


def test_kn_params_ranges():
    with pytest.raises(ValueError):
        KNParams(c="16/7")
    with pytest.raises(ValueError):
        KNParams(eps0=0)
    with pytest.raises(ValueError):
        KNParams(eps=1)


def test_segre_varieties():
    Q = segre_variety(kohn_nirenberg_rho(KNParams()), [ZERO, ONE])
    assert Q.poly == HoloPoly.w(1) - HoloPoly.constant(1, 1)
    assert Q.contains([CRational(5, 3), ONE])
    Qs = segre_variety(sphere(2), [ZERO, ONE])
    assert Qs.poly == HoloPoly.w(1) - HoloPoly.constant(1, 1)
    p = [CRational("3/5"), CRational(0, "4/5")]
    assert sphere(2).contains(p) and segre_variety(sphere(2), p).contains(p)
    # rho = |z|^2 - |w|^2 has rho(Z, 0) = 0 identically
    cone = AlgebraicHypersurface(2, RealPoly.z(0, 2) * RealPoly.zbar(0, 2)
                                 - RealPoly.z(1, 2) * RealPoly.zbar(1, 2))
    with pytest.raises(DegenerateSegreError):
        segre_variety(cone, [ZERO, ZERO])


def test_hypersurface_validation_and_json():
    with pytest.raises(ValueError):
        AlgebraicHypersurface(2, RealPoly.constant(2, 1))
    with pytest.raises(ValueError):
        AlgebraicHypersurface(2, RealPoly.u(2))
    H = kohn_nirenberg_rho(KNParams())
    assert AlgebraicHypersurface.from_json(json.loads(json.dumps(H.to_json()))) == H


# --- Segre witness -------------------------------------------------------------------

def test_ray_values():
    assert ray_value(7, 1, 4) == CRational(-256)  # |z|^2 z^6 at angle pi/6: -lambda^8
    assert ray_value(2, 0, 4, twelfths=3) == CRational(-4)
    with pytest.raises(ValueError):
        ray_value(1, 0, 4)
    with pytest.raises(ValueError):
        ray_value(2, 0, 4)


def _sympy_rho_at_witness(params, eps, lam2):
    z = sympy.sqrt(sympy.Rational(str(lam2))) * sympy.exp(sympy.I * sympy.pi / 6)
    zb = sympy.conjugate(z)
    e0, c, e = (sympy.Rational(str(x)) for x in (params.eps0, params.c, eps))
    a2 = z * zb
    rho = e0 * (a2 ** 4 + c * sympy.re(sympy.expand(a2 * z ** 6))) + 1 + a2 ** 5 + e * a2 - 1
    return sympy.nsimplify(sympy.simplify(rho))


def test_eps_tilde_from_independent_threshold():
    p = KNParams()
    lam2 = sympy.Rational(str(p.eps0)) * (sympy.Rational(str(p.c)) - 1) / 2
    e0, c = sympy.Rational(str(p.eps0)), sympy.Rational(str(p.c))
    # phi(lambda', eps) < 0  <=>  eps < -(eps0 lambda'^6 (1 - c) + lambda'^8)
    bound = -(e0 * lam2 ** 3 * (1 - c) + lam2 ** 4)
    k = 0
    while sympy.Rational(1, 2 ** k) >= bound:
        k += 1
    assert kn_eps_tilde(p) == mpq(1, 2 ** k) == mpq(1, 2 ** 44)
    assert kn_lambda_prime_sq(p) == mpq(11, 20000)


def test_witness_at_eps_tilde_and_below():
    p = KNParams()
    et = kn_eps_tilde(p)
    for eps in (et, et / 2, et / 3):
        w = segre_interior_witness(p, eps)
        assert w.on_segre and w.in_domain
        assert w.rho_at_q == CRational(w.phi) and w.psi == w.rho_at_q
        assert w.rho_at_q.re < 0 and w.phi_zero < 0
        assert _sympy_rho_at_witness(p, eps, w.lam2) == sympy.Rational(str(w.phi))
        json.dumps(w.to_json())


def test_no_witness_above_eps_tilde():
    p = KNParams()
    with pytest.raises(NoWitnessError):
        segre_interior_witness(p)  # the default eps = 1/10000 exceeds eps_tilde
    with pytest.raises(NoWitnessError):
        segre_interior_witness(p, kn_eps_tilde(p) * 2)


def test_phi_at_zero_is_negative():
    p = KNParams()
    assert kn_phi(p, kn_lambda_prime_sq(p), 0) < 0
    assert evaluate_on_ray(kohn_nirenberg_rho(p), kn_lambda_prime_sq(p)) == \
        CRational(kn_phi(p, kn_lambda_prime_sq(p)))


# --- Levi scan -------------------------------------------------------------------------

def test_scan_sphere_positive():
    rep = pseudoconvexity_scan(sphere(3), m=30, seed=1)
    assert rep.strongly_pseudoconvex
    assert abs(rep.min_eigenvalue - 1) < 1e-9 and abs(rep.max_eigenvalue - 1) < 1e-9


def test_scan_kohn_nirenberg_defaults():
    rep = pseudoconvexity_scan(kohn_nirenberg_rho(KNParams()), m=200, seed=0)
    assert rep.samples == 200 and rep.strongly_pseudoconvex
    assert rep.to_json()["inexact"] is True


def test_scan_detects_negative_control():
    rho = (RealPoly.z(1, 2) * RealPoly.zbar(1, 2) - RealPoly.z(0, 2) * RealPoly.zbar(0, 2)) - 1
    rep = pseudoconvexity_scan(AlgebraicHypersurface(2, rho), m=20, seed=2)
    assert rep.negative_points == rep.samples and not rep.strongly_pseudoconvex


def test_scan_requires_interior_center():
    with pytest.raises(ValueError):
        pseudoconvexity_scan(sphere(2), m=5, center=[2, 0])
