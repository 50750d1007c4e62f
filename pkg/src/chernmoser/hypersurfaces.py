"""Concrete hypersurfaces: model quadrics, a projective perturbation of the
generalized sphere, a Kohn-Nirenberg type deformation, Segre varieties and a
Levi-form scan.

Ambient defining polynomials are :class:`RealPoly` objects with ``n = N``
variables and no ``u`` dependence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq
from scipy.optimize import brentq

from .hermitian import Signature, SingularPointError, levi_form
from .polycore import (CRational, HoloPoly, I, ONE, ZERO, RealPoly, Truncation,
                       PIPELINE_TRUNCATION, as_crational, parse_rational)
from .polycore import _sparse as sp
from .polycore.jets import solve_graph

__all__ = ["AlgebraicHypersurface", "SegreVariety", "KNParams", "SegreWitness",
           "NoWitnessError", "DegenerateSegreError", "ScanReport", "hyperquadric",
           "hyperquadric_surface", "sphere_perturbation_homogeneous",
           "sphere_perturbation_chart", "sphere_perturbation_local", "kohn_nirenberg_rho",
           "segre_variety", "segre_interior_witness", "kn_phi", "kn_lambda_prime_sq",
           "kn_eps_tilde", "ray_value",
           "evaluate_on_ray", "pseudoconvexity_scan", "sphere"]


@dataclass(frozen=True)
class AlgebraicHypersurface:
    """``{Z in C^N : rho(Z, Zbar) = 0}`` with rho a real polynomial."""

    N: int
    rho: RealPoly

    def __post_init__(self):
        if self.rho.n != self.N:
            raise ValueError("rho has the wrong number of variables")
        if not self.rho.u_free():
            raise ValueError("rho must depend on (Z, Zbar) only")
        self.rho.require_real()
        if all(not any(k) for k in self.rho.terms):
            raise ValueError("rho must be nonconstant")

    def __call__(self, Z):
        return self.rho.evaluate(Z)

    def contains(self, Z) -> bool:
        return as_crational(self.rho.evaluate(Z)).is_zero()

    def to_json(self) -> dict:
        return {"N": self.N, "rho": self.rho.to_json()}

    @classmethod
    def from_json(cls, data) -> "AlgebraicHypersurface":
        N = int(data["N"])
        return cls(N, RealPoly.from_json(data["rho"], N))


def _abs2(N: int, j: int) -> RealPoly:
    return RealPoly.z(j, N) * RealPoly.zbar(j, N)


def sphere(N: int) -> AlgebraicHypersurface:
    rho = sum((_abs2(N, j) for j in range(N)), RealPoly.zero(N)) - 1
    return AlgebraicHypersurface(N, rho)


# --- model ---------------------------------------------------------------------

def hyperquadric(sig: Signature) -> RealPoly:
    """Graph function of the model: v - |z|^2_l = 0, i.e. P = -|z|^2_l."""
    return -sig.norm_poly()


def hyperquadric_surface(sig: Signature) -> AlgebraicHypersurface:
    """Im w - |z|^2_l in C^{n+1}, with w the last coordinate."""
    N = sig.n + 1
    im_w = (RealPoly.z(sig.n, N) - RealPoly.zbar(sig.n, N)) * CRational(0, mpq(-1, 2))
    norm = RealPoly.zero(N)
    for j in range(sig.n):
        norm = norm - _abs2(N, j) if j < sig.l else norm + _abs2(N, j)
    return AlgebraicHypersurface(N, im_w - norm)


# --- perturbed generalized sphere ---------------------------------------------

def _check_sphere_args(n: int, l: int, eps) -> mpq:
    Signature(n, l)
    if l < 2:
        raise ValueError("the perturbed sphere construction needs 2 <= l <= n/2")
    e = parse_rational(eps)
    if e < 0:
        raise ValueError("eps must be >= 0")
    return e


def sphere_perturbation_homogeneous(n: int, l: int, eps) -> RealPoly:
    """|Z|^2 (-sum_{j<=l} |Z_j|^2 + sum_{j>l} |Z_j|^2) + eps (|Z_1|^4 - |Z_{n+1}|^4)

    in the homogeneous coordinates Z_0..Z_{n+1} (n + 2 variables).
    """
    e = _check_sphere_args(n, l, eps)
    N = n + 2
    total = sum((_abs2(N, j) for j in range(N)), RealPoly.zero(N))
    form = RealPoly.zero(N)
    for j in range(N):
        form = form - _abs2(N, j) if j <= l else form + _abs2(N, j)
    quartic = _abs2(N, 1) ** 2 - _abs2(N, N - 1) ** 2
    return total * form + quartic * CRational(e)


def sphere_perturbation_chart(n: int, l: int, eps) -> AlgebraicHypersurface:
    """The homogeneous equation in the affine chart (eta_1..eta_n, sigma).

    Z = (1 + sigma, eta_1..eta_l, 1 - sigma, eta_{l+1}..eta_n), which is the
    chart centred at [1 : 0 : ... : 1 : ... : 0] scaled by 1 + sigma.
    """
    hom = sphere_perturbation_homogeneous(n, l, eps)
    N = n + 1  # eta_1..eta_n, sigma
    nv = 2 * N + 1

    def mono(slot, c=ONE):
        key = [0] * nv
        key[slot] = 1
        return {tuple(key): c}

    const = {(0,) * nv: ONE}
    sig_slot = n
    holo = [sp.padd(const, mono(sig_slot))]
    holo += [mono(j) for j in range(l)]
    holo += [sp.padd(const, mono(sig_slot), -1)]
    holo += [mono(j) for j in range(l, n)]
    anti = [{k[N:2 * N] + k[:N] + k[2 * N:]: c.conj() for k, c in im.items()} for im in holo]
    rho = sp.psubs(hom.terms, holo + anti + [{}], nv, (1,) * (2 * N) + (2,))
    return AlgebraicHypersurface(N, RealPoly._wrap(N, rho))


def sphere_perturbation_local(n: int, l: int, eps,
                              trunc: Truncation = PIPELINE_TRUNCATION) -> tuple:
    """Pre-normal graph function of the perturbed sphere at the chart origin.

    Substitutes sigma = -i w / 4 (so -4 Re sigma = -v), halves and negates
    the chart equation, and solves for v.  Returns ``(P, a)`` where the
    local equation reads v - |eta|^2_l - a (|eta_1|^4 - |eta_n|^4) + ... = 0,
    that is ``P = -|eta|^2_l - a(|eta_1|^4 - |eta_n|^4) + (higher order)``.
    """
    e = _check_sphere_args(n, l, eps)
    chart = sphere_perturbation_chart(n, l, eps)
    lf = levi_form(chart, [0] * (n + 1))
    if lf.negative != l or lf.positive != n - l:
        raise ValueError(f"Levi form at the base point has inertia {lf.signature}")
    N = n + 1
    nv = 2 * n + 2  # (eta, etabar, u, v)
    images = []
    for j in range(n):
        key = [0] * nv
        key[j] = 1
        images.append({tuple(key): ONE})
    ku = tuple([0] * (2 * n) + [1, 0])
    kv = tuple([0] * (2 * n) + [0, 1])
    quarter = CRational(mpq(1, 4))
    # sigma = -i (u + i v) / 4 = v/4 - i u/4 and its conjugate
    sigma = {kv: quarter, ku: -I * quarter}
    sigma_bar = {kv: quarter, ku: I * quarter}
    eta_bar = []
    for j in range(n):
        key = [0] * nv
        key[n + j] = 1
        eta_bar.append({tuple(key): ONE})
    subs = images + [sigma] + eta_bar + [sigma_bar, {}]
    wts = (1,) * (2 * n) + (2, 2)
    E = sp.psubs(chart.rho.terms, subs, nv, wts)
    E = sp.pscale(E, CRational(mpq(-1, 2)))
    E = sp.truncate(E, wts, trunc.weight, trunc.degree)
    P = solve_graph(E, n, trunc)
    a = CRational(e / 2)
    return P, a


# --- Kohn-Nirenberg type deformation ------------------------------------------

@dataclass(frozen=True)
class KNParams:
    """eps0 > 0, 2 < c < 16/7, 0 < eps < 1 (exact rationals)."""

    eps0: mpq = mpq(1, 1000)
    c: mpq = mpq(21, 10)
    eps: mpq = mpq(1, 10000)

    def __post_init__(self):
        for name in ("eps0", "c", "eps"):
            object.__setattr__(self, name, parse_rational(getattr(self, name)))
        if self.eps0 <= 0:
            raise ValueError("eps0 must be positive")
        if not mpq(2) < self.c < mpq(16, 7):
            raise ValueError("c must satisfy 2 < c < 16/7")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")

    def to_json(self) -> dict:
        return {"eps0": str(self.eps0), "c": str(self.c), "eps": str(self.eps)}


def kohn_nirenberg_rho(params: KNParams) -> AlgebraicHypersurface:
    """eps0 (|z|^8 + c Re(|z|^2 z^6)) + |w|^2 + |z|^10 + eps |z|^2 - 1 on C^2."""
    N = 2
    z2 = _abs2(N, 0)
    half = CRational(mpq(1, 2))
    re_term = (RealPoly.z(0, N) ** 7 * RealPoly.zbar(0, N)
               + RealPoly.z(0, N) * RealPoly.zbar(0, N) ** 7) * half
    rho = ((z2 ** 4 + re_term * CRational(params.c)) * CRational(params.eps0)
           + _abs2(N, 1) + z2 ** 5 + z2 * CRational(params.eps) - 1)
    return AlgebraicHypersurface(N, rho)


# --- Segre varieties -----------------------------------------------------------

class DegenerateSegreError(ValueError):
    pass


@dataclass(frozen=True)
class SegreVariety:
    """``Q_p = {Z : rho(Z, pbar) = 0}``; the last coordinate is stored as w."""

    p: tuple
    poly: HoloPoly

    def evaluate(self, Z):
        return self.poly.evaluate(list(Z[:-1]), Z[-1])

    def contains(self, Z) -> bool:
        return as_crational(self.evaluate(Z)).is_zero()


def segre_variety(H, p) -> SegreVariety:
    rho = getattr(H, "rho", H)
    N = rho.n
    if N < 2:
        raise ValueError("Segre varieties are built here for N >= 2")
    pb = [as_crational(x).conj() for x in p]
    out: dict = {}
    for f, c in rho.terms.items():
        t = c
        for j in range(N):
            if f[N + j]:
                t = t * pb[j] ** f[N + j]
        if t:
            key = f[:N]
            out[key] = out.get(key, ZERO) + t
    poly = HoloPoly._wrap(N - 1, out)
    if poly.is_zero():
        raise DegenerateSegreError("rho(Z, pbar) vanishes identically")
    return SegreVariety(tuple(as_crational(x) for x in p), poly)


# --- exact evaluation on the ray z = lambda e^{i pi/6} ----------------------------

_PHASES = {0: ONE, 3: I, 6: -ONE, 9: -I}


def ray_value(a: int, b: int, lam2, twelfths: int = 1) -> CRational:
    """z^a zbar^b at z = lambda e^{i twelfths pi/6} with lambda^2 = lam2 rational.

    Exact when a + b is even and the phase (a - b) * twelfths * 30 degrees is
    a multiple of 90 degrees; otherwise the value is irrational and an error
    is raised.
    """
    if (a + b) % 2:
        raise ValueError("odd total degree: lambda enters irrationally")
    phase = ((a - b) * twelfths) % 12
    if phase not in _PHASES:
        raise ValueError("phase is not a multiple of pi/2")
    return _PHASES[phase] * CRational(parse_rational(lam2) ** ((a + b) // 2))


def evaluate_on_ray(H, lam2, w=1, twelfths: int = 1) -> CRational:
    """Exact rho(mu, w) with mu = lambda e^{i twelfths pi/6} on C^2."""
    rho = getattr(H, "rho", H)
    if rho.n != 2:
        raise ValueError("ray evaluation is for hypersurfaces in C^2")
    w = as_crational(w)
    wb = w.conj()
    total = ZERO
    for f, c in rho.terms.items():
        a, m, b, mb = f[0], f[1], f[2], f[3]
        total = total + c * ray_value(a, b, lam2, twelfths) * w ** m * wb ** mb
    return total


def kn_phi(params: KNParams, lam2, eps=None) -> mpq:
    """phi(lambda, eps) = eps0 lambda^8 (1 - c) + lambda^10 + eps lambda^2."""
    lam2 = parse_rational(lam2)
    e = params.eps if eps is None else parse_rational(eps)
    return params.eps0 * lam2 ** 4 * (1 - params.c) + lam2 ** 5 + e * lam2


def kn_lambda_prime_sq(params: KNParams) -> mpq:
    """lambda'^2 = eps0 (c - 1) / 2, below the root eps0 (c - 1) of phi(., 0)."""
    return params.eps0 * (params.c - 1) / 2


def kn_eps_tilde(params: KNParams) -> mpq:
    """Largest 1/2^k with phi(lambda', 1/2^k) < 0."""
    lam2 = kn_lambda_prime_sq(params)
    k = 0
    while kn_phi(params, lam2, mpq(1, 2 ** k)) >= 0:
        k += 1
    return mpq(1, 2 ** k)


class NoWitnessError(ValueError):
    """The construction does not certify an interior point at this eps."""


@dataclass
class SegreWitness:
    """Exact data of a point q = (mu0, 1) on Q_{p0} with rho_eps(q) < 0.

    ``mu0 = lambda' e^{i pi/6}``; only lambda'^2 is stored.
    """

    params: KNParams
    p0: tuple
    lam2: mpq
    eps_tilde: mpq
    phi: mpq
    phi_zero: mpq
    psi: CRational
    rho_at_q: CRational
    on_segre: bool
    in_domain: bool

    def to_json(self) -> dict:
        return {"params": self.params.to_json(),
                "p0": [str(x) for x in self.p0],
                "q": {"z": "lambda' * exp(i*pi/6)", "w": "1"},
                "lambda_prime_squared": str(self.lam2),
                "eps_tilde": str(self.eps_tilde),
                "phi_lambda_eps": str(self.phi),
                "phi_lambda_0": str(self.phi_zero),
                "psi_mu0_eps": str(self.psi),
                "rho_at_q": str(self.rho_at_q),
                "on_segre": self.on_segre,
                "in_domain": self.in_domain}


def segre_interior_witness(params: KNParams, eps=None) -> SegreWitness:
    """Certify q = (lambda' e^{i pi/6}, 1) in Q_{p0} with rho_eps(q) < 0.

    lambda'^2 = eps0 (c - 1)/2 makes phi(lambda', 0) negative.  The
    threshold eps_tilde is the largest 1/2^k with phi(lambda', eps_tilde) < 0.
    ``eps`` overrides ``params.eps`` (so eps = eps_tilde can be requested).
    """
    e = params.eps if eps is None else parse_rational(eps)
    lam2 = kn_lambda_prime_sq(params)
    phi0 = kn_phi(params, lam2, 0)
    if phi0 >= 0:  # pragma: no cover - impossible for c > 1
        raise AssertionError("phi(lambda', 0) is not negative")
    eps_tilde = kn_eps_tilde(params)
    if e > eps_tilde:
        raise NoWitnessError(
            f"eps = {e} exceeds eps_tilde = {eps_tilde}; no witness by this construction")
    if e <= 0:
        raise ValueError("eps must be positive")
    used = KNParams(params.eps0, params.c, e)
    H = kohn_nirenberg_rho(used)
    p0 = (ZERO, ONE)
    Q = segre_variety(H, p0)
    seg_val = sum((c * ray_value(f[0], 0, lam2) * ONE ** f[1] for f, c in Q.poly.terms.items()), ZERO)
    on_segre = seg_val.is_zero()
    rho_q = evaluate_on_ray(H, lam2, 1)
    phi = kn_phi(params, lam2, e)
    psi = rho_q  # psi(z, eps) = rho_eps(z, 1)
    if psi != CRational(phi):  # pragma: no cover
        raise AssertionError("psi(mu0, eps) differs from phi(lambda', eps)")
    in_domain = rho_q.is_real() and rho_q.re < 0
    return SegreWitness(used, p0, lam2, eps_tilde, phi, phi0, psi, rho_q, on_segre, in_domain)


# --- Levi-form scan ------------------------------------------------------------

@dataclass
class ScanReport:
    samples: int
    min_eigenvalue: float
    max_eigenvalue: float
    negative_points: int
    failed_rays: int
    tol: float
    seed: int
    points: list = field(default_factory=list, repr=False)

    @property
    def strongly_pseudoconvex(self) -> bool:
        return self.negative_points == 0 and self.min_eigenvalue > self.tol

    def to_json(self) -> dict:
        return {"samples": self.samples, "min_eigenvalue": self.min_eigenvalue,
                "max_eigenvalue": self.max_eigenvalue, "negative_points": self.negative_points,
                "failed_rays": self.failed_rays, "tol": self.tol, "seed": self.seed,
                "inexact": True}


def pseudoconvexity_scan(H: AlgebraicHypersurface, m: int = 200, tol: float = 1e-9,
                         seed: int = 0, center=None, t_max: float = 10.0) -> ScanReport:
    """Sample ``m`` points of H along random rays from an interior point.

    Each ray is bracketed on a grid and refined with Brent's method; the
    Levi form uses an orthonormal tangent basis scaled by 1/|d rho|.
    """
    N = H.N
    c0 = np.zeros(N, dtype=complex) if center is None else np.asarray(center, dtype=complex)
    f0 = H.rho.evaluate(list(c0)).real
    if f0 >= 0:
        raise ValueError("center must satisfy rho < 0")
    rng = np.random.default_rng(seed)
    grid = np.linspace(0.0, t_max, 401)[1:]
    eigs_min, eigs_max = np.inf, -np.inf
    neg = failed = 0
    pts = []
    while len(pts) < m:
        if failed > 20 * m + 100:
            raise RuntimeError("too many rays missed the hypersurface")
        d = rng.normal(size=N) + 1j * rng.normal(size=N)
        d /= np.linalg.norm(d)

        def g(t):
            return H.rho.evaluate(list(c0 + t * d)).real

        prev_t, prev = 0.0, f0
        root = None
        for t in grid:
            val = g(t)
            if val > 0:
                root = brentq(g, prev_t, t, xtol=1e-15, rtol=1e-14)
                break
            prev_t, prev = t, val
        if root is None:
            failed += 1
            continue
        p = c0 + root * d
        try:
            lf = levi_form(H, list(p), tol)
        except SingularPointError:
            failed += 1
            continue
        pts.append(p)
        eigs_min = min(eigs_min, lf.min_eigenvalue)
        eigs_max = max(eigs_max, float(np.max(lf.eigenvalues)))
        if lf.negative:
            neg += 1
    return ScanReport(len(pts), float(eigs_min), float(eigs_max), neg, failed, tol, seed, pts)
