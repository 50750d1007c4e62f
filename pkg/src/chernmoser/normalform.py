"""Fourth-order normal form of a pre-normalized real hypersurface.

Input is the graph function ``P`` of ``M = {v + P(z, zbar, u) = 0}`` with
``P = -|z|^2_l + (weight >= 3)``.  Each step picks a holomorphic jet tangent
to the identity whose first-order effect on ``P`` is

    P' = P - Im g(z, u + i|z|^2_l) + 2 Re <f - z, zbar>_l,

applies it exactly with :func:`compose_truncated` and asserts the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hermitian import Signature, fischer_split_22, laplacian_l
from .polycore import (CRational, HoloJet, HoloPoly, I, ONE, PIPELINE_TRUNCATION,
                       RealPoly, Truncation, ZERO, compose_truncated)

__all__ = ["PrenormalError", "NormalForm4", "validate_prenormal", "kill_wt3",
           "normalize_wt4", "cleanup_low_order", "normalize_to_order4", "extract_cmw",
           "model_imag", "model_re_pairing"]

HALF = CRational(1, 0) / 2


class PrenormalError(ValueError):
    """Input is not of the form v - |z|^2_l + O_wt(3)."""

    def __init__(self, message: str, offending: list | None = None):
        super().__init__(message)
        self.offending = offending or []


@dataclass
class NormalForm4:
    """``P = -|z|^2_l + s/4 + residual`` reached by ``jet``."""

    s: RealPoly
    jet: HoloJet
    residual: RealPoly
    sig: Signature
    trunc: Truncation = PIPELINE_TRUNCATION

    @property
    def graph(self) -> RealPoly:
        return -self.sig.norm_poly() + self.s * HALF * HALF + self.residual

    def to_json(self) -> dict:
        return {"s": self.s.to_json(), "jet": self.jet.to_json(),
                "residual": self.residual.to_json()}


# --- helpers -------------------------------------------------------------------

def _holo_from_keys(n: int, alpha, m: int, c) -> HoloPoly:
    return HoloPoly._wrap(n, {tuple(alpha) + (m,): c})


def _split_by_zbar(Q: RealPoly):
    """Write a (p,1) polynomial as sum_k zbar_k A_k(z); yields (k, alpha, coeff)."""
    n = Q.n
    for alpha, beta, _k, c in Q.items3():
        k = beta.index(1)
        yield k, alpha, c


def model_imag(g: HoloPoly, l: int, trunc: Truncation | None = None) -> RealPoly:
    """``Im g(z, u + i|z|^2_l)`` as a RealPoly."""
    return _model_holo(g, l, trunc).imag_part()


def model_re_pairing(f, l: int, trunc: Truncation | None = None) -> RealPoly:
    """``2 Re <f, zbar>_l`` restricted to ``w = u + i|z|^2_l``."""
    n = len(f)
    total = RealPoly.zero(n)
    for k, fk in enumerate(f):
        term = _model_holo(fk, l, trunc) * RealPoly.zbar(k, n)
        total = total - term if k < l else total + term
    return total + total.conj()


def _model_holo(h: HoloPoly, l: int, trunc: Truncation | None) -> RealPoly:
    """``h(z, u + i|z|^2_l)`` as a (generally non-real) RealPoly-layout polynomial."""
    n = h.n
    w = RealPoly.u(n) + RealPoly.norm_l(n, l) * I
    maxw, maxd = (None, None) if trunc is None else (trunc.weight, trunc.degree)
    out = RealPoly.zero(n)
    wpow = {0: RealPoly.constant(n, 1)}
    for alpha, m, c in h.items2():
        if m not in wpow:
            wpow[m] = w ** m
        mono = RealPoly._wrap(n, {tuple(alpha) + (0,) * n + (0,): c})
        out = out + mono.mul_trunc(wpow[m], maxw, maxd)
    return out


def _jet(n: int, f_tail, g_tail, sig) -> HoloJet:
    f = [HoloPoly.z(j, n) + f_tail[j] for j in range(n)]
    return HoloJet(f, HoloPoly.w(n) + g_tail, sig)


def _transport(P: RealPoly, jet: HoloJet, trunc: Truncation) -> RealPoly:
    return compose_truncated(P, jet, trunc.weight, trunc.degree)


# --- pipeline steps ------------------------------------------------------------

def validate_prenormal(P: RealPoly, sig: Signature) -> RealPoly:
    """Check reality and that the weight <= 2 part of P is exactly -|z|^2_l."""
    if P.n != sig.n:
        raise PrenormalError(f"polynomial has n={P.n}, signature has n={sig.n}")
    bad = P.reality_violations()
    if bad:
        raise PrenormalError("defining polynomial is not real", bad)
    low = RealPoly.zero(P.n)
    for d in range(3):
        low = low + P.weighted_component(d)
    diff = low + sig.norm_poly()
    if diff:
        offending = [(a, b, k, str(c)) for a, b, k, c in diff.items3()]
        raise PrenormalError(
            "weight <= 2 part must equal -|z|^2_l; apply a linear Levi "
            "diagonalization and the scaling (z, w) -> (sqrt|c| z, c w) first",
            offending)
    return P


def kill_wt3(P: RealPoly, sig: Signature, trunc: Truncation = PIPELINE_TRUNCATION):
    """Remove the weight-3 part with g = a(z) w + h(z), f = z + f2(z)."""
    n, l = sig.n, sig.l
    P3 = P.weighted_component(3)
    if not P3:
        return HoloJet.identity(n, sig), P.truncate(trunc.weight, trunc.degree)
    g = HoloPoly.zero(n)
    for alpha, beta, k, c in P3.items3():
        if sum(beta) == 0:
            # u * (1,0) gives a(z) w; a (3,0) term is cancelled by a pure cubic
            g = g + _holo_from_keys(n, alpha, k, 2 * I * c)
    T = P3 - model_imag(g, l)
    f2 = [HoloPoly.zero(n) for _ in range(n)]
    for k, alpha, c in _split_by_zbar(T.bidegree_component(2, 1, 0)):
        f2[k] = f2[k] + _holo_from_keys(n, alpha, 0, -sig.delta(k) * c)
    jet = _jet(n, f2, g, sig)
    out = _transport(P, jet, trunc)
    if out.weighted_component(3):  # pragma: no cover
        raise AssertionError("weight-3 terms survived")
    return jet, out


def normalize_wt4(P: RealPoly, sig: Signature, trunc: Truncation = PIPELINE_TRUNCATION):
    """Reduce the weight-4 part to s/4 with s l-harmonic of bidegree (2,2).

    Returns ``(jet, s, P4)``.
    """
    n, l = sig.n, sig.l
    if P.weighted_component(3):
        raise ValueError("weight-3 terms must be removed first")
    P4 = P.weighted_component(4)
    norm = sig.norm_poly()
    c_uu = P4.coeff((0,) * n, (0,) * n, 2)
    g = _holo_from_keys(n, (0,) * n, 2, I * c_uu)
    for alpha, beta, k, c in P4.items3():
        if sum(beta) == 0 and sum(alpha) in (2, 4):
            g = g + _holo_from_keys(n, alpha, k, 2 * I * c)
    q2 = HoloPoly._wrap(n, {key[:n] + (0,): c for key, c in g.terms.items() if key[n] == 1})
    re_q2 = (_model_holo(q2, l, None).real_part())
    f3 = [HoloPoly.zero(n) for _ in range(n)]
    T31 = (P4 - norm * re_q2).bidegree_component(3, 1, 0)
    for k, alpha, c in _split_by_zbar(T31):
        f3[k] = f3[k] + _holo_from_keys(n, alpha, 0, -sig.delta(k) * c)
    K = P4.bidegree_component(1, 1, 1).divide_by_var(2 * n)
    W = P4.bidegree_component(2, 2, 0) + norm * norm * c_uu
    split = fischer_split_22(W, sig)
    H = K * (-HALF) + split.A * (I * HALF)
    for k, alpha, c in _split_by_zbar(H):
        f3[k] = f3[k] + _holo_from_keys(n, alpha, 1, sig.delta(k) * c)
    s = split.N * 4
    jet = _jet(n, f3, g, sig)
    out = _transport(P, jet, trunc)
    if out.weighted_component(3) or out.weighted_component(4) != split.N:  # pragma: no cover
        raise AssertionError("weight-4 normalization failed")
    return jet, s, out


def _offending(P: RealPoly, n: int, max_degree: int) -> RealPoly:
    keep = {key: c for key, c in P.terms.items()
            if sum(key[:2 * n]) + 2 * key[2 * n] >= 5
            and sum(key[:2 * n]) + key[2 * n] <= max_degree}
    return RealPoly._wrap(n, keep)


def cleanup_low_order(P: RealPoly, sig: Signature, trunc: Truncation = PIPELINE_TRUNCATION,
                      max_degree: int = 4):
    """Remove ordinary-degree <= 4 terms of weight >= 5 (all carry a power of u).

    Each pass treats the lowest offending degree; the correction's side
    effects have strictly higher degree, so passes terminate.
    """
    n, l = sig.n, sig.l
    total = HoloJet.identity(n, sig)
    for _ in range(max_degree + 2):
        bad = _offending(P, n, max_degree)
        if not bad:
            return total, P
        d = min(sum(key[:2 * n]) + key[2 * n] for key in bad.terms)
        g = HoloPoly.zero(n)
        f = [HoloPoly.zero(n) for _ in range(n)]
        for alpha, beta, j, c in bad.degree_component(d).items3():
            p, q = sum(alpha), sum(beta)
            if q == 0:
                g = g + _holo_from_keys(n, alpha, j, (2 * I if p else I) * c)
            elif p == 0 or (p == 1 and q >= 2):
                continue  # conjugate of a handled term
            elif q == 1:
                k = beta.index(1)
                scale = HALF if p == 1 else ONE
                f[k] = f[k] + _holo_from_keys(n, alpha, j, -sig.delta(k) * c * scale)
            else:  # pragma: no cover - needs degree >= 5
                raise AssertionError(f"unexpected bidegree ({p},{q}) in cleanup")
        jet = _jet(n, f, g, sig)
        P = _transport(P, jet, trunc)
        total = jet.compose(total, trunc)
    raise AssertionError("cleanup did not terminate")  # pragma: no cover


def normalize_to_order4(P: RealPoly, sig: Signature,
                        trunc: Truncation = PIPELINE_TRUNCATION) -> NormalForm4:
    """Full pipeline; the jet maps M onto ``{v - |z|^2_l + s/4 + residual = 0}``."""
    validate_prenormal(P, sig)
    P = P.truncate(trunc.weight, trunc.degree)
    jet3, P3 = kill_wt3(P, sig, trunc)
    jet4, s, P4 = normalize_wt4(P3, sig, trunc)
    jetc, Pf = cleanup_low_order(P4, sig, trunc)
    jet = jetc.compose(jet4.compose(jet3, trunc), trunc)
    residual = Pf + sig.norm_poly() - s * HALF * HALF
    if not laplacian_l(s, sig).is_zero():  # pragma: no cover
        raise AssertionError("s is not harmonic")
    if any(sum(k[:2 * sig.n]) + k[2 * sig.n] <= 4 for k in residual.terms):  # pragma: no cover
        raise AssertionError("residual has low-order terms")
    return NormalForm4(s, HoloJet(jet.f, jet.g, sig), residual, sig, trunc)


def extract_cmw(nf: NormalForm4):
    from .cmw import CMWTensor
    return CMWTensor.from_quartic(nf.s, nf.sig)
