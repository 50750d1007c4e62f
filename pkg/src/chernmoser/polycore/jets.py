"""Holomorphic map germs and the hypersurface transport they induce.

A hypersurface near 0 is held in graph form: ``r = v + P(z, zbar, u)`` with
``P`` a :class:`RealPoly`, so the surface is ``{v = -P}``.  Transport by a
jet ``F = (f, g)`` is computed exactly up to a :class:`Truncation`.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from . import _sparse as sp
from .crational import CRational, ONE, ZERO, I, as_crational
from .poly import HoloPoly, MAX_WEIGHT, RealPoly, SesquiPoly

__all__ = ["Truncation", "HoloJet", "JetError", "pullback", "compose_truncated",
           "solve_graph", "model_restrict", "linear_change"]


class JetError(ValueError):
    pass


@dataclass(frozen=True)
class Truncation:
    """Keep terms with weighted degree <= weight and total degree <= degree."""

    weight: int = MAX_WEIGHT
    degree: int | None = None

    def __post_init__(self):
        if self.weight > MAX_WEIGHT:
            raise ValueError(f"weighted truncation order is capped at {MAX_WEIGHT}")
        if self.weight < 0 or (self.degree is not None and self.degree < 0):
            raise ValueError("truncation orders must be >= 0")

    def iterations(self) -> int:
        bound = self.weight if self.degree is None else min(self.weight, self.degree)
        return bound + 3


PIPELINE_TRUNCATION = Truncation(weight=MAX_WEIGHT, degree=4)


class HoloJet:
    """Truncated holomorphic germ ``(z, w) -> (f(z, w), g(z, w))``."""

    __slots__ = ("f", "g", "sig")

    def __init__(self, f, g: HoloPoly, sig=None):
        f = tuple(f)
        n = g.n
        if len(f) != n or any(fj.n != n for fj in f):
            raise JetError("jet components disagree on n")
        self.f = f
        self.g = g
        self.sig = sig

    @property
    def n(self) -> int:
        return self.g.n

    @classmethod
    def identity(cls, n: int, sig=None) -> "HoloJet":
        return cls([HoloPoly.z(j, n) for j in range(n)], HoloPoly.w(n), sig)

    def components(self) -> list:
        return list(self.f) + [self.g]

    def _with(self, comps) -> "HoloJet":
        return HoloJet(comps[:-1], comps[-1], self.sig)

    def is_identity(self) -> bool:
        return self == HoloJet.identity(self.n)

    def has_identity_linear_part(self) -> bool:
        ident = HoloJet.identity(self.n)
        return all(c.constant_term().is_zero() and c.linear_part() == e.linear_part()
                   for c, e in zip(self.components(), ident.components()))

    def fixes_origin(self) -> bool:
        return all(c.constant_term().is_zero() for c in self.components())

    def __eq__(self, other):
        return isinstance(other, HoloJet) and self.components() == other.components()

    def __hash__(self):
        return hash(tuple(self.components()))

    def truncate(self, trunc: Truncation) -> "HoloJet":
        return self._with([c.truncate(trunc.weight, trunc.degree) for c in self.components()])

    def compose(self, inner: "HoloJet", trunc: Truncation) -> "HoloJet":
        """``self o inner``, truncated."""
        n = self.n
        images = [c.terms for c in inner.components()]
        wts = inner.g.weights()
        comps = [HoloPoly._wrap(n, sp.psubs(c.terms, images, n + 1, wts,
                                            trunc.weight, trunc.degree))
                 for c in self.components()]
        return self._with(comps)

    def inverse(self, trunc: Truncation) -> "HoloJet":
        """Formal inverse by the fixed point G = id - (F - id) o G."""
        if not self.has_identity_linear_part():
            raise JetError("inverse is only provided for jets tangent to the identity")
        n = self.n
        ident = HoloJet.identity(n)
        tail = self._with([c - e for c, e in zip(self.components(), ident.components())])
        g = ident
        for _ in range(trunc.iterations() + 2):
            nxt = ident._with([e - t for e, t in zip(ident.components(),
                                                     tail.compose(g, trunc).components())])
            if nxt == g:
                break
            g = nxt
        else:
            raise JetError("jet inversion did not stabilise")
        return HoloJet(g.f, g.g, self.sig)

    def to_json(self) -> dict:
        return {"f": [fj.to_json() for fj in self.f], "g": self.g.to_json()}

    @classmethod
    def from_json(cls, data, sig=None) -> "HoloJet":
        f = [HoloPoly.from_json(x) for x in data["f"]]
        return cls(f, HoloPoly.from_json(data["g"]), sig)

    def __repr__(self):
        return f"HoloJet(n={self.n}, f=[{'; '.join(map(str, self.f))}], g={self.g})"


# --- (z, zbar, u, v) layout helpers ----------------------------------------

def _uv_weights(n):
    return (1,) * (2 * n) + (2, 2)


def _lift_holo(h: HoloPoly, conjugate: bool, trunc: Truncation) -> dict:
    """h(z, u + iv) or conj(h)(zbar, u - iv) in the (z, zbar, u, v) layout."""
    n = h.n
    nv = 2 * n + 2
    images = []
    for j in range(n):
        key = [0] * nv
        key[n + j if conjugate else j] = 1
        images.append({tuple(key): ONE})
    ku = [0] * nv
    ku[2 * n] = 1
    kv = [0] * nv
    kv[2 * n + 1] = 1
    images.append({tuple(ku): ONE, tuple(kv): -I if conjugate else I})
    terms = h.terms
    if conjugate:
        terms = {k: c.conj() for k, c in terms.items()}
    return sp.psubs(terms, images, nv, _uv_weights(n), trunc.weight, trunc.degree)


def solve_graph(E: dict, n: int, trunc: Truncation) -> RealPoly:
    """Solve ``E(z, zbar, u, v) = 0`` for v, returning ``P`` with ``v = -P``.

    ``E`` is in the (z, zbar, u, v) layout and must be ``c*v + ...`` with a
    nonzero real constant ``c``, all other terms vanishing at the origin to
    first order in v.  Each sweep of ``v <- v - E(v)/c`` fixes one more order.
    """
    nv = 2 * n + 2
    unit_v = tuple([0] * (2 * n + 1) + [1])
    c = E.get(unit_v)
    if c is None or not c.is_real() or c.is_zero():
        raise JetError("defining function has no nondegenerate v term")
    if E.get((0,) * nv):
        raise JetError("defining function does not vanish at the origin")
    if c != ONE:
        E = sp.pscale(E, ONE / c)
    wts = (1,) * (2 * n) + (2,)
    by_power: dict = {}
    for k, coeff in E.items():
        by_power.setdefault(k[-1], {})[k[:-1]] = coeff
    phi: dict = {}
    for _ in range(trunc.iterations() + 2):
        val = dict(by_power.get(0, {}))
        power = None
        for p in range(1, max(by_power) + 1):
            power = dict(phi) if p == 1 else sp.pmul(power, phi, wts, trunc.weight, trunc.degree)
            if not power:
                break
            if p in by_power:
                val = sp.padd(val, sp.pmul(by_power[p], power, wts, trunc.weight, trunc.degree))
        nxt = sp.truncate(sp.padd(phi, val, -1), wts, trunc.weight, trunc.degree)
        if nxt == phi:
            return RealPoly._wrap(n, sp.pscale(phi, -ONE))
        phi = nxt
    raise JetError("graph solve did not stabilise")


def pullback(P: RealPoly, jet: HoloJet, trunc: Truncation = PIPELINE_TRUNCATION) -> RealPoly:
    """Graph form of ``F^{-1}(M')`` where ``M' = {v + P = 0}`` and F = jet.

    This is the direct substitution ``Im g + P(f, fbar, Re g)`` followed by
    solving for v.
    """
    n = P.n
    if jet.n != n:
        raise JetError("jet and polynomial disagree on n")
    nv = 2 * n + 2
    wts = _uv_weights(n)
    mw, md = trunc.weight, trunc.degree
    f = [_lift_holo(fj, False, trunc) for fj in jet.f]
    fb = [_lift_holo(fj, True, trunc) for fj in jet.f]
    g = _lift_holo(jet.g, False, trunc)
    gb = _lift_holo(jet.g, True, trunc)
    half = CRational(mpq(1, 2))
    re_g = sp.pscale(sp.padd(g, gb), half)
    im_g = sp.pscale(sp.padd(g, gb, -1), CRational(0, mpq(-1, 2)))
    sub = sp.psubs(P.truncate(mw, md).terms, f + fb + [re_g], nv, wts, mw, md)
    E = sp.truncate(sp.padd(im_g, sub), wts, mw, md)
    return solve_graph(E, n, trunc)


def compose_truncated(P: RealPoly, jet: HoloJet, D: int = MAX_WEIGHT,
                      degree: int | None = None) -> RealPoly:
    """Graph form of the image ``F(M)`` of ``M = {v + P = 0}``, truncated.

    ``F`` must be tangent to the identity; this routine serves the
    normalization pipeline only (see :func:`linear_change` for frames).
    """
    trunc = Truncation(D, degree)
    if not jet.has_identity_linear_part():
        raise JetError("compose_truncated requires a jet tangent to the identity")
    if jet.is_identity():
        return P.truncate(trunc.weight, trunc.degree)
    return pullback(P, jet.inverse(trunc), trunc)


def model_restrict(P: SesquiPoly, l: int) -> RealPoly:
    """Substitute ``w = u + i|z|^2_l``, ``wbar = u - i|z|^2_l``."""
    n = P.n
    if not 0 <= l <= n / 2:
        raise ValueError("signature must satisfy 0 <= l <= n/2")
    nv = 2 * n + 1
    wts = (1,) * (2 * n) + (2,)
    images = []
    for j in range(2 * n):
        key = [0] * nv
        key[j] = 1
        images.append({tuple(key): ONE})
    norm = RealPoly.norm_l(n, l).terms
    ku = tuple([0] * (2 * n) + [1])
    w_img = sp.padd({ku: ONE}, sp.pscale(norm, I))
    wb_img = sp.padd({ku: ONE}, sp.pscale(norm, -I))
    images += [w_img, wb_img]
    return RealPoly._wrap(n, sp.psubs(P.terms, images, nv, wts))


def linear_change(P: RealPoly, lam, U, trunc: Truncation | None = None) -> RealPoly:
    """Graph form of the image of ``{v + P = 0}`` under ``(z, w) -> (lam z U, lam^2 w)``.

    ``U`` must preserve |z|^2_l so the quadratic part stays ``-|z|^2_l``;
    that is the caller's responsibility (see :mod:`chernmoser.cmw`).
    """
    from ..linalg import inverse, to_matrix

    n = P.n
    lam = as_crational(lam)
    Uinv = inverse(to_matrix(U))
    nv = 2 * n + 1
    wts = (1,) * (2 * n) + (2,)
    inv_lam = ONE / lam
    images = []
    # old z_k = lam^{-1} * sum_a znew_a * Uinv[a][k]
    for k in range(n):
        img = {}
        for a in range(n):
            c = Uinv[a][k] * inv_lam
            if c:
                key = [0] * nv
                key[a] = 1
                img[tuple(key)] = c
        images.append(img)
    for k in range(n):
        images.append({tuple(key[n:2 * n] + key[:n] + key[2 * n:]): c.conj()
                       for key, c in ((list(kk), cc) for kk, cc in images[k].items())})
    ku = tuple([0] * (2 * n) + [1])
    images.append({ku: inv_lam * inv_lam})
    mw, md = (None, None) if trunc is None else (trunc.weight, trunc.degree)
    out = sp.psubs(P.terms, images, nv, wts, mw, md)
    return RealPoly._wrap(n, sp.pscale(out, lam * lam))
