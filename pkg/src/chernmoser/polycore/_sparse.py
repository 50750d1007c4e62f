"""Dict-of-monomials kernel shared by every polynomial type.

A polynomial is ``dict[tuple[int, ...], CRational]`` keyed by exponent
tuples over a fixed variable layout.  Truncation is by a per-variable weight
vector (``maxw``) and by ordinary total degree (``maxd``); both gradings are
additive, so truncating after every product is exact as long as substituted
series have no constant term.
"""

from __future__ import annotations

from operator import add

from gmpy2 import mpq

from .crational import CRational

_Q0 = mpq(0)


def weight(key, wts) -> int:
    return sum(e * w for e, w in zip(key, wts))


def keep(key, wts, maxw, maxd) -> bool:
    if maxw is not None and weight(key, wts) > maxw:
        return False
    if maxd is not None and sum(key) > maxd:
        return False
    return True


def truncate(a: dict, wts, maxw=None, maxd=None) -> dict:
    if maxw is None and maxd is None:
        return dict(a)
    return {k: c for k, c in a.items() if keep(k, wts, maxw, maxd)}


def _finish(acc_re: dict, acc_im: dict) -> dict:
    out = {}
    for k, re in acc_re.items():
        im = acc_im[k]
        if re != 0 or im != 0:
            out[k] = CRational._raw(re, im)
    return out


def padd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, c in b.items():
        prev = out.get(k)
        if prev is None:
            out[k] = c if sign == 1 else -c
            continue
        re = prev.re + c.re if sign == 1 else prev.re - c.re
        im = prev.im + c.im if sign == 1 else prev.im - c.im
        if re == 0 and im == 0:
            del out[k]
        else:
            out[k] = CRational._raw(re, im)
    return out


def pscale(a: dict, c: CRational) -> dict:
    if c.is_zero():
        return {}
    cr, ci = c.re, c.im
    out = {}
    for k, v in a.items():
        out[k] = CRational._raw(v.re * cr - v.im * ci, v.re * ci + v.im * cr)
    return out


def pmul(a: dict, b: dict, wts, maxw=None, maxd=None) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    B = sorted(((weight(k, wts), sum(k), k, c.re, c.im) for k, c in b.items()),
               key=lambda t: t[0])
    acc_re: dict = {}
    acc_im: dict = {}
    for ka, ca in a.items():
        wa = weight(ka, wts)
        da = sum(ka)
        ar, ai = ca.re, ca.im
        for wb, db, kb, br, bi in B:
            if maxw is not None and wa + wb > maxw:
                break
            if maxd is not None and da + db > maxd:
                continue
            key = tuple(map(add, ka, kb))
            if key in acc_re:
                acc_re[key] += ar * br - ai * bi
                acc_im[key] += ar * bi + ai * br
            else:
                acc_re[key] = ar * br - ai * bi
                acc_im[key] = ar * bi + ai * br
    return _finish(acc_re, acc_im)


def ppow(a: dict, e: int, nvars: int, wts, maxw=None, maxd=None) -> dict:
    out = {(0,) * nvars: CRational._raw(mpq(1), _Q0)}
    for _ in range(e):
        out = pmul(out, a, wts, maxw, maxd)
    return out


def psubs(a: dict, images: list, nvars_target: int, wts_target,
          maxw=None, maxd=None) -> dict:
    """Substitute variable i of ``a`` by the polynomial ``images[i]``.

    Images must live in the target layout; prefix products of the monomial
    expansion are cached so shared factors are multiplied once.
    """
    one = {(0,) * nvars_target: CRational._raw(mpq(1), _Q0)}
    powers: dict = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            if e == 1:
                powers[key] = truncate(images[i], wts_target, maxw, maxd)
            else:
                powers[key] = pmul(power(i, e - 1), images[i], wts_target, maxw, maxd)
        return powers[key]

    prefix_cache: dict = {(): one}
    acc_re: dict = {}
    acc_im: dict = {}
    for mono in sorted(a):
        c = a[mono]
        prefix = ()
        cur = one
        for i, e in enumerate(mono):
            if e == 0:
                continue
            prefix = prefix + ((i, e),)
            hit = prefix_cache.get(prefix)
            if hit is None:
                hit = pmul(cur, power(i, e), wts_target, maxw, maxd)
                prefix_cache[prefix] = hit
            cur = hit
            if not cur:
                break
        cr, ci = c.re, c.im
        for k, v in cur.items():
            re = v.re * cr - v.im * ci
            im = v.re * ci + v.im * cr
            if k in acc_re:
                acc_re[k] += re
                acc_im[k] += im
            else:
                acc_re[k] = re
                acc_im[k] = im
    return _finish(acc_re, acc_im)


def pconj(a: dict, perm) -> dict:
    """Conjugate coefficients and permute exponent slots (z <-> zbar)."""
    out = {}
    for k, c in a.items():
        out[tuple(k[p] for p in perm)] = CRational._raw(c.re, -c.im)
    return out
