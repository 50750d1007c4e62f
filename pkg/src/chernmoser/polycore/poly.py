"""Polynomial types over exact complex rationals.

``RealPoly``
    polynomial in (z_1..z_n, zbar_1..zbar_n, u); weights 1, 1, 2.
``HoloPoly``
    holomorphic polynomial in (z_1..z_n, w); weights 1, 2.
``SesquiPoly``
    polynomial in (z, zbar, w, wbar); the tagged-w form consumed by
    :func:`model_restrict`.

All three share the flat exponent-tuple kernel in ``_sparse``.  Keys are
iterated in lexicographic order so serialized output is stable.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from gmpy2 import mpq

from . import _sparse as sp
from .crational import CRational, ONE, ZERO, I, as_crational

__all__ = ["RealPoly", "HoloPoly", "SesquiPoly", "RealityError", "MAX_WEIGHT"]

MAX_WEIGHT = 8


class RealityError(ValueError):
    """A polynomial that must be real-valued is not."""


class _PolyBase:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        if n < 1:
            raise ValueError("need at least one z variable")
        self.n = n
        self.terms = {}
        if terms:
            for key, c in terms.items():
                flat = self._flatten(key)
                if len(flat) != self.nvars():
                    raise ValueError(f"key {key!r} does not match layout of n={n}")
                if any(e < 0 for e in flat):
                    raise ValueError(f"negative exponent in {key!r}")
                c = as_crational(c)
                if not c.is_zero():
                    self.terms[flat] = self.terms.get(flat, ZERO) + c
            self.terms = {k: c for k, c in self.terms.items() if not c.is_zero()}

    # layout hooks -------------------------------------------------------
    def nvars(self) -> int:
        raise NotImplementedError

    def weights(self) -> tuple:
        raise NotImplementedError

    def _flatten(self, key) -> tuple:
        raise NotImplementedError

    @classmethod
    def _wrap(cls, n, terms):
        """Trusted constructor: keys are already flat; zero coefficients are dropped."""
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = {k: c for k, c in terms.items() if c.re or c.im}
        return obj

    def _new(self, terms):
        return self._wrap(self.n, terms)

    def _coerce(self, other):
        if isinstance(other, type(self)):
            if other.n != self.n:
                raise ValueError("variable count mismatch")
            return other
        c = as_crational(other)
        return self.constant(self.n, c)

    @classmethod
    def constant(cls, n, c=1):
        obj = cls._wrap(n, {})
        c = as_crational(c)
        if not c.is_zero():
            obj.terms[(0,) * obj.nvars()] = c
        return obj

    @classmethod
    def zero(cls, n):
        return cls._wrap(n, {})

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        return self._new(sp.padd(self.terms, self._coerce(other).terms))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(sp.padd(self.terms, self._coerce(other).terms, -1))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return self._new(sp.pscale(self.terms, -ONE))

    def __mul__(self, other):
        if isinstance(other, _PolyBase):
            other = self._coerce(other)
            return self._new(sp.pmul(self.terms, other.terms, self.weights()))
        return self._new(sp.pscale(self.terms, as_crational(other)))

    def __rmul__(self, other):
        return self._new(sp.pscale(self.terms, as_crational(other)))

    def __truediv__(self, other):
        return self._new(sp.pscale(self.terms, ONE / as_crational(other)))

    def __pow__(self, e: int):
        return self._new(sp.ppow(self.terms, e, self.nvars(), self.weights()))

    def mul_trunc(self, other, maxw=None, maxd=None):
        return self._new(sp.pmul(self.terms, self._coerce(other).terms,
                                 self.weights(), maxw, maxd))

    def truncate(self, maxw=None, maxd=None):
        return self._new(sp.truncate(self.terms, self.weights(), maxw, maxd))

    # queries ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, _PolyBase):
            return type(self) is type(other) and self.n == other.n and self.terms == other.terms
        try:
            return self.terms == self._coerce(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def weight_of(self, flat) -> int:
        return sp.weight(flat, self.weights())

    def weighted_component(self, d: int):
        if d < 0:
            raise ValueError("weighted degree must be >= 0")
        w = self.weights()
        return self._new({k: c for k, c in self.terms.items() if sp.weight(k, w) == d})

    def degree_component(self, d: int):
        return self._new({k: c for k, c in self.terms.items() if sum(k) == d})

    def max_weight(self) -> int:
        w = self.weights()
        return max((sp.weight(k, w) for k in self.terms), default=-1)

    def sorted_items(self):
        return sorted(self.terms.items())

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, {len(self.terms)} terms)"


class RealPoly(_PolyBase):
    """Polynomial in (z, zbar, u) with complex-rational coefficients.

    Keys are ``(alpha, beta, k)``: multi-index over z, over zbar, exponent of
    u.  Real-valuedness (coefficient of (alpha, beta, k) is the conjugate of
    the one at (beta, alpha, k)) is what the geometry needs; arithmetic does
    not enforce it so that intermediate values such as ``I * P`` are
    possible.  Use :meth:`is_real` / :meth:`require_real` at boundaries.
    """

    __slots__ = ()

    def nvars(self):
        return 2 * self.n + 1

    def weights(self):
        return (1,) * (2 * self.n) + (2,)

    def _flatten(self, key):
        if len(key) == 3 and not isinstance(key[0], int):
            alpha, beta, k = key
            return tuple(alpha) + tuple(beta) + (int(k),)
        return tuple(key)

    # structured access --------------------------------------------------
    def split_key(self, flat):
        n = self.n
        return flat[:n], flat[n:2 * n], flat[2 * n]

    def items3(self) -> Iterator:
        """Yield ``(alpha, beta, k, coeff)`` in lexicographic order."""
        for flat, c in self.sorted_items():
            a, b, k = self.split_key(flat)
            yield a, b, k, c

    def coeff(self, alpha, beta, k=0) -> CRational:
        return self.terms.get(tuple(alpha) + tuple(beta) + (k,), ZERO)

    @classmethod
    def z(cls, j: int, n: int) -> "RealPoly":
        """The coordinate z_j (0-based)."""
        key = [0] * (2 * n + 1)
        key[j] = 1
        return cls._wrap(n, {tuple(key): ONE})

    @classmethod
    def zbar(cls, j: int, n: int) -> "RealPoly":
        key = [0] * (2 * n + 1)
        key[n + j] = 1
        return cls._wrap(n, {tuple(key): ONE})

    @classmethod
    def u(cls, n: int) -> "RealPoly":
        key = [0] * (2 * n + 1)
        key[2 * n] = 1
        return cls._wrap(n, {tuple(key): ONE})

    @classmethod
    def monomial(cls, alpha, beta, k=0, c=1) -> "RealPoly":
        n = len(alpha)
        return cls(n, {(tuple(alpha), tuple(beta), k): c})

    @classmethod
    def norm_l(cls, n: int, l: int) -> "RealPoly":
        """|z|^2_l = -sum_{j<=l} |z_j|^2 + sum_{j>l} |z_j|^2."""
        terms = {}
        for j in range(n):
            key = [0] * (2 * n + 1)
            key[j] = 1
            key[n + j] = 1
            terms[tuple(key)] = CRational(-1 if j < l else 1)
        return cls._wrap(n, terms)

    # reality ------------------------------------------------------------
    def _conj_perm(self):
        n = self.n
        return list(range(n, 2 * n)) + list(range(n)) + [2 * n]

    def conj(self) -> "RealPoly":
        return self._new(sp.pconj(self.terms, self._conj_perm()))

    def is_real(self) -> bool:
        return self.conj().terms == self.terms

    def reality_violations(self) -> list:
        conj = self.conj().terms
        bad = []
        for flat in sorted(set(self.terms) | set(conj)):
            if self.terms.get(flat, ZERO) != conj.get(flat, ZERO):
                bad.append(self.split_key(flat))
        return bad

    def require_real(self) -> "RealPoly":
        bad = self.reality_violations()
        if bad:
            a, b, k = bad[0]
            raise RealityError(
                f"coefficient at alpha={list(a)}, beta={list(b)}, k={k} is not the "
                f"conjugate of its mirror key ({len(bad)} offending keys)")
        return self

    def real_part(self) -> "RealPoly":
        return (self + self.conj()) * CRational(mpq(1, 2))

    def imag_part(self) -> "RealPoly":
        return (self - self.conj()) * CRational(0, mpq(-1, 2))

    # grading ------------------------------------------------------------
    def bidegree_component(self, p: int, q: int, k: int) -> "RealPoly":
        if min(p, q, k) < 0:
            raise ValueError("bidegree indices must be >= 0")
        n = self.n
        return self._new({f: c for f, c in self.terms.items()
                          if sum(f[:n]) == p and sum(f[n:2 * n]) == q and f[2 * n] == k})

    def bidegrees(self) -> set:
        n = self.n
        return {(sum(f[:n]), sum(f[n:2 * n]), f[2 * n]) for f in self.terms}

    def u_free(self) -> bool:
        return all(f[2 * self.n] == 0 for f in self.terms)

    # calculus -----------------------------------------------------------
    def diff(self, slot: int) -> "RealPoly":
        """Derivative with respect to flat variable ``slot``."""
        out = {}
        for f, c in self.terms.items():
            e = f[slot]
            if e:
                g = list(f)
                g[slot] -= 1
                out[tuple(g)] = c * e
        return self._new(out)

    def diff_z(self, j: int) -> "RealPoly":
        return self.diff(j)

    def diff_zbar(self, j: int) -> "RealPoly":
        return self.diff(self.n + j)

    def divide_by_var(self, slot: int) -> "RealPoly":
        """Exact division by a variable; every term must contain it."""
        out = {}
        for f, c in self.terms.items():
            if f[slot] == 0:
                raise ValueError("term not divisible by requested variable")
            g = list(f)
            g[slot] -= 1
            out[tuple(g)] = c
        return self._new(out)

    def evaluate(self, z, zbar=None, u=0):
        """Evaluate at a point; exact for CRational inputs, float otherwise.

        ``zbar`` defaults to the conjugate of ``z`` (evaluation on the real
        slice); passing it explicitly evaluates the complexification.
        """
        exact = all(isinstance(x, (CRational, int)) for x in list(z) + [u]) and (
            zbar is None or all(isinstance(x, (CRational, int)) for x in zbar))
        if exact:
            zz = [as_crational(x) for x in z]
            zb = [x.conj() for x in zz] if zbar is None else [as_crational(x) for x in zbar]
            uu = as_crational(u)
            total = ZERO
            for f, c in self.terms.items():
                t = c
                for x, e in zip(zz + zb + [uu], f):
                    if e:
                        t = t * x ** e
                total = total + t
            return total
        zz = [complex(x) for x in z]
        zb = [x.conjugate() for x in zz] if zbar is None else [complex(x) for x in zbar]
        uu = complex(u)
        vals = zz + zb + [uu]
        total = 0j
        for f, c in self.terms.items():
            t = complex(c)
            for x, e in zip(vals, f):
                if e:
                    t *= x ** e
            total += t
        return total

    # io -----------------------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "terms": [
            {"alpha": list(a), "beta": list(b), "k": k,
             "re": str(c.re), "im": str(c.im)} for a, b, k, c in self.items3()]}

    @classmethod
    def from_json(cls, data, n: int | None = None, check_real: bool = True) -> "RealPoly":
        if isinstance(data, dict):
            n = data.get("n", n)
            entries = data["terms"]
        else:
            entries = data
        if n is None:
            if not entries:
                raise ValueError("cannot infer n from an empty term list")
            n = len(entries[0]["alpha"])
        terms = {}
        for t in entries:
            alpha, beta = tuple(t["alpha"]), tuple(t["beta"])
            if len(alpha) != n or len(beta) != n:
                raise ValueError(f"multi-index length mismatch in term {t!r}")
            key = (alpha, beta, int(t.get("k", 0)))
            c = CRational(t.get("re", "0"), t.get("im", "0"))
            flat = alpha + beta + (key[2],)
            if flat in {a + b + (k,) for (a, b, k) in terms}:
                raise ValueError(f"duplicate key {key!r}")
            terms[key] = c
        poly = cls(n, terms)
        if check_real:
            poly.require_real()
        return poly

    def __str__(self):
        if not self.terms:
            return "0"
        n = self.n
        parts = []
        for a, b, k, c in self.items3():
            mono = []
            for j, e in enumerate(a):
                if e:
                    mono.append(f"z{j + 1}" + (f"^{e}" if e > 1 else ""))
            for j, e in enumerate(b):
                if e:
                    mono.append(f"zb{j + 1}" + (f"^{e}" if e > 1 else ""))
            if k:
                mono.append("u" + (f"^{k}" if k > 1 else ""))
            parts.append(f"({c})" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)


class HoloPoly(_PolyBase):
    """Holomorphic polynomial in (z_1..z_n, w); keys ``(alpha, m)``.

    The weighted degree of a term is ``|alpha| + 2m``.
    """

    __slots__ = ()

    def nvars(self):
        return self.n + 1

    def weights(self):
        return (1,) * self.n + (2,)

    def _flatten(self, key):
        if len(key) == 2 and not isinstance(key[0], int):
            alpha, m = key
            return tuple(alpha) + (int(m),)
        return tuple(key)

    @classmethod
    def z(cls, j: int, n: int) -> "HoloPoly":
        key = [0] * (n + 1)
        key[j] = 1
        return cls._wrap(n, {tuple(key): ONE})

    @classmethod
    def w(cls, n: int) -> "HoloPoly":
        return cls._wrap(n, {(0,) * n + (1,): ONE})

    def items2(self):
        for flat, c in self.sorted_items():
            yield flat[:self.n], flat[self.n], c

    def coeff(self, alpha, m=0) -> CRational:
        return self.terms.get(tuple(alpha) + (m,), ZERO)

    def linear_part(self) -> "HoloPoly":
        return self._new({f: c for f, c in self.terms.items() if sum(f) == 1})

    def constant_term(self) -> CRational:
        return self.terms.get((0,) * (self.n + 1), ZERO)

    def evaluate(self, z, w):
        exact = all(isinstance(x, (CRational, int)) for x in list(z) + [w])
        vals = [as_crational(x) for x in z] + [as_crational(w)] if exact else \
            [complex(x) for x in z] + [complex(w)]
        total = ZERO if exact else 0j
        for f, c in self.terms.items():
            t = c if exact else complex(c)
            for x, e in zip(vals, f):
                if e:
                    t = t * x ** e
            total = total + t
        return total

    def to_json(self) -> dict:
        return {"n": self.n, "terms": [
            {"alpha": list(a), "m": m, "re": str(c.re), "im": str(c.im)}
            for a, m, c in self.items2()]}

    @classmethod
    def from_json(cls, data, n: int | None = None) -> "HoloPoly":
        if isinstance(data, dict):
            n = data.get("n", n)
            entries = data["terms"]
        else:
            entries = data
        if n is None:
            n = len(entries[0]["alpha"])
        return cls(n, {(tuple(t["alpha"]), int(t.get("m", 0))):
                       CRational(t.get("re", "0"), t.get("im", "0")) for t in entries})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for a, m, c in self.items2():
            mono = [f"z{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(a) if e]
            if m:
                mono.append("w" + (f"^{m}" if m > 1 else ""))
            parts.append(f"({c})" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)


class SesquiPoly(_PolyBase):
    """Polynomial in (z, zbar, w, wbar); keys ``(alpha, beta, m, mbar)``."""

    __slots__ = ()

    def nvars(self):
        return 2 * self.n + 2

    def weights(self):
        return (1,) * (2 * self.n) + (2, 2)

    def _flatten(self, key):
        if len(key) == 4 and not isinstance(key[0], int):
            alpha, beta, m, mb = key
            return tuple(alpha) + tuple(beta) + (int(m), int(mb))
        return tuple(key)

    @classmethod
    def from_holo(cls, h: HoloPoly, conjugate: bool = False) -> "SesquiPoly":
        """Embed h(z, w), or its conjugate h̄(z̄, w̄)."""
        n = h.n
        out = {}
        for f, c in h.terms.items():
            a, m = f[:n], f[n]
            if conjugate:
                out[(0,) * n + a + (0, m)] = c.conj()
            else:
                out[a + (0,) * n + (m, 0)] = c
        return cls._wrap(n, out)

    @classmethod
    def from_real(cls, p: RealPoly) -> "SesquiPoly":
        """Embed a (z, zbar) polynomial; u-dependence is not allowed here."""
        if not p.u_free():
            raise ValueError("from_real expects a u-free polynomial")
        return cls._wrap(p.n, {f[:-1] + (0, 0): c for f, c in p.terms.items()})

    @classmethod
    def w(cls, n):
        return cls._wrap(n, {(0,) * (2 * n) + (1, 0): ONE})

    @classmethod
    def wbar(cls, n):
        return cls._wrap(n, {(0,) * (2 * n) + (0, 1): ONE})

    @classmethod
    def z(cls, j, n):
        key = [0] * (2 * n + 2)
        key[j] = 1
        return cls._wrap(n, {tuple(key): ONE})

    @classmethod
    def zbar(cls, j, n):
        key = [0] * (2 * n + 2)
        key[n + j] = 1
        return cls._wrap(n, {tuple(key): ONE})

    def conj(self) -> "SesquiPoly":
        n = self.n
        perm = list(range(n, 2 * n)) + list(range(n)) + [2 * n + 1, 2 * n]
        return self._new(sp.pconj(self.terms, perm))

    def is_real(self) -> bool:
        return self.conj().terms == self.terms

    def imag_part(self) -> "SesquiPoly":
        return (self - self.conj()) * CRational(0, mpq(-1, 2))

    def real_part(self) -> "SesquiPoly":
        return (self + self.conj()) * CRational(mpq(1, 2))


def holo_from_real(p: RealPoly) -> HoloPoly:
    """Read a zbar-free RealPoly as holomorphic, with u renamed to w."""
    n = p.n
    out = {}
    for f, c in p.terms.items():
        if any(f[n:2 * n]):
            raise ValueError("polynomial depends on zbar")
        out[f[:n] + (f[2 * n],)] = c
    return HoloPoly._wrap(n, out)


def real_from_holo(h: HoloPoly) -> RealPoly:
    """Inverse of :func:`holo_from_real` (w renamed to u)."""
    n = h.n
    return RealPoly._wrap(n, {f[:n] + (0,) * n + (f[n],): c for f, c in h.terms.items()})
