"""The fourth-order curvature tensor read off a normal form.

A :class:`CMWTensor` stores ``s[a, b, c, d]`` (slots z, zbar, z, zbar) with
quartic ``sum s[a,b,c,d] z_a zbar_b z_c zbar_d``.  Also here: trace
contraction, frame changes, pseudo-unitary generation, the fractional linear
normalizer of the model and the null-cone sign test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .hermitian import (HermitianMatrix, NullVector, Signature, harmonic_22_basis,
                        laplacian_l, null_cone_samples, null_evaluation_rank)
from .polycore import (CRational, HoloPoly, I, ONE, ZERO, RealPoly, SesquiPoly,
                       as_crational, model_restrict)

__all__ = ["CMWTensor", "InvariantReport", "ObstructionReport", "MoebiusParams",
           "MoebiusMap", "PseudoUnitaryError", "contract_trace", "change_basis",
           "transform_frame", "is_pseudo_unitary", "cayley", "generate_pseudo_unitary",
           "moebius_normalizer", "null_cone_definiteness", "null_cone_zero_test",
           "g_laplacian", "check_invariants"]


def _index_set(n):
    return itertools.product(range(n), repeat=4)


class CMWTensor:
    """Four-index array over Q(i) with the symmetries of a curvature quartic."""

    __slots__ = ("sig", "s")

    def __init__(self, sig: Signature, s: dict | None = None):
        self.sig = sig
        self.s = {k: v for k, v in (s or {}).items() if not as_crational(v).is_zero()}
        self.s = {k: as_crational(v) for k, v in self.s.items()}
        if any(len(k) != 4 or not all(0 <= i < sig.n for i in k) for k in self.s):
            raise ValueError("tensor index out of range")

    @property
    def n(self) -> int:
        return self.sig.n

    def __getitem__(self, idx) -> CRational:
        return self.s.get(tuple(idx), ZERO)

    def __eq__(self, other):
        return isinstance(other, CMWTensor) and self.sig == other.sig and self.s == other.s

    def __neg__(self):
        return CMWTensor(self.sig, {k: -v for k, v in self.s.items()})

    def scale(self, c) -> "CMWTensor":
        c = as_crational(c)
        return CMWTensor(self.sig, {k: c * v for k, v in self.s.items()})

    def is_zero(self) -> bool:
        return not self.s

    @classmethod
    def zero(cls, sig: Signature) -> "CMWTensor":
        return cls(sig)

    @classmethod
    def from_quartic(cls, s: RealPoly, sig: Signature) -> "CMWTensor":
        """The symmetric array whose quartic is ``s`` (bidegree (2,2), u-free).

        A monomial z_a z_c zbar_b zbar_d is shared equally by the ordered
        index tuples in its orbit: 2 orderings of {a, c} when a != c, and
        likewise for {b, d}.
        """
        n = sig.n
        if s.n != n:
            raise ValueError("quartic and signature disagree on n")
        out = {}
        for alpha, beta, k, c in s.items3():
            if k or sum(alpha) != 2 or sum(beta) != 2:
                raise ValueError("quartic must be u-free of bidegree (2,2)")
            zs = [j for j in range(n) for _ in range(alpha[j])]
            zbs = [j for j in range(n) for _ in range(beta[j])]
            share = c / (len(set(zs)) * len(set(zbs)))
            for a, cc in set(itertools.permutations(zs)):
                for b, d in set(itertools.permutations(zbs)):
                    out[(a, b, cc, d)] = share
        return cls(sig, out)

    def quartic(self) -> RealPoly:
        n = self.n
        terms: dict = {}
        for (a, b, c, d), v in self.s.items():
            key = [0] * (2 * n + 1)
            key[a] += 1
            key[c] += 1
            key[n + b] += 1
            key[n + d] += 1
            key = tuple(key)
            terms[key] = terms.get(key, ZERO) + v
        return RealPoly._wrap(n, terms)

    def evaluate(self, X, Y, Z, W):
        """sum s[a,b,c,d] X_a conj(Y_b) Z_c conj(W_d)."""
        exact = all(isinstance(x, (CRational, int)) for v in (X, Y, Z, W) for x in v)
        if exact:
            X, Y, Z, W = ([as_crational(x) for x in v] for v in (X, Y, Z, W))
            Yc = [y.conj() for y in Y]
            Wc = [w.conj() for w in W]
            total = ZERO
            for (a, b, c, d), v in self.s.items():
                total = total + v * X[a] * Yc[b] * Z[c] * Wc[d]
            return total
        return complex(np.einsum("abcd,a,b,c,d->", self.to_numpy(), np.asarray(X, complex),
                                 np.conj(np.asarray(Y, complex)), np.asarray(Z, complex),
                                 np.conj(np.asarray(W, complex))))

    def value_on(self, v):
        """S(v, vbar, v, vbar), a real number for a symmetric tensor."""
        return self.evaluate(v, v, v, v)

    def to_numpy(self):
        arr = np.zeros((self.n,) * 4, dtype=complex)
        for k, v in self.s.items():
            arr[k] = complex(v)
        return arr

    def check_invariants(self) -> "InvariantReport":
        return check_invariants(self)

    def to_json(self) -> dict:
        return {"n": self.sig.n, "l": self.sig.l,
                "entries": [{"index": list(k), "re": str(v.re), "im": str(v.im)}
                            for k, v in sorted(self.s.items())]}

    @classmethod
    def from_json(cls, data) -> "CMWTensor":
        sig = Signature(int(data["n"]), int(data["l"]))
        return cls(sig, {tuple(e["index"]): CRational(e.get("re", "0"), e.get("im", "0"))
                         for e in data["entries"]})

    def __repr__(self):
        return f"CMWTensor(n={self.n}, l={self.sig.l}, nonzero={len(self.s)})"


@dataclass
class InvariantReport:
    symmetric: list = field(default_factory=list)
    conjugate: list = field(default_factory=list)
    trace: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.symmetric or self.conjugate or self.trace)

    def __bool__(self):
        return self.ok


def check_invariants(S: CMWTensor) -> InvariantReport:
    """Exact check of the index symmetries, conjugate symmetry and trace."""
    rep = InvariantReport()
    for a, b, c, d in _index_set(S.n):
        v = S[a, b, c, d]
        if v != S[c, b, a, d] or v != S[c, d, a, b]:
            rep.symmetric.append((a, b, c, d))
        if v.conj() != S[b, a, d, c]:
            rep.conjugate.append((a, b, c, d))
    T = contract_trace(S, HermitianMatrix(S.sig.g0()), check=False)
    rep.trace = [(c, d) for c in range(S.n) for d in range(S.n) if not T[c][d].is_zero()]
    return rep


# --- traces and frames ---------------------------------------------------------

def g_laplacian(P: RealPoly, g: HermitianMatrix) -> RealPoly:
    """sum g^{ba} d/dz_a d/dzbar_b with g^{..} the inverse matrix."""
    ginv = g.inverse()
    out = RealPoly.zero(P.n)
    for a in range(P.n):
        da = P.diff_z(a)
        for b in range(P.n):
            c = ginv[b, a]
            if c:
                out = out + da.diff_zbar(b) * c
    return out


def contract_trace(S: CMWTensor, g: HermitianMatrix, check: bool = True) -> list:
    """T[c][d] = sum_{a,b} g^{ba} s[a,b,c,d].

    With ``check`` the result is compared with the Laplacian identity
    Delta_g(quartic) = 4 sum T[c][d] z_c zbar_d.
    """
    n = S.n
    if len(g) != n:
        raise ValueError("metric size mismatch")
    try:
        ginv = g.inverse()
    except linalg.SingularMatrixError as exc:
        raise linalg.SingularMatrixError("metric is singular") from exc
    T = [[ZERO] * n for _ in range(n)]
    for (a, b, c, d), v in S.s.items():
        coef = ginv[b, a]
        if coef:
            T[c][d] = T[c][d] + coef * v
    if check:
        lhs = g_laplacian(S.quartic(), g)
        rhs = RealPoly.zero(n)
        for c in range(n):
            for d in range(n):
                if T[c][d]:
                    rhs = rhs + RealPoly.z(c, n) * RealPoly.zbar(d, n) * (4 * T[c][d])
        if lhs != rhs:  # pragma: no cover
            raise AssertionError("trace contraction disagrees with the Laplacian identity")
    return T


def change_basis(S: CMWTensor, A, sig: Signature | None = None) -> CMWTensor:
    """s'[p,q,r,t] = sum A[p][a] conj(A[q][b]) A[r][c] conj(A[t][d]) s[a,b,c,d].

    The quartic of the result is the quartic of S evaluated at z A.
    """
    A = linalg.to_matrix(A)
    n = S.n
    Ac = [[x.conj() for x in row] for row in A]
    out: dict = {}
    for (a, b, c, d), v in S.s.items():
        for p in range(n):
            x1 = A[p][a]
            if not x1:
                continue
            for q in range(n):
                x2 = x1 * Ac[q][b]
                if not x2:
                    continue
                for r in range(n):
                    x3 = x2 * A[r][c]
                    if not x3:
                        continue
                    for t in range(n):
                        x4 = Ac[t][d]
                        if x4:
                            key = (p, q, r, t)
                            out[key] = out.get(key, ZERO) + x3 * x4 * v
    return CMWTensor(sig or S.sig, out)


class PseudoUnitaryError(ValueError):
    pass


def is_pseudo_unitary(U, sig: Signature) -> bool:
    U = linalg.to_matrix(U)
    G0 = sig.g0()
    return linalg.matmul(linalg.matmul(U, G0), linalg.conj_transpose(U)) == G0


def transform_frame(S: CMWTensor, lam, U) -> CMWTensor:
    """Tensor with quartic lam^-2 * s(lam z U) = lam^2 * s(z U)."""
    lam = as_crational(lam)
    if not lam.is_real() or lam.re <= 0:
        raise ValueError("lambda must be a positive rational")
    if not is_pseudo_unitary(U, S.sig):
        raise PseudoUnitaryError("U does not preserve <.,.>_l")
    return change_basis(S, U).scale(lam * lam)


def cayley(K, sig: Signature) -> list:
    """U = (I - X)(I + X)^-1 with X = K G0; pseudo-unitary when K is skew-Hermitian."""
    K = linalg.to_matrix(K)
    if linalg.matrix_add(K, linalg.conj_transpose(K)) != linalg.matrix_scale(linalg.identity(sig.n), 0):
        raise ValueError("Cayley parameter must be skew-Hermitian")
    X = linalg.matmul(K, sig.g0())
    Id = linalg.identity(sig.n)
    try:
        inv = linalg.inverse(linalg.matrix_add(Id, X))
    except linalg.SingularMatrixError as exc:
        raise PseudoUnitaryError("Cayley pole: I + K G0 is singular") from exc
    U = linalg.matmul(linalg.matrix_add(Id, X, -1), inv)
    if not is_pseudo_unitary(U, sig):  # pragma: no cover
        raise AssertionError("Cayley transform lost pseudo-unitarity")
    return U


def generate_pseudo_unitary(sig: Signature, seed: int = 0, bound: int = 2) -> list:
    """Exact U with U G0 U* = G0 from a seeded Gaussian-integer Cayley parameter."""
    rng = np.random.default_rng(seed)
    for _ in range(100):
        n = sig.n
        K = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            K[i][i] = CRational(0, int(rng.integers(-bound, bound + 1)))
            for j in range(i + 1, n):
                x = CRational(int(rng.integers(-bound, bound + 1)), int(rng.integers(-bound, bound + 1)))
                K[i][j] = x
                K[j][i] = -x.conj()
        try:
            return cayley(K, sig)
        except PseudoUnitaryError:
            continue
    raise PseudoUnitaryError("could not avoid Cayley poles")  # pragma: no cover


# --- normalizing fractional linear map ---------------------------------------

@dataclass(frozen=True)
class MoebiusParams:
    """Data of the model automorphism: scale, pseudo-unitary, a, r0, sign."""

    sig: Signature
    lam: CRational
    U: tuple
    a: tuple
    r0: CRational
    sigma: int = 1

    def __post_init__(self):
        object.__setattr__(self, "lam", as_crational(self.lam))
        object.__setattr__(self, "r0", as_crational(self.r0))
        object.__setattr__(self, "U", tuple(tuple(r) for r in linalg.to_matrix(self.U)))
        object.__setattr__(self, "a", tuple(as_crational(x) for x in self.a))
        if not self.lam.is_real() or self.lam.re <= 0:
            raise ValueError("lambda must be a positive rational")
        if not self.r0.is_real():
            raise ValueError("r0 must be real")
        if self.sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")
        if self.sigma == -1 and not self.sig.balanced:
            raise ValueError("sigma = -1 only occurs when l = n/2")
        if len(self.a) != self.sig.n:
            raise ValueError("a has the wrong length")
        if not is_pseudo_unitary(self.U, self.sig):
            raise PseudoUnitaryError("U does not preserve <.,.>_l")


@dataclass
class MoebiusMap:
    """T = (numerators) / q as holomorphic polynomials in (z, w)."""

    sig: Signature
    num_z: list
    num_w: HoloPoly
    q: HoloPoly

    def preserves_model(self) -> bool:
        """Clear |q|^2 in Im(T_w) - |T_z|^2_l and restrict to Im w = |z|^2_l."""
        sig = self.sig
        expr = (SesquiPoly.from_holo(self.num_w) * SesquiPoly.from_holo(self.q, True)).imag_part()
        for j, nz in enumerate(self.num_z):
            t = SesquiPoly.from_holo(nz) * SesquiPoly.from_holo(nz, True)
            expr = expr + t if j < sig.l else expr - t
        return model_restrict(expr, sig.l).is_zero()

    def evaluate(self, z, w):
        qv = self.q.evaluate(z, w)
        return [p.evaluate(z, w) / qv for p in self.num_z], self.num_w.evaluate(z, w) / qv


def moebius_normalizer(params: MoebiusParams) -> MoebiusMap:
    """T(z, w) = (lam^-1 (z - lam^-2 a w) U^-1, lam^-2 w) / q with
    q = 1 + 2i <z, lam^-2 abar>_l + lam^-4 (r0 - i|a|^2_l) w.

    For sigma = -1 the caller first precomposes with the swap of the two
    blocks of coordinates together with w -> -w, which turns sigma into +1.
    """
    sig = params.sig
    n = sig.n
    lam = params.lam
    l2 = ONE / (lam * lam)
    Uinv = linalg.inverse([list(r) for r in params.U])
    w = HoloPoly.w(n)
    shifted = [HoloPoly.z(j, n) - w * (l2 * params.a[j]) for j in range(n)]
    num_z = []
    for k in range(n):
        acc = HoloPoly.zero(n)
        for j in range(n):
            if Uinv[j][k]:
                acc = acc + shifted[j] * (Uinv[j][k] / lam)
        num_z.append(acc)
    num_w = w * l2
    norm_a = sum((sig.delta(j) * params.a[j] * params.a[j].conj() for j in range(n)), ZERO)
    q = HoloPoly.constant(n, 1) + w * (l2 * l2 * (params.r0 - I * norm_a))
    for j in range(n):
        q = q + HoloPoly.z(j, n) * (2 * I * sig.delta(j) * l2 * params.a[j].conj())
    return MoebiusMap(sig, num_z, num_w, q)


# --- null cone sign test -------------------------------------------------------

@dataclass
class ObstructionReport:
    verdict: str
    witnesses: list
    samples: int
    seed: int
    sig: Signature
    max_value: CRational | None = None
    min_value: CRational | None = None

    def to_json(self) -> dict:
        return {"verdict": self.verdict,
                "witnesses": [{"v": [str(x) for x in v], "value": str(val)}
                              for v, val in self.witnesses],
                "samples": self.samples, "seed": self.seed,
                "n": self.sig.n, "l": self.sig.l,
                "max_value": None if self.max_value is None else str(self.max_value),
                "min_value": None if self.min_value is None else str(self.min_value)}


def null_cone_definiteness(S: CMWTensor, sig: Signature | None = None, m: int = 64,
                           seed: int = 0, max_witnesses: int = 4) -> ObstructionReport:
    """Sign test of S(v, vbar, v, vbar) on exact null vectors.

    For l < n/2 a positive value is an obstruction.  For l = n/2 the sign of
    the tensor is fixed only up to the block swap, so the verdict is
    obstructed only when both signs occur.  No sample set proves
    semi-negativity; the "consistent" verdict is one-sided.
    """
    sig = sig or S.sig
    if sig.l < 1:
        raise ValueError("the null cone test needs l >= 1")
    samples = null_cone_samples(sig, m, seed)
    values = [(v, S.value_on(v.v)) for v in samples]
    for v, val in values:
        if not val.is_real():  # pragma: no cover
            raise AssertionError("tensor is not conjugate symmetric")
    pos = [(v.v, val) for v, val in values if val.re > 0]
    neg = [(v.v, val) for v, val in values if val.re < 0]
    vmax = max(val.re for _, val in values)
    vmin = min(val.re for _, val in values)
    if sig.balanced:
        if pos and neg:
            verdict, wit = "obstructed", pos[:max_witnesses] + neg[:max_witnesses]
        else:
            verdict, wit = "consistent", []
    elif pos:
        verdict, wit = "obstructed", pos[:max_witnesses]
    else:
        verdict, wit = "consistent", []
    if verdict == "consistent" and not pos and not neg and not S.is_zero():
        verdict = "inconclusive"
    return ObstructionReport(verdict, wit, len(samples), seed, sig,
                             CRational(vmax), CRational(vmin))


def null_cone_zero_test(S: CMWTensor, sig: Signature | None = None, seed: int = 0,
                        max_rounds: int = 6) -> bool:
    """True iff the trace-free S is forced to vanish by its null-cone values."""
    sig = sig or S.sig
    if sig.l < 1:
        raise ValueError("the null cone test needs l >= 1")
    if not check_invariants(S):
        raise ValueError("null_cone_zero_test expects a symmetric trace-free tensor")
    _, hbasis = harmonic_22_basis(sig)
    m = len(hbasis) + 16
    for _ in range(max_rounds):
        samples = null_cone_samples(sig, m, seed)
        if any(not S.value_on(v.v).is_zero() for v in samples):
            return False
        r, dim = null_evaluation_rank(sig, samples)
        if r == dim:
            return True
        m *= 2
    raise RuntimeError("null samples did not reach full rank")
