"""Signature-l Hermitian algebra.

The form <a, b>_l, the signed Laplacian, Levi forms of real polynomials,
exact null-cone sampling and the Fischer split of (2,2) quartics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .polycore import CRational, ONE, ZERO, I, RealPoly, as_crational
from .polycore.crational import parse_rational

__all__ = [
    "Signature", "HermitianMatrix", "NullVector", "FischerSplit", "LeviForm",
    "SingularPointError", "inner_l", "norm_l", "laplacian_l", "levi_form",
    "null_cone_samples", "fischer_split_22", "harmonic_residual_split",
    "fischer_operator_matrix", "bidegree_basis", "harmonic_22_basis",
    "null_evaluation_rank", "rational_unitary",
]


@dataclass(frozen=True)
class Signature:
    """Dimension n >= 2 and number of negative directions l <= n/2."""

    n: int
    l: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2 (n = 1 has no CMW tensor)")
        if not 0 <= 2 * self.l <= self.n:
            raise ValueError("signature must satisfy 0 <= l <= n/2")

    def delta(self, j: int) -> int:
        """Sign of the j-th (0-based) diagonal entry of the model metric."""
        return -1 if j < self.l else 1

    def g0(self) -> list:
        return linalg.diag([self.delta(j) for j in range(self.n)])

    def norm_poly(self) -> RealPoly:
        return RealPoly.norm_l(self.n, self.l)

    @property
    def balanced(self) -> bool:
        return 2 * self.l == self.n


class HermitianMatrix:
    """Square matrix with entry(a, b) == conj(entry(b, a))."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = linalg.to_matrix(rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        if not linalg.is_hermitian(rows):
            raise ValueError("matrix is not Hermitian")
        self.rows = rows

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, HermitianMatrix) and self.rows == other.rows

    def inverse(self) -> "HermitianMatrix":
        return HermitianMatrix(linalg.inverse(self.rows))

    def congruence(self, A) -> "HermitianMatrix":
        """A G conj(A)^t."""
        A = linalg.to_matrix(A)
        return HermitianMatrix(linalg.matmul(linalg.matmul(A, self.rows), linalg.conj_transpose(A)))

    def to_numpy(self):
        return linalg.to_numpy(self.rows)

    def inertia(self, rtol: float = 1e-9) -> tuple:
        return _inertia(np.linalg.eigvalsh(self.to_numpy()), rtol)

    def __repr__(self):
        return f"HermitianMatrix({[[str(x) for x in r] for r in self.rows]})"


def _inertia(eigs, rtol) -> tuple:
    eigs = np.asarray(eigs, dtype=float)
    scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    tol = rtol * scale
    neg = int(np.sum(eigs < -tol))
    pos = int(np.sum(eigs > tol))
    return neg, pos, int(eigs.size - neg - pos)


def inner_l(a, b, sig: Signature):
    """<a, bbar>_l = -sum_{j<=l} a_j conj(b_j) + sum_{j>l} a_j conj(b_j)."""
    if len(a) != sig.n or len(b) != sig.n:
        raise ValueError("vector length does not match signature")
    exact = all(isinstance(x, (CRational, int)) for x in list(a) + list(b))
    if exact:
        total = ZERO
        for j, (x, y) in enumerate(zip(a, b)):
            t = as_crational(x) * as_crational(y).conj()
            total = total - t if j < sig.l else total + t
        return total
    return sum((-1 if j < sig.l else 1) * complex(x) * complex(y).conjugate()
               for j, (x, y) in enumerate(zip(a, b)))


def norm_l(a, sig: Signature):
    return inner_l(a, a, sig)


def laplacian_l(P: RealPoly, sig: Signature) -> RealPoly:
    """-sum_{j<=l} d^2/dz_j dzbar_j + sum_{j>l} d^2/dz_j dzbar_j."""
    if P.n != sig.n:
        raise ValueError("polynomial and signature disagree on n")
    out = RealPoly.zero(P.n)
    for j in range(P.n):
        d = P.diff_z(j).diff_zbar(j)
        out = out - d if j < sig.l else out + d
    return out


# --- Levi form ---------------------------------------------------------------

class SingularPointError(ValueError):
    """d(rho) vanishes at the requested point."""


@dataclass
class LeviForm:
    """Levi matrix on a basis of T^{(1,0)}_p plus float inertia counts."""

    matrix: list
    eigenvalues: np.ndarray
    negative: int
    positive: int
    zero: int
    exact: bool
    rtol: float = 1e-9

    @property
    def signature(self) -> tuple:
        return self.negative, self.positive, self.zero

    @property
    def min_eigenvalue(self) -> float:
        return float(np.min(self.eigenvalues))


def _gradient_hessian(rho: RealPoly, N: int):
    grad = [rho.diff_z(j) for j in range(N)]
    hess = [[grad[j].diff_zbar(k) for k in range(N)] for j in range(N)]
    return grad, hess


def levi_form(H, p, rtol: float = 1e-9) -> LeviForm:
    """Complex Hessian of rho restricted to the complex tangent space at p.

    ``H`` is an AlgebraicHypersurface (or its u-free RealPoly).  An exact
    point (CRational entries) gives an exact Levi matrix in the basis of
    the exact null space of d rho(p); the eigenvalue counts are always
    computed in floating point with a relative tolerance.  A float point
    uses an orthonormal tangent basis and divides by |d rho(p)|, so the
    eigenvalues are comparable across points.
    """
    rho = getattr(H, "rho", H)
    if not rho.u_free():
        raise ValueError("levi_form expects a polynomial in (Z, Zbar) only")
    N = rho.n
    if len(p) != N:
        raise ValueError("point dimension mismatch")
    grad, hess = _gradient_hessian(rho, N)
    exact = all(isinstance(x, (CRational, int)) for x in p)
    if exact:
        pt = [as_crational(x) for x in p]
        gvals = [g.evaluate(pt) for g in grad]
        if all(x.is_zero() for x in gvals):
            raise SingularPointError(f"d rho vanishes at {[str(x) for x in pt]}")
        hvals = [[h.evaluate(pt) for h in row] for row in hess]
        basis = linalg.nullspace([gvals])
        B = linalg.transpose(basis)  # columns are tangent vectors
        L = linalg.matmul(linalg.matmul(linalg.transpose(B), hvals),
                          [[x.conj() for x in row] for row in B])
        eigs = np.linalg.eigvalsh(linalg.to_numpy(L))
        neg, pos, zer = _inertia(eigs, rtol)
        return LeviForm(L, eigs, neg, pos, zer, True, rtol)
    pt = [complex(x) for x in p]
    gvals = np.array([g.evaluate(pt) for g in grad])
    gnorm = float(np.linalg.norm(gvals))
    hvals = np.array([[h.evaluate(pt) for h in row] for row in hess])
    if gnorm == 0.0:
        raise SingularPointError(f"d rho vanishes at {pt}")
    # tangent vectors X satisfy sum_j rho_j X_j = 0
    from scipy.linalg import null_space
    B = null_space(gvals.reshape(1, -1))
    L = B.T @ hvals @ B.conj() / gnorm
    L = (L + L.conj().T) / 2
    eigs = np.linalg.eigvalsh(L)
    neg, pos, zer = _inertia(eigs, rtol)
    return LeviForm(L.tolist(), eigs, neg, pos, zer, False, rtol)


# --- null cone -----------------------------------------------------------------

@dataclass(frozen=True)
class NullVector:
    v: tuple
    sig: Signature = field(compare=False)

    def __post_init__(self):
        if not inner_l(self.v, self.v, self.sig).is_zero():
            raise ValueError("vector is not on the null cone")

    def __iter__(self):
        return iter(self.v)

    def __len__(self):
        return len(self.v)

    def to_json(self) -> list:
        return [x.to_json() for x in self.v]


def _gaussian(rng, bound=3) -> CRational:
    return CRational(int(rng.integers(-bound, bound + 1)), int(rng.integers(-bound, bound + 1)))


def rational_unitary(m: int, rng, bound: int = 3) -> list:
    """Exact unitary over Q(i): Cayley transform of a random skew-Hermitian K."""
    K = [[ZERO] * m for _ in range(m)]
    for i in range(m):
        K[i][i] = CRational(0, int(rng.integers(-bound, bound + 1)))
        for j in range(i + 1, m):
            x = _gaussian(rng, bound)
            K[i][j] = x
            K[j][i] = -x.conj()
    Id = linalg.identity(m)
    return linalg.matmul(linalg.matrix_add(Id, K, -1), linalg.inverse(linalg.matrix_add(Id, K)))


def null_cone_samples(sig: Signature, m: int, seed: int = 0) -> list:
    """``m`` exact vectors with <v, v>_l = 0, deterministic in ``seed``.

    The list starts with the coordinate pairs e_j + e_k and e_j + i e_k
    (j negative, k positive) and continues with vectors (a, R a') where a
    has Gaussian-integer entries, a' is a zero-padded and R is a random
    rational unitary of the positive block; |R a'| = |a| keeps v null.
    """
    if sig.l < 1:
        raise ValueError("the null cone is {0} when l = 0")
    if m < 1:
        raise ValueError("need at least one sample")
    n, l = sig.n, sig.l
    out: list = []
    seen = set()

    def push(vec):
        key = tuple(vec)
        if key not in seen and any(not x.is_zero() for x in vec):
            seen.add(key)
            out.append(NullVector(key, sig))

    for j in range(l):
        for k in range(l, n):
            for phase in (ONE, I):
                if len(out) >= m:
                    return out
                vec = [ZERO] * n
                vec[j] = ONE
                vec[k] = phase
                push(vec)
    rng = np.random.default_rng(seed)
    attempts = 0
    while len(out) < m:
        attempts += 1
        if attempts > 50 * m + 100:
            raise RuntimeError("null cone sampler failed to produce distinct vectors")
        a = [_gaussian(rng) for _ in range(l)]
        if all(x.is_zero() for x in a):
            continue
        Rn = rational_unitary(l, rng) if l > 1 else [[ONE]]
        a = [sum((Rn[i][j] * a[j] for j in range(l)), ZERO) for i in range(l)]
        pad = a + [ZERO] * (n - 2 * l)
        R = rational_unitary(n - l, rng)
        b = [sum((R[i][j] * pad[j] for j in range(n - l)), ZERO) for i in range(n - l)]
        push(a + b)
    return out


# --- Fischer decomposition -----------------------------------------------------

def bidegree_basis(n: int, p: int, q: int) -> list:
    """Sorted flat keys of the monomials z^A zbar^B with |A| = p, |B| = q."""
    def multi(d):
        return sorted(tuple(c.count(j) for j in range(n))
                      for c in itertools.combinations_with_replacement(range(n), d))
    return [a + b + (0,) for a in multi(p) for b in multi(q)]


def _coeff_vector(P: RealPoly, basis) -> list:
    return [P.terms.get(k, ZERO) for k in basis]


def _from_coeffs(n: int, basis, coeffs) -> RealPoly:
    return RealPoly._wrap(n, {k: c for k, c in zip(basis, coeffs) if not c.is_zero()})


def fischer_operator_matrix(sig: Signature) -> list:
    """Matrix of A -> Laplacian_l(A |z|^2_l) on (1,1) forms, monomial basis."""
    n = sig.n
    b11 = bidegree_basis(n, 1, 1)
    norm = sig.norm_poly()
    cols = []
    for key in b11:
        mono = RealPoly._wrap(n, {key: ONE})
        cols.append(_coeff_vector(laplacian_l(mono * norm, sig), b11))
    return linalg.transpose(cols)


@dataclass(frozen=True)
class FischerSplit:
    """Q = N + A |z|^2_l with Laplacian_l N = 0."""

    N: RealPoly
    A: RealPoly


class FischerError(ArithmeticError):
    pass


def fischer_split_22(Q: RealPoly, sig: Signature) -> FischerSplit:
    """Unique l-harmonic split of a real, u-free, bidegree-(2,2) quartic."""
    n = sig.n
    if Q.n != n:
        raise ValueError("polynomial and signature disagree on n")
    if not Q.u_free() or any(bd != (2, 2, 0) for bd in Q.bidegrees()):
        raise ValueError("fischer_split_22 expects a u-free bidegree-(2,2) polynomial")
    Q.require_real()
    b11 = bidegree_basis(n, 1, 1)
    rhs = _coeff_vector(laplacian_l(Q, sig), b11)
    try:
        x = linalg.solve(fischer_operator_matrix(sig), rhs)
    except linalg.SingularMatrixError as exc:  # pragma: no cover - Fischer guarantees solvability
        raise FischerError("Fischer system is singular; this is a bug") from exc
    A = _from_coeffs(n, b11, x)
    N = Q - A * sig.norm_poly()
    if not laplacian_l(N, sig).is_zero():  # pragma: no cover
        raise FischerError("harmonic part is not annihilated by the Laplacian")
    return FischerSplit(N, A)


def harmonic_residual_split(H: RealPoly, sig: Signature) -> tuple:
    """``H = h2 |z|^2_l + h4`` with h4 harmonic; returns ``(h2, h4)``."""
    split = fischer_split_22(H, sig)
    return split.A, split.N


def harmonic_22_basis(sig: Signature) -> tuple:
    """Monomial basis of (2,2) forms and a basis of the harmonic subspace."""
    n = sig.n
    b22 = bidegree_basis(n, 2, 2)
    b11 = bidegree_basis(n, 1, 1)
    cols = []
    for key in b22:
        mono = RealPoly._wrap(n, {key: ONE})
        cols.append(_coeff_vector(laplacian_l(mono, sig), b11))
    lap = linalg.transpose(cols)
    return b22, linalg.nullspace(lap)


def _eval_monomial(key, v, n):
    t = ONE
    for j in range(n):
        if key[j]:
            t = t * v[j] ** key[j]
        if key[n + j]:
            t = t * v[j].conj() ** key[n + j]
    return t


def null_evaluation_rank(sig: Signature, samples) -> tuple:
    """Rank of S -> S(v, vbar, v, vbar) over the harmonic (2,2) space.

    Returns ``(rank, dimension)``; equality means a trace-free tensor that
    vanishes on every sample is zero.
    """
    b22, hbasis = harmonic_22_basis(sig)
    rows = []
    for v in samples:
        vv = [as_crational(x) for x in v]
        ev = [_eval_monomial(k, vv, sig.n) for k in b22]
        rows.append([sum((e * h for e, h in zip(ev, hb) if h), ZERO) for hb in hbasis])
    return linalg.rank_fast(rows), len(hbasis)
