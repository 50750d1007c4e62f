"""Dense exact linear algebra over Q(i).

Matrices are lists of rows of :class:`CRational`.  Sizes in this package are
at most a few hundred, so plain Gauss-Jordan elimination is adequate.
"""

from __future__ import annotations

from .polycore.crational import CRational, ONE, ZERO, as_crational


class SingularMatrixError(ArithmeticError):
    pass


def to_matrix(rows) -> list:
    return [[as_crational(x) for x in row] for row in rows]


def identity(n: int) -> list:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(a, b) -> list:
    m, k = len(a), len(b)
    p = len(b[0]) if b else 0
    out = []
    for i in range(m):
        row = []
        ai = a[i]
        for j in range(p):
            s = ZERO
            for t in range(k):
                x = ai[t]
                if x:
                    y = b[t][j]
                    if y:
                        s = s + x * y
            row.append(s)
        out.append(row)
    return out


def conj_transpose(a) -> list:
    return [[a[i][j].conj() for i in range(len(a))] for j in range(len(a[0]))]


def transpose(a) -> list:
    return [[a[i][j] for i in range(len(a))] for j in range(len(a[0]))]


def diag(entries) -> list:
    n = len(entries)
    return [[as_crational(entries[i]) if i == j else ZERO for j in range(n)] for i in range(n)]


def matrix_add(a, b, sign=1) -> list:
    return [[x + y if sign == 1 else x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matrix_scale(a, c) -> list:
    c = as_crational(c)
    return [[c * x for x in row] for row in a]


def rref(a) -> tuple:
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv if x else x for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                ri = m[i]
                rr = m[r]
                m[i] = [ri[j] - f * rr[j] if rr[j] else ri[j] for j in range(cols)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def solve(a, b) -> list:
    """Solve a x = b for square or overdetermined consistent systems.

    Raises :class:`SingularMatrixError` if the solution is not unique or the
    system is inconsistent.
    """
    rows = len(a)
    cols = len(a[0])
    aug = [list(a[i]) + [as_crational(b[i])] for i in range(rows)]
    m, pivots = rref(aug)
    if cols in pivots:
        raise SingularMatrixError("inconsistent linear system")
    if len(pivots) != cols:
        raise SingularMatrixError("linear system has no unique solution")
    x = [ZERO] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][cols]
    return x


def inverse(a) -> list:
    n = len(a)
    aug = [list(a[i]) + identity(n)[i] for i in range(n)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return [row[n:] for row in m[:n]]


def nullspace(a) -> list:
    """Basis of {x : a x = 0} as a list of vectors."""
    cols = len(a[0])
    m, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [ZERO] * cols
        v[fcol] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fcol]
        basis.append(v)
    return basis


def is_hermitian(a) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i].conj() for i in range(n) for j in range(n))


def to_numpy(a):
    import numpy as np
    return np.array([[complex(x) for x in row] for row in a], dtype=complex)


_MODULUS = 1000000009  # prime, 1 mod 4, so i has a square root


def _sqrt_minus_one(p: int) -> int:
    for a in range(2, 200):
        r = pow(a, (p - 1) // 4, p)
        if r * r % p == p - 1:
            return r
    raise ArithmeticError("no square root of -1 found")


def rank_modp(a, p: int = _MODULUS) -> int | None:
    """Rank of the image of ``a`` in F_p, with i sent to a root of -1.

    Reduction cannot raise the rank, so the result is a lower bound for the
    rank over Q(i).  Returns None if a denominator vanishes mod p.
    """
    if not a:
        return 0
    root = _sqrt_minus_one(p)
    m = []
    for row in a:
        out = []
        for x in row:
            x = as_crational(x)
            vals = []
            for q in (x.re, x.im):
                den = int(q.denominator) % p
                if den == 0:
                    return None
                vals.append(int(q.numerator) * pow(den, -1, p) % p)
            out.append((vals[0] + root * vals[1]) % p)
        m.append(out)
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(r + 1, rows):
            f = m[i][c]
            if f:
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def rank_fast(a) -> int:
    """Exact rank, short-circuited when the modular rank is already maximal."""
    if not a:
        return 0
    bound = min(len(a), len(a[0]))
    r = rank_modp(a)
    if r == bound:
        return r
    return rank(a)
