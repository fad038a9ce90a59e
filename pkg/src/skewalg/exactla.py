"""Exact dense linear algebra over a :class:`~skewalg.scalars.Field`.

Matrices are numpy arrays: ``int64`` residues for small prime fields and
object arrays of ``gmpy2.mpq`` for the rationals.  Every
function takes the field explicitly as its first argument.

Conventions: ``kernel(M)`` is the right null space ``{v : M v = 0}`` and
``image(M)`` the column space, so that ``rank + dim kernel = cols``.  Module
code works with row vectors and uses :func:`left_kernel` / :func:`row_space`.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np
from gmpy2 import mpq

from . import _kernels


class ShapeError(ValueError):
    pass


def _as_field_array(F, M):
    M = np.asarray(M)
    if F.uses_int64:
        if M.dtype != np.int64:
            M = F.array(M)
        return M
    if M.dtype != object:
        M = F.array(M)
    return M


# ------------------------------------------------------------------ products

def _lcm_den(flat):
    d = 1
    for x in flat:
        q = int(x.denominator) if isinstance(x, _RATIONALS) else 1
        if q != 1:
            d = d * q // gcd(d, q)
    return d


_RATIONALS = (type(mpq(0)), Fraction)

# rationals are immutable, so small integer results can share one object each
_SMALL_INTS = {i: mpq(i) for i in range(-256, 257)}


def scaled_ints(M):
    """Integer array ``d * M`` and the common denominator ``d``."""
    flat = M.reshape(-1)
    d = _lcm_den(flat)
    ints = np.empty(flat.shape, dtype=object)
    for k, x in enumerate(flat):
        ints[k] = int(x * d) if d != 1 else int(x)
    return ints.reshape(M.shape), d


def int_matmul(a, b):
    """Exact product of integer object arrays, through int64 when no overflow is possible."""
    amax = max((abs(int(x)) for x in a.reshape(-1)), default=0)
    bmax = max((abs(int(x)) for x in b.reshape(-1)), default=0)
    if amax * bmax * max(1, a.shape[-1]) < 2**62:
        return (a.astype(np.int64) @ b.astype(np.int64)).astype(object)
    return a.dot(b)


def matmul(F, A, B):
    """Exact matrix product ``A @ B``."""
    if A.shape[-1] != B.shape[0]:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    if F.uses_int64:
        if A.ndim == 1:
            return _kernels.matmul_modp(A.reshape(1, -1), B, F.p)[0]
        return _kernels.matmul_modp(A, B, F.p)
    if F.p:
        return A.dot(B) % F.p
    if A.size == 0 or B.size == 0:
        return F.zeros(A.shape[:-1] + B.shape[1:])
    ai, da = scaled_ints(A)
    bi, db = scaled_ints(B)
    prod = int_matmul(ai, bi)
    den = da * db
    out = np.empty(prod.shape, dtype=object)
    fo, fp = out.reshape(-1), prod.reshape(-1)
    if den == 1:
        small = _SMALL_INTS
        for k, x in enumerate(fp):
            x = int(x)
            f = small.get(x)
            fo[k] = f if f is not None else mpq(x)
    else:
        for k, x in enumerate(fp):
            fo[k] = mpq(int(x), den)
    return out


def mat_chain(F, *mats):
    out = mats[0]
    for m in mats[1:]:
        out = matmul(F, out, m)
    return out


def add(F, A, B):
    return (A + B) % F.p if F.p else A + B


def sub(F, A, B):
    return (A - B) % F.p if F.p else A - B


def scale(F, c, A):
    return (A * c) % F.p if F.p else A * c


def lincomb(F, coeffs, mats):
    """``sum(c * M)`` over matching lists, exact."""
    out = None
    for c, M in zip(coeffs, mats):
        if c == 0:
            continue
        term = scale(F, c, M)
        out = term if out is None else add(F, out, term)
    if out is None:
        return F.zeros(mats[0].shape)
    return out


def is_zero(A):
    return not np.any(A != 0)


def kronecker(F, A, B):
    """Kronecker product; shape ``(rA*rB, cA*cB)``."""
    out = np.kron(A, B)
    if F.p:
        out = out % F.p
    return out.astype(F.dtype) if F.uses_int64 else out


def block_diag(F, mats):
    r = sum(m.shape[0] for m in mats)
    c = sum(m.shape[1] for m in mats)
    out = F.zeros((r, c))
    i = j = 0
    for m in mats:
        out[i:i + m.shape[0], j:j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


# --------------------------------------------------------------- elimination

def rref(F, M):
    """Reduced row echelon form: returns ``(R, pivots, rank)``."""
    M = _as_field_array(F, M)
    if M.ndim != 2:
        raise ShapeError("rref expects a 2-d array")
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return M.copy(), (), 0
    if F.uses_int64:
        R, piv, r = _kernels.rref_modp(M, F.p)
        return R, tuple(int(c) for c in piv), int(r)
    a = M.copy()
    pivots = []
    r = 0
    p = F.p
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if a[i, c] != 0), None)
        if k is None:
            continue
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = F.inv(a[r, c])
        a[r, c:] = a[r, c:] * inv
        if p:
            a[r, c:] %= p
        nz = [i for i in range(rows) if i != r and a[i, c] != 0]
        if nz:
            a[nz, c:] = a[nz, c:] - np.outer(a[nz, c], a[r, c:])
            if p:
                a[nz, c:] %= p
        pivots.append(c)
        r += 1
    return a, tuple(pivots), r


def rank(F, M):
    return rref(F, M)[2]


def kernel(F, M):
    """Basis (as rows, RREF-canonical) of the right null space ``{v : M v = 0}``."""
    M = _as_field_array(F, M)
    rows, cols = M.shape
    R, piv, r = rref(F, M)
    free = [c for c in range(cols) if c not in set(piv)]
    K = F.zeros((len(free), cols))
    for k, fcol in enumerate(free):
        K[k, fcol] = F.one
        for i, pc in enumerate(piv):
            K[k, pc] = F.neg(R[i, fcol])
    if len(free):
        K = rref(F, K)[0]
    return K


def left_kernel(F, M):
    """Basis rows of ``{v : v M = 0}``."""
    return kernel(F, np.ascontiguousarray(M.T))


def inverse(F, A):
    n = A.shape[0]
    if A.shape != (n, n):
        raise ShapeError("inverse of a non-square matrix")
    aug = np.concatenate([_as_field_array(F, A), F.eye(n)], axis=1)
    R, piv, r = rref(F, aug)
    if r < n or piv[:n] != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return np.ascontiguousarray(R[:, n:])


def is_invertible(F, A):
    return A.shape[0] == A.shape[1] and rank(F, A) == A.shape[0]


@dataclass
class Solution:
    """All solutions of ``A X = B``: ``particular + span(kernel)`` columnwise."""
    consistent: bool
    particular: object
    kernel: object


def solve_all(F, A, B):
    """Solve ``A X = B`` exactly.

    ``particular`` has shape ``(cols(A), cols(B))``; ``kernel`` rows span the
    homogeneous solutions.  When inconsistent, ``particular`` is ``None``.
    """
    A = _as_field_array(F, A)
    B = _as_field_array(F, B)
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    if A.shape[0] != B.shape[0]:
        raise ShapeError(f"incompatible shapes {A.shape} and {B.shape}")
    n = A.shape[1]
    aug = np.concatenate([A, B], axis=1)
    R, piv, r = rref(F, aug)
    K = kernel(F, A)
    if any(c >= n for c in piv):
        return Solution(False, None, K)
    X = F.zeros((n, B.shape[1]))
    for i, pc in enumerate(piv):
        X[pc] = R[i, n:]
    return Solution(True, X, K)


def solve_left(F, A, B):
    """One solution ``X`` of ``X A = B`` or ``None``."""
    sol = solve_all(F, np.ascontiguousarray(A.T), np.ascontiguousarray(B.T))
    if not sol.consistent:
        return None
    return np.ascontiguousarray(sol.particular.T)


# ----------------------------------------------------------------- subspaces

class Subspace:
    """Subspace of ``F^n`` stored by its RREF basis rows (canonical)."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field, ambient_dim, rows=None, _canonical=False):
        self.field = field
        self.ambient_dim = ambient_dim
        if rows is None or len(rows) == 0 or ambient_dim == 0:
            self.basis = field.zeros((0, ambient_dim))
            self.pivots = ()
            return
        rows = _as_field_array(field, np.asarray(rows).reshape(-1, ambient_dim))
        if _canonical:
            R, piv, r = rows, None, rows.shape[0]
            piv = tuple(int(np.nonzero(R[i] != 0)[0][0]) for i in range(r))
        else:
            R, piv, r = rref(field, rows)
        self.basis = np.ascontiguousarray(R[:r])
        self.pivots = tuple(piv)

    @classmethod
    def full(cls, field, n):
        return cls(field, n, field.eye(n), _canonical=True)

    @property
    def dim(self):
        return self.basis.shape[0]

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient_dim == other.ambient_dim
                and self.basis.shape == other.basis.shape
                and not np.any(self.basis != other.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field!r})"

    def reduce(self, v):
        """Residual of ``v`` after clearing pivot coordinates; zero iff ``v`` in span."""
        F = self.field
        v = v.copy()
        for i, pc in enumerate(self.pivots):
            c = v[pc]
            if c != 0:
                v = sub(F, v, scale(F, c, self.basis[i]))
        return v

    def contains(self, v):
        return is_zero(self.reduce(np.asarray(v)))

    def coords(self, v):
        """Coordinates of ``v`` in the RREF basis; raises if ``v`` is outside."""
        c = np.array([v[pc] for pc in self.pivots], dtype=self.field.dtype)
        if self.dim and not np.array_equal(matmul(self.field, c, self.basis), v):
            raise ValueError("vector not in subspace")
        if not self.dim and not is_zero(v):
            raise ValueError("vector not in subspace")
        return c

    def coords_many(self, V):
        """Coordinates of every row of ``V``, verified with one product."""
        F = self.field
        V = np.asarray(V).reshape(-1, self.ambient_dim)
        if not self.dim:
            if not is_zero(V):
                raise ValueError("vector not in subspace")
            return F.zeros((V.shape[0], 0))
        C = np.ascontiguousarray(V[:, list(self.pivots)])
        if not np.array_equal(matmul(F, C, self.basis), V):
            raise ValueError("vector not in subspace")
        return C

    def contains_subspace(self, other):
        return all(self.contains(r) for r in other.basis)

    def sum(self, other):
        return Subspace(self.field, self.ambient_dim,
                        np.concatenate([self.basis, other.basis], axis=0))

    def intersect(self, other):
        return intersect(self, other)


def row_space(F, M):
    M = _as_field_array(F, M)
    return Subspace(F, M.shape[1], M)


def image(F, M):
    """Column space of ``M`` as a subspace of ``F^rows``."""
    M = _as_field_array(F, M)
    return Subspace(F, M.shape[0], np.ascontiguousarray(M.T))


def intersect(U, V):
    if U.field != V.field:
        raise TypeError("subspaces over different fields")
    if U.ambient_dim != V.ambient_dim:
        raise ShapeError("subspaces of different ambient spaces")
    F = U.field
    if U.dim == 0 or V.dim == 0:
        return Subspace(F, U.ambient_dim)
    # x U = y V  <=>  (x, -y) [U; V] = 0
    stacked = np.concatenate([U.basis, V.basis], axis=0)
    K = left_kernel(F, stacked)
    if K.shape[0] == 0:
        return Subspace(F, U.ambient_dim)
    return Subspace(F, U.ambient_dim, matmul(F, np.ascontiguousarray(K[:, :U.dim]), U.basis))


# ------------------------------------------------------- incremental echelon

class EchelonBasis:
    """Semi-echelon basis grown one vector at a time.

    Rows are normalized to have a leading 1 at their pivot.  ``reduce`` also
    returns the coefficients expressing the removed part in terms of stored
    rows, which is what the spinning algorithms need.
    """

    def __init__(self, field, n):
        self.field = field
        self.n = n
        self.rows = []
        self.pivots = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v):
        F = self.field
        v = v.copy()
        coeffs = []
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            coeffs.append(c)
            if c != 0:
                v = sub(F, v, scale(F, c, row))
        return v, coeffs

    def insert_reduced(self, residual):
        """Insert an already reduced nonzero residual; returns ``(pivot, scale)``."""
        F = self.field
        pc = int(np.nonzero(residual != 0)[0][0])
        inv = F.inv(residual[pc])
        self.rows.append(scale(F, inv, residual))
        self.pivots.append(pc)
        return pc, inv

    def add(self, v):
        r, _ = self.reduce(v)
        if is_zero(r):
            return False
        self.insert_reduced(r)
        return True

    def matrix(self):
        if not self.rows:
            return self.field.zeros((0, self.n))
        return np.array(self.rows, dtype=self.field.dtype)
