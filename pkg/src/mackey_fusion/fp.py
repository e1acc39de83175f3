"""Exact linear algebra over the prime field F_p.

Matrices are plain ``numpy.int64`` arrays whose entries are kept reduced
mod ``p``.  Subspaces are stored by a basis in reduced row-echelon form,
one basis vector per row.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_PRIME = 1 << 16


def check_prime(p: int) -> int:
    if p < 2 or p > MAX_PRIME or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"modulus {p} is not a prime <= 2^16")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)


def asmat(m, p: int, shape=None) -> np.ndarray:
    a = np.asarray(m, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    return np.mod(a, p)


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # entries < 2^16 so a length-k dot product stays below 2^63 for k < 2^31
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return np.mod(a @ b, p)


def rref(m: np.ndarray, p: int):
    """Return ``(R, pivots, rank)`` with ``R`` the reduced row-echelon form of ``m``
    (same shape as ``m``; zero rows last)."""
    a = np.mod(np.array(m, dtype=np.int64, copy=True), p)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = inv_mod(int(a[r, c]), p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots, r


def rank(m: np.ndarray, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    if m.shape[0] > m.shape[1]:
        m = m.T
    return rref(m, p)[2]


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n given by an RREF basis (rows)."""

    ambient_dim: int
    basis: np.ndarray
    p: int
    pivots: tuple = field(default=())

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @classmethod
    def span(cls, vectors, n: int, p: int) -> "Subspace":
        v = np.asarray(vectors, dtype=np.int64)
        if n == 0 or v.size == 0:
            return cls.zero(n, p)
        v = v.reshape(-1, n)
        if v.shape[0] == 0:
            return cls.zero(n, p)
        r, piv, rk = rref(v, p)
        return cls(n, r[:rk].copy(), p, tuple(piv))

    @classmethod
    def zero(cls, n: int, p: int) -> "Subspace":
        return cls(n, zeros(0, n), p, ())

    @classmethod
    def full(cls, n: int, p: int) -> "Subspace":
        return cls(n, eye(n), p, tuple(range(n)))

    def contains(self, v) -> bool:
        v = np.mod(np.asarray(v, dtype=np.int64).reshape(-1), self.p)
        return not self.reduce(v).any()

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Reduce ``v`` modulo the subspace (zero iff ``v`` lies in it)."""
        v = np.mod(np.array(v, dtype=np.int64), self.p)
        for row, c in zip(self.basis, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def coords(self, v) -> np.ndarray:
        """Coordinates of ``v`` in the RREF basis; raises if ``v`` is outside."""
        v = np.mod(np.asarray(v, dtype=np.int64), self.p)
        if v.ndim == 2:
            return np.stack([self.coords(x) for x in v]) if v.shape[0] else zeros(0, self.dim)
        c = v[list(self.pivots)] if self.pivots else np.zeros(0, dtype=np.int64)
        if self.dim and np.any((c @ self.basis - v) % self.p):
            raise ValueError("vector is not in the subspace")
        if not self.dim and v.any():
            raise ValueError("vector is not in the subspace")
        return c.copy()

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(row) for row in self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.dim == other.dim
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.ambient_dim, self.basis.tobytes()))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(np.vstack([self.basis, other.basis]), self.ambient_dim, self.p)


def kernel(m: np.ndarray, p: int) -> Subspace:
    """Null space ``{x : m x = 0}`` of a ``rows x cols`` matrix."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return Subspace.full(cols, p)
    r, piv, rk = rref(m, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = zeros(len(free), cols)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, c in enumerate(piv):
            basis[i, c] = (-r[j, f]) % p
    return Subspace.span(basis, cols, p) if len(free) else Subspace.zero(cols, p)


def image(m: np.ndarray, p: int) -> Subspace:
    """Column space of ``m``."""
    m = np.asarray(m, dtype=np.int64)
    return Subspace.span(m.T, m.shape[0], p)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    p = a.p
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim, p)
    # x a_basis = y b_basis  <=>  (x, -y) in kernel of stacked basis (transposed)
    stacked = np.vstack([a.basis, (-b.basis) % p]).T
    k = kernel(stacked, p)
    vecs = matmul(k.basis[:, :a.dim], a.basis, p)
    return Subspace.span(vecs, a.ambient_dim, p)


@dataclass(frozen=True)
class Quotient:
    """Projection ``F_p^n -> F_p^n / relations`` with a fixed section.

    ``proj`` is ``q x n``; ``section`` is ``n x q`` and ``proj @ section = I``.
    """

    ambient_dim: int
    relations: Subspace
    proj: np.ndarray
    section: np.ndarray
    p: int

    @property
    def dim(self) -> int:
        return self.proj.shape[0]


def quotient_map(ambient_dim: int, relations: Subspace) -> Quotient:
    p = relations.p
    piv = set(relations.pivots)
    free = [c for c in range(ambient_dim) if c not in piv]
    q = len(free)
    proj = zeros(q, ambient_dim)
    section = zeros(ambient_dim, q)
    for i, c in enumerate(free):
        section[c, i] = 1
    # coset of e_c is determined by reducing e_c against the relation basis
    for c in range(ambient_dim):
        e = np.zeros(ambient_dim, dtype=np.int64)
        e[c] = 1
        red = relations.reduce(e)
        proj[:, c] = red[free]
    return Quotient(ambient_dim, relations, proj % p, section, p)


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """Some ``x`` with ``a x = b`` (``b`` a vector or matrix), or ``None``."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    rows, cols = a.shape
    aug = np.hstack([a, b]) % p
    r, piv, rk = rref(aug, p)
    if any(c >= cols for c in piv):
        return None
    x = zeros(cols, b.shape[1])
    for j, c in enumerate(piv):
        x[c] = r[j, cols:]
    return x[:, 0] if vec else x


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("not square")
    r, piv, rk = rref(np.hstack([a % p, eye(n)]), p)
    if rk < n or piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return r[:, n:].copy()


def is_zero(a: np.ndarray) -> bool:
    return not np.any(a)


# ---------------------------------------------------------------------------
# sparse rank
# ---------------------------------------------------------------------------

DENSE_CUTOFF = 512
DENSE_MAX_ENTRIES = 1 << 20


def sparse_rank(triplets, rows: int, cols: int, p: int) -> int:
    """Rank of the sparse matrix given by ``(i, j, value)`` triplets.

    Entries with the same position are summed.  Small matrices are densified;
    larger ones are eliminated vector by vector, taking the vectors along the
    smaller dimension and pivoting on the largest remaining coordinate.
    """
    if rows == 0 or cols == 0:
        return 0
    data: dict[tuple[int, int], int] = {}
    for i, j, v in triplets:
        key = (int(i), int(j))
        data[key] = (data.get(key, 0) + int(v)) % p
    data = {k: v for k, v in data.items() if v}
    if not data:
        return 0
    if min(rows, cols) <= DENSE_CUTOFF and rows * cols <= DENSE_MAX_ENTRIES:
        dense = zeros(rows, cols)
        for (i, j), v in data.items():
            dense[i, j] = v
        return rank(dense, p)
    by_row = rows <= cols
    vecs: dict[int, dict[int, int]] = {}
    for (i, j), v in data.items():
        a, b = (i, j) if by_row else (j, i)
        vecs.setdefault(a, {})[b] = v
    return _sparse_echelon_rank(list(vecs.values()), p)


def _sparse_echelon_rank(vectors, p: int) -> int:
    """Echelon form keyed by leading (largest) coordinate.

    Subtracting a pivot row whose largest coordinate is ``c`` only touches
    coordinates ``<= c``, so reduction of each vector terminates.
    """
    pivots: dict[int, dict[int, int]] = {}
    for v in sorted(vectors, key=len):
        v = dict(v)
        while v:
            c = max(v)
            prow = pivots.get(c)
            if prow is None:
                inv = inv_mod(v[c], p)
                pivots[c] = {k: (x * inv) % p for k, x in v.items()}
                break
            a = v[c]
            for k, x in prow.items():
                nv = (v.get(k, 0) - a * x) % p
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
    return len(pivots)
