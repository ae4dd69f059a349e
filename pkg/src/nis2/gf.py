"""Exact linear algebra over prime fields F_p.

Matrices over F_2 are stored bit-packed by rows (64 entries per ``uint64``
word) and row-reduced with XOR; every other prime uses a dense ``int64``
grid reduced modulo p.  Vectors are plain 1-D ``numpy`` integer arrays with
entries in ``[0, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_PRIME = 251
WORD = 64
_WORD_DTYPE = np.dtype("<u8")


class FieldError(ValueError):
    pass


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    p = int(p)
    if p < 2 or p > MAX_PRIME or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise FieldError(f"p={p} is not a prime <= {MAX_PRIME}")
    return p


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    """Multiplicative inverses mod p, with ``table[0] = 0``."""
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, p - 2, p)
    return table


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    return int(inverse_table(p)[a])


@dataclass(frozen=True)
class FieldElem:
    """An element of F_p."""

    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise FieldError("mixed moduli")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FieldElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElem(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def inverse(self) -> FieldElem:
        return FieldElem(inv(self.value, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElem(self._coerce(other), self.p).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElem(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


# ---------- bit packing


def _n_words(cols: int) -> int:
    return max(1, (cols + WORD - 1) // WORD)


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array of shape (m, n) into ``uint64`` words, little bit order."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    m, n = bits.shape
    width = _n_words(n) * WORD
    padded = np.zeros((m, width), dtype=np.uint8)
    padded[:, :n] = bits
    return np.packbits(padded, axis=1, bitorder="little").view(_WORD_DTYPE).reshape(m, -1).copy()


def unpack_rows(words: np.ndarray, cols: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype=_WORD_DTYPE)
    m = words.shape[0]
    raw = np.unpackbits(words.view(np.uint8).reshape(m, -1), axis=1, bitorder="little")
    return raw[:, :cols].astype(np.int64)


def _rref_packed(words: np.ndarray, cols: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_2 on packed rows (in place on a copy)."""
    R = words.copy()
    m = R.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == m:
            break
        w, b = divmod(c, WORD)
        shift = np.uint64(b)
        column = (R[:, w] >> shift) & np.uint64(1)
        below = np.flatnonzero(column[r:])
        if below.size == 0:
            continue
        k = r + int(below[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
            column[[r, k]] = column[[k, r]]
        mask = column.astype(bool)
        mask[r] = False
        if mask.any():
            R[mask] ^= R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def _rref_dense(arr: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    R = np.array(arr, dtype=np.int64) % p
    m, n = R.shape
    inv_t = inverse_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = (R[r] * inv_t[R[r, c]]) % p
        factors = R[:, c].copy()
        factors[r] = 0
        rows = np.flatnonzero(factors)
        if rows.size:
            R[rows] = (R[rows] - np.outer(factors[rows], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


class Matrix:
    """An immutable matrix over F_p.

    For ``p == 2`` the entries live in packed ``uint64`` rows; otherwise in a
    dense ``int64`` array.
    """

    __slots__ = ("p", "rows", "cols", "_data")

    def __init__(self, entries, p: int):
        self.p = check_prime(p)
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise FieldError("matrix entries must form a 2-D grid")
        arr %= self.p
        self.rows, self.cols = arr.shape
        if self.p == 2:
            data = pack_rows(arr)
        else:
            data = arr
        data.flags.writeable = False
        self._data = data

    @classmethod
    def _from_packed(cls, words: np.ndarray, cols: int) -> Matrix:
        m = cls.__new__(cls)
        m.p = 2
        m.rows = words.shape[0]
        m.cols = cols
        words = np.ascontiguousarray(words, dtype=_WORD_DTYPE)
        words.flags.writeable = False
        m._data = words
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> Matrix:
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> Matrix:
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_packed(self) -> bool:
        return self.p == 2

    def to_array(self) -> np.ndarray:
        if self.p == 2:
            return unpack_rows(self._data, self.cols)
        return self._data.copy()

    def packed_words(self) -> np.ndarray:
        if self.p != 2:
            raise FieldError("only F_2 matrices are bit-packed")
        return self._data

    def __getitem__(self, idx) -> FieldElem:
        i, j = idx
        if self.p == 2:
            w, b = divmod(j, WORD)
            return FieldElem(int(self._data[i, w] >> np.uint64(b)) & 1, 2)
        return FieldElem(int(self._data[i, j]), self.p)

    def _same(self, other: Matrix):
        if not isinstance(other, Matrix) or other.p != self.p:
            raise FieldError("operands must be matrices over the same field")

    def __add__(self, other: Matrix) -> Matrix:
        self._same(other)
        if other.shape != self.shape:
            raise FieldError("shape mismatch")
        if self.p == 2:
            return Matrix._from_packed(self._data ^ other._data, self.cols)
        return Matrix(self._data + other._data, self.p)

    def __sub__(self, other: Matrix) -> Matrix:
        self._same(other)
        return Matrix(self.to_array() - other.to_array(), self.p)

    def scale(self, a: int) -> Matrix:
        return Matrix(self.to_array() * int(a), self.p)

    @property
    def T(self) -> Matrix:
        return Matrix(self.to_array().T, self.p)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            self._same(other)
            if self.cols != other.rows:
                raise FieldError("shape mismatch")
            return Matrix(self.to_array() @ other.to_array(), self.p)
        v = np.asarray(other, dtype=np.int64)
        if v.shape[0] != self.cols:
            raise FieldError("vector length mismatch")
        return (self.to_array() @ v) % self.p

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self.to_array(), other.to_array())

    def __hash__(self):
        return hash((self.p, self.shape, self.to_array().tobytes()))

    def __repr__(self):
        return f"Matrix(p={self.p}, shape={self.shape})\n{self.to_array()}"

    def hstack(self, other: Matrix) -> Matrix:
        self._same(other)
        return Matrix(np.hstack([self.to_array(), other.to_array()]), self.p)

    def rref(self) -> tuple[Matrix, list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        if self.rows == 0 or self.cols == 0:
            return self, []
        if self.p == 2:
            R, piv = _rref_packed(self._data, self.cols)
            return Matrix._from_packed(R, self.cols), piv
        R, piv = _rref_dense(self._data, self.p)
        return Matrix(R, self.p), piv


def as_matrix(m, p: int | None = None) -> Matrix:
    if isinstance(m, Matrix):
        return m
    if p is None:
        raise FieldError("p required to build a matrix from raw entries")
    return Matrix(m, p)


def rank(m: Matrix) -> int:
    return len(m.rref()[1])


def nullspace(m: Matrix) -> list[np.ndarray]:
    """Free-variable basis of ``{v : m v = 0}`` read off the RREF."""
    R, pivots = m.rref()
    p = m.p
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    if not free:
        return []
    Ra = R.to_array()[: len(pivots)]
    basis = []
    for f in free:
        v = np.zeros(m.cols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-Ra[r, f]) % p
        basis.append(v)
    return basis


def nullspace_matrix(m: Matrix) -> np.ndarray:
    """Nullspace basis as the rows of a ``(k, cols)`` array."""
    basis = nullspace(m)
    if not basis:
        return np.zeros((0, m.cols), dtype=np.int64)
    return np.array(basis, dtype=np.int64)


def solve(m: Matrix, b: Sequence[int]) -> np.ndarray | None:
    """Some x with ``m x = b``, or None when the system is inconsistent."""
    b = np.asarray(b, dtype=np.int64) % m.p
    if b.shape != (m.rows,):
        raise FieldError("right-hand side length must equal the row count")
    if m.rows == 0:
        return np.zeros(m.cols, dtype=np.int64)
    aug = Matrix(np.hstack([m.to_array(), b.reshape(-1, 1)]), m.p)
    R, pivots = aug.rref()
    if pivots and pivots[-1] == m.cols:
        return None
    Ra = R.to_array()
    x = np.zeros(m.cols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = Ra[r, m.cols]
    return x


def det(m: Matrix) -> FieldElem:
    if m.rows != m.cols:
        raise FieldError("determinant of a non-square matrix")
    p = m.p
    n = m.rows
    if n == 0:
        return FieldElem(1, p)
    if p == 2:
        return FieldElem(1 if rank(m) == n else 0, 2)
    A = m.to_array()
    inv_t = inverse_table(p)
    d = 1
    for c in range(n):
        nz = np.flatnonzero(A[c:, c])
        if nz.size == 0:
            return FieldElem(0, p)
        k = c + int(nz[0])
        if k != c:
            A[[c, k]] = A[[k, c]]
            d = -d
        piv = int(A[c, c])
        d = (d * piv) % p
        below = A[c + 1 :, c].copy()
        rows = np.flatnonzero(below)
        if rows.size:
            factors = (below[rows] * inv_t[piv]) % p
            A[c + 1 + rows] = (A[c + 1 + rows] - np.outer(factors, A[c])) % p
    return FieldElem(d, p)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise FieldError("inverse of a non-square matrix")
    n = m.rows
    R, pivots = m.hstack(Matrix.identity(n, m.p)).rref()
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return Matrix(R.to_array()[:, n:], m.p)


# ---------- row-space helpers used throughout the package


def row_basis(vectors: Iterable[np.ndarray], n: int, p: int) -> np.ndarray:
    """RREF basis (as rows) of the span of ``vectors`` in F_p^n."""
    vs = [np.asarray(v, dtype=np.int64) for v in vectors]
    if not vs:
        return np.zeros((0, n), dtype=np.int64)
    R, pivots = Matrix(np.array(vs), p).rref()
    return R.to_array()[: len(pivots)]


def in_span(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis.shape[0] == 0:
        return not np.any(np.asarray(v) % p)
    r0 = basis.shape[0]
    return rank(Matrix(np.vstack([basis, np.asarray(v)[None, :]]), p)) == r0


def coordinates(basis: np.ndarray, v: np.ndarray, p: int) -> np.ndarray | None:
    """Coefficients c with ``c @ basis == v``, or None if v is outside the span."""
    if basis.shape[0] == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(np.asarray(v) % p) else None
    return solve(Matrix(basis.T, p), v)


def all_vectors(k: int, p: int) -> Iterable[np.ndarray]:
    """Every vector of F_p^k (p^k of them), in lexicographic order."""
    if k == 0:
        yield np.zeros(0, dtype=np.int64)
        return
    grids = np.indices((p,) * k).reshape(k, -1).T
    for row in grids:
        yield row.astype(np.int64)


# ---------- polynomials over F_p (coefficient lists, constant term first)


def poly_trim(f: Sequence[int], p: int) -> list[int]:
    f = [int(a) % p for a in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mul(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    if not f or not g:
        return []
    return poly_trim(np.convolve(np.asarray(f, dtype=np.int64), np.asarray(g, dtype=np.int64)) % p, p)


def poly_divmod(f: Sequence[int], g: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    f = poly_trim(f, p)
    g = poly_trim(g, p)
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [0] * max(len(f) - len(g) + 1, 0)
    lead = inv(g[-1], p)
    while len(f) >= len(g):
        shift = len(f) - len(g)
        c = f[-1] * lead % p
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        f = poly_trim(f, p)
    return poly_trim(q, p), f


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility over F_p by trial division by monic polynomials of degree <= deg/2."""
    f = poly_trim(f, p)
    d = len(f) - 1
    if d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for tail in np.ndindex(*(p,) * k):
            if not poly_divmod(f, list(tail) + [1], p)[1]:
                return False
    return True
