"""Lie superalgebras given by structure constants and a squaring table.

A :class:`SuperAlgebra` over F_p has an ordered basis with the even vectors
first.  ``bracket[i, j]`` is the coordinate vector of ``[e_i, e_j]`` and, for
``p == 2``, ``squaring[i]`` is the coordinate vector of ``e_i**2`` for odd
``i`` (rows of even indices are zero).  For odd p there is no squaring table
and ``x**2`` means ``(1/2)[x, x]``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gf
from .gf import Matrix


class StructureError(ValueError):
    """Malformed structure tables (shape, range or parity violations)."""


def default_rng(seed: int | None = None) -> np.random.Generator:
    if seed is None:
        env = os.environ.get("NIS2_SEED")
        seed = int(env) if env else 0
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class SuperAlgebra:
    p: int
    dim_even: int
    dim_odd: int
    bracket: np.ndarray = field(repr=False)
    squaring: np.ndarray | None = field(default=None, repr=False)
    labels: tuple[str, ...] | None = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        gf.check_prime(self.p)
        n = self.dim_even + self.dim_odd
        c = np.array(self.bracket, dtype=np.int64)
        if c.shape != (n, n, n):
            raise StructureError(f"bracket table has shape {c.shape}, expected {(n, n, n)}")
        c = c % self.p
        c.flags.writeable = False
        object.__setattr__(self, "bracket", c)
        if self.squaring is not None:
            q = np.array(self.squaring, dtype=np.int64)
            if q.shape != (n, n):
                raise StructureError(f"squaring table has shape {q.shape}, expected {(n, n)}")
            q = q % self.p
            q.flags.writeable = False
            object.__setattr__(self, "squaring", q)
        elif self.p == 2:
            q = np.zeros((n, n), dtype=np.int64)
            q.flags.writeable = False
            object.__setattr__(self, "squaring", q)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise StructureError("one label per basis vector required")
            object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.dim_even + self.dim_odd

    @property
    def sdim(self) -> str:
        return f"{self.dim_even}|{self.dim_odd}"

    @property
    def parities(self) -> np.ndarray:
        return np.array([0] * self.dim_even + [1] * self.dim_odd, dtype=np.int64)

    @property
    def even_indices(self) -> range:
        return range(self.dim_even)

    @property
    def odd_indices(self) -> range:
        return range(self.dim_even, self.dim)

    def label(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return f"e{i}"

    def describe(self, v: np.ndarray) -> str:
        """Human-readable linear combination of basis labels."""
        terms = []
        for i in np.flatnonzero(np.asarray(v) % self.p):
            a = int(v[i]) % self.p
            terms.append(self.label(i) if a == 1 else f"{a}*{self.label(i)}")
        return "+".join(terms) if terms else "0"

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def vector_parity(self, v: np.ndarray) -> int | None:
        """0 or 1 for homogeneous nonzero v, None for inhomogeneous; zero counts as even."""
        v = np.asarray(v) % self.p
        ev = np.any(v[: self.dim_even])
        od = np.any(v[self.dim_even :])
        if ev and od:
            return None
        return 1 if od else 0

    def same_tables(self, other: SuperAlgebra) -> bool:
        return (
            self.p == other.p
            and self.dim_even == other.dim_even
            and self.dim_odd == other.dim_odd
            and np.array_equal(self.bracket, other.bracket)
            and (
                (self.squaring is None and other.squaring is None)
                or (
                    self.squaring is not None
                    and other.squaring is not None
                    and np.array_equal(self.squaring, other.squaring)
                )
            )
        )

    def renamed(self, name: str) -> SuperAlgebra:
        return SuperAlgebra(self.p, self.dim_even, self.dim_odd, self.bracket, self.squaring, self.labels, name)


def abelian(dim_even: int, dim_odd: int = 0, p: int = 2, labels=None) -> SuperAlgebra:
    n = dim_even + dim_odd
    return SuperAlgebra(p, dim_even, dim_odd, np.zeros((n, n, n), dtype=np.int64), None, labels, f"abelian({dim_even}|{dim_odd})")


def from_entries(
    p: int,
    dim_even: int,
    dim_odd: int,
    brackets: Iterable[tuple[int, int, int, int]],
    squares: Iterable[tuple[int, int, int]] = (),
    labels=None,
    name: str = "",
) -> SuperAlgebra:
    """Build an algebra from ``(i, j, k, c)`` bracket entries with i < j.

    The entry for ``[e_j, e_i]`` is filled in by (super) antisymmetry.
    """
    n = dim_even + dim_odd
    c = np.zeros((n, n, n), dtype=np.int64)
    par = [0] * dim_even + [1] * dim_odd
    for i, j, k, val in brackets:
        if not (0 <= i < j < n and 0 <= k < n):
            raise StructureError(f"bracket entry ({i},{j},{k}) out of range or not i<j")
        c[i, j, k] = (c[i, j, k] + val) % p
        sign = -((-1) ** (par[i] * par[j]))
        c[j, i, k] = (c[j, i, k] + sign * val) % p
    q = None
    if p == 2:
        q = np.zeros((n, n), dtype=np.int64)
        for i, k, val in squares:
            q[i, k] = (q[i, k] + val) % p
    elif list(squares):
        raise StructureError("squaring entries are only stored for p = 2")
    return SuperAlgebra(p, dim_even, dim_odd, c, q, labels, name)


# ---------- elementwise operations


def _check_len(g: SuperAlgebra, *vs):
    for v in vs:
        if np.shape(v) != (g.dim,):
            raise ValueError(f"vector of length {np.shape(v)} for an algebra of dimension {g.dim}")


def bracket_apply(g: SuperAlgebra, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    _check_len(g, x, y)
    return np.einsum("i,j,ijk->k", x, y, g.bracket) % g.p


def square_apply(g: SuperAlgebra, x) -> np.ndarray:
    """The squaring of an odd vector over F_2, extended by the quadratic rule."""
    x = np.asarray(x, dtype=np.int64) % g.p
    _check_len(g, x)
    if g.p != 2:
        raise ValueError("the squaring table exists only for p = 2; use square() for (1/2)[x,x]")
    if np.any(x[: g.dim_even]):
        raise ValueError("squaring is defined on odd vectors only")
    out = (x * x) @ g.squaring
    upper = np.triu(np.outer(x, x), k=1)
    out = out + np.einsum("ij,ijk->k", upper, g.bracket)
    return out % 2


def square(g: SuperAlgebra, x) -> np.ndarray:
    """``x**2`` for odd x: the squaring table at p = 2, ``(1/2)[x, x]`` otherwise."""
    if g.p == 2:
        return square_apply(g, x)
    x = np.asarray(x, dtype=np.int64)
    return (bracket_apply(g, x, x) * gf.inv(2, g.p)) % g.p


def ad(g: SuperAlgebra, x) -> np.ndarray:
    """Matrix of ``ad_x`` acting on coordinates: column j is ``[x, e_j]``."""
    x = np.asarray(x, dtype=np.int64)
    return np.einsum("i,ijk->kj", x, g.bracket) % g.p


def ad_basis(g: SuperAlgebra) -> np.ndarray:
    """Stack of ``ad_{e_i}`` as an array of shape (n, n, n)."""
    return np.transpose(g.bracket, (0, 2, 1)).copy()


# ---------- subspaces


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of an algebra, stored as its RREF row basis."""

    ambient: SuperAlgebra
    basis: np.ndarray
    homogeneous: bool = field(init=False)

    def __post_init__(self):
        g = self.ambient
        b = gf.row_basis(list(np.asarray(self.basis, dtype=np.int64).reshape(-1, g.dim)), g.dim, g.p)
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)
        homog = all(g.vector_parity(r) is not None for r in b)
        object.__setattr__(self, "homogeneous", homog)

    @classmethod
    def span(cls, g: SuperAlgebra, vectors: Iterable) -> Subspace:
        vs = [np.asarray(v, dtype=np.int64) for v in vectors]
        return cls(g, np.array(vs).reshape(-1, g.dim) if vs else np.zeros((0, g.dim), dtype=np.int64))

    @classmethod
    def zero(cls, g: SuperAlgebra) -> Subspace:
        return cls(g, np.zeros((0, g.dim), dtype=np.int64))

    @classmethod
    def whole(cls, g: SuperAlgebra) -> Subspace:
        return cls(g, np.eye(g.dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def sdim(self) -> str:
        e = self.even_part().dim
        o = self.odd_part().dim
        return f"{e}|{o}"

    def vectors(self) -> list[np.ndarray]:
        return [r.copy() for r in self.basis]

    def contains(self, v) -> bool:
        return gf.in_span(self.basis, np.asarray(v, dtype=np.int64) % self.ambient.p, self.ambient.p)

    def issubset(self, other: Subspace) -> bool:
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient is other.ambient and np.array_equal(self.basis, other.basis)

    def __hash__(self):
        return hash(self.basis.tobytes())

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace.span(self.ambient, list(self.basis) + list(other.basis))

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_whole(self) -> bool:
        return self.dim == self.ambient.dim

    def _part(self, odd: bool) -> Subspace:
        # S ∩ g_ev (or g_od): kill the other parity's coordinates
        g = self.ambient
        cols = slice(0, g.dim_even) if odd else slice(g.dim_even, g.dim)
        if self.dim == 0:
            return Subspace.zero(g)
        block = self.basis[:, cols]
        coeffs = gf.nullspace_matrix(Matrix(block.T, g.p))
        return Subspace.span(g, [(c @ self.basis) % g.p for c in coeffs])

    def even_part(self) -> Subspace:
        return self._part(odd=False)

    def odd_part(self) -> Subspace:
        return self._part(odd=True)

    def intersect_parts(self) -> Subspace:
        """``(S ∩ g_ev) ⊕ (S ∩ g_od)``: the largest subsuperspace inside S."""
        return self.even_part() + self.odd_part()

    def project_parts(self) -> Subspace:
        """``pr_ev(S) ⊕ pr_od(S)``: the smallest subsuperspace containing S."""
        g = self.ambient
        mask = g.parities.astype(bool)
        vs = []
        for r in self.basis:
            vs.append(np.where(mask, 0, r))
            vs.append(np.where(mask, r, 0))
        return Subspace.span(g, vs)

    def __repr__(self):
        return f"Subspace({self.sdim}, {self.describe()})"

    def describe(self) -> str:
        return "span{" + ", ".join(self.ambient.describe(r) for r in self.basis) + "}"


# ---------- F_2 bitset spinning (the hot loop of ideal closure and simplicity)


def _bits(v) -> int:
    out = 0
    for i in np.flatnonzero(np.asarray(v) % 2):
        out |= 1 << int(i)
    return out


def _unbits(x: int, n: int) -> np.ndarray:
    return np.array([(x >> i) & 1 for i in range(n)], dtype=np.int64)


def _apply_cols(cols: Sequence[int], v: int) -> int:
    r = 0
    while v:
        low = v & -v
        r ^= cols[low.bit_length() - 1]
        v ^= low
    return r


class _BitEchelon:
    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict[int, int] = {}

    def reduce(self, v: int) -> int:
        rows = self.rows
        while v:
            h = v.bit_length() - 1
            r = rows.get(h)
            if r is None:
                return v
            v ^= r
        return 0

    def add(self, v: int) -> int:
        v = self.reduce(v)
        if v:
            self.rows[v.bit_length() - 1] = v
        return v

    def __len__(self):
        return len(self.rows)


class _F2Tables:
    """Bitset views of an F_2 algebra's tables, cached per algebra."""

    def __init__(self, g: SuperAlgebra):
        n = g.dim
        self.n = n
        self.odd_mask = ((1 << n) - 1) ^ ((1 << g.dim_even) - 1)
        # ad_cols[j][i] = bits of [e_j, e_i]
        self.ad_cols = [[_bits(g.bracket[j, i]) for i in range(n)] for j in range(n)]
        self.br = self.ad_cols
        self.sq = [_bits(g.squaring[i]) for i in range(n)]

    def square(self, v: int) -> int:
        out = 0
        idx = [i for i in range(self.n) if (v >> i) & 1]
        for a, i in enumerate(idx):
            out ^= self.sq[i]
            for k in idx[a + 1 :]:
                out ^= self.br[i][k]
        return out


_F2_CACHE: dict[int, tuple[SuperAlgebra, _F2Tables]] = {}


def _f2_tables(g: SuperAlgebra) -> _F2Tables:
    hit = _F2_CACHE.get(id(g))
    if hit is not None and hit[0] is g:
        return hit[1]
    t = _F2Tables(g)
    if len(_F2_CACHE) > 64:
        _F2_CACHE.clear()
    _F2_CACHE[id(g)] = (g, t)
    return t


def _closure_bits(t: _F2Tables, seeds: Iterable[int], stop_at_full: bool = True) -> _BitEchelon:
    # seeds must be homogeneous; reduced vectors then stay homogeneous
    ech = _BitEchelon()
    queue = []
    for s in seeds:
        r = ech.add(s)
        if r:
            queue.append(r)
    n = t.n
    while queue:
        w = queue.pop()
        if w & t.odd_mask:
            r = ech.add(t.square(w))
            if r:
                queue.append(r)
        for cols in t.ad_cols:
            r = ech.add(_apply_cols(cols, w))
            if r:
                queue.append(r)
                if stop_at_full and len(ech) == n:
                    return ech
    return ech


def _spin_bits(op_cols: Sequence[Sequence[int]], seeds: Iterable[int], n: int) -> _BitEchelon:
    ech = _BitEchelon()
    queue = []
    for s in seeds:
        r = ech.add(s)
        if r:
            queue.append(r)
    while queue and len(ech) < n:
        w = queue.pop()
        for cols in op_cols:
            r = ech.add(_apply_cols(cols, w))
            if r:
                queue.append(r)
    return ech


def _spin_dense(ops: Sequence[np.ndarray], seeds: Iterable[np.ndarray], n: int, p: int, extra=None) -> np.ndarray:
    basis = np.zeros((0, n), dtype=np.int64)
    queue = []

    def push(v):
        nonlocal basis
        v = np.asarray(v, dtype=np.int64) % p
        if not np.any(v) or gf.in_span(basis, v, p):
            return
        basis = gf.row_basis(list(basis) + [v], n, p)
        queue.append(v)

    for s in seeds:
        push(s)
    while queue and basis.shape[0] < n:
        w = queue.pop()
        for M in ops:
            push(M @ w)
        if extra is not None:
            for u in extra(w):
                push(u)
    return basis


# ---------- structural computations


def commutant(g: SuperAlgebra) -> Subspace:
    """Span of all brackets of basis vectors."""
    return Subspace.span(g, g.bracket.reshape(-1, g.dim))


def _squares_of(g: SuperAlgebra, S: Subspace) -> list[np.ndarray]:
    return [square(g, v) for v in S.odd_part().basis]


def _brackets_of(g: SuperAlgebra, A: Subspace, B: Subspace) -> list[np.ndarray]:
    if A.dim == 0 or B.dim == 0:
        return []
    return list(np.einsum("ai,bj,ijk->abk", A.basis, B.basis, g.bracket).reshape(-1, g.dim) % g.p)


def derived(g: SuperAlgebra, i: int) -> Subspace:
    """The i-th derived algebra; at p = 2 each step also adjoins odd squares."""
    S = Subspace.whole(g)
    for _ in range(i):
        vs = _brackets_of(g, S, S)
        if g.p == 2:
            vs += _squares_of(g, S)
        T = Subspace.span(g, vs)
        if T == S:
            break
        S = T
    return S


def center(g: SuperAlgebra) -> Subspace:
    """``{x : [x, y] = 0 for all y}``, the nullspace of the stacked brackets."""
    n = g.dim
    # row (j,k): sum_i x_i c[i,j,k]
    M = np.transpose(g.bracket, (1, 2, 0)).reshape(n * n, n)
    basis = gf.nullspace(Matrix(M, g.p))
    return Subspace.span(g, basis).project_parts()


def ideal_closure(g: SuperAlgebra, S: Subspace | Iterable) -> Subspace:
    """The ideal generated by S: homogeneous, ad-stable and closed under squaring."""
    if not isinstance(S, Subspace):
        S = Subspace.span(g, S)
    W = S.project_parts()
    if W.dim == 0:
        return W
    if g.p == 2:
        t = _f2_tables(g)
        ech = _closure_bits(t, [_bits(v) for v in W.basis])
        return Subspace.span(g, [_unbits(r, g.dim) for r in ech.rows.values()])
    ops = list(ad_basis(g))
    basis = _spin_dense(ops, W.basis, g.dim, g.p)
    return Subspace(g, basis)


def is_ideal(g: SuperAlgebra, S: Subspace) -> bool:
    if not S.homogeneous:
        return False
    if any(not S.contains(v) for v in _brackets_of(g, S, Subspace.whole(g))):
        return False
    return all(S.contains(v) for v in _squares_of(g, S))


def is_perfect(g: SuperAlgebra) -> bool:
    return commutant(g).is_whole()


@dataclass
class SimplicityVerdict:
    simple: bool
    method: str
    witness: Subspace | None = None
    trials: int = 0
    note: str = ""

    def __bool__(self):
        return self.simple

    @property
    def probabilistic(self) -> bool:
        return self.method == "probabilistic"


def _homogeneous_lines(basis: np.ndarray, g: SuperAlgebra) -> Iterable[np.ndarray]:
    """Nonzero vectors of span(basis) up to scalars, basis assumed homogeneous RREF."""
    p = g.p
    k = basis.shape[0]
    for coeffs in gf.all_vectors(k, p):
        nz = np.flatnonzero(coeffs)
        if nz.size == 0 or coeffs[nz[0]] != 1:
            continue
        yield (coeffs @ basis) % p


def _parity_blocks(g: SuperAlgebra, basis: np.ndarray) -> list[np.ndarray]:
    """Split a homogeneous RREF basis into its even and odd rows."""
    ev = [r for r in basis if g.vector_parity(r) == 0]
    od = [r for r in basis if g.vector_parity(r) == 1]
    return [np.array(b).reshape(-1, g.dim) for b in (ev, od) if b]


def _even_words(g: SuperAlgebra, rng: np.random.Generator, terms: int = 6) -> np.ndarray:
    """A random even element of the associative algebra generated by ad(g) and the parity projection."""
    n = g.dim
    p = g.p
    ads = ad_basis(g)
    pi = np.diag(1 - g.parities)
    theta = np.zeros((n, n), dtype=np.int64)
    for _ in range(terms):
        length = int(rng.integers(1, 4))
        word = np.eye(n, dtype=np.int64)
        parity = 0
        for _ in range(length):
            j = int(rng.integers(0, n))
            word = (word @ ads[j]) % p
            parity ^= int(g.parities[j])
        if parity:
            j = int(rng.choice(g.odd_indices)) if g.dim_odd else 0
            word = (word @ ads[j]) % p
        if rng.random() < 0.3:
            word = (word @ pi) % p
        theta = (theta + int(rng.integers(1, p)) * word) % p
    return theta


def _small_irreducibles(p: int, max_degree: int = 3) -> list[list[int]]:
    """Monic irreducible polynomials over F_p (coefficient lists, constant first)."""
    out = []
    for d in range(1, max_degree + 1):
        for tail in itertools.product(range(p), repeat=d):
            coeffs = list(tail) + [1]
            if gf.is_irreducible(coeffs, p):
                out.append(coeffs)
    return out


def _poly_of_matrix(coeffs: Sequence[int], A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in reversed(coeffs):
        out = (out @ A + c * np.eye(n, dtype=np.int64)) % p
    return out


def _norton(g: SuperAlgebra, rng: np.random.Generator, attempts: int, max_nullity: int) -> SimplicityVerdict | None:
    """Exact simplicity test via a singular element of the ad-algebra.

    With theta singular and stabilising every ideal I: either theta is
    singular on I, so some homogeneous line of ker(theta) generates a proper
    ideal, or theta is invertible on I and then ker(theta^T) lies in I^perp,
    so one dual vector that spins to everything rules I out.
    """
    n, p = g.dim, g.p
    polys = _small_irreducibles(p, 3 if p <= 3 else 1)
    ops_T = [a.T.copy() for a in ad_basis(g)] + [np.diag(1 - g.parities)]
    for attempt in range(1, attempts + 1):
        theta = _even_words(g, rng)
        best = None
        for f in polys:
            F = _poly_of_matrix(f, theta, p)
            ker = gf.nullspace_matrix(Matrix(F, p))
            k = ker.shape[0]
            if 0 < k <= max_nullity and (best is None or k < best[0]):
                best = (k, F, ker)
        if best is None:
            continue
        _, F, _ = best
        ker = Subspace.span(g, gf.nullspace_matrix(Matrix(F, p))).project_parts()
        for block in _parity_blocks(g, ker.basis):
            for v in _homogeneous_lines(block, g):
                J = ideal_closure(g, [v])
                if not J.is_whole():
                    return SimplicityVerdict(False, "norton", J, attempt)
        dual = gf.nullspace_matrix(Matrix(F.T, p))
        if p == 2:
            spun = len(_spin_bits([[_bits(M[:, i]) for i in range(n)] for M in ops_T], [_bits(dual[0])], n))
        else:
            spun = _spin_dense(ops_T, [dual[0]], n, p).shape[0]
        if spun == n:
            return SimplicityVerdict(True, "norton", None, attempt)
    return None


def is_simple(
    g: SuperAlgebra,
    *,
    exhaustive_limit: int = 22,
    trials: int = 200,
    rng: np.random.Generator | None = None,
) -> SimplicityVerdict:
    """Decide whether g has no ideals besides 0 and g (and dim g > 1).

    Cheap certificates come first (center, first derived algebra).  Then an
    exact test through a singular element of the ad-algebra is tried; when it
    is inconclusive every homogeneous line is closed over F_2 up to
    ``exhaustive_limit`` dimensions, and beyond that random lines are sampled
    and the verdict is labelled probabilistic.
    """
    if g.dim <= 1:
        return SimplicityVerdict(False, "trivial", note="dim <= 1")
    Z = center(g)
    if not Z.is_zero():
        return SimplicityVerdict(False, "center", Z)
    D = derived(g, 1)
    if not D.is_whole():
        return SimplicityVerdict(False, "derived", D)
    rng = rng if rng is not None else default_rng()
    verdict = _norton(g, rng, attempts=12, max_nullity=10)
    if verdict is not None:
        return verdict
    if g.p == 2 and g.dim <= exhaustive_limit:
        for i in g.even_indices, g.odd_indices:
            block = np.eye(g.dim, dtype=np.int64)[list(i)]
            for v in _homogeneous_lines(block, g):
                J = ideal_closure(g, [v])
                if not J.is_whole():
                    return SimplicityVerdict(False, "exhaustive", J)
        return SimplicityVerdict(True, "exhaustive")
    for t in range(1, trials + 1):
        v = rng.integers(0, g.p, g.dim)
        v[g.parities.astype(bool) if t % 2 else ~g.parities.astype(bool)] = 0
        if not np.any(v):
            continue
        J = ideal_closure(g, [v])
        if not J.is_whole():
            return SimplicityVerdict(False, "probabilistic", J, t)
    return SimplicityVerdict(True, "probabilistic", trials=trials)


# ---------- validation


@dataclass
class AxiomResult:
    key: str
    statement: str
    passed: bool
    witness: tuple[str, ...] | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "statement": self.statement,
            "passed": self.passed,
            "witness": list(self.witness) if self.witness else None,
            "detail": self.detail,
        }


@dataclass
class ValidationReport:
    p: int
    sdim: str
    structural_errors: list[str]
    axioms: list[AxiomResult]

    @property
    def ok(self) -> bool:
        return not self.structural_errors and all(a.passed for a in self.axioms)

    def __getitem__(self, key: str) -> AxiomResult:
        for a in self.axioms:
            if a.key == key:
                return a
        raise KeyError(key)

    def failed(self) -> list[AxiomResult]:
        return [a for a in self.axioms if not a.passed]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "sdim": self.sdim,
            "ok": self.ok,
            "structural_errors": list(self.structural_errors),
            "axioms": [a.to_dict() for a in self.axioms],
        }

    def format_text(self) -> str:
        lines = [f"superdimension {self.sdim} over F_{self.p}"]
        for e in self.structural_errors:
            lines.append(f"STRUCTURE ERROR: {e}")
        for a in self.axioms:
            line = f"{'PASS' if a.passed else 'FAIL'}  {a.key:<20} {a.statement}"
            if not a.passed and a.witness:
                line += f"  witness ({', '.join(a.witness)})"
                if a.detail:
                    line += f": {a.detail}"
            lines.append(line)
        lines.append("Lie superalgebra: " + ("yes" if self.ok else "no"))
        return "\n".join(lines)


STATEMENTS = {
    "alternating": "[x,x]=0 for even x",
    "antisymmetry": "[x,y] = -(-1)^{p(x)p(y)} [y,x]",
    "jacobi_even": "Jacobi identity on even triples",
    "module": "odd part is a module over the even part",
    "polarization": "[x,y] = (x+y)^2 + x^2 + y^2 for odd x,y",
    "square_even": "[x^2,y] = [x,[x,y]] for odd x, even y",
    "square_self": "[x^2,x] = 0 for odd x",
    "jacobi_odd": "[x,[y,z]]+[y,[z,x]]+[z,[x,y]] = 0 for odd x,y,z",
    "square_odd": "[x^2,y] = [x,[x,y]] for odd x,y",
    "triple_self": "[x,[x,x]] = 0 for odd x",
    "jacobi_super": "super Jacobi identity on all triples",
}


def structural_errors(g: SuperAlgebra) -> list[str]:
    errs = []
    n = g.dim
    if g.bracket.shape != (n, n, n):
        errs.append(f"bracket table has shape {g.bracket.shape}, expected {(n, n, n)}")
        return errs
    par = g.parities
    for i, j, k in zip(*np.nonzero(g.bracket)):
        if par[k] != (par[i] + par[j]) % 2:
            errs.append(f"[{g.label(i)},{g.label(j)}] has a component along {g.label(k)} of the wrong parity")
    if g.p == 2:
        q = g.squaring
        for i, k in zip(*np.nonzero(q)):
            if par[i] == 0:
                errs.append(f"squaring entry for even basis vector {g.label(i)}")
            elif par[k] == 1:
                errs.append(f"{g.label(i)}^2 has an odd component along {g.label(k)}")
    elif g.squaring is not None and np.any(g.squaring):
        errs.append("squaring table present for p != 2")
    return errs


def _support_points(idx: Sequence[int], deg: int, p: int, n: int) -> Iterable[tuple[np.ndarray, str]]:
    """Vectors with support of size <= deg inside idx, first coefficient 1.

    A polynomial identity of degree <= deg in the coordinates holds on all of
    F_p^n exactly when it holds on these points (up to homogeneity).
    """
    idx = list(idx)
    for size in range(1, deg + 1):
        for T in itertools.combinations(idx, size):
            for tail in itertools.product(range(1, p), repeat=size - 1):
                v = np.zeros(n, dtype=np.int64)
                coeffs = (1,) + tail
                for i, a in zip(T, coeffs):
                    v[i] = a
                yield v, T


def _first_nonzero(T: np.ndarray, mask: np.ndarray | None = None):
    """Index of the first nonzero vector T[idx, :] (optionally restricted by mask), or None."""
    bad = np.any(T, axis=-1)
    if mask is not None:
        bad &= mask
    hits = np.argwhere(bad)
    return tuple(int(t) for t in hits[0]) if hits.size else None


def validate(g: SuperAlgebra) -> ValidationReport:
    """Check every Lie superalgebra axiom, with a witness for each failure."""
    errs = structural_errors(g)
    report = ValidationReport(g.p, g.sdim, errs, [])
    if errs:
        return report
    p, n, c = g.p, g.dim, g.bracket
    par = g.parities
    odd = par.astype(bool)
    ev, od = list(g.even_indices), list(g.odd_indices)
    lab = g.label

    def record(key, witness=None, detail=""):
        report.axioms.append(AxiomResult(key, STATEMENTS[key], witness is None, witness, detail))

    # alternating
    w = next(((lab(i),) for i in ev if np.any(c[i, i])), None)
    record("alternating", w)

    sign = -((-1) ** np.outer(par, par))
    D = (c - sign[:, :, None] * np.transpose(c, (1, 0, 2))) % p
    mask = np.triu(np.ones((n, n), dtype=bool), k=0 if p != 2 else 1)
    hit = _first_nonzero(D, mask)
    record("antisymmetry", (lab(hit[0]), lab(hit[1])) if hit else None)

    # T1[i,j,k] = [e_i,[e_j,e_k]], T2[i,j,k] = [[e_i,e_j],e_k]
    T1 = np.einsum("jkm,iml->ijkl", c, c) % p
    T2 = np.einsum("ijm,mkl->ijkl", c, c) % p
    sij = (-1) ** np.outer(par, par)
    # [x,[y,z]] - [[x,y],z] - (-1)^{p(x)p(y)} [y,[x,z]]
    J = (T1 - T2 - sij[:, :, None, None] * np.transpose(T1, (1, 0, 2, 3))) % p

    def jac_record(key, sel):
        hit = _first_nonzero(J, sel)
        if hit is None:
            record(key)
        else:
            record(key, tuple(lab(t) for t in hit), g.describe(J[hit]))

    if p != 2:
        jac_record("jacobi_super", None)
    else:
        e = ~odd
        jac_record("jacobi_even", e[:, None, None] & e[None, :, None] & e[None, None, :])
        jac_record("module", e[:, None, None] & e[None, :, None] & odd[None, None, :])
        # on the diagonal this reads [x,x] = (2x)^2 + x^2 + x^2 = 0
        hit = None
        for i, j in itertools.combinations_with_replacement(od, 2):
            x, y = g.basis_vector(i), g.basis_vector(j)
            rhs = (square(g, (x + y) % 2) + square(g, x) + square(g, y)) % 2
            if np.any((c[i, j] - rhs) % 2):
                hit = (i, j, rhs)
                break
        if hit is None:
            record("polarization")
        else:
            i, j, rhs = hit
            record(
                "polarization",
                (lab(i), lab(j)),
                f"[x,y] = {g.describe(c[i, j])} but (x+y)^2 + x^2 + y^2 = {g.describe(rhs)}",
            )

    # identities involving squares, checked as functions of x on enough points
    fails = {"square_even": None, "square_self": None, "square_odd": None, "triple_self": None}
    for x, T in _support_points(od, 3, p, n):
        A = ad(g, x)
        S = ad(g, square(g, x))
        if len(T) <= 2:
            M = (S - A @ A) % p
            bad_cols = np.flatnonzero(np.any(M, axis=0))
            for key, want in (("square_even", 0), ("square_odd", 1)):
                if fails[key] is None:
                    cols = [j for j in bad_cols if par[j] == want]
                    if cols:
                        j = cols[0]
                        y = g.basis_vector(j)
                        lhs, rhs = S @ y % p, A @ (A @ y) % p
                        fails[key] = (
                            (g.describe(x), lab(j)),
                            f"[x^2,y] = {g.describe(lhs)} but [x,[x,y]] = {g.describe(rhs)}",
                        )
        if fails["square_self"] is None:
            r = S @ x % p
            if np.any(r):
                fails["square_self"] = ((g.describe(x),), f"[x^2,x] = {g.describe(r)}")
        if p == 3 and fails["triple_self"] is None:
            r = A @ (A @ x) % p
            if np.any(r):
                fails["triple_self"] = ((g.describe(x),), f"[x,[x,x]] = {g.describe(r)}")

    def rec_fail(key):
        f = fails[key]
        record(key, *(f if f else (None, "")))

    rec_fail("square_even")
    rec_fail("square_self")
    Jo = (T1 + np.transpose(T1, (1, 2, 0, 3)) + np.transpose(T1, (2, 0, 1, 3))) % p
    hit = _first_nonzero(Jo, odd[:, None, None] & odd[None, :, None] & odd[None, None, :])
    if hit is None:
        record("jacobi_odd")
    else:
        record("jacobi_odd", tuple(lab(t) for t in hit), g.describe(Jo[hit]))
    if p == 3:
        rec_fail("triple_self")
    if p == 2:
        rec_fail("square_odd")
    return report


def is_lie_superalgebra(g: SuperAlgebra) -> bool:
    return validate(g).ok


# ---------- derivations and centroid


@dataclass(frozen=True, eq=False)
class Derivation:
    matrix: Matrix
    parity: int

    def __call__(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=np.int64)

    def to_array(self) -> np.ndarray:
        return self.matrix.to_array()


def _leibniz_system(g: SuperAlgebra, parity: int) -> np.ndarray:
    """Rows over unknowns D[a, b] (index a*n+b) for D[x,y] = [Dx,y] + sign [x,Dy]."""
    n, c = g.dim, g.bracket
    I = np.eye(n, dtype=np.int64)
    sign = np.array([(-1) ** (parity * int(s)) for s in g.parities], dtype=np.int64)
    E = np.einsum("ijm,ka->ijkam", c, I)
    E -= np.einsum("ajk,bi->ijkab", c, I)
    E -= np.einsum("iak,bj->ijkab", c, I) * sign[:, None, None, None, None]
    return E.reshape(n**3, n * n) % g.p


def _square_derivation_rows(g: SuperAlgebra, x: np.ndarray) -> np.ndarray:
    """Rows for D(x^2) - [Dx, x] = 0 at a fixed odd x."""
    n = g.dim
    s = square(g, x)
    R = np.einsum("alk,l->ak", g.bracket, x) % g.p
    E = np.einsum("m,ka->kam", s, np.eye(n, dtype=np.int64))
    E -= np.einsum("b,ak->kab", x, R)
    return E.reshape(n, n * n) % g.p


def _parity_columns(g: SuperAlgebra, parity: int) -> np.ndarray:
    par = g.parities
    return np.array([(par[a] + par[b]) % 2 == parity for a in range(g.dim) for b in range(g.dim)])


def derivation_system(g: SuperAlgebra, parity: int) -> np.ndarray:
    rows = [_leibniz_system(g, parity)]
    if g.p == 2:
        od = list(g.odd_indices)
        for i in od:
            rows.append(_square_derivation_rows(g, g.basis_vector(i)))
        for i, j in itertools.combinations(od, 2):
            rows.append(_square_derivation_rows(g, g.basis_vector(i) + g.basis_vector(j)))
    return np.vstack(rows)


def derivations(g: SuperAlgebra) -> list[Derivation]:
    """Basis of der(g), even derivations first."""
    n = g.dim
    out = []
    for parity in (0, 1):
        cols = _parity_columns(g, parity)
        if not cols.any():
            continue
        A = derivation_system(g, parity)[:, cols]
        A = A[np.any(A, axis=1)]
        if A.shape[0] == 0:
            sols = list(np.eye(int(cols.sum()), dtype=np.int64))
        else:
            sols = gf.nullspace(Matrix(A, g.p))
        for s in sols:
            full = np.zeros(n * n, dtype=np.int64)
            full[cols] = s
            out.append(Derivation(Matrix(full.reshape(n, n), g.p), parity))
    return out


def is_derivation(g: SuperAlgebra, D: np.ndarray, parity: int) -> bool:
    if isinstance(D, Matrix):
        D = D.to_array()
    D = np.asarray(D, dtype=np.int64) % g.p
    return not np.any((derivation_system(g, parity) @ D.reshape(-1)) % g.p)


def even_centroid(g: SuperAlgebra) -> list[np.ndarray]:
    """Even linear maps T with ``T[x, y] = [Tx, y]`` for all x, y."""
    n, c = g.dim, g.bracket
    I = np.eye(n, dtype=np.int64)
    E = np.einsum("ijm,ka->ijkam", c, I) - np.einsum("ajk,bi->ijkab", c, I)
    A = E.reshape(n**3, n * n) % g.p
    cols = _parity_columns(g, 0)
    A = A[:, cols]
    A = A[np.any(A, axis=1)]
    sols = gf.nullspace(Matrix(A, g.p)) if A.shape[0] else list(np.eye(int(cols.sum()), dtype=np.int64))
    out = []
    for s in sols:
        full = np.zeros(n * n, dtype=np.int64)
        full[cols] = s
        out.append(full.reshape(n, n))
    return out


# ---------- sub- and quotient algebras


def _pivot_coords(S: Subspace) -> list[int]:
    return [int(np.flatnonzero(r)[0]) for r in S.basis]


def subalgebra(g: SuperAlgebra, S: Subspace, name: str = "") -> SuperAlgebra:
    """The structure on a homogeneous subalgebra S, in its RREF basis."""
    if not S.homogeneous:
        raise StructureError("subalgebras must be homogeneous")
    rows = sorted(S.basis.tolist(), key=lambda r: g.vector_parity(np.array(r)))
    B = np.array(rows, dtype=np.int64).reshape(-1, g.dim)
    k = B.shape[0]
    de = sum(1 for r in B if g.vector_parity(r) == 0)
    M = Matrix(B.T, g.p)

    def coords(v):
        x = gf.solve(M, v)
        if x is None:
            raise StructureError("subspace is not closed under the operations")
        return x

    c = np.zeros((k, k, k), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            c[a, b] = coords(bracket_apply(g, B[a], B[b]))
    q = None
    if g.p == 2:
        q = np.zeros((k, k), dtype=np.int64)
        for a in range(de, k):
            q[a] = coords(square_apply(g, B[a]))
    labels = [g.describe(r) for r in B]
    return SuperAlgebra(g.p, de, k - de, c, q, labels, name)


def even_part(g: SuperAlgebra) -> SuperAlgebra:
    """g_ev as a Lie algebra (it occupies the first coordinates)."""
    m = g.dim_even
    labels = g.labels[:m] if g.labels else None
    return SuperAlgebra(g.p, m, 0, g.bracket[:m, :m, :m], None, labels, f"{g.name}_ev" if g.name else "")


def quotient(g: SuperAlgebra, I: Subspace, name: str = "") -> SuperAlgebra:
    """g / I in the basis of standard vectors off the pivots of I."""
    if not is_ideal(g, I):
        raise StructureError("quotient by a subspace that is not an ideal")
    pivots = set(_pivot_coords(I))
    keep = [i for i in range(g.dim) if i not in pivots]
    B = I.basis

    def reduce(v):
        v = np.asarray(v, dtype=np.int64) % g.p
        for r in B:
            piv = int(np.flatnonzero(r)[0])
            if v[piv]:
                v = (v - v[piv] * r) % g.p
        return v[keep]

    k = len(keep)
    de = sum(1 for i in keep if i < g.dim_even)
    c = np.zeros((k, k, k), dtype=np.int64)
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            c[a, b] = reduce(g.bracket[i, j])
    q = None
    if g.p == 2:
        q = np.zeros((k, k), dtype=np.int64)
        for a, i in enumerate(keep):
            if i >= g.dim_even:
                q[a] = reduce(g.squaring[i])
    labels = [g.label(i) for i in keep]
    return SuperAlgebra(g.p, de, k - de, c, q, labels, name)
