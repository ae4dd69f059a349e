"""Random Lie superalgebras over F_2 for property and oracle tests."""

from __future__ import annotations

import numpy as np

from nis2 import gf
from nis2.build import Format, matrix_superalgebra, supercommutator
from nis2.liesuper import SuperAlgebra, square_apply


def _block_mask(fmt: Format, parity: int) -> np.ndarray:
    n = fmt.size
    return np.array([[fmt.entry_parity(i, j) == parity for j in range(n)] for i in range(n)])


def matrix_closure(gens, fmt: Format, p: int = 2, limit: int = 64):
    """Span of homogeneous matrices closed under the supercommutator and odd squares.

    Returns (matrices, parities) or None when the span exceeds ``limit``.
    """
    basis: list[np.ndarray] = []
    pars: list[int] = []

    def add(M, q) -> bool:
        M = np.asarray(M, dtype=np.int64) % p
        if not np.any(M):
            return False
        flat = np.array([B.reshape(-1) for B in basis] + [M.reshape(-1)])
        if gf.rank(gf.Matrix(flat, p)) == len(basis):
            return False
        basis.append(M)
        pars.append(q)
        return True

    for M, q in gens:
        add(M, q)
    i = 0
    while i < len(basis):
        for j in range(i + 1):
            add(supercommutator(basis[i], basis[j], pars[i], pars[j], p), (pars[i] + pars[j]) % 2)
        if pars[i] and p == 2:
            add(basis[i] @ basis[i], 0)
        if len(basis) > limit:
            return None
        i += 1
    return basis, pars


def change_basis(g: SuperAlgebra, P: np.ndarray) -> SuperAlgebra:
    """The same algebra in the basis given by the columns of the parity-preserving P."""
    p, n = g.p, g.dim
    P = np.asarray(P, dtype=np.int64) % p
    Pinv = gf.inverse(gf.Matrix(P, p)).to_array()
    cols = [P[:, i] for i in range(n)]
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            v = np.einsum("a,b,abk->k", cols[i], cols[j], g.bracket) % p
            c[i, j] = Pinv @ v % p
    q = None
    if p == 2:
        q = np.zeros((n, n), dtype=np.int64)
        for i in g.odd_indices:
            q[i] = Pinv @ square_apply(g, cols[i]) % p
    return SuperAlgebra(p, g.dim_even, g.dim_odd, c, q, None, g.name)


def random_block_invertible(de: int, do: int, p: int, rng: np.random.Generator) -> np.ndarray:
    n = de + do
    while True:
        P = np.zeros((n, n), dtype=np.int64)
        P[:de, :de] = rng.integers(0, p, (de, de))
        P[de:, de:] = rng.integers(0, p, (do, do))
        if gf.rank(gf.Matrix(P, p)) == n:
            return P


def random_subalgebra(fmt: Format, sdim: tuple[int, int], rng: np.random.Generator, p: int = 2, tries: int = 2000):
    """A random sub-superalgebra of gl(fmt) of the given superdimension, or None."""
    masks = (_block_mask(fmt, 0), _block_mask(fmt, 1))
    n = fmt.size
    for _ in range(tries):
        k = int(rng.integers(2, 4))
        gens = []
        for _ in range(k):
            q = int(rng.integers(0, 2))
            gens.append(((rng.integers(0, p, (n, n)) * masks[q]), q))
        got = matrix_closure(gens, fmt, p, limit=sum(sdim))
        if got is None:
            continue
        mats, pars = got
        if (pars.count(0), pars.count(1)) == sdim:
            return matrix_superalgebra(mats, pars, p)
    return None


def random_superalgebra_4_4(rng: np.random.Generator) -> SuperAlgebra:
    """A random 4|4 Lie superalgebra over F_2 with randomized basis."""
    fmts = [Format.standard(2, 2), Format.standard(3, 1), Format.standard(2, 1), Format.standard(1, 2)]
    while True:
        fmt = fmts[int(rng.integers(0, len(fmts)))]
        g = random_subalgebra(fmt, (4, 4), rng, tries=50)
        if g is not None:
            return change_basis(g, random_block_invertible(4, 4, 2, rng))
