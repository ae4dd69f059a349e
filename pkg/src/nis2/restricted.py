"""p-structures on Lie algebras and p|2p-structures on Lie superalgebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf
from .gf import Matrix
from .liesuper import (
    Subspace,
    SuperAlgebra,
    ad,
    ad_basis,
    bracket_apply,
    center,
    even_part,
    square,
)


@dataclass(frozen=True, eq=False)
class PStructure:
    """``x -> x^[p]`` on the even part, given on the even basis.

    ``p_map[i]`` holds the coordinates of ``b_i^[p]`` in the even basis.  When
    the even part has a center, ``ambiguity`` spans it: any central shift of
    the table is another valid choice.
    """

    core: SuperAlgebra
    p_map: np.ndarray
    ambiguity: Subspace | None = field(default=None, repr=False)

    def __post_init__(self):
        m = self.core.dim_even
        pm = np.array(self.p_map, dtype=np.int64).reshape(m, m) % self.core.p
        pm.flags.writeable = False
        object.__setattr__(self, "p_map", pm)

    @property
    def p(self) -> int:
        return self.core.p

    @property
    def ambiguous(self) -> bool:
        return self.ambiguity is not None and self.ambiguity.dim > 0

    def apply(self, x) -> np.ndarray:
        """``x^[p]`` for an arbitrary vector of the even part."""
        return p_power(self.core, self.p_map, x)

    def two_p(self, g: SuperAlgebra, x) -> np.ndarray:
        """``x^[2p] = (x^2)^[p]`` for an odd x of g, as a vector of g."""
        m = g.dim_even
        s = square(g, x)
        out = np.zeros(g.dim, dtype=np.int64)
        out[:m] = self.apply(s[:m])
        return out


def _jacobson_terms(core: SuperAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``sum_i s_i(x, y)`` where ``i s_i`` is the coefficient of t^(i-1) in ad(tx+y)^(p-1)(x)."""
    p = core.p
    if p == 2:
        return bracket_apply(core, x, y)
    # ad(tx+y)^(p-1)(x) has degree <= p-2 in t: interpolate at t = 0..p-2
    pts = list(range(p - 1))
    vals = []
    for t in pts:
        A = ad(core, (t * x + y) % p)
        v = x.copy()
        for _ in range(p - 1):
            v = (A @ v) % p
        vals.append(v)
    V = np.array([[pow(t, k, p) for k in range(p - 1)] for t in pts], dtype=np.int64)
    Vinv = gf.inverse(Matrix(V, p)).to_array()
    coeffs = (Vinv @ np.array(vals)) % p  # row k: coefficient of t^k
    out = np.zeros(core.dim, dtype=np.int64)
    for k in range(p - 1):
        out = (out + gf.inv(k + 1, p) * coeffs[k]) % p
    return out


def p_power(core: SuperAlgebra, p_map: np.ndarray, x) -> np.ndarray:
    """Extend the basis table by Frobenius scaling and the Jacobson additivity rule."""
    p = core.p
    m = core.dim_even
    x = np.asarray(x, dtype=np.int64)[:m] % p
    acc = np.zeros(m, dtype=np.int64)
    acc_p = np.zeros(m, dtype=np.int64)
    for i in np.flatnonzero(x):
        a = int(x[i])
        y = np.zeros(m, dtype=np.int64)
        y[i] = a
        y_p = (pow(a, p, p) * p_map[i]) % p
        if np.any(acc):
            acc_p = (acc_p + y_p + _jacobson_terms(core, acc, y)) % p
        else:
            acc_p = y_p
        acc = (acc + y) % p
    return acc_p


@dataclass
class PStructureResult:
    structure: PStructure | None
    unsolvable: list[int]
    ambiguity: Subspace | None

    def __bool__(self):
        return self.structure is not None


def find_p_structure(g: SuperAlgebra, rng=None, checks: int = 50) -> PStructureResult:
    """Solve ``ad_y = (ad_b)^p`` on the even part for each even basis b.

    Returns the table when every system is solvable.  A nonzero center of the
    even part makes the choice non-unique; the solver representative is kept
    and the center is attached as the ambiguity space.
    """
    from .liesuper import default_rng

    core = even_part(g)
    m, p = core.dim, core.p
    ads = ad_basis(core)
    A = ads.reshape(m, m * m).T
    M = Matrix(A, p)
    table = np.zeros((m, m), dtype=np.int64)
    bad = []
    for i in range(m):
        T = _mat_pow(ads[i], p, p)
        y = gf.solve(M, T.reshape(-1))
        if y is None:
            bad.append(i)
        else:
            table[i] = y
    Z = center(core)
    amb = Z if Z.dim else None
    if bad:
        return PStructureResult(None, bad, amb)
    ps = PStructure(core, table, amb)
    rng = rng if rng is not None else default_rng()
    for _ in range(checks):
        x = rng.integers(0, p, m)
        if not _restr_holds(core, ps, x):
            raise AssertionError("extended p-map fails the restrictedness identity")
    return PStructureResult(ps, [], amb)


def _restr_holds(core: SuperAlgebra, ps: PStructure, x) -> bool:
    A = ad(core, x)
    lhs = ad(core, ps.apply(x))
    return np.array_equal(lhs, _mat_pow(A, core.p, core.p))


def _mat_pow(A: np.ndarray, k: int, p: int) -> np.ndarray:
    out = np.eye(A.shape[0], dtype=np.int64)
    for _ in range(k):
        out = (out @ A) % p
    return out


@dataclass
class StructureVerdict:
    ok: bool
    restricted_even: bool
    restricted_odd: bool
    two_p: bool
    witnesses: list[tuple[str, str, str]]

    def failed_parts(self) -> list[str]:
        return [k for k, v in (("restricted_even", self.restricted_even), ("restricted_odd", self.restricted_odd), ("two_p", self.two_p)) if not v]


def verify_2_4_structure(g: SuperAlgebra, ps: PStructure) -> StructureVerdict:
    """Check ``[x^[p], y] = (ad_x)^p y`` for even basis x against even and odd y
    separately, and ``[x^[2p], y] = (ad_x)^(2p) y`` for odd x (basis vectors and
    pairwise sums) against all y."""
    p, m, n = g.p, g.dim_even, g.dim
    wit = []
    ok_even = ok_odd = True
    for i in range(m):
        x = g.basis_vector(i)
        xp = np.zeros(n, dtype=np.int64)
        xp[:m] = ps.apply(x[:m])
        lhs = ad(g, xp)
        rhs = _mat_pow(ad(g, x), p, p)
        diff = np.flatnonzero(np.any((lhs - rhs) % p, axis=0))
        for j in diff:
            if j < m:
                ok_even = False
                wit.append(("restricted_even", g.label(i), g.label(j)))
            else:
                ok_odd = False
                wit.append(("restricted_odd", g.label(i), g.label(j)))
    ok_2p = True
    od = list(g.odd_indices)
    cands = [(g.basis_vector(i), g.label(i)) for i in od]
    cands += [
        (g.basis_vector(i) + g.basis_vector(j), f"{g.label(i)}+{g.label(j)}") for i, j in itertools.combinations(od, 2)
    ]
    for x, name in cands:
        lhs = ad(g, ps.two_p(g, x))
        rhs = _mat_pow(ad(g, x), 2 * p, p)
        diff = np.flatnonzero(np.any((lhs - rhs) % p, axis=0))
        if diff.size:
            ok_2p = False
            wit.append(("two_p", name, g.label(int(diff[0]))))
    return StructureVerdict(ok_even and ok_odd and ok_2p, ok_even, ok_odd, ok_2p, wit)


def solve_p_power(core: SuperAlgebra, x) -> np.ndarray | None:
    """A y with ``ad_y = (ad_x)^p``, solved directly without the basis table."""
    m, p = core.dim, core.p
    A = ad_basis(core).reshape(m, m * m).T
    return gf.solve(Matrix(A, p), _mat_pow(ad(core, x), p, p).reshape(-1))


def additivity_defects(ps: PStructure) -> list[tuple[int, int]]:
    """Basis pairs where ``(x+y)^[2] = x^[2] + y^[2] + [x,y]`` fails (p = 2).

    The left side is solved from ``ad_z = (ad_{x+y})^2`` directly and the
    comparison is taken modulo the ambiguity space (the center).
    """
    core = ps.core
    out = []
    amb = ps.ambiguity
    for i, j in itertools.combinations(range(core.dim), 2):
        x, y = core.basis_vector(i), core.basis_vector(j)
        lhs = solve_p_power(core, x + y)
        rhs = (ps.p_map[i] + ps.p_map[j] + bracket_apply(core, x, y)) % core.p
        if lhs is None:
            out.append((i, j))
            continue
        d = (lhs - rhs) % core.p
        if np.any(d) and not (amb is not None and amb.contains(d)):
            out.append((i, j))
    return out


@dataclass
class Closure:
    algebra: SuperAlgebra
    matrices: list[np.ndarray]
    base_dim: int

    @property
    def grew(self) -> bool:
        return self.algebra.dim > self.base_dim


def _lie_span(mats: list[np.ndarray], p: int) -> list[np.ndarray]:
    n = mats[0].shape[0]
    basis: list[np.ndarray] = []
    flat = np.zeros((0, n * n), dtype=np.int64)

    def push(M):
        nonlocal flat
        v = M.reshape(-1) % p
        if not np.any(v) or gf.in_span(flat, v, p):
            return False
        basis.append(M % p)
        flat = np.vstack([flat, v])
        return True

    for M in mats:
        push(M)
    i = 0
    while i < len(basis):
        for j in range(i):
            push(basis[i] @ basis[j] - basis[j] @ basis[i])
        i += 1
    return basis


def one_step_closure(g: SuperAlgebra) -> Closure:
    """The Lie algebra generated by ``ad(g)`` and the squares ``(ad x)^2`` inside gl(g).

    The first ``dim g`` basis elements are ``ad(e_i)``, so the embedding of g
    is the coordinate inclusion.
    """
    if g.dim_odd:
        raise ValueError("one_step_closure expects a Lie algebra (no odd part)")
    if g.p != 2:
        raise ValueError("the 1-step closure is built for p = 2 only")
    if center(g).dim:
        raise ValueError("nonzero center: ad is not injective, closure refused")
    p, n = g.p, g.dim
    ads = list(ad_basis(g))
    sq = [(A @ A) % p for A in ads]
    sq += [((ads[i] + ads[j]) @ (ads[i] + ads[j])) % p for i, j in itertools.combinations(range(n), 2)]
    basis = _lie_span(ads + sq, p)
    k = len(basis)
    flat = np.array([B.reshape(-1) for B in basis])
    F = Matrix(flat.T, p)
    c = np.zeros((k, k, k), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            C = (basis[a] @ basis[b] - basis[b] @ basis[a]) % p
            coords = gf.solve(F, C.reshape(-1))
            assert coords is not None
            c[a, b] = coords
    labels = list(g.labels or [f"e{i}" for i in range(n)])
    labels = [f"ad({s})" for s in labels] + [f"D{i}" for i in range(k - n)]
    alg = SuperAlgebra(p, k, 0, c, None, labels, f"closure({g.name})" if g.name else "")
    return Closure(alg, basis, n)
