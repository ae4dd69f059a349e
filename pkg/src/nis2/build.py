"""Constructors: matrix superalgebras, queerifications and tensor products."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf
from .forms import BilinearForm, TheoremViolation, is_invariant, is_symmetric
from .gf import Matrix
from .liesuper import (
    StructureError,
    Subspace,
    SuperAlgebra,
    is_simple,
    quotient,
    validate,
)
from .restricted import PStructure, find_p_structure, one_step_closure, verify_2_4_structure


class ConstructionError(ValueError):
    pass


# ---------- formats and supermatrices


@dataclass(frozen=True)
class Format:
    """Ordered parities of the basis vectors of a superspace."""

    parities: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parities", tuple(int(q) % 2 for q in self.parities))

    @classmethod
    def standard(cls, n_even: int, n_odd: int) -> Format:
        return cls((0,) * n_even + (1,) * n_odd)

    @property
    def size(self) -> int:
        return len(self.parities)

    def entry_parity(self, i: int, j: int) -> int:
        return (self.parities[i] + self.parities[j]) % 2

    def matrix_parity(self, X: np.ndarray) -> int | None:
        X = np.asarray(X)
        par = {self.entry_parity(i, j) for i, j in zip(*np.nonzero(X))}
        if len(par) > 1:
            return None
        return par.pop() if par else 0

    def flipped(self) -> Format:
        return Format(tuple(1 - q for q in self.parities))


def _check_homogeneous(X, fmt: Format, parity: int, p: int):
    found = fmt.matrix_parity(np.asarray(X) % p)
    if found is None or (np.any(np.asarray(X) % p) and found != parity):
        raise ValueError(f"matrix is not homogeneous of parity {parity}")


def supertrace(X, fmt: Format, parity: int, p: int) -> int:
    """``sum_i (-1)^(p_i (p(X)+1)) X_ii``; in the standard format, tr A - (-1)^p(X) tr D."""
    X = np.asarray(X, dtype=np.int64)
    _check_homogeneous(X, fmt, parity, p)
    return int(sum((-1) ** (q * (parity + 1)) * X[i, i] for i, q in enumerate(fmt.parities))) % p


def supertranspose(X, fmt: Format, parity: int, p: int) -> np.ndarray:
    """``(X^st)_ij = (-1)^((p_i+p_j)(p_i+p(X))) X_ji``."""
    X = np.asarray(X, dtype=np.int64)
    _check_homogeneous(X, fmt, parity, p)
    par = fmt.parities
    n = fmt.size
    S = np.array([[(-1) ** (((par[i] + par[j]) * (par[i] + parity)) % 2) for j in range(n)] for i in range(n)])
    return (S * X.T) % p


def supercommutator(X, Y, px: int, py: int, p: int) -> np.ndarray:
    return (X @ Y - (-1) ** (px * py) * (Y @ X)) % p


def elementary(n: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((n, n), dtype=np.int64)
    E[i, j] = 1
    return E


def _coords_many(basis_flat: np.ndarray, targets: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of each target row in the basis rows; raises if one lies outside."""
    k = basis_flat.shape[0]
    aug = np.hstack([basis_flat.T, targets.T]) % p
    R, pivots = Matrix(aug, p).rref()
    if pivots[:k] != list(range(k)):
        raise ConstructionError("basis matrices are linearly dependent")
    if any(c >= k for c in pivots):
        raise ConstructionError("not closed: a bracket or square leaves the span")
    return R.to_array()[:k, k:].T


def matrix_superalgebra(
    mats: Sequence[np.ndarray],
    parities: Sequence[int],
    p: int,
    labels: Sequence[str] | None = None,
    name: str = "",
) -> SuperAlgebra:
    """Structure constants of a span of homogeneous matrices closed under the
    supercommutator and (at p = 2) under squaring of odd elements.

    The matrices are reordered even first; closure is verified, not assumed.
    """
    order = sorted(range(len(mats)), key=lambda i: parities[i])
    mats = [np.asarray(mats[i], dtype=np.int64) % p for i in order]
    par = [int(parities[i]) for i in order]
    labs = [labels[i] for i in order] if labels is not None else None
    k = len(mats)
    if k == 0:
        return SuperAlgebra(p, 0, 0, np.zeros((0, 0, 0), dtype=np.int64), None, [], name)
    flat = np.array([M.reshape(-1) for M in mats])
    targets = []
    for a in range(k):
        for b in range(k):
            targets.append(supercommutator(mats[a], mats[b], par[a], par[b], p).reshape(-1))
    if p == 2:
        for a in range(k):
            targets.append((mats[a] @ mats[a] % p).reshape(-1) if par[a] else np.zeros(flat.shape[1], dtype=np.int64))
    coords = _coords_many(flat, np.array(targets), p)
    c = coords[: k * k].reshape(k, k, k)
    q = coords[k * k :].reshape(k, k) if p == 2 else None
    de = par.count(0)
    return SuperAlgebra(p, de, k - de, c, q, labs, name)


def _elem_label(prefix: str, i: int, j: int) -> str:
    return f"{prefix}{i + 1}{j + 1}" if max(i, j) < 9 else f"{prefix}{i + 1}_{j + 1}"


def gl(fmt: Format, p: int = 2) -> SuperAlgebra:
    n = fmt.size
    mats, pars, labs = [], [], []
    for i in range(n):
        for j in range(n):
            mats.append(elementary(n, i, j))
            pars.append(fmt.entry_parity(i, j))
            labs.append(_elem_label("E", i, j))
    ne = fmt.parities.count(0)
    return matrix_superalgebra(mats, pars, p, labs, f"gl({ne}|{n - ne})")


def sl_matrices(fmt: Format, p: int):
    """Elementary off-diagonal matrices and supertraceless diagonal differences."""
    n = fmt.size
    par = fmt.parities
    mats, pars, labs = [], [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                mats.append(elementary(n, i, j))
                pars.append(fmt.entry_parity(i, j))
                labs.append(_elem_label("E", i, j))
    for i in range(n - 1):
        # h_i = E_ii - (-1)^(p_i + p_{i+1}) E_{i+1,i+1} has zero supertrace
        h = elementary(n, i, i) - (-1) ** (par[i] + par[i + 1]) * elementary(n, i + 1, i + 1)
        mats.append(h % p)
        pars.append(0)
        labs.append(f"h{i + 1}")
    return mats, pars, labs


def sl(fmt: Format, p: int = 2) -> SuperAlgebra:
    mats, pars, labs = sl_matrices(fmt, p)
    ne = fmt.parities.count(0)
    return matrix_superalgebra(mats, pars, p, labs, f"sl({ne}|{fmt.size - ne})")


def psl(fmt: Format, p: int = 2) -> SuperAlgebra:
    """sl(fmt) modulo its center (the scalars when the supertrace of 1 vanishes)."""
    from .liesuper import center

    g = sl(fmt, p)
    Z = center(g)
    ne = fmt.parities.count(0)
    name = f"psl({ne}|{fmt.size - ne})" if fmt.size - ne else f"psl({ne})"
    return quotient(g, Z, name) if Z.dim else g.renamed(name)


SL3_LABELS = ("x1", "x2", "x3", "y1", "y2", "y3", "h1", "h2")


def sl3_chevalley_matrices(p: int = 2) -> list[np.ndarray]:
    E = lambda i, j: elementary(3, i - 1, j - 1)  # noqa: E731
    return [
        E(1, 2),
        E(2, 3),
        E(1, 3),
        E(2, 1),
        E(3, 2),
        E(3, 1),
        (E(1, 1) - E(2, 2)) % p,
        (E(2, 2) - E(3, 3)) % p,
    ]


def sl3(p: int = 2) -> SuperAlgebra:
    """sl(3) in the Chevalley basis x1=E12, x2=E23, x3=E13, y_i transposed, h1, h2."""
    return matrix_superalgebra(sl3_chevalley_matrices(p), [0] * 8, p, SL3_LABELS, "sl(3)")


def sl2(p: int = 2) -> SuperAlgebra:
    mats = [elementary(2, 0, 1), elementary(2, 1, 0), (elementary(2, 0, 0) - elementary(2, 1, 1)) % p]
    return matrix_superalgebra(mats, [0, 0, 0], p, ("e", "f", "h"), "sl(2)")


# ---------- queer series


def _qblock(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.block([[A, B], [B, A]])


def _q_matrices(n: int, p: int, odd_traceless: bool, even_traceless: bool):
    Z = np.zeros((n, n), dtype=np.int64)
    mats, pars, labs = [], [], []

    def gl_basis(traceless: bool):
        for i in range(n):
            for j in range(n):
                if i != j or not traceless:
                    yield elementary(n, i, j), (i, j)
        if traceless:
            for i in range(n - 1):
                yield (elementary(n, i, i) - elementary(n, i + 1, i + 1)) % p, (i, i + 1, "h")

    for M, key in gl_basis(even_traceless):
        mats.append(_qblock(M, Z))
        pars.append(0)
        labs.append(_q_label("a", key))
    for M, key in gl_basis(odd_traceless):
        mats.append(_qblock(Z, M))
        pars.append(1)
        labs.append(_q_label("b", key))
    return mats, pars, labs


def _q_label(prefix: str, key) -> str:
    if len(key) == 3:
        return f"{prefix}h{key[0] + 1}"
    return _elem_label(prefix, *key)


def queer_q(n: int, p: int = 2) -> SuperAlgebra:
    """q(n) = {(A, B)} with A even and B odd, as 2n x 2n block matrices."""
    mats, pars, labs = _q_matrices(n, p, False, False)
    return matrix_superalgebra(mats, pars, p, labs, f"q({n})")


def queertrace(X: np.ndarray, n: int, p: int) -> int:
    return int(np.trace(X[:n, n:])) % p


def halftrace(X: np.ndarray, n: int, p: int) -> int:
    return int(np.trace(X[:n, :n])) % p


def sq(n: int, p: int = 2) -> SuperAlgebra:
    mats, pars, labs = _q_matrices(n, p, True, False)
    return matrix_superalgebra(mats, pars, p, labs, f"sq({n})")


def s_e_sq(n: int, p: int = 2) -> SuperAlgebra:
    mats, pars, labs = _q_matrices(n, p, True, True)
    return matrix_superalgebra(mats, pars, p, labs, f"sesq({n})")


def _identity_ideal(g: SuperAlgebra, mats_getter) -> Subspace:
    mats, pars, _ = mats_getter()
    order = sorted(range(len(mats)), key=lambda i: pars[i])
    flat = np.array([mats[i].reshape(-1) for i in order])
    N = mats[0].shape[0]
    coords = _coords_many(flat, np.eye(N, dtype=np.int64).reshape(1, -1), g.p)[0]
    return Subspace.span(g, [coords])


def psq(n: int, p: int = 2) -> SuperAlgebra:
    """sq(n) modulo the scalar matrices."""
    g = sq(n, p)
    ideal = _identity_ideal(g, lambda: _q_matrices(n, p, True, False))
    return quotient(g, ideal, f"psq({n})")


def psesq(n: int, p: int = 2) -> SuperAlgebra:
    """s_e sq(n) modulo the scalars; needs tr(1_n) = 0, i.e. n even at p = 2."""
    if n % p:
        raise ConstructionError("the identity is not in s_e sq(n) unless p divides n")
    g = s_e_sq(n, p)
    ideal = _identity_ideal(g, lambda: _q_matrices(n, p, True, True))
    return quotient(g, ideal, f"psesq({n})")


def psq_variants(n: int, p: int = 2) -> dict[str, SuperAlgebra]:
    out = {"psq": psq(n, p)}
    if n % p == 0:
        out["psesq"] = psesq(n, p)
    return out


# ---------- forms on superspaces


def aut_form(B, fmt: Format, p: int = 2, name: str = "") -> SuperAlgebra:
    """Homogeneous X with ``X^st B + (-1)^(p(X) p(B)) B X = 0``."""
    B = np.asarray(B, dtype=np.int64) % p
    pB = fmt.matrix_parity(B)
    if pB is None:
        raise ValueError("aut_form needs a homogeneous Gram matrix")
    n = fmt.size
    mats, pars = [], []
    for parity in (0, 1):
        cells = [(i, j) for i in range(n) for j in range(n) if fmt.entry_parity(i, j) == parity]
        if not cells:
            continue
        cols = []
        for i, j in cells:
            E = elementary(n, i, j)
            L = supertranspose(E, fmt, parity, p) @ B + (-1) ** (parity * pB) * (B @ E)
            cols.append(L.reshape(-1) % p)
        A = np.array(cols).T
        for s in gf.nullspace(Matrix(A, p)):
            X = np.zeros((n, n), dtype=np.int64)
            for coeff, (i, j) in zip(s, cells):
                X[i, j] = coeff
            mats.append(X)
            pars.append(parity)
    labels = [f"X{i}" for i in range(len(mats))]
    return matrix_superalgebra(mats, pars, p, labels, name or "aut(B)")


def pi_twist_form(form: BilinearForm) -> BilinearForm:
    """The form on Pi(V): ``B^Pi(Pi x, Pi y) = (-1)^(p(B) + p(x) + p(x)p(y)) B(x, y)``."""
    p = form.p
    pB = 1 if form.parity == "odd" else 0
    par = form.parities
    F = form.values()
    n = len(par)
    S = np.array([[(-1) ** (pB + par[i] + par[i] * par[j]) for j in range(n)] for i in range(n)])
    new_par = tuple(1 - q for q in par)
    return BilinearForm.from_values((S * F) % p, new_par, p)


def form_symmetry(form: BilinearForm) -> str:
    """'symmetric', 'antisymmetric', 'both' or 'neither' under the upsetting."""
    from .forms import upset

    p = form.p
    G = form.gram.to_array()
    U = upset(G, form.parities, 1 if form.parity == "odd" else 0, p)
    sym = np.array_equal(U % p, G % p)
    anti = np.array_equal(U % p, (-G) % p)
    if sym and anti:
        return "both"
    return "symmetric" if sym else "antisymmetric" if anti else "neither"


# ---------- queerification


def queerify(g: SuperAlgebra, ps: PStructure | None = None, check_simple: bool = True) -> SuperAlgebra:
    """q(g) = g + Pi(g) with ``[x, Pi y] = Pi[x, y]`` and ``(Pi x)^2 = x^[2]``."""
    if g.p != 2:
        raise ConstructionError("queerification is defined for p = 2")
    if g.dim_odd:
        raise ConstructionError("queerify expects a Lie algebra (no odd part)")
    if ps is None:
        found = find_p_structure(g)
        if not found:
            raise ConstructionError("no p-structure: some (ad x)^2 is not inner")
        ps = found.structure
    m = g.dim
    n = 2 * m
    c = np.zeros((n, n, n), dtype=np.int64)
    cg = g.bracket
    c[:m, :m, :m] = cg
    c[:m, m:, m:] = cg  # [x, Pi y] = Pi [x, y]
    c[m:, :m, m:] = cg  # [Pi x, y] = Pi [x, y]
    c[m:, m:, :m] = cg  # [Pi x, Pi y] = [x, y]
    q = np.zeros((n, n), dtype=np.int64)
    q[m:, :m] = ps.p_map
    labels = list(g.labels or [f"e{i}" for i in range(m)])
    labels += [f"Π{s}" for s in labels]
    out = SuperAlgebra(2, m, m, c, q, labels, f"q({g.name})" if g.name else "q(g)")
    _require_valid(out)
    if check_simple and is_simple(g) and not is_simple(out):
        raise TheoremViolation("queerification of a restricted simple algebra is not simple", {"name": g.name})
    return out


def generalized_queerify(g: SuperAlgebra, check_simple: bool = True) -> SuperAlgebra:
    """g^<1> + Pi(g): the 1-step restricted closure acting on a copy of g made odd."""
    closure = one_step_closure(g)
    L = closure.algebra
    M, m = L.dim, g.dim
    n = M + m
    c = np.zeros((n, n, n), dtype=np.int64)
    c[:M, :M, :M] = L.bracket
    for a, D in enumerate(closure.matrices):
        # [D, Pi e_i] = Pi(D e_i)
        c[a, M:, M:] = D.T
        c[M:, a, M:] = D.T
    c[M:, M:, :m] = g.bracket
    flat = np.array([D.reshape(-1) for D in closure.matrices])
    ads = [np.transpose(g.bracket, (0, 2, 1))[i] for i in range(m)]
    targets = np.array([(A @ A % 2).reshape(-1) for A in ads])
    q = np.zeros((n, n), dtype=np.int64)
    q[M:, :M] = _coords_many(flat, targets, 2)
    labels = list(L.labels) + [f"Π{s}" for s in (g.labels or [f"e{i}" for i in range(m)])]
    out = SuperAlgebra(2, M, m, c, q, labels, f"gq({g.name})" if g.name else "gq(g)")
    _require_valid(out)
    if check_simple and is_simple(g) and not is_simple(out):
        raise TheoremViolation("generalized queerification of a simple algebra is not simple", {"name": g.name})
    return out


def _require_valid(g: SuperAlgebra):
    rep = validate(g)
    if not rep.ok:
        bad = rep.structural_errors or [f"{a.key} {a.witness}" for a in rep.failed()]
        raise ConstructionError(f"constructed algebra is not a Lie superalgebra: {bad}")


def nis_on_queerification(g: SuperAlgebra, omega: BilinearForm) -> tuple[BilinearForm, BilinearForm]:
    """Transport a NIS on g to the even and odd NIS on q(g).

    With q(g) read as g tensor K[a]/(a^2 - 1), the forms are
    ``omega(x, y) f_i(phi psi)`` where f_1 picks the coefficient of 1 and f_2
    the coefficient of a.
    """
    if not omega.is_nondegenerate():
        raise ValueError("the form on g must be nondegenerate")
    G = omega.values()
    m = G.shape[0]
    Z = np.zeros_like(G)
    F1 = np.block([[G, Z], [Z, G]])
    F2 = np.block([[Z, G], [G, Z]])
    par = [0] * m + [1] * m
    return BilinearForm.from_values(F1, par, 2), BilinearForm.from_values(F2, par, 2)


def trace_form(mats: Sequence[np.ndarray], p: int) -> np.ndarray:
    """``(x, y) -> tr(xy)`` on a list of matrices."""
    k = len(mats)
    return np.array([[int(np.trace(mats[a] @ mats[b])) % p for b in range(k)] for a in range(k)], dtype=np.int64)


# ---------- associative superalgebras and tensor products


@dataclass(frozen=True, eq=False)
class AssocSuperAlgebra:
    p: int
    dim_even: int
    dim_odd: int
    mult: np.ndarray = field(repr=False)
    unit: int = 0
    labels: tuple[str, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        n = self.dim
        c = np.array(self.mult, dtype=np.int64).reshape(n, n, n) % self.p
        c.flags.writeable = False
        object.__setattr__(self, "mult", c)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
        problems = self.defects()
        if problems:
            raise StructureError("; ".join(problems))

    @property
    def dim(self) -> int:
        return self.dim_even + self.dim_odd

    @property
    def parities(self) -> list[int]:
        return [0] * self.dim_even + [1] * self.dim_odd

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"a{i}"

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.mult) % self.p

    def defects(self) -> list[str]:
        n, c, p = self.dim, self.mult, self.p
        par = self.parities
        out = []
        for i, j, k in zip(*np.nonzero(c)):
            if par[k] != (par[i] + par[j]) % 2:
                out.append("multiplication is not parity-additive")
                break
        if self.unit >= self.dim_even:
            out.append("the unit must be even")
            return out
        eye = np.eye(n, dtype=np.int64)
        if not (np.array_equal(c[self.unit], eye) and np.array_equal(c[:, self.unit], eye)):
            out.append("unit law fails")
        left = np.einsum("ijm,mkl->ijkl", c, c) % p
        right = np.einsum("jkm,iml->ijkl", c, c) % p
        if not np.array_equal(left, right):
            out.append("multiplication is not associative")
        return out

    def is_commutative(self) -> bool:
        return np.array_equal(self.mult, np.transpose(self.mult, (1, 0, 2)))

    def is_supercommutative(self) -> bool:
        par = np.array(self.parities)
        sign = (-1) ** np.outer(par, par)
        if np.any((self.mult - sign[:, :, None] * np.transpose(self.mult, (1, 0, 2))) % self.p):
            return False
        return not any(np.any(self.mult[i, i]) for i in range(self.dim_even, self.dim))

    @property
    def classification(self) -> str:
        if self.is_supercommutative():
            return "supercommutative"
        if self.is_commutative():
            return "commutative-not-supercommutative"
        return "noncommutative"


def truncated_polynomial(coeffs: Sequence[int], p: int, odd: bool = False, label: str = "x") -> AssocSuperAlgebra:
    """K[x]/(f) with basis 1, x, ..., x^(d-1); f is monic, constant term first.

    With ``odd`` the generator is odd; only degree 2 is supported then, and
    the relation must be ``x^2 = c`` so the grading is respected.
    """
    f = gf.poly_trim(coeffs, p)
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        raise ValueError("need a monic polynomial of degree >= 1")
    c = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            prod = [0] * (i + j) + [1]
            _, r = gf.poly_divmod(prod, f, p)
            for k, a in enumerate(r):
                c[i, j, k] = a
    labels = ["1"] + [label if k == 1 else f"{label}^{k}" for k in range(1, d)]
    if odd:
        if d != 2 or f[1]:
            raise ValueError("an odd generator needs a relation of the form x^2 = c")
        return AssocSuperAlgebra(p, 1, 1, c, 0, labels)
    return AssocSuperAlgebra(p, d, 0, c, 0, labels)


def queer_unit_algebra(p: int = 2) -> AssocSuperAlgebra:
    """K[a]/(a^2 - 1) with a odd: commutative but not supercommutative."""
    return truncated_polynomial([-1 % p, 0, 1], p, odd=True, label="a")


def odd_dual_numbers(p: int = 2) -> AssocSuperAlgebra:
    """K[a]/(a^2) with a odd: supercommutative."""
    return truncated_polynomial([0, 0, 1], p, odd=True, label="a")


def ground_field(p: int = 2) -> AssocSuperAlgebra:
    return AssocSuperAlgebra(p, 1, 0, np.ones((1, 1, 1), dtype=np.int64), 0, ["1"])


def _tensor_layout(L: SuperAlgebra, A: AssocSuperAlgebra):
    """Basis l_i (x) a_j ordered by parity, then a-index, then l-index."""
    pairs = [(i, j) for j in range(A.dim) for i in range(L.dim)]
    lp, ap = L.parities, A.parities
    pairs.sort(key=lambda ij: (int(lp[ij[0]] + ap[ij[1]]) % 2))
    index = {ij: k for k, ij in enumerate(pairs)}
    de = sum(1 for i, j in pairs if (lp[i] + ap[j]) % 2 == 0)
    labels = [L.label(i) if A.label(j) == "1" else f"{L.label(i)}⊗{A.label(j)}" for i, j in pairs]
    return pairs, index, de, labels


def _tensor_bracket(L: SuperAlgebra, A: AssocSuperAlgebra, pairs, index) -> np.ndarray:
    p = L.p
    n = len(pairs)
    c = np.zeros((n, n, n), dtype=np.int64)
    lp, ap = L.parities, A.parities
    for s, (i1, j1) in enumerate(pairs):
        for t, (i2, j2) in enumerate(pairs):
            sign = (-1) ** (int(lp[i2]) * int(ap[j1]))
            br = L.bracket[i1, i2]
            pr = A.mult[j1, j2]
            for k in np.flatnonzero(br):
                for l in np.flatnonzero(pr):
                    c[s, t, index[(k, l)]] += sign * br[k] * pr[l]
    return c % p


def _check_same_field(L: SuperAlgebra, A: AssocSuperAlgebra):
    if L.p != A.p:
        raise ValueError("factors over different fields")


def tensor_supercommutative(L: SuperAlgebra, A: AssocSuperAlgebra, name: str = "") -> SuperAlgebra:
    """L (x) A with ``[l1 a1, l2 a2] = (-1)^(p(l2)p(a1)) [l1, l2] a1 a2``.

    Squares of odd basis vectors: 0 for even l and odd a, ``l^2 (x) a^2`` for
    odd l and even a; sums follow from the polarization rule.
    """
    _check_same_field(L, A)
    if not A.is_supercommutative():
        raise ConstructionError("the associative factor must be supercommutative")
    pairs, index, de, labels = _tensor_layout(L, A)
    c = _tensor_bracket(L, A, pairs, index)
    n = len(pairs)
    q = None
    if L.p == 2:
        q = np.zeros((n, n), dtype=np.int64)
        for s, (i, j) in enumerate(pairs):
            if L.parities[i] == 1 and A.parities[j] == 0:
                for k in np.flatnonzero(L.squaring[i]):
                    for l in np.flatnonzero(A.mult[j, j]):
                        q[s, index[(k, l)]] += L.squaring[i, k] * A.mult[j, j, l]
        q %= 2
    out = SuperAlgebra(L.p, de, n - de, c, q, labels, name or (f"{L.name}⊗A" if L.name else ""))
    _require_valid(out)
    return out


def tensor_commutative_24(
    L: SuperAlgebra, A: AssocSuperAlgebra, ps: PStructure | None = None, name: str = ""
) -> SuperAlgebra:
    """L (x) A for commutative A at p = 2, with ``(l a)^2 = l^[2] (x) a^2`` for
    even l and odd a; L must carry a verified 2|4-structure."""
    _check_same_field(L, A)
    if L.p != 2:
        raise ConstructionError("the 2|4 tensor product is defined for p = 2")
    if not A.is_commutative():
        raise ConstructionError("the associative factor must be commutative")
    if L.dim == 0:
        return SuperAlgebra(2, 0, 0, np.zeros((0, 0, 0), dtype=np.int64), None, [], name)
    if ps is None:
        found = find_p_structure(L)
        if not found:
            raise ConstructionError("L has no 2-structure on its even part")
        ps = found.structure
    if not verify_2_4_structure(L, ps).ok:
        raise ConstructionError("the supplied structure is not a 2|4-structure on L")
    pairs, index, de, labels = _tensor_layout(L, A)
    c = _tensor_bracket(L, A, pairs, index)
    n = len(pairs)
    m = L.dim_even
    q = np.zeros((n, n), dtype=np.int64)
    for s, (i, j) in enumerate(pairs):
        li, aj = L.parities[i], A.parities[j]
        if (li + aj) % 2 == 0:
            continue
        if li == 0:
            lsq = np.zeros(L.dim, dtype=np.int64)
            lsq[:m] = ps.apply(L.basis_vector(i)[:m])
        else:
            lsq = L.squaring[i]
        for k in np.flatnonzero(lsq):
            for l in np.flatnonzero(A.mult[j, j]):
                q[s, index[(k, l)]] += lsq[k] * A.mult[j, j, l]
    q %= 2
    out = SuperAlgebra(2, de, n - de, c, q, labels, name or (f"{L.name}⊗A" if L.name else ""))
    _require_valid(out)
    return out


# ---------- scalar extension


def scalar_extension(g: SuperAlgebra, P: Sequence[int], name: str = "") -> tuple[SuperAlgebra, AssocSuperAlgebra]:
    """g (x) F_p[x]/(P) as an F_p-algebra, for irreducible P of degree > 1."""
    P = gf.poly_trim(P, g.p)
    if len(P) - 1 < 2:
        raise ValueError("P must have degree at least 2")
    if not gf.is_irreducible(P, g.p):
        raise ValueError("P is reducible over F_p")
    inv_lead = gf.inv(P[-1], g.p)
    P = [a * inv_lead % g.p for a in P]
    A = truncated_polynomial(P, g.p)
    return tensor_supercommutative(g, A, name or f"{g.name}⊗F_{g.p}[x]/(P)"), A


def scalar_extension_nis(g: SuperAlgebra, omega: BilinearForm, P: Sequence[int], phi: Sequence[int]):
    """The extended algebra and ``B_phi(a1 g1, a2 g2) = phi(a1 a2) omega(g1, g2)``."""
    ext, A = scalar_extension(g, P)
    phi = np.asarray(phi, dtype=np.int64) % g.p
    if phi.shape != (A.dim,) or not np.any(phi):
        raise ValueError("phi must be a nonzero functional on F_p[x]/(P)")
    form = extension_form(ext, g, A, omega, phi)
    F = form.values()
    if not (is_invariant(ext, F) and is_symmetric(ext, F)):
        raise TheoremViolation("B_phi is not an invariant symmetric form")
    if not form.is_nondegenerate():
        raise ValueError("B_phi is degenerate for this phi")
    return ext, form


def extension_form(ext: SuperAlgebra, g: SuperAlgebra, A: AssocSuperAlgebra, omega: BilinearForm, phi) -> BilinearForm:
    pairs, index, _, _ = _tensor_layout(g, A)
    W = omega.values()
    n = len(pairs)
    F = np.zeros((n, n), dtype=np.int64)
    for s, (i1, j1) in enumerate(pairs):
        for t, (i2, j2) in enumerate(pairs):
            F[s, t] = int(phi @ A.mult[j1, j2]) * W[i1, i2]
    return BilinearForm.from_values(F % g.p, ext.parities, g.p)


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    return gf.is_irreducible(coeffs, p)
