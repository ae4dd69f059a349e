"""Invariant symmetric bilinear forms, their NIS superdimension and the queer operator.

A form is stored by its Gram matrix ``B`` with ``B[i, j] = (-1)^(p(B) p(v_i)) F(v_i, v_j)``
where ``F`` is the form evaluated on basis vectors.  Over F_2 the two agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf
from .gf import Matrix
from .liesuper import (
    SuperAlgebra,
    bracket_apply,
    commutant,
    default_rng,
    even_centroid,
    is_simple,
    square,
)

SCAN_LIMIT = 4096


class TheoremViolation(AssertionError):
    """A computed invariant contradicts the NIS classification theorem."""

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


def _sign_vector(parities, parity: int) -> np.ndarray:
    return np.array([(-1) ** (parity * int(q)) for q in parities], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class BilinearForm:
    gram: Matrix
    parity: str
    parities: tuple[int, ...] = field(repr=False)

    @classmethod
    def from_values(cls, F, parities, p: int) -> BilinearForm:
        """Build from the value table ``F[i, j] = form(e_i, e_j)``."""
        F = np.asarray(F, dtype=np.int64) % p
        parities = tuple(int(q) for q in parities)
        par = form_parity(F, parities, p)
        s = _sign_vector(parities, 1 if par == "odd" else 0)
        return cls(Matrix((s[:, None] * F) % p, p), par, parities)

    @classmethod
    def from_gram(cls, gram, parities, parity: str | None = None, p: int | None = None) -> BilinearForm:
        G = gram if isinstance(gram, Matrix) else Matrix(gram, p)
        parities = tuple(int(q) for q in parities)
        found = form_parity(G.to_array(), parities, G.p)
        if parity is not None and found not in (parity, "zero"):
            raise ValueError(f"Gram matrix has parity {found}, not {parity}")
        return cls(G, parity or found, parities)

    @property
    def p(self) -> int:
        return self.gram.p

    @property
    def n(self) -> int:
        return self.gram.rows

    def values(self) -> np.ndarray:
        """The value table F with ``F[i, j] = form(e_i, e_j)``."""
        s = _sign_vector(self.parities, 1 if self.parity == "odd" else 0)
        return (s[:, None] * self.gram.to_array()) % self.p

    def __call__(self, x, y) -> int:
        return int(np.asarray(x) @ self.values() @ np.asarray(y)) % self.p

    def is_zero(self) -> bool:
        return not np.any(self.gram.to_array())

    def is_nondegenerate(self) -> bool:
        return gf.rank(self.gram) == self.n

    def rank(self) -> int:
        return gf.rank(self.gram)

    def scaled(self, a: int) -> BilinearForm:
        return BilinearForm(self.gram.scale(a), self.parity, self.parities)

    def __add__(self, other: BilinearForm) -> BilinearForm:
        F = (self.values() + other.values()) % self.p
        return BilinearForm.from_values(F, self.parities, self.p)

    def proportional_to(self, other: BilinearForm) -> int | None:
        """The scalar c with ``self = c * other``, or None."""
        a = self.values().reshape(-1)
        b = other.values().reshape(-1)
        nz = np.flatnonzero(b)
        if nz.size == 0:
            return 1 if not np.any(a) else None
        c = int(a[nz[0]]) * gf.inv(int(b[nz[0]]), self.p) % self.p
        return c if np.array_equal(a, (c * b) % self.p) else None


def form_parity(F: np.ndarray, parities, p: int) -> str:
    par = np.asarray(parities, dtype=bool)
    F = np.asarray(F) % p
    cross = np.any(F[np.ix_(par, ~par)]) or np.any(F[np.ix_(~par, par)])
    diag = np.any(F[np.ix_(par, par)]) or np.any(F[np.ix_(~par, ~par)])
    if cross and diag:
        return "inhomogeneous"
    if cross:
        return "odd"
    if diag:
        return "even"
    return "zero"


def upset(gram: np.ndarray, parities, form_parity_bit: int, p: int) -> np.ndarray:
    """The upsetting u on Gram matrices; its fixed points are the symmetric forms.

    In block form, u sends ``[[R, S], [T, U]]`` to
    ``[[R^t, (-1)^pB T^t], [(-1)^pB S^t, -U^t]]`` which is the Gram form of
    ``(x, y) -> (-1)^(p(x) p(y)) F(y, x)``.
    """
    par = np.asarray(parities, dtype=np.int64)
    s = _sign_vector(par, form_parity_bit)
    F = (s[:, None] * np.asarray(gram)) % p
    sym = np.array([[(-1) ** (int(a) * int(b)) for b in par] for a in par], dtype=np.int64)
    Fu = (sym * F.T) % p
    return (s[:, None] * Fu) % p


def is_invariant(g: SuperAlgebra, F: np.ndarray) -> bool:
    """``F([x,z], y) = F(x, [z,y])`` on all basis triples, with F the value table."""
    c = g.bracket
    lhs = np.einsum("ikm,mj->ijk", c, F)
    rhs = np.einsum("kjm,im->ijk", c, F)
    return not np.any((lhs - rhs) % g.p)


def is_symmetric(g: SuperAlgebra, F: np.ndarray) -> bool:
    par = g.parities
    sym = np.array([[(-1) ** (int(a) * int(b)) for b in par] for a in par], dtype=np.int64)
    return not np.any((F.T - sym * F) % g.p)


def satisfies_strict(g: SuperAlgebra, F: np.ndarray) -> bool:
    """``F(x^2, y) = F(x, [x,y])`` for odd x and all y."""
    for x in _odd_test_vectors(g):
        s = square(g, x)
        for j in range(g.dim):
            y = g.basis_vector(j)
            if (s @ F @ y - x @ F @ bracket_apply(g, x, y)) % g.p:
                return False
    return True


def _odd_test_vectors(g: SuperAlgebra):
    od = list(g.odd_indices)
    for i in od:
        yield g.basis_vector(i)
    for i, j in itertools.combinations(od, 2):
        yield g.basis_vector(i) + g.basis_vector(j)


def _invariance_rows(g: SuperAlgebra) -> np.ndarray:
    n, c = g.dim, g.bracket
    I = np.eye(n, dtype=np.int64)
    # unknown F[a, b] at column a*n+b
    E = np.einsum("ikm,jb->ijkmb", c, I) - np.einsum("kjm,ia->ijkam", c, I)
    return E.reshape(n**3, n * n) % g.p


def _symmetry_rows(g: SuperAlgebra) -> np.ndarray:
    n = g.dim
    par = g.parities
    rows = []
    for a in range(n):
        for b in range(a, n):
            r = np.zeros(n * n, dtype=np.int64)
            r[b * n + a] += 1
            r[a * n + b] -= (-1) ** (int(par[a]) * int(par[b]))
            if np.any(r % g.p):
                rows.append(r % g.p)
    return np.array(rows, dtype=np.int64).reshape(-1, n * n)


def _strict_rows(g: SuperAlgebra) -> np.ndarray:
    n = g.dim
    rows = []
    for x in _odd_test_vectors(g):
        s = square(g, x)
        for j in range(n):
            r = np.zeros((n, n), dtype=np.int64)
            r[:, j] += s
            r -= np.outer(x, bracket_apply(g, x, g.basis_vector(j)))
            rows.append(r.reshape(-1) % g.p)
    return np.array(rows, dtype=np.int64).reshape(-1, n * n)


def form_system(g: SuperAlgebra, strict: bool = False) -> np.ndarray:
    """Linear conditions on the value table F (flattened row-major)."""
    blocks = [_invariance_rows(g), _symmetry_rows(g)]
    if strict and g.dim_odd:
        blocks.append(_strict_rows(g))
    A = np.vstack(blocks)
    return A[np.any(A, axis=1)]


@dataclass
class ComponentScan:
    dim: int
    nis_count: int
    nis_dim: int
    scanned: int
    exhaustive: bool
    witness: BilinearForm | None = None


@dataclass
class FormSpace:
    even_basis: list[BilinearForm]
    odd_basis: list[BilinearForm]
    even_scan: ComponentScan
    odd_scan: ComponentScan
    strict: bool = False

    @property
    def superdimension(self) -> tuple[int, int]:
        return len(self.even_basis), len(self.odd_basis)

    @property
    def even_nis_count(self) -> int:
        return self.even_scan.nis_count

    @property
    def odd_nis_count(self) -> int:
        return self.odd_scan.nis_count

    @property
    def nis_superdimension(self) -> tuple[int, int]:
        return self.even_scan.nis_dim, self.odd_scan.nis_dim

    def all_forms(self) -> list[BilinearForm]:
        return self.even_basis + self.odd_basis

    def contains(self, form: BilinearForm) -> bool:
        basis = [f.values().reshape(-1) for f in self.all_forms()]
        v = form.values().reshape(-1)
        if not basis:
            return not np.any(v)
        return gf.in_span(np.array(basis), v, form.p)


def _scan_component(forms: list[BilinearForm], p: int, rng: np.random.Generator) -> ComponentScan:
    d = len(forms)
    if d == 0:
        return ComponentScan(0, 0, 0, 0, True)
    if d == 1:
        nd = forms[0].is_nondegenerate()
        return ComponentScan(1, int(nd), int(nd), 1, True, forms[0] if nd else None)
    values = np.array([f.values() for f in forms])
    exhaustive = p**d <= SCAN_LIMIT
    if exhaustive:
        combos = (c for c in gf.all_vectors(d, p) if np.any(c))
    else:
        combos = (rng.integers(0, p, d) for _ in range(SCAN_LIMIT))
    count, scanned, hits, witness = 0, 0, [], None
    parities = forms[0].parities
    n = forms[0].n
    for coeffs in combos:
        if not np.any(coeffs):
            continue
        scanned += 1
        F = np.tensordot(coeffs, values, axes=1) % p
        if gf.rank(Matrix(F, p)) == n:
            count += 1
            hits.append(F.reshape(-1))
            if witness is None:
                witness = BilinearForm.from_values(F, parities, p)
    nis_dim = gf.rank(Matrix(np.array(hits), p)) if hits else 0
    return ComponentScan(d, count, nis_dim, scanned, exhaustive, witness)


def invariant_symmetric_forms(g: SuperAlgebra, strict: bool = False, rng=None) -> FormSpace:
    """Basis of the invariant symmetric forms on g, split into even and odd forms.

    Invariance is ``F([x,z], y) = F(x, [z,y])`` on all basis triples, taken
    without signs.  With ``strict`` the odd squares are also required to
    satisfy ``F(x^2, y) = F(x, [x,y])``.
    """
    n, p = g.dim, g.p
    A = form_system(g, strict)
    par = g.parities
    out = {}
    for parity in (0, 1):
        mask = np.array([(par[a] + par[b]) % 2 == parity for a in range(n) for b in range(n)])
        forms = []
        if mask.any():
            sub = A[:, mask]
            sub = sub[np.any(sub, axis=1)]
            sols = gf.nullspace(Matrix(sub, p)) if sub.shape[0] else list(np.eye(int(mask.sum()), dtype=np.int64))
            for s in sols:
                F = np.zeros(n * n, dtype=np.int64)
                F[mask] = s
                forms.append(BilinearForm.from_values(F.reshape(n, n), par, p))
        out[parity] = forms
    rng = rng if rng is not None else default_rng()
    return FormSpace(
        out[0],
        out[1],
        _scan_component(out[0], p, rng),
        _scan_component(out[1], p, rng),
        strict,
    )


def check_nis_prerequisite(g: SuperAlgebra) -> bool:
    """Whether the commutant is all of g, a necessary condition for a NIS on a simple g."""
    return commutant(g).is_whole()


@dataclass
class NISReport:
    name: str
    sdim_algebra: str
    is_simple: bool
    simplicity_method: str
    perfect: bool
    forms: FormSpace
    nis_sdim: tuple[int, int]
    classification: str
    dichotomy_checked: bool
    dichotomy_holds: bool | None
    absolutely_simple: bool | None
    notes: list[str]

    @property
    def label(self) -> str:
        return f"{self.nis_sdim[0]}|{self.nis_sdim[1]}"


def classify(nis_sdim: tuple[int, int]) -> str:
    return {
        (0, 0): "no NIS",
        (1, 0): "even NIS",
        (0, 1): "odd NIS",
        (1, 1): "queerification",
    }.get(nis_sdim, "field not closed")


def dichotomy_failures(space: FormSpace) -> list[BilinearForm]:
    """Homogeneous basis forms that are neither zero nor nondegenerate."""
    return [f for f in space.all_forms() if not f.is_zero() and not f.is_nondegenerate()]


def nis_superdimension(g: SuperAlgebra, strict: bool = False, raise_on_violation: bool = True) -> NISReport:
    """NIS superdimension of g with the dichotomy and uniqueness checks.

    The dichotomy (each homogeneous invariant symmetric form is 0 or
    nondegenerate) is asserted only for simple g carrying a NIS, which is the
    setting where it is a theorem.  A parity component of dimension above 1
    is a violation only when g is absolutely simple; when the even centroid
    is bigger than the scalars the field is not closed enough and it is
    reported, not raised.
    """
    verdict = is_simple(g)
    space = invariant_symmetric_forms(g, strict)
    nis = space.nis_superdimension
    perfect = check_nis_prerequisite(g)
    notes = []
    checked, holds, absolute = False, None, None
    has_nis = nis != (0, 0)
    if verdict.simple:
        if has_nis and not perfect:
            msg = "simple algebra with a NIS whose commutant is not the whole algebra"
            if raise_on_violation:
                raise TheoremViolation(msg, {"name": g.name})
            notes.append(msg)
        if has_nis:
            checked = True
            bad = dichotomy_failures(space)
            holds = not bad
            if bad:
                msg = f"homogeneous invariant symmetric form of rank {bad[0].rank()} on a simple algebra with a NIS"
                if raise_on_violation:
                    raise TheoremViolation(msg, {"name": g.name, "gram": bad[0].gram.to_array().tolist()})
                notes.append(msg)
        elif not perfect and dichotomy_failures(space):
            notes.append("degenerate nonzero invariant forms exist; the algebra is simple but not perfect")
        if max(nis) > 1:
            absolute = len(even_centroid(g)) == 1
            if absolute:
                msg = f"NIS component of dimension {max(nis)} on an absolutely simple algebra"
                if raise_on_violation:
                    raise TheoremViolation(msg, {"name": g.name, "nis_sdim": list(nis)})
                notes.append(msg)
            else:
                notes.append("field not closed")
    else:
        notes.append("not simple: dichotomy not asserted")
    return NISReport(
        g.name,
        g.sdim,
        verdict.simple,
        verdict.method,
        perfect,
        space,
        nis,
        classify(nis),
        checked,
        holds,
        absolute,
        notes,
    )


@dataclass
class DegenerateBound:
    k: int
    bound: int
    forms: list[BilinearForm]


def degenerate_forms_lower_bound(g: SuperAlgebra) -> DegenerateBound:
    """Symmetric forms on g/[g,g] pulled back to g.

    They vanish whenever an argument lies in the commutant, so they are
    invariant; there are k(k+1)/2 of them over F_2 with k the codimension of
    the commutant (super-symmetric count for odd p).
    """
    C = commutant(g)
    k = g.dim - C.dim
    if k == 0:
        return DegenerateBound(0, 0, [])
    p = g.p
    pivots = {int(np.flatnonzero(r)[0]) for r in C.basis}
    keep = [i for i in range(g.dim) if i not in pivots]
    # projection g -> g/[g,g] in the coordinates ``keep``
    P = np.zeros((k, g.dim), dtype=np.int64)
    for col in range(g.dim):
        v = g.basis_vector(col)
        for r in C.basis:
            piv = int(np.flatnonzero(r)[0])
            if v[piv]:
                v = (v - v[piv] * r) % p
        P[:, col] = v[keep]
    par = g.parities
    qpar = [int(par[i]) for i in keep]
    forms = []
    for a in range(k):
        for b in range(a, k):
            sign = (-1) ** (qpar[a] * qpar[b])
            if a == b and sign == -1 and p != 2:
                continue
            S = np.zeros((k, k), dtype=np.int64)
            S[a, b] = 1
            S[b, a] = (S[b, a] + sign) % p if a != b else 1
            forms.append(BilinearForm.from_values((P.T @ S @ P) % p, par, p))
    return DegenerateBound(k, len(forms), forms)


@dataclass
class QueerCertificate:
    J: np.ndarray
    ok: bool
    bracket_scalar: int | None
    square_scalar: int | None
    checks: dict[str, bool]
    p_map: np.ndarray | None = None
    message: str = ""


def queer_operator(g: SuperAlgebra, we: BilinearForm, wo: BilinearForm) -> QueerCertificate:
    """The odd operator J with ``wo(x, y) = we(Jx, y)`` and its certificate.

    The certificate checks that J swaps parities, that ``[Ja, b] = J[a, b]``
    and ``[Ja, Jb] = kappa [a, b]`` on even basis pairs, and that
    ``a -> a + J a`` identifies g with the queerification of its even part
    under the 2-structure ``a -> (J a)^2``.  The scalars kappa and the
    eigenvalue of J^2 are reported rather than normalised away.
    """
    from .build import queerify
    from .restricted import PStructure

    p, n = g.p, g.dim
    if we.parity != "even" or wo.parity != "odd":
        raise ValueError("queer_operator expects an even form followed by an odd form")
    if not we.is_nondegenerate() or not wo.is_nondegenerate():
        raise ValueError("queer_operator needs nondegenerate forms")
    Fe, Fo = we.values(), wo.values()
    # wo(x, y) = we(Jx, y)  <=>  Fo = J^T Fe  <=>  J = (Fo Fe^{-1})^T
    J = (Fo @ gf.inverse(Matrix(Fe, p)).to_array()).T % p
    checks = {}
    par = g.parities.astype(bool)
    checks["invertible"] = gf.rank(Matrix(J, p)) == n
    checks["swaps_parity"] = not np.any(J[np.ix_(par, par)]) and not np.any(J[np.ix_(~par, ~par)])
    ev = list(g.even_indices)
    e = g.basis_vector
    equivariant = True
    for a in ev:
        for b in range(n):
            if np.any((bracket_apply(g, J @ e(a), e(b)) - J @ bracket_apply(g, e(a), e(b))) % p):
                equivariant = False
    checks["equivariant"] = equivariant
    kappa = None
    consistent = True
    for a in ev:
        for b in ev:
            lhs = bracket_apply(g, J @ e(a), J @ e(b))
            rhs = bracket_apply(g, e(a), e(b))
            if not np.any(rhs):
                if np.any(lhs):
                    consistent = False
                continue
            i = int(np.flatnonzero(rhs)[0])
            c = int(lhs[i]) * gf.inv(int(rhs[i]), p) % p
            if np.any((lhs - c * rhs) % p) or (kappa is not None and c != kappa):
                consistent = False
            kappa = c if kappa is None else kappa
    checks["odd_bracket_scalar"] = consistent and kappa is not None
    J2 = (J @ J) % p
    mu = int(J2[0, 0]) if n else None
    if n and np.any((J2 - mu * np.eye(n, dtype=np.int64)) % p):
        mu = None
    cert = QueerCertificate(J, False, kappa, mu, checks)
    if not all(checks.values()):
        cert.message = "operator checks failed: " + ", ".join(k for k, v in checks.items() if not v)
        return cert
    # rescale so that [Ja, Jb] = [a, b]
    if kappa != 1:
        roots = [r for r in range(1, p) if r * r % p == kappa]
        if not roots:
            cert.message = f"[Ja, Jb] = {kappa}[a,b] and {kappa} is not a square"
            return cert
        J = J * gf.inv(roots[0], p) % p
    m = g.dim_even
    if g.dim_odd != m:
        cert.message = "even and odd parts differ in dimension"
        return cert
    # p-map a -> (J a)^2 on the even basis, in even coordinates
    pmap = np.array([square(g, J @ e(a))[:m] for a in ev], dtype=np.int64).reshape(m, m)
    from .liesuper import even_part

    core = even_part(g)
    ps = PStructure(core, pmap)
    try:
        q = queerify(core, ps, check_simple=False)
    except Exception as exc:  # the candidate 2-structure is not a valid one
        cert.message = f"queerification of the even part failed: {exc}"
        return cert
    # phi: q(core) -> g, x -> x, Pi(a) -> J a
    phi = np.zeros((n, n), dtype=np.int64)
    phi[:m, :m] = np.eye(m, dtype=np.int64)
    for a in range(m):
        phi[:, m + a] = J[:, a]
    iso = _is_isomorphism(q, g, phi)
    checks["isomorphism"] = iso
    cert.J = J
    cert.p_map = pmap
    cert.ok = iso
    if not iso:
        cert.message = "a + Ja does not identify g with the queerification of its even part"
    return cert


def _is_isomorphism(src: SuperAlgebra, dst: SuperAlgebra, phi: np.ndarray) -> bool:
    p = dst.p
    if gf.rank(Matrix(phi, p)) != dst.dim:
        return False
    n = src.dim
    for i in range(n):
        for j in range(n):
            lhs = phi @ src.bracket[i, j] % p
            rhs = bracket_apply(dst, phi[:, i], phi[:, j])
            if np.any((lhs - rhs) % p):
                return False
    if p == 2:
        for i in src.odd_indices:
            if np.any((phi @ src.squaring[i] - square(dst, phi[:, i])) % p):
                return False
    return True


# ---------- determinant pencils


def _poly_det(M: list[list[list[int]]], p: int) -> list[int]:
    """Determinant of a matrix with entries in F_p[t], by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return [1]
    M = [[gf.poly_trim(e, p) for e in row] for row in M]
    sign = 1
    prev = [1]
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if M[i][k]), None)
        if piv is None:
            return []
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = gf.poly_trim(
                    [
                        a - b
                        for a, b in itertools.zip_longest(
                            gf.poly_mul(M[k][k], M[i][j], p), gf.poly_mul(M[i][k], M[k][j], p), fillvalue=0
                        )
                    ],
                    p,
                )
                q, r = gf.poly_divmod(num, prev, p) if num else ([], [])
                assert not r, "Bareiss division must be exact"
                M[i][j] = q
            M[i][k] = []
        prev = M[k][k]
    return gf.poly_trim([sign * a for a in M[n - 1][n - 1]], p)


def det_polynomial(B1: np.ndarray, B2: np.ndarray, p: int) -> list[int]:
    """Coefficients (constant first) of det(B1 + t B2) over F_p."""
    n = B1.shape[0]
    M = [[[int(B1[i, j]), int(B2[i, j])] for j in range(n)] for i in range(n)]
    return _poly_det(M, p)


def poly_eval(f, x: int, p: int) -> int:
    out = 0
    for a in reversed(f):
        out = (out * x + a) % p
    return out


@dataclass
class PencilScan:
    values: list[tuple[int, int]]
    polynomial: list[int]

    @property
    def roots(self) -> list[int]:
        return [lam for lam, d in self.values if d == 0]


def pencil_scan(w1: BilinearForm, w2: BilinearForm) -> PencilScan:
    """det(B1 + lambda B2) of plain Gram matrices at every lambda in F_p."""
    p = w1.p
    B1 = w1.gram.to_array()
    B2 = w2.gram.to_array()
    values = [(lam, int(gf.det(Matrix((B1 + lam * B2) % p, p)))) for lam in range(p)]
    return PencilScan(values, det_polynomial(B1, B2, p))
