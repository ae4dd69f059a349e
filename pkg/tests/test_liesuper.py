from __future__ import annotations

import numpy as np
import pytest

from nis2 import build, catalog, gf
from nis2.liesuper import (
    StructureError,
    SuperAlgebra,
    Subspace,
    abelian,
    ad,
    bracket_apply,
    center,
    commutant,
    derivations,
    derived,
    even_centroid,
    from_entries,
    ideal_closure,
    is_derivation,
    is_ideal,
    is_perfect,
    is_simple,
    quotient,
    square,
    square_apply,
    subalgebra,
    validate,
)

import randalg


# ---------- brute-force oracles (F_2 only)


def naive_axioms_f2(g: SuperAlgebra) -> bool:
    n, c, q = g.dim, g.bracket % 2, g.squaring
    par = g.parities
    for i in range(n):
        if np.any(c[i, i]):
            return False
        for j in range(n):
            if not np.array_equal(c[i, j], c[j, i]):
                return False
            for k in np.flatnonzero(c[i, j]):
                if par[k] != (par[i] + par[j]) % 2:
                    return False
    for i in g.odd_indices:
        if any(par[k] for k in np.flatnonzero(q[i])):
            return False
    for i in range(n):
        for j in range(n):
            for k in range(n):
                t = c[i, j] @ c[:, k] + c[j, k] @ c[:, i] + c[k, i] @ c[:, j]
                if np.any(t % 2):
                    return False
    odd = list(g.odd_indices)
    for bits in range(1, 2 ** len(odd)):
        x = np.zeros(n, dtype=np.int64)
        x[[odd[t] for t in range(len(odd)) if bits >> t & 1]] = 1
        xx = square_apply(g, x)
        for j in range(n):
            y = g.basis_vector(j)
            if np.any((bracket_apply(g, xx, y) - bracket_apply(g, x, bracket_apply(g, x, y))) % 2):
                return False
    return True


def naive_ideal_f2(g: SuperAlgebra, v: np.ndarray) -> int:
    par = g.parities.astype(bool)
    seeds = [np.where(par, 0, v), np.where(par, v, 0)]
    rows: list[np.ndarray] = []

    def add(w):
        w = np.asarray(w) % 2
        if np.any(w) and gf.rank(gf.Matrix(np.array(rows + [w]), 2)) > len(rows):
            rows.append(w)

    for s in seeds:
        add(s)
    i = 0
    while i < len(rows):
        w = rows[i]
        for j in range(g.dim):
            add(bracket_apply(g, g.basis_vector(j), w))
        if np.any(w[par]) and not np.any(w[~par]):
            add(square_apply(g, w))
        i += 1
    return len(rows)


def naive_simple_f2(g: SuperAlgebra) -> bool:
    if g.dim <= 1:
        return False
    return all(naive_ideal_f2(g, v) == g.dim for v in gf.all_vectors(g.dim, 2) if np.any(v))


# ---------- tables and axioms


def test_from_entries_fills_antisymmetry_and_parity():
    g = from_entries(3, 1, 2, [(0, 1, 1, 1), (0, 2, 2, 2)], [], labels=["h", "u", "v"])
    assert g.bracket[1, 0, 1] == 2
    assert g.bracket[2, 0, 2] == 1
    assert g.sdim == "1|2"
    assert validate(g).ok


def test_tables_are_read_only():
    g = catalog.get("sl(3)")
    with pytest.raises(ValueError):
        g.bracket[0, 0, 0] = 1


def test_inconsistent_shapes_are_rejected():
    with pytest.raises(StructureError):
        SuperAlgebra(2, 1, 1, np.zeros((2, 2, 3), dtype=np.int64), np.zeros((2, 2), dtype=np.int64))


@pytest.mark.parametrize("name", ["sl(3)", "gl(2|1)", "q(2)", "psq(3)", "qof(sl3)", "sl(2|1)"])
def test_catalog_algebras_validate(name):
    assert validate(catalog.get(name)).ok


def test_odd_square_counterexample_fails_only_the_odd_square_identity():
    rep = validate(catalog.get("example-3-2-1"))
    assert [a.key for a in rep.failed()] == ["square_odd"]
    assert rep["square_self"].passed
    assert rep["square_odd"].witness == ("X", "Y") or list(rep["square_odd"].witness) == ["X", "Y"]
    assert "Z" in rep["square_odd"].detail


def test_validate_matches_brute_force_on_perturbed_tables(rng):
    agree = fails = 0
    for _ in range(30):
        g = randalg.random_superalgebra_4_4(rng)
        c = g.bracket.copy()
        q = g.squaring.copy()
        if rng.random() < 0.7:
            i, j = sorted(rng.choice(8, 2, replace=False))
            k = int(rng.integers(0, 8))
            if (g.parities[i] + g.parities[j]) % 2 == g.parities[k]:
                c[i, j, k] ^= 1
                c[j, i, k] ^= 1
        if rng.random() < 0.3:
            q[int(rng.integers(4, 8)), int(rng.integers(0, 4))] ^= 1
        h = SuperAlgebra(2, 4, 4, c, q)
        ok = validate(h).ok
        assert ok == naive_axioms_f2(h)
        agree += 1
        fails += not ok
    assert agree == 30 and fails > 0


def test_odd_characteristic_validation():
    for p in (3, 5):
        g = build.sl(build.Format.standard(2, 1), p)
        assert validate(g).ok
        assert validate(build.queer_q(2, p)).ok
    # break the super Jacobi identity at p = 3
    g = build.gl(build.Format.standard(1, 1), 3)
    c = g.bracket.copy()
    c[2, 3, 0] = (c[2, 3, 0] + 1) % 3
    c[3, 2, 0] = (c[3, 2, 0] + 1) % 3
    rep = validate(SuperAlgebra(3, 2, 2, c, None))
    assert not rep.ok


def test_structural_error_for_parity_violation():
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 1, 0] = c[1, 0, 0] = 1  # [even, odd] landing in the even part
    rep = validate(SuperAlgebra(2, 1, 1, c, np.zeros((2, 2), dtype=np.int64)))
    assert not rep.ok
    assert rep.structural_errors


def test_odd_square_in_characteristic_three_is_half_bracket():
    g = build.queer_q(1, 3)
    x = g.basis_vector(1)
    assert np.array_equal(square(g, x) * 2 % 3, bracket_apply(g, x, x))


# ---------- subspaces, ideals, simplicity


def test_subspace_operations():
    g = catalog.get("gl(1|1)")
    S = Subspace.span(g, [g.basis_vector(0), g.basis_vector(2)])
    assert S.sdim == "1|1"
    assert S.even_part().dim == 1 and S.odd_part().dim == 1
    assert S.issubset(Subspace.whole(g))
    assert S + Subspace.zero(g) == S


def test_center_and_commutant_of_gl11():
    g = catalog.get("gl(1|1)")
    Z = center(g)
    assert Z.dim == 1
    C = commutant(g)
    assert C.sdim == "1|2"
    assert is_ideal(g, C)
    assert not is_perfect(g)


def test_derived_series_adds_odd_squares():
    g = build.queer_q(1)
    # q(1): [x, x] = 0 over F_2 while x^2 = identity
    assert commutant(g).dim == 0
    assert derived(g, 1).dim == 1


def test_sl2_is_not_simple_over_f2():
    g = catalog.get("sl(2)")
    v = is_simple(g)
    assert not v.simple
    assert v.method == "center"
    h = g.labels.index("h")
    assert v.witness.dim == 1 and v.witness.contains(g.basis_vector(h))


def test_sl3_and_its_queerification_are_simple():
    assert is_simple(catalog.get("sl(3)")).simple
    assert is_simple(catalog.get("qof(sl3)")).simple


@pytest.mark.parametrize("name", ["sl(3)", "sl(2)", "gl(1|1)", "q(2)", "sq(2)", "sesq(2)", "psq(2)", "sl(2|1)", "abelian(2|1)"])
def test_simplicity_matches_naive_ideal_oracle(name):
    g = catalog.get(name)
    assert is_simple(g).simple == naive_simple_f2(g)


def test_simplicity_matches_oracle_on_random_algebras(rng):
    for _ in range(3):
        g = randalg.random_superalgebra_4_4(rng)
        assert is_simple(g).simple == naive_simple_f2(g)


def test_o3_is_simple(fixtures):
    from nis2.io import load_algebra

    g, _ = load_algebra(fixtures / "o3.json")
    assert is_simple(g).simple
    assert naive_simple_f2(g)


def test_ideal_closure_is_an_ideal():
    g = catalog.get("gl(2|1)")
    J = ideal_closure(g, [g.basis_vector(0)])
    assert is_ideal(g, J)


# ---------- derivations, centroid, sub and quotient algebras


def test_inner_derivations():
    g = catalog.get("sl(2|1)")
    for i in range(g.dim):
        assert is_derivation(g, ad(g, g.basis_vector(i)), int(g.parities[i]))
    D = derivations(g)
    for d in D:
        assert is_derivation(g, d.to_array(), d.parity)
    flat = np.array([d.to_array().reshape(-1) for d in D])
    for i in range(g.dim):
        assert gf.in_span(gf.row_basis(flat, flat.shape[1], 2), ad(g, g.basis_vector(i)).reshape(-1), 2)


def test_non_derivation_rejected():
    g = catalog.get("sl(3)")
    assert not is_derivation(g, np.eye(g.dim, dtype=np.int64), 0)


def test_even_centroid_detects_extension_of_scalars():
    assert len(even_centroid(catalog.get("sl(3)"))) == 1
    assert len(even_centroid(catalog.get("sl3-ext"))) == 2


def test_quotient_and_subalgebra_dimensions():
    sl4 = build.sl(build.Format.standard(4, 0))
    Z = center(sl4)
    assert Z.dim == 1
    assert quotient(sl4, Z).sdim == "14|0"
    g = catalog.get("gl(2|1)")
    C = commutant(g)
    h = subalgebra(g, C)
    assert h.sdim == C.sdim
    assert validate(h).ok


def test_abelian_algebra():
    g = abelian(2, 1)
    assert validate(g).ok
    assert center(g).is_whole()
