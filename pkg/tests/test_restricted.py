from __future__ import annotations

import numpy as np
import pytest

from nis2 import build, catalog, gf
from nis2.io import load_algebra
from nis2.liesuper import ad, even_part, is_simple, validate
from nis2.restricted import (
    PStructure,
    additivity_defects,
    find_p_structure,
    one_step_closure,
    solve_p_power,
    verify_2_4_structure,
)


def mat_pow(A, k, p):
    out = np.eye(A.shape[0], dtype=np.int64)
    for _ in range(k):
        out = out @ A % p
    return out


def test_sl3_p_structure_on_every_vector():
    g = build.sl3()
    res = find_p_structure(g)
    assert res
    ps = res.structure
    labels = g.labels
    for name in ("x1", "x2", "x3", "y1", "y2", "y3"):
        assert not np.any(ps.p_map[labels.index(name)])
    for name in ("h1", "h2"):
        i = labels.index(name)
        assert np.array_equal(ps.p_map[i], g.basis_vector(i))
    # brute force over all 256 vectors
    for x in gf.all_vectors(g.dim, 2):
        assert np.array_equal(ad(g, ps.apply(x)), mat_pow(ad(g, x), 2, 2))


def test_additivity_on_basis_pairs():
    ps = find_p_structure(build.sl3()).structure
    assert additivity_defects(ps) == []
    g = ps.core
    e = g.basis_vector
    for i in range(g.dim):
        for j in range(g.dim):
            lhs = ps.apply(e(i) + e(j))
            rhs = (ps.apply(e(i)) + ps.apply(e(j)) + g.bracket[i, j]) % 2
            assert np.array_equal(lhs, rhs)


def test_odd_characteristic_jacobson_terms(rng):
    for p in (3, 5):
        g = build.sl(build.Format.standard(2, 0), p)
        ps = find_p_structure(g).structure
        for _ in range(30):
            x = rng.integers(0, p, g.dim)
            assert np.array_equal(ad(g, ps.apply(x)), mat_pow(ad(g, x), p, p))


def test_o3_is_not_restricted(fixtures):
    g, _ = load_algebra(fixtures / "o3.json")
    res = find_p_structure(g)
    assert not res
    assert res.unsolvable
    assert solve_p_power(g, g.basis_vector(res.unsolvable[0])) is None


def test_center_makes_the_structure_ambiguous():
    g = build.gl(build.Format.standard(2, 0))
    res = find_p_structure(g)
    assert res and res.structure.ambiguous
    assert res.ambiguity.dim == 1


def test_verify_on_queerified_sl3(fixtures):
    g, ps = load_algebra(fixtures / "qsl3.json")
    v = verify_2_4_structure(g, ps)
    assert v.ok
    assert v.restricted_even and v.restricted_odd and v.two_p


def test_mutated_fixture_is_rejected_on_odd_vectors(fixtures):
    g, ps = load_algebra(fixtures / "qsl3-mutated.json")
    v = verify_2_4_structure(g, ps)
    assert not v.ok
    assert v.restricted_even
    assert not v.restricted_odd
    assert ("restricted_odd", "x3", "Πy3") in v.witnesses


def test_two_p_is_square_then_p_power():
    g = catalog.get("qof(sl3)")
    ps = find_p_structure(g).structure
    for i in g.odd_indices:
        x = g.basis_vector(i)
        assert np.array_equal(ad(g, ps.two_p(g, x)), mat_pow(ad(g, x), 4, 2))


def test_one_step_closure_of_o3(fixtures):
    g, _ = load_algebra(fixtures / "o3.json")
    cl = one_step_closure(g)
    assert cl.grew
    assert cl.algebra.sdim == "5|0"
    assert validate(cl.algebra).ok
    assert find_p_structure(cl.algebra)
    for i in range(g.dim):
        assert np.array_equal(cl.matrices[i], ad(g, g.basis_vector(i)))


def test_one_step_closure_refuses_center_and_odd_parts():
    with pytest.raises(ValueError):
        one_step_closure(build.sl2())
    with pytest.raises(ValueError):
        one_step_closure(catalog.get("q(2)"))


def test_closure_of_a_restricted_algebra_does_not_grow():
    cl = one_step_closure(build.sl3())
    assert not cl.grew


def test_generalized_queerification_of_o3(fixtures):
    g, _ = load_algebra(fixtures / "o3.json")
    gq = build.generalized_queerify(g)
    assert validate(gq).ok
    assert is_simple(gq).simple
    assert even_part(gq).sdim == "5|0"


def test_explicit_structure_table():
    g = build.sl3()
    core = even_part(g)
    ps = PStructure(core, find_p_structure(g).structure.p_map)
    assert ps.p == 2 and not ps.ambiguous
