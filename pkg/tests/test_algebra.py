import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bihom.algebra import (SuperAlgebra, TwistError, annihilator, classify_subspace, compute_J,
                           derived_space, ideal_closure, replay, validate_structure, yau_twist)
from bihom.families import (FIXTURE_BUILDERS, abelian, e5, gl11, leibniz_double, random_split_lie_twist,
                            sl2, two_block)
from bihom.linalg import Matrix, Subspace, span

F = Fraction


def test_bracket_is_bilinear_on_basis():
    a = gl11().algebra
    h1, h2, e, f = (a.basis_vector(i) for i in range(4))
    assert a.bracket(e, f) == tuple(F(x) for x in (1, 1, 0, 0))
    assert a.bracket(f, e) == a.bracket(e, f)  # odd-odd supercommutator is symmetric
    x = tuple(F(c) for c in (1, 2, 3, 4))
    y = tuple(F(c) for c in (0, -1, 1, 2))
    lhs = a.bracket(x, y)
    rhs = [F(0)] * 4
    for i in range(4):
        for j in range(4):
            rhs = [r + x[i] * y[j] * p for r, p in zip(rhs, a.product(i, j))]
    assert lhs == tuple(rhs)


def test_construction_errors():
    with pytest.raises(ValueError):
        SuperAlgebra.from_products(["a", "b"], [0], {})
    with pytest.raises(ValueError):
        SuperAlgebra.from_products(["a"], [2], {})
    with pytest.raises(ValueError):
        SuperAlgebra.from_products(["a"], [0], {(0, 1): {0: 1}})
    with pytest.raises(ValueError):
        SuperAlgebra.from_products(["a"], [0], {}, phi=Matrix.identity(2))


@pytest.mark.parametrize("name", ["gl11", "gl11-twisted", "sl2-leibniz-twisted", "two-block", "abelian"])
def test_honest_fixtures_validate(name):
    rep = validate_structure(FIXTURE_BUILDERS[name]())
    assert rep.all_ok and rep.regular


@pytest.mark.parametrize("completed", [True, False])
def test_e5_fails_with_replayable_witnesses(completed):
    a = e5(completed)
    rep = validate_structure(a)
    assert rep.grading_ok and rep.maps_commute and rep.phi_automorphism
    assert not rep.psi_automorphism and not rep.superidentity_ok
    for _, v in rep.items():
        if not v.ok:
            assert replay(a, v) == v.defect
            assert any(v.defect)


def test_e5_psi_breaks_the_bracket():
    # psi negates the even part, so psi[u1,u2] = -u3 while [psi u1, psi u2] = u3
    a = e5()
    v = validate_structure(a).psi_automorphism
    assert v.kind == "map_hom" and v.witness == ("psi", 0, 1)
    assert v.defect == (0, 0, -2, 0, 0)


def test_e5_superidentity_witness():
    v = validate_structure(e5()).superidentity_ok
    assert v.witness == (0, 1, 0)
    assert v.defect == (-4, 0, 0, 0, 0)


def test_grading_violation_detected():
    a = SuperAlgebra.from_products(["x", "y"], [0, 1], {(0, 0): {1: 1}})
    v = validate_structure(a).grading_ok
    assert not v and v.kind == "grading" and replay(a, v) == v.defect


def test_non_commuting_maps_detected():
    a = abelian([0, 0]).with_maps(Matrix(((1, 1), (0, 1))), Matrix(((1, 0), (1, 1))))
    assert not validate_structure(a).maps_commute


def test_singular_map_detected():
    a = abelian([0, 0]).with_maps(Matrix(((1, 0), (0, 0))), Matrix.identity(2))
    v = validate_structure(a).phi_automorphism
    assert not v and v.kind == "map_singular"


def test_odd_map_is_not_an_automorphism():
    a = abelian([0, 1]).with_maps(Matrix(((0, 1), (1, 0))), Matrix.identity(2))
    v = validate_structure(a).phi_automorphism
    assert not v and v.kind == "map_even"


def test_leibniz_double_is_leibniz_not_lie():
    rep = validate_structure(leibniz_double(sl2().algebra))
    assert rep.all_ok and not rep.bihom_lie_like


@given(st.integers(0, 10_000))
def test_random_twists_validate(seed):
    a = random_split_lie_twist(random.Random(seed))
    rep = validate_structure(a)
    assert rep.all_ok and rep.bihom_lie_like


@given(st.integers(0, 10_000), st.integers(0, 63), st.integers(1, 3))
def test_perturbed_products_are_localised(seed, slot, c):
    # disturbing one structure constant either keeps the identity or yields a replayable witness
    a = random_split_lie_twist(random.Random(seed), max_dim=4)
    n = a.dim
    i, j = (slot // n) % n, slot % n
    prods = a.products_dict()
    entry = dict(prods.get((i, j), {}))
    k = next((k for k in range(n) if a.parity[k] == (a.parity[i] + a.parity[j]) % 2), None)
    if k is None:
        return
    entry[k] = entry.get(k, 0) + c
    prods[(i, j)] = entry
    b = SuperAlgebra.from_products(a.basis_names, a.parity, prods, a.phi, a.psi)
    for _, v in validate_structure(b).items():
        if not v.ok:
            assert replay(b, v) == v.defect


def test_yau_twist_refusals():
    g = gl11()
    with pytest.raises(TwistError):
        yau_twist(e5(), Matrix.identity(5), Matrix.identity(5))
    with pytest.raises(TwistError):
        yau_twist(g.algebra, Matrix.diagonal([1, 1, 2, 1]), Matrix.identity(4))
    with pytest.raises(TwistError):
        yau_twist(g.algebra, Matrix(((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))),
                  Matrix(((1, 0, 0, 0), (1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))))


def test_yau_twist_bracket():
    g = gl11()
    phi, psi = g.conjugation([2, 1]), g.conjugation([1, -3])
    t = yau_twist(g.algebra, phi, psi)
    for i in range(4):
        for j in range(4):
            assert t.product(i, j) == g.algebra.bracket(phi.column(i), psi.column(j))


def test_ideal_closure_gl11():
    a = gl11().algebra
    s = ideal_closure(a, span([a.basis_vector(2)], 4))
    assert s == span([(1, 1, 0, 0), (0, 0, 1, 0)], 4)
    assert classify_subspace(a, s).ideal


def test_ideal_closure_graded_splits_components():
    a = gl11().algebra
    s = ideal_closure(a, span([(1, 0, 1, 0)], 4), graded=True)
    assert classify_subspace(a, s).graded and s.contains_vector((0, 0, 1, 0))


def test_compute_J_on_e5z():
    J = compute_J(e5(completed=False))
    assert J.space == Subspace.coordinate(5, [3, 4])


def test_compute_J_printed_vs_twisted_generators():
    a = FIXTURE_BUILDERS["gl11-twisted"]()
    assert compute_J(a).space.dim == 3
    assert compute_J(a, "bihom").space.dim == 0
    with pytest.raises(ValueError):
        compute_J(a, "other")


def test_J_is_killed_from_the_right_side_on_leibniz_doubles():
    # left Leibniz: symmetrised brackets act trivially from the left of [ , ]
    a = leibniz_double(gl11().algebra)
    J = compute_J(a)
    assert J.space.dim == 3
    assert J.annihilates_L.ok
    assert not J.annihilated_by_L.ok
    assert replay(a, J.annihilated_by_L) == J.annihilated_by_L.defect


def test_annihilators():
    assert annihilator(gl11().algebra) == span([(1, 1, 0, 0)], 4)
    assert annihilator(two_block()).dim == 2
    assert annihilator(abelian([0, 1])).is_full()
    assert derived_space(abelian([0, 1])).is_zero()


def test_classify_subspace_flags():
    a = gl11().algebra
    f = classify_subspace(a, Subspace.coordinate(4, [0]))
    assert f.graded and f.subalgebra and f.abelian and not f.ideal
    assert not classify_subspace(a, span([(1, 0, 1, 0)], 4)).graded


def test_verdict_serialises():
    d = validate_structure(e5()).to_dict()
    assert d["superidentity_ok"] == {"ok": False, "kind": "superidentity", "witness": [0, 1, 0],
                                     "defect": ["-4", "0", "0", "0", "0"]}
    assert d["regular"] is False
