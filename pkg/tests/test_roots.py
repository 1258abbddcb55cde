import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from bihom.algebra import SuperAlgebra, validate_structure
from bihom.families import FIXTURE_BUILDERS, e5, gl11, random_split_lie_twist
from bihom.linalg import Matrix, Subspace, span
from bihom.roots import (RootFunctional, RootSystemError, check_maximal_abelian, find_root_system,
                         replay_root_bracket, root_equation_defect, root_space, root_twist,
                         verify_root_lemmas)

F = Fraction


def values(d):
    return [tuple(r.values) for r in d.roots]


def sympy_root_spaces(a, H):
    """Oracle: eigen-solve ad_h phi - lam phi psi with sympy, per parity."""
    S = lambda m: sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m.rows])  # noqa: E731
    phi, pp = S(a.phi), S(a.phi @ a.psi)
    H_even = H.intersect(a.parity_space(0))
    hs = H_even.basis
    ad = [S(a.left_matrix(h)) * phi for h in hs]
    # candidate values: eigenvalues of pp^-1 ad_h
    cands = [sorted(set((pp.inv() * m).eigenvals()), key=str) for m in ad]
    out = {}
    for vals in itertools.product(*cands):
        if not all(v.is_rational for v in vals):
            continue
        M = sympy.Matrix.vstack(*[m - v * pp for m, v in zip(ad, vals)]) if ad else sympy.zeros(0, a.dim)
        for p in (0, 1):
            idx = a.indices_of_parity(p)
            if not idx:
                continue
            ns = M[:, idx].nullspace() if ad else [sympy.eye(len(idx))[:, k] for k in range(len(idx))]
            if ns:
                key = tuple(F(int(v.p), int(v.q)) for v in vals)
                dims = out.setdefault(key, [0, 0])
                dims[p] = len(ns)
    return out


def test_e5_roots():
    d = find_root_system(e5())
    assert d.split_ok
    assert values(d) == [(-2,), (-1,), (1,), (2,)]
    assert d.summary() == [((-2,), 1, 0), ((-1,), 0, 1), ((1,), 0, 1), ((2,), 1, 0)]
    # labels: alpha = 2 on u2, beta = -1 on e1
    assert d.spaces[d.functional([2])].even == Subspace.coordinate(5, [1])
    assert d.spaces[d.functional([-1])].odd == Subspace.coordinate(5, [3])
    assert d.L0.total == Subspace.coordinate(5, [2])


def test_e5z_is_not_split():
    d = find_root_system(e5(completed=False))
    assert values(d) == [(-2,), (2,)]
    assert not d.split_ok
    assert d.L0.odd == Subspace.coordinate(5, [3, 4])
    assert "the zero root space differs from H" in d.reasons


def test_gl11_roots():
    d = find_root_system(gl11().algebra)
    assert values(d) == [(-1, 1), (1, -1)]
    assert d.split_ok
    assert d.spaces[d.functional([1, -1])].odd == Subspace.coordinate(4, [2])


@pytest.mark.parametrize("name", sorted(FIXTURE_BUILDERS))
def test_root_spaces_match_sympy(name):
    a = FIXTURE_BUILDERS[name]()
    d = find_root_system(a)
    expected = sympy_root_spaces(a, d.H)
    got = {r.values: [d.spaces[r].even.dim, d.spaces[r].odd.dim] for r in d.roots}
    zero = tuple(F(0) for _ in d.h_basis)
    if d.L0.dim:
        got[zero] = [d.L0.even.dim, d.L0.odd.dim]
    assert got == expected


@pytest.mark.parametrize("name", sorted(FIXTURE_BUILDERS))
def test_root_vectors_satisfy_root_equation(name):
    a = FIXTURE_BUILDERS[name]()
    d = find_root_system(a)
    for r in d.roots:
        for v in d.spaces[r].total.basis:
            assert not any(root_equation_defect(a, d.h_basis, r.values, v))


def test_root_space_of_non_root_is_zero():
    a = e5()
    assert root_space(a, a.H_subspace(), [3]).is_zero()
    assert root_space(a, a.H_subspace(), RootFunctional((F(-1),))).odd == Subspace.coordinate(5, [3])
    with pytest.raises(RootSystemError):
        root_space(a, a.H_subspace(), [1, 2])


def test_irrational_spectrum_is_reported():
    # [h, x] = y, [h, y] = -x rotates the plane: no rational roots there
    a = SuperAlgebra.from_products(["h", "x", "y"], [0, 0, 0],
                                   {(0, 1): {2: 1}, (1, 0): {2: -1}, (0, 2): {1: -1}, (2, 0): {1: 1}},
                                   H=[0])
    assert validate_structure(a).all_ok
    d = find_root_system(a)
    assert d.uncaptured_dim == 2 and not d.split_ok and d.roots == ()


def test_bad_H():
    a = gl11().algebra
    with pytest.raises(RootSystemError):
        find_root_system(a.with_H(None))
    twisted = FIXTURE_BUILDERS["gl11-twisted"]()
    with pytest.raises(RootSystemError):
        find_root_system(twisted, span([(1, 0, 1, 0)], 4))
    sing = a.with_maps(Matrix.diagonal([1, 1, 0, 1]), Matrix.identity(4))
    with pytest.raises(RootSystemError):
        find_root_system(sing)


def test_maximal_abelian():
    a = e5()
    assert check_maximal_abelian(a, a.H_subspace()).status == "confirmed"
    g = gl11().algebra
    v = check_maximal_abelian(g, Subspace.coordinate(4, [0]))
    assert v.status == "refuted" and v.witness == (0, 1, 0, 0)
    assert check_maximal_abelian(g, Subspace.coordinate(4, [2, 3])).status == "refuted"


nonzero = st.sampled_from([F(1), F(-1), F(2), F(-3), F(1, 2), F(2, 3)])


@st.composite
def commuting_pairs(draw, n=2):
    """``phi = P D1 P^-1`` and ``psi = P D2 P^-1`` with random invertible ``P``."""
    entries = st.lists(st.integers(-2, 2), min_size=n * n, max_size=n * n)
    flat = draw(entries.filter(lambda e: Matrix(tuple(tuple(e[i * n:(i + 1) * n]) for i in range(n)))
                               .is_invertible()))
    P = Matrix(tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))
    D1 = Matrix.diagonal([draw(nonzero) for _ in range(n)])
    D2 = Matrix.diagonal([draw(nonzero) for _ in range(n)])
    Pi = P.inverse()
    return P @ D1 @ Pi, P @ D2 @ Pi


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2), commuting_pairs(),
       st.integers(-3, 3), st.integers(-3, 3))
def test_root_twist_inverse_law(vals, maps, z1, z2):
    phi, psi = maps
    alpha = RootFunctional(tuple(vals))
    there = root_twist(alpha, phi, psi, z1, z2)
    assert root_twist(there, phi, psi, -z1, -z2) == alpha
    assert root_twist(root_twist(alpha, phi, psi, z1, 0), phi, psi, 0, z2) == there


@pytest.mark.parametrize("name", ["gl11", "gl11-twisted", "sl2-leibniz-twisted", "two-block", "abelian"])
def test_root_lemmas_on_honest_fixtures(name):
    a = FIXTURE_BUILDERS[name]()
    assert verify_root_lemmas(a, find_root_system(a)).all_ok


def test_root_lemmas_localise_e5():
    a = e5()
    d = find_root_system(a)
    rep = verify_root_lemmas(a, d)
    assert rep.phi_shifts_roots.ok
    assert not rep.psi_shifts_roots.ok
    assert not rep.bracket_adds_roots.ok
    assert ((2,), (-2,)) in rep.bracket_failures
    assert replay_root_bracket(a, d, rep.bracket_adds_roots) == rep.bracket_adds_roots.defect
    assert any(rep.bracket_adds_roots.defect)


@given(st.integers(0, 100_000))
def test_root_lemmas_on_random_twists(seed):
    a = random_split_lie_twist(random.Random(seed))
    d = find_root_system(a)
    assert d.split_ok
    assert verify_root_lemmas(a, d).all_ok
