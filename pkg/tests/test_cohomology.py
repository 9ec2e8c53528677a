from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kgfint.cohomology import (
    NotACocycleError,
    TwoCocycle,
    casimir_check,
    cohomological_index,
    cohomology,
    extend,
    integrability_verdict,
    trivialize,
)
from kgfint.lie import LieAlgebra, classical_index, e2r_algebra, heisenberg_algebra, sl2_algebra, so3_algebra, validate
from kgfint.symb import Chart

from strategies import algebras, invertible_matrices, small_rationals


def numpy_cocycle_dims(alg):
    """Independent oracle: Z^2 from the cyclic identity, B^2 from d of e^c."""
    n = alg.dim
    C = np.array([[[float(alg.C[a][b][c]) for c in range(n)] for b in range(n)] for a in range(n)])
    pairs = list(combinations(range(n), 2))

    def F_basis(p):
        F = np.zeros((n, n))
        F[p[0], p[1]], F[p[1], p[0]] = 1, -1
        return F

    rows = []
    for a, b, c in combinations(range(n), 3):
        rows.append([
            C[a, b] @ F_basis(p)[:, c] + C[b, c] @ F_basis(p)[:, a] + C[c, a] @ F_basis(p)[:, b] for p in pairs
        ])
    A = np.array(rows) if rows else np.zeros((0, len(pairs)))
    z = len(pairs) - (np.linalg.matrix_rank(A) if rows else 0)
    D = np.array([[C[a, b, c] for (a, b) in pairs] for c in range(n)])
    b = np.linalg.matrix_rank(D) if D.size else 0
    return z, b


def e2r_cocycle(mu):
    m1, m2, m3, m4 = mu
    return TwoCocycle.from_entries(e2r_algebra(), [(1, 2, m1), (3, 4, m2), (1, 3, m3), (2, 3, m4)])


@pytest.mark.parametrize(
    "alg, dims",
    [
        (e2r_algebra(), (4, 2, 2)),
        (so3_algebra(), (3, 3, 0)),
        (sl2_algebra(), (3, 3, 0)),
        (heisenberg_algebra(), (3, 1, 2)),
        (LieAlgebra.abelian(4), (6, 0, 6)),
    ],
)
def test_cohomology_dimensions(alg, dims):
    rep = cohomology(alg)
    assert (rep.z_dim, rep.b_dim, rep.h_dim) == dims
    assert numpy_cocycle_dims(alg) == dims[:2]


def test_e2r_representatives_and_coboundaries():
    rep = cohomology(e2r_algebra()).to_json()
    assert rep["h_representatives"] == [[[1, 2, "1"]], [[3, 4, "1"]]]
    assert sorted(rep["b_basis"]) == [[[1, 3, "1"]], [[2, 3, "1"]]]


@given(algebras)
def test_basis_change_preserves_cohomology(alg):
    n = alg.dim
    P = [[int(i == j) + (1 if j == i + 1 else 0) for j in range(n)] for i in range(n)]
    a, b = cohomology(alg), cohomology(alg.change_basis(P))
    assert (a.z_dim, a.b_dim, a.h_dim) == (b.z_dim, b.b_dim, b.h_dim)


def test_non_cocycle_rejected():
    e2 = e2r_algebra()
    assert TwoCocycle(e2, [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]).is_cocycle
    bad = TwoCocycle(e2, [[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [-1, 0, 0, 0]], check=False)
    assert not bad.is_cocycle and bad.violations()
    with pytest.raises(NotACocycleError):
        TwoCocycle(e2, bad.F)


def test_every_two_form_is_a_cocycle_in_dimension_three():
    for alg in (so3_algebra(), sl2_algebra(), heisenberg_algebra()):
        assert TwoCocycle.from_entries(alg, [(1, 2, 1), (1, 3, -2), (2, 3, 5)]).is_cocycle


@given(st.tuples(small_rationals, small_rationals, small_rationals, small_rationals))
def test_trivialize_roundtrip(lam):
    alg = e2r_algebra()
    F = TwoCocycle.coboundary(alg, lam)
    sol = trivialize(alg, F)
    assert sol is not None
    assert TwoCocycle.coboundary(alg, sol.components) == F


def test_nontrivial_class_not_trivialized():
    assert trivialize(e2r_algebra(), e2r_cocycle((1, 0, 0, 0))) is None
    assert trivialize(e2r_algebra(), e2r_cocycle((0, 0, 3, -2))) is not None


@pytest.mark.parametrize(
    "mu, index", [((1, 0, 0, 0), 2), ((1, 1, 0, 0), 0), ((0, 1, 0, 0), 2), ((0, 0, 0, 0), 2), ((2, -3, 1, 1), 0)]
)
def test_e2r_index_law(mu, index):
    res = cohomological_index(e2r_algebra(), e2r_cocycle(mu))
    assert res.index == index and res.certified_upper


@given(
    st.tuples(small_rationals, small_rationals, small_rationals, small_rationals),
    st.tuples(small_rationals, small_rationals, small_rationals, small_rationals),
)
def test_index_is_a_class_invariant(mu, lam):
    alg = e2r_algebra()
    F = e2r_cocycle(mu)
    G = F + TwoCocycle.coboundary(alg, lam)
    assert cohomological_index(alg, F).index == cohomological_index(alg, G).index


@given(invertible_matrices(3))
def test_index_invariant_under_basis_change(P):
    alg = heisenberg_algebra()
    F = TwoCocycle.from_entries(alg, [(1, 3, 1)])
    new = alg.change_basis(P)
    Fn = [[sum(P[i][a] * P[j][b] * F.F[a][b] for a in range(3) for b in range(3)) for j in range(3)] for i in range(3)]
    assert cohomological_index(alg, F).index == cohomological_index(new, TwoCocycle(new, Fn)).index


@pytest.mark.parametrize("alg", [so3_algebra(), sl2_algebra()])
def test_whitehead_cohomological_equals_classical(alg):
    rng = np.random.default_rng(7)
    classical = classical_index(alg)
    for _ in range(20):
        vals = [Fraction(int(v)) for v in rng.integers(-5, 6, size=3)]
        F = TwoCocycle.from_entries(alg, [(1, 2, vals[0]), (1, 3, vals[1]), (2, 3, vals[2])])
        assert cohomological_index(alg, F).index == classical


def test_uncertified_when_no_samples_and_lattice_improves():
    res = cohomological_index(e2r_algebra(), e2r_cocycle((0, 0, 0, 0)), samples=0)
    assert res.index == 2 and not res.certified_upper


def test_verdict_lines():
    alg = e2r_algebra()
    assert integrability_verdict(alg, e2r_cocycle((1, 0, 0, 0))).line() == "index=2 qdim=1 integrable=true"
    assert integrability_verdict(alg, e2r_cocycle((1, 1, 0, 0))).line() == "index=0 qdim=2 integrable=false"
    v = integrability_verdict(so3_algebra(), TwoCocycle.zero(so3_algebra()))
    assert "H^2 = 0" in v.note


def test_extension_brackets_and_casimirs():
    ext = extend(e2r_algebra(), e2r_cocycle((1, 0, 0, 0)))
    assert validate(ext.extended).valid
    C = ext.extended.C
    assert C[1][2][0] == 1 and C[1][3][2] == 1 and C[2][3][1] == -1
    ch = Chart(5)
    f0, f1, f2, f3, f4 = ch.coords()
    assert casimir_check(ext, f0)
    assert casimir_check(ext, f1 * f1 + f2 * f2 - f0 * f3 * 2)
    assert casimir_check(ext, f4)
    assert not casimir_check(ext, f1 * f1 + f2 * f2)


@given(algebras, st.data())
def test_extension_by_any_cocycle_is_lie(alg, data):
    z = cohomology(alg).z_basis
    coeffs = [data.draw(small_rationals) for _ in z]
    F = TwoCocycle.zero(alg)
    for c, b in zip(coeffs, z):
        F = F + b.scaled(c)
    assert validate(extend(alg, F).extended).valid


def test_extension_rejects_non_cocycle():
    F = TwoCocycle(e2r_algebra(), [[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [-1, 0, 0, 0]], check=False)
    with pytest.raises(NotACocycleError):
        extend(e2r_algebra(), F)
