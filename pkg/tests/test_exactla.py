import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from grakos.exactla import (
    ChainComplexOverQ,
    Echelon,
    ExactLAError,
    ModularReport,
    RationalSparseMatrix,
    modular_check,
    random_matrix,
    span_rank,
)


def test_rank_identity():
    assert RationalSparseMatrix.identity(3).rank() == 3


def test_rank_proportional_rows():
    m = RationalSparseMatrix.from_rows([[1, 2], [2, 4]])
    assert m.rank() == 1


def test_nullspace_zero_matrix():
    m = RationalSparseMatrix.zero(2, 2)
    assert len(m.nullspace_basis()) == 2


def test_nullspace_identity():
    assert RationalSparseMatrix.identity(4).nullspace_basis() == []


def test_nullspace_symmetric():
    m = RationalSparseMatrix.from_rows([[1, 1], [1, 1]])
    basis = m.nullspace_basis()
    assert len(basis) == 1
    (vec,) = basis
    # proportional to (1, -1)
    assert vec[0] * Fraction(-1) == vec[1] * Fraction(1)
    assert m.apply(vec) == {}


def test_nullspace_counts_match_rank():
    rng = random.Random(7)
    for _ in range(20):
        m = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        assert len(m.nullspace_basis()) == m.cols - m.rank()
        for vec in m.nullspace_basis():
            assert m.apply(vec) == {}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rank_equals_rank_of_transpose(seed):
    rng = random.Random(seed)
    m = random_matrix(rng, rng.randint(1, 7), rng.randint(1, 7))
    assert m.rank() == m.transpose().rank()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_modular_rank_bounded_by_rational(seed):
    rng = random.Random(seed)
    m = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
    rep = modular_check(m, [10007, 2000003, 999999937])
    assert all(v <= rep.rational_rank for v in rep.prime_ranks.values())
    assert rep.confirmed


def test_modular_check_denominator_error():
    m = RationalSparseMatrix(1, 1, [(0, 0, Fraction(1, 3))])
    rep = modular_check(m, [3])
    assert rep.failures and not rep.prime_ranks


def test_matmul_and_transpose():
    a = RationalSparseMatrix.from_rows([[1, 2], [0, 1]])
    b = RationalSparseMatrix.from_rows([[1, 0], [3, 1]])
    ab = a.matmul(b)
    assert ab == RationalSparseMatrix.from_rows([[7, 2], [3, 1]])


def test_text_roundtrip():
    rng = random.Random(3)
    m = random_matrix(rng, 4, 5)
    assert RationalSparseMatrix.from_text(m.to_text()) == m
    assert m.to_text().startswith("exactla-v1\n")


def test_from_text_rejects_missing_header():
    with pytest.raises(ExactLAError):
        RationalSparseMatrix.from_text("1 1 0\n")


def test_echelon_membership_and_nullspace():
    ech = Echelon()
    ech.add({0: 1, 1: 2})
    ech.add({1: 1, 2: 1})
    assert ech.rank == 2
    assert ech.contains({0: 2, 1: 5, 2: 1})
    null = ech.nullspace(3)
    assert len(null) == 1


def _two_term_complex():
    # 0 -> Q --id--> Q -> 0
    basis = {0: ["a"], 1: ["b"]}
    diff = {1: RationalSparseMatrix.from_rows([[1]])}
    return ChainComplexOverQ(basis=basis, diff=diff)


def test_homology_acyclic_two_term():
    dims = _two_term_complex().homology_dims()
    assert dims == {0: 0, 1: 0}


def test_homology_zero_differential():
    basis = {0: ["a", "b"], 1: ["c"]}
    diff = {1: RationalSparseMatrix.zero(2, 1)}
    cx = ChainComplexOverQ(basis=basis, diff=diff)
    assert cx.homology_dims() == {0: 2, 1: 1}


def test_homology_boundary_of_tetrahedron():
    # simplicial chain complex of the boundary of a 3-simplex:
    # H0 = 1, H1 = 0, H2 = 1
    import itertools

    verts = list(range(4))
    simp = {
        k: list(itertools.combinations(verts, k + 1)) for k in range(3)
    }
    index = {k: {s: i for i, s in enumerate(simp[k])} for k in simp}
    diff = {}
    for k in (1, 2):
        ent = []
        for j, s in enumerate(simp[k]):
            for a in range(len(s)):
                face = s[:a] + s[a + 1 :]
                ent.append((index[k - 1][face], j, (-1) ** a))
        diff[k] = RationalSparseMatrix(len(simp[k - 1]), len(simp[k]), ent)
    cx = ChainComplexOverQ(basis={k: simp[k] for k in simp}, diff=diff)
    assert cx.homology_dims() == {0: 1, 1: 0, 2: 1}


def test_d_squared_violation_reported():
    basis = {0: ["a"], 1: ["b"], 2: ["c"]}
    diff = {
        1: RationalSparseMatrix.from_rows([[1]]),
        2: RationalSparseMatrix.from_rows([[1]]),
    }
    cx = ChainComplexOverQ(basis=basis, diff=diff)
    with pytest.raises(ExactLAError, match="degree"):
        cx.homology_dims()


def test_graded_homology_split():
    basis = {0: ["a", "b"], 1: ["c", "d"]}
    diff = {
        1: RationalSparseMatrix(2, 2, [(0, 0, 1)]),
    }
    gradings = {0: ["x", "y"], 1: ["x", "y"]}
    cx = ChainComplexOverQ(basis=basis, diff=diff, gradings=gradings)
    dims = cx.homology_dims_graded()
    assert dims[(0, "x")] == 0 and dims[(1, "x")] == 0
    assert dims[(0, "y")] == 1 and dims[(1, "y")] == 1


def test_span_rank():
    assert span_rank([{0: 1}, {0: 2}, {1: 1}]) == 2
