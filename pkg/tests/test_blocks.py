import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import mat
from hermrank.blocks import assemble, bordered, hstack, inertia_expansion_suite, rank_expansion_suite, vstack
from hermrank.errors import DimensionMismatch, HypothesisNotChecked
from hermrank.numeric import Matrix, inertia, rank
from hermrank.sampling import random_hermitian, random_matrix, random_psd, rng_for


def by_name(reports):
    return {r.identity: r for r in reports}


def test_assemble_examples():
    one = Matrix.identity(1)
    assert assemble([[one, one]]) == mat([[1, 1]])
    A, C = mat([[1, 2]]), mat([[3, 4]])
    assert assemble([[A], [C]]) == mat([[1, 2], [3, 4]])
    B = mat([[5], [6]])
    K = assemble([[Matrix.identity(2), B], [C, 0]])
    assert K == mat([[1, 0, 5], [0, 1, 6], [3, 4, 0]])


def test_assemble_zero_blocks_take_shape_from_neighbours():
    K = assemble([[mat([[1, 2]]), 0], [0, mat([[7]])]])
    assert K.shape == (2, 3)
    assert K == mat([[1, 2, 0], [0, 0, 7]])


def test_assemble_rejects_ragged_blocks():
    with pytest.raises(DimensionMismatch):
        assemble([[mat([[1, 2]]), mat([[1], [2]])]])
    with pytest.raises(DimensionMismatch):
        vstack(mat([[1, 2]]), mat([[1]]))


def test_bordered_shape():
    U = bordered(mat([[1]]), mat([[2, 3]]))
    assert U == mat([[1, 2, 3], [2, 0, 0], [3, 0, 0]])


def test_rank_suite_identity_case():
    reports = rank_expansion_suite(Matrix.identity(2), Matrix.zeros(2, 1), Matrix.zeros(1, 2),
                                   Matrix.identity(1), Matrix.identity(1))
    assert len(reports) == 6
    assert all(r.equal for r in reports)


def test_rank_suite_bordered_example():
    A = mat([[1, 0], [0, 0]])
    B = mat([[1], [0]])
    C = mat([[1, 0]])
    r = by_name(rank_expansion_suite(A, B, C, Matrix.identity(1), Matrix.identity(1)))
    assert r["bordered"].left == (2,) and r["bordered"].right == (2,)


@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(1, 4), st.integers(1, 3),
       st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
def test_rank_suite_random(seed, m, n, p, q, s, t):
    rng = rng_for(seed)
    A = random_matrix(rng, m, n, rank=max(1, min(m, n) - 1))
    B, C = random_matrix(rng, m, p, rank=1), random_matrix(rng, q, n)
    P, Q = random_matrix(rng, q, s, rank=1), random_matrix(rng, t, p)
    for r in rank_expansion_suite(A, B, C, P, Q):
        assert r.equal, r


def test_inertia_suite_zero_block_example():
    r = by_name(inertia_expansion_suite(Matrix.zeros(2, 2), Matrix.identity(2),
                                        Matrix.zeros(2, 2), Matrix.identity(2)))
    assert r["bordered-inertia"].left == (2, 2) == r["bordered-inertia"].right


def test_inertia_suite_psd_example():
    A = Matrix.identity(2)
    B = mat([[1], [0]])
    r = by_name(inertia_expansion_suite(A, B, Matrix.zeros(1, 1), Matrix.identity(1)))
    assert r["psd-bordered"].left == (2, 1, 3) == r["psd-bordered"].right


def test_inertia_suite_planted_range():
    rng = rng_for(5)
    A = random_hermitian(rng, 3, rank=2)
    B = A @ random_matrix(rng, 3, 2)
    r = by_name(inertia_expansion_suite(A, B, random_hermitian(rng, 2), random_matrix(rng, 1, 2)))
    assert r["range-schur"].equal


def test_inertia_suite_strict_reports_unchecked_hypotheses():
    A = mat([[1, 0], [0, -1]])
    with pytest.raises(HypothesisNotChecked):
        inertia_expansion_suite(A, mat([[1], [1]]), mat([[0]]), mat([[1]]), strict=True)
    names = {r.identity for r in inertia_expansion_suite(A, mat([[1], [1]]), mat([[0]]),
                                                        mat([[1]]))}
    assert "psd-bordered" not in names and "bordered-inertia" in names


@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(1, 3), st.integers(1, 3),
       st.sampled_from(["random", "psd", "range"]))
def test_inertia_suite_random(seed, m, n, k, shape):
    rng = rng_for(seed)
    if shape == "psd":
        A = random_psd(rng, m, max(1, m - 1))
    else:
        A = random_hermitian(rng, m, rank=max(1, m - 1))
    B = A @ random_matrix(rng, m, n) if shape == "range" else random_matrix(rng, m, n)
    D = random_hermitian(rng, n)
    P = random_matrix(rng, k, n, rank=1)
    reports = inertia_expansion_suite(A, B, D, P)
    assert all(r.equal for r in reports), [r for r in reports if not r.equal]
    if shape == "psd":
        assert "psd-bordered" in {r.identity for r in reports}


def test_hstack_vstack_match_assemble():
    A, B = mat([[1], [2]]), mat([[3], [4]])
    assert hstack(A, B) == assemble([[A, B]])
    assert vstack(A.H, B.H) == assemble([[A.H], [B.H]])
    assert rank(hstack(A, B)) == 2
    assert inertia(bordered(Matrix.zeros(2, 2), hstack(A, B))).i_plus == 2
