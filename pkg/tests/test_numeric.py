import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import mat
from hermrank.errors import BackendMismatch, DimensionMismatch, NotHermitian, NotSquare
from hermrank.numeric import (
    EXACT,
    FLOAT,
    Inertia,
    Matrix,
    Scalar,
    TolerancePolicy,
    hermitian_part,
    inertia,
    kron,
    pinv,
    projectors,
    rank,
    solve,
    unvec,
    vec,
)
from hermrank.oracle import exact_batch_inertia
from hermrank.sampling import random_hermitian, random_matrix, rng_for


def charpoly_inertia(A):
    """Inertia from the characteristic polynomial (no elimination involved)."""
    re_ = np.array([[int(x) for x in r] for r in A.re], dtype=object)[None]
    im_ = (np.zeros_like(re_) if A.im is None
           else np.array([[int(x) for x in r] for r in A.im], dtype=object)[None])
    p, q = exact_batch_inertia(re_, im_)
    return Inertia(int(p[0]), int(q[0]), A.rows - int(p[0]) - int(q[0]))


def int_matrix(rng, m, n, rank_=None):
    return random_matrix(rng, m, n, bound=4, rank=rank_)


# ---- worked examples -------------------------------------------------------

def test_rank_examples():
    assert rank(Matrix.identity(3)) == 3
    assert rank(Matrix.zeros(2, 4)) == 0
    assert rank(mat([[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]])) == 3


def test_inertia_examples():
    assert inertia(mat([[2, 0, 0], [0, -3, 0], [0, 0, 0]])) == Inertia(1, 1, 1)
    assert inertia(Matrix.zeros(2, 2)) == Inertia(0, 0, 2)
    S = mat([[1, 0, 1, 0, 0], [0, 1, 0, 1, 0], [1, 0, 0, 0, 1], [0, 1, 0, 0, 0],
             [0, 0, 1, 0, 0]])
    assert inertia(S) == Inertia(3, 2, 0)


def test_pinv_examples():
    assert pinv(mat([[2, 0], [0, 0]])) == mat([["1/2", 0], [0, 0]])
    assert pinv(mat([[1], [1]])) == mat([["1/2", "1/2"]])


def test_projector_examples():
    E, F = projectors(Matrix.identity(2))
    assert E == Matrix.zeros(2, 2) and F == Matrix.zeros(2, 2)
    E, F = projectors(Matrix.zeros(2, 3))
    assert E == Matrix.identity(2) and F == Matrix.identity(3)
    E, F = projectors(mat([[1, 0]]))
    assert E == Matrix.zeros(1, 1) and F == mat([[0, 0], [0, 1]])


def test_hermitian_part_examples():
    assert hermitian_part(Matrix.identity(2)) == Matrix.identity(2)
    assert hermitian_part(mat([[0, 2], [0, 0]])) == mat([[0, 1], [1, 0]])
    assert hermitian_part(mat([[1, "i"], [0, 1]])) == mat([[1, "1/2i"], ["-1/2i", 1]])


# ---- scalars ---------------------------------------------------------------

@pytest.mark.parametrize("text, re_, im_", [
    ("3/4", mpq(3, 4), 0), ("-1/2+3/4i", mpq(-1, 2), mpq(3, 4)), ("2i", 0, 2),
    ("-i", 0, -1), ("5-i", 5, -1), ("0", 0, 0),
])
def test_scalar_parse(text, re_, im_):
    s = Scalar.parse(text)
    assert (s.re, s.im) == (re_, im_)


@pytest.mark.parametrize("bad", ["", "1/0x", "i2", "1.5", "1//2", "3+4"])
def test_scalar_parse_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        Scalar.parse(bad)


@given(st.fractions(), st.fractions())
def test_scalar_text_round_trip(a, b):
    s = Scalar(mpq(a.numerator, a.denominator), mpq(b.numerator, b.denominator))
    assert Scalar.parse(str(s)) == s


# ---- kernel properties -----------------------------------------------------

@given(st.integers(0, 2**32), st.integers(1, 5), st.integers(1, 5), st.integers(0, 5))
def test_rank_matches_gram_charpoly(seed, m, n, r):
    rng = rng_for(seed)
    M = int_matrix(rng, m, n, rank_=min(r, m, n))
    G = M @ M.H
    assert rank(M) == charpoly_inertia(G).rank
    assert rank(M) == rank(M.H)


@given(st.integers(0, 2**32), st.integers(1, 6), st.integers(0, 6))
def test_inertia_matches_charpoly(seed, n, r):
    A = random_hermitian(rng_for(seed), n, bound=4, rank=min(r, n))
    got = inertia(A)
    assert got == charpoly_inertia(A)
    assert got.size == n
    assert inertia(-A) == got.swapped()


@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(1, 4))
def test_inertia_congruence_invariant(seed, n, k):
    rng = rng_for(seed)
    A = random_hermitian(rng, n, bound=3)
    S = random_matrix(rng, n, n, bound=3)
    if rank(S) < n:
        return
    assert inertia(S @ A @ S.H) == inertia(A)


@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(1, 4), st.integers(0, 4))
def test_pinv_penrose_equations(seed, m, n, r):
    M = random_matrix(rng_for(seed), m, n, bound=3, den=3, rank=min(r, m, n) or None)
    X = pinv(M)
    assert M @ X @ M == M
    assert X @ M @ X == X
    assert (M @ X).H == M @ X
    assert (X @ M).H == X @ M


@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(1, 4))
def test_projectors_are_orthogonal(seed, m, n):
    A = random_matrix(rng_for(seed), m, n, bound=2, rank=min(m, n) // 2 + 1)
    E, F = projectors(A)
    assert E @ E == E and E.H == E and E @ A == Matrix.zeros(m, n)
    assert F @ F == F and F.H == F and A @ F == Matrix.zeros(m, n)
    assert rank(E) == m - rank(A) and rank(F) == n - rank(A)


@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(1, 4))
def test_solve_consistent_and_inconsistent(seed, m, n):
    rng = rng_for(seed)
    K = random_matrix(rng, m, n, bound=3, rank=max(1, min(m, n) - 1))
    x = random_matrix(rng, n, 2, bound=3)
    sol = solve(K, K @ x)
    assert sol is not None and K @ sol == K @ x
    E, _ = projectors(K)
    if not E.is_zero():
        c = K @ x + E @ random_matrix(rng, m, 2, bound=3)
        if not (E @ c).is_zero():
            assert solve(K, c) is None


@given(st.integers(0, 2**32))
def test_kron_vec_identity(seed):
    rng = rng_for(seed)
    A, X, B = (random_matrix(rng, 2, 3), random_matrix(rng, 3, 2), random_matrix(rng, 2, 2))
    assert vec(A @ X @ B) == kron(B.T, A) @ vec(X)
    assert unvec(vec(X), 3, 2) == X


# ---- float backend ---------------------------------------------------------

@given(st.integers(0, 2**32), st.integers(1, 5), st.integers(0, 5))
def test_float_backend_agrees_on_integer_matrices(seed, n, r):
    A = random_hermitian(rng_for(seed), n, bound=3, rank=min(r, n))
    F = A.to_backend(FLOAT)
    assert F.backend == FLOAT
    assert rank(F) == rank(A)
    assert inertia(F) == inertia(A)


def test_float_tolerance_controls_rank():
    M = Matrix.from_rows([[1.0, 0.0], [0.0, 1e-7]])
    assert rank(M) == 2
    assert rank(M, TolerancePolicy(rank_tol=1e-6)) == 1
    A = Matrix.from_rows([[1.0, 0.0], [0.0, -1e-12]])
    assert inertia(A) == Inertia(1, 0, 1)
    assert inertia(A, TolerancePolicy(inertia_tol=0.0)) == Inertia(1, 1, 0)


def test_tolerance_policy_rejects_negative():
    with pytest.raises(ValueError):
        TolerancePolicy(rank_tol=-1.0)


def test_backend_mixing_rejected():
    with pytest.raises(BackendMismatch):
        Matrix.from_rows([[1, 0.5]])
    with pytest.raises(BackendMismatch):
        Matrix.identity(2) + Matrix.identity(2, FLOAT)


def test_shape_and_symmetry_errors():
    with pytest.raises(DimensionMismatch):
        Matrix.identity(2) @ Matrix.identity(3)
    with pytest.raises(NotHermitian):
        inertia(mat([[0, 1], [0, 0]]))
    with pytest.raises(NotSquare):
        inertia(mat([[1, 0]]))
    with pytest.raises(NotSquare):
        hermitian_part(mat([[1, 0]]))


def test_exact_round_trip_through_float_is_lossy_but_tagged():
    A = mat([["1/3", "i"], ["-i", 2]])
    assert A.backend == EXACT
    F = A.to_backend(FLOAT)
    assert F.to_backend(EXACT).backend == EXACT
    assert abs(F.to_complex()[0, 0] - 1 / 3) < 1e-15
