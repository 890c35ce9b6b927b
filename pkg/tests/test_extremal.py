import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import mat
from hermrank.errors import HypothesisViolated, InternalInconsistency, PremiseViolated
from hermrank.extremal import (
    DECISION_IDS,
    ExtremalSummary,
    FreeInstance,
    LinearInstance,
    PairInstance,
    PartitionedInstance,
    analyze,
    build_report,
    bxc_special_summary,
    bxc_summary,
    extremal_bxc,
    extremal_free,
    extremal_free_psd,
    extremal_linear_constrained,
    extremal_linear_psd_constrained,
    extremal_pair_allpairs,
    extremal_pair_constrained,
    extremal_two_var,
    summary_verdicts,
    lsq_common_condition,
    solution_extremal_linear,
    solution_extremal_pair,
    solution_shift_extremal,
    submatrix_extremal,
    triple_common_solvable,
)
from hermrank.numeric import Matrix, inertia, rank
from hermrank.oracle import (
    CONFIRMED,
    MAX_FIELDS,
    MIN_FIELDS,
    SANDWICH_ONLY,
    SearchBudget,
    classify,
    gen_instance,
    observed_extremes,
)
from hermrank.sampling import random_hermitian, random_matrix, random_psd, rng_for
from hermrank.solvers import ADJOINT_PAIR, PSD_SANDWICH, AffineSolutionSet, CorrectionTerm

SMALL = SearchBudget(random_trials=200, grid_radius=2, seed=0)
I2 = Matrix.identity(2)


def S(*values):
    return ExtremalSummary(*values)


def observation(x0, *terms):
    return observed_extremes(AffineSolutionSet(x0, tuple(terms), (), hermitian=True), SMALL)


def observed(x0, *terms):
    return observation(x0, *terms).summary


def assert_bracketed(predicted, obs):
    """Maxima attained, minima never undercut (a minimizer may miss the lattice)."""
    status, _ = classify(predicted, obs)
    for f in MAX_FIELDS:
        assert status[f] == CONFIRMED, (f, predicted, obs.summary)
    for f in MIN_FIELDS:
        assert status[f] in (CONFIRMED, SANDWICH_ONLY), (f, predicted, obs.summary)
    return all(v == CONFIRMED for v in status.values())


# ---- summary type ----------------------------------------------------------

def test_summary_dict_round_trip():
    s = S(3, 1, 2, 0, 2, 1)
    assert ExtremalSummary.from_dict(s.as_dict()) == s
    assert s.negated() == S(3, 1, 2, 1, 2, 0)


def test_summary_reports_incoherent_values():
    # corrupted summaries must be representable for fault injection
    assert "min_rank > max_rank" in S(1, 2, 0, 0, 0, 0).violations()
    assert "max_rank > max_ip + max_im" in S(3, 0, 1, 0, 1, 0).violations()
    with pytest.raises(KeyError):
        ExtremalSummary.from_dict({"max_rank": 1})


def test_summary_violations_against_size():
    assert S(2, 1, 1, 0, 2, 1).violations(2) == []
    assert S(3, 1, 1, 0, 2, 1).violations(2)


# ---- free families ---------------------------------------------------------

def test_free_unconstrained():
    assert extremal_free(Matrix.zeros(3, 3), Matrix.identity(3)) == S(3, 0, 3, 0, 3, 0)


def test_free_diagonal_example_matches_grid():
    A, B = mat([[1, 0], [0, -1]]), mat([[1], [0]])
    s = extremal_free(A, B)
    assert s == S(2, 1, 1, 0, 2, 1)
    from hermrank.solvers import HERMITIAN_SANDWICH
    assert observed(A, CorrectionTerm(HERMITIAN_SANDWICH, B, sign=-1)) == s


def test_free_zero_coefficient_is_constant():
    A = mat([[2, 1], [1, -3]])
    i = inertia(A)
    assert extremal_free(A, Matrix.zeros(2, 1)) == S(2, 2, i.i_plus, i.i_plus,
                                                    i.i_minus, i.i_minus)


def test_free_psd_examples():
    assert extremal_free_psd(mat([[0]]), mat([[1]]), -1) == S(1, 0, 0, 0, 1, 0)
    s = extremal_free_psd(mat([[1]]), mat([[1]]), 1)
    assert (s.max_im, s.min_ip) == (0, 1)
    A = mat([[1, 2], [2, -1]])
    assert extremal_free_psd(A, Matrix.zeros(2, 1), 1) == S(2, 2, 1, 1, 1, 1)


@given(st.integers(0, 2**32), st.sampled_from([1, -1]))
def test_free_psd_matches_oracle(seed, sign):
    rng = rng_for(seed)
    m = int(rng.integers(1, 3))
    A = random_hermitian(rng, m, rank=int(rng.integers(0, m + 1)))
    B = random_matrix(rng, m, 1)
    got = extremal_free_psd(A, B, sign)
    assert_bracketed(got, observation(A, CorrectionTerm(PSD_SANDWICH, B, sign=sign)))


# ---- B X C families --------------------------------------------------------

def test_bxc_examples():
    assert extremal_bxc(Matrix.zeros(2, 2), I2, I2) == S(2, 0, 2, 0, 2, 0)
    A = mat([[3, 1], [1, 0]])
    i = inertia(A)
    assert extremal_bxc(A, I2, Matrix.zeros(1, 2)) == S(2, 2, i.i_plus, i.i_plus,
                                                       i.i_minus, i.i_minus)
    A, B, C = mat([[1, 0], [0, -1]]), mat([[1], [0]]), mat([[0, 1]])
    s = extremal_bxc(A, B, C)
    assert s == S(2, 2, 1, 1, 1, 1)
    assert observed(A, CorrectionTerm(ADJOINT_PAIR, B, C, sign=-1)) == s


@given(st.integers(0, 2**32))
def test_bxc_special_case_agrees(seed):
    rng = rng_for(seed)
    m = int(rng.integers(1, 4))
    A = random_hermitian(rng, m)
    B = random_matrix(rng, m, int(rng.integers(1, 3)))
    C = (B @ random_matrix(rng, B.cols, int(rng.integers(1, 3)))).H
    assert bxc_summary(A, B, C) == bxc_special_summary(A, B, C)


def test_bxc_special_case_checks_hypothesis():
    with pytest.raises(HypothesisViolated):
        bxc_special_summary(I2, mat([[1], [0]]), mat([[0, 1]]))


def test_two_var_reduces_to_single_term():
    rng = rng_for(3)
    A = random_hermitian(rng, 3)
    B = random_matrix(rng, 3, 2)
    C = (B @ random_matrix(rng, 2, 2)).H
    z = Matrix.zeros(3, 1)
    assert extremal_two_var(A, B, C, z, z.H) == bxc_special_summary(A, B, C)
    assert extremal_two_var(A, B, Matrix.zeros(2, 3), z, z.H) == \
        extremal_free(A, Matrix.zeros(3, 1))


def test_two_var_planted_matches_oracle():
    exact = 0
    for seed in range(12):
        rng = rng_for(seed, 7)
        A = random_hermitian(rng, 2)
        B1 = random_matrix(rng, 2, 2, rank=1 + seed % 2)
        C1 = (B1 @ random_matrix(rng, 2, 1)).H
        B2 = B1 @ random_matrix(rng, 2, 1)
        C2 = (B1 @ random_matrix(rng, 2, 1)).H
        s = extremal_two_var(A, B1, C1, B2, C2)
        obs = observation(A, CorrectionTerm(ADJOINT_PAIR, B1, C1, sign=-1),
                          CorrectionTerm(ADJOINT_PAIR, B2, C2, sign=-1))
        exact += assert_bracketed(s, obs)
    assert exact >= 3


def test_two_var_checks_range_hypothesis():
    with pytest.raises(HypothesisViolated):
        extremal_two_var(I2, mat([[1], [0]]), mat([[1, 0]]), mat([[0], [1]]), mat([[1, 0]]))


# ---- pair-constrained ------------------------------------------------------

def diag_pair():
    return PairInstance(Matrix.zeros(2, 2), I2, mat([[1]]), mat([[1, 0]]),
                        mat([[-1]]), mat([[0, 1]]))


def test_pair_vacuous_constraints_equal_free():
    rng = rng_for(1)
    A1, B1 = random_hermitian(rng, 3), random_matrix(rng, 3, 2)
    z = Matrix.zeros(0, 2)
    inst = PairInstance(A1, B1, Matrix.zeros(0, 0), z, Matrix.zeros(0, 0), z)
    assert extremal_pair_constrained(inst)[0] == extremal_free(A1, B1)


def test_pair_diagonal_constraints_constant_rank():
    s, rep = extremal_pair_constrained(diag_pair())
    # -X with X = [[1, x], [x*, -1]] has determinant -1 - |x|^2 for every x
    assert s == S(2, 2, 1, 1, 1, 1)
    assert rep.verdict("all-nonsingular") and not rep.verdict("exists-pd")


def test_pair_rejects_inconsistent_constraints():
    one = mat([[1]])
    inst = PairInstance(one, one, mat([[0]]), one, one, one)
    with pytest.raises(PremiseViolated):
        extremal_pair_constrained(inst)


def test_allpairs_forced_solution():
    D = mat([[2, "i"], ["-i", 0]])
    inst = PairInstance(D, I2, D, I2, D, I2)
    s, _ = extremal_pair_allpairs(inst)
    assert (s.max_rank, s.min_rank) == (0, 0)


@given(st.integers(0, 2**32))
def test_allpairs_matches_general_formula(seed):
    inst, X = gen_instance("pair", 2 + seed % 2, seed=seed)
    B1 = inst.B1
    inst = PairInstance(B1 @ X @ B1.H, B1, inst.A2, inst.B2, inst.A3, inst.B3)
    s, _ = extremal_pair_allpairs(inst)
    assert s == extremal_pair_constrained(inst)[0]
    assert s.min_rank == 0


def test_triple_forced_and_planted():
    D = mat([[1, 2], [2, -1]])
    rep = triple_common_solvable(PairInstance(D, I2, D, I2, D, I2))
    assert rep.verdict("triple-common-solution") and rep.witness == D
    rng = rng_for(4)
    X = random_hermitian(rng, 3)
    Bs = [random_matrix(rng, 2, 3) for _ in range(3)]
    inst = PairInstance(*(M for B in Bs for M in (B @ X @ B.H, B)))
    rep = triple_common_solvable(inst)
    W = rep.witness
    assert rep.verdict("triple-common-solution")
    assert all(B @ W @ B.H == B @ X @ B.H for B in Bs)


def test_lsq_condition_on_consistent_and_identity_cases():
    rng = rng_for(8)
    X = random_hermitian(rng, 2)
    Bs = [random_matrix(rng, 1, 2) for _ in range(3)]
    inst = PairInstance(*(M for B in Bs for M in (B @ X @ B.H, B)))
    assert lsq_common_condition(inst).verdict("common-least-squares")
    D = [random_hermitian(rng, 2) for _ in range(3)]
    inst = PairInstance(D[0], I2, D[1], I2, D[2], I2)
    # each equation alone is solvable and forces X = D_i, so no common minimizer
    rep = lsq_common_condition(inst)
    assert not rep.verdict("common-least-squares")


def test_solution_pair_examples():
    e1, e2, one = mat([[1, 0]]), mat([[0, 1]]), mat([[1]])
    s, rep = solution_extremal_pair(e1, one, e2, one)
    assert rep.verdict("exists-pd") and not rep.verdict("all-pd")
    _, rep = solution_extremal_pair(e1, mat([[-1]]), e2, one)
    assert not rep.verdict("exists-pd")
    D = mat([[1, 0], [0, 0]])
    s, rep = solution_extremal_pair(I2, D, I2, D)
    assert s.max_rank == s.min_rank == rank(D)
    assert rep.verdict("all-psd") and not rep.verdict("exists-pd")


# ---- linear constraints ----------------------------------------------------

def test_linear_forced_solution():
    rng = rng_for(2)
    X = random_hermitian(rng, 2)
    A1, B1 = random_hermitian(rng, 2), random_matrix(rng, 2, 2)
    s, _ = extremal_linear_constrained(LinearInstance(A1, B1, X, I2))
    i = inertia(A1 - B1 @ X @ B1.H)
    assert s == S(i.rank, i.rank, i.i_plus, i.i_plus, i.i_minus, i.i_minus)


def test_linear_diagonal_example():
    s, _ = extremal_linear_constrained(LinearInstance(I2, I2, mat([[0, 0]]), mat([[1, 0]])))
    assert s == S(2, 1, 2, 1, 1, 0)


def test_linear_zero_coefficient_constant():
    A1 = mat([[1, 0], [0, -2]])
    s, _ = extremal_linear_constrained(LinearInstance(A1, Matrix.zeros(2, 2), mat([[0, 0]]),
                                                      mat([[1, 0]])))
    assert s == S(2, 2, 1, 1, 1, 1)


def test_linear_psd_examples():
    P = mat([[2, 1], [1, 1]])
    s, _ = extremal_linear_psd_constrained(LinearInstance(I2, I2, P, I2, "linear_psd"))
    assert s.max_rank == s.min_rank and s.max_ip == s.min_ip
    # X = diag(0, t), t >= 0, so I - X = diag(1, 1 - t) reaches i- = 1 for t > 1
    s, _ = extremal_linear_psd_constrained(
        LinearInstance(I2, I2, mat([[0, 0]]), mat([[1, 0]]), "linear_psd"))
    assert s == S(2, 1, 2, 1, 1, 0)
    s, _ = extremal_linear_psd_constrained(
        LinearInstance(I2, Matrix.zeros(2, 2), mat([[0, 0]]), mat([[1, 0]]), "linear_psd"))
    assert s == S(2, 2, 2, 2, 0, 0)


def test_linear_premises():
    with pytest.raises(PremiseViolated):
        extremal_linear_constrained(LinearInstance(I2, I2, mat([[1, 0]]), mat([[0, 0]])))
    with pytest.raises(PremiseViolated):
        extremal_linear_psd_constrained(
            LinearInstance(I2, I2, mat([[-1, 0]]), mat([[1, 0]]), "linear_psd"))


def test_solution_linear_examples():
    for n in (1, 2, 3):
        s, _ = solution_extremal_linear(Matrix.identity(n), Matrix.identity(n))
        assert s == S(n, n, n, n, 0, 0)
    s, rep = solution_extremal_linear(mat([[1, 0]]), mat([[1, 0]]))
    assert s == S(2, 1, 2, 1, 1, 0)
    assert rep.verdict("exists-nonsingular")
    s, _ = solution_extremal_linear(mat([[1, 0]]), mat([[0, 0]]))
    assert (s.max_rank, s.min_rank) == (1, 0)


def test_shift_examples():
    A, B = mat([[1, 0]]), mat([[1, 0]])
    assert solution_shift_extremal(A, B, Matrix.zeros(2, 2))[0] == \
        solution_extremal_linear(A, B)[0]
    s, _ = solution_shift_extremal(A, B, mat([[1, 0], [0, 5]]))
    assert s.min_rank == 0
    s, _ = solution_shift_extremal(I2, I2, Matrix.zeros(2, 2), psd=True)
    assert s == S(2, 2, 2, 2, 0, 0)


def test_shift_psd_needs_psd_shift():
    with pytest.raises(PremiseViolated):
        solution_shift_extremal(I2, I2, mat([[-1, 0], [0, 0]]), psd=True)


# ---- partitioned -----------------------------------------------------------

def test_partitioned_examples():
    one, zero = mat([[1], [0]]), mat([[0], [1]])
    s1, s3, _, _ = submatrix_extremal(PartitionedInstance(one, zero, one, zero))
    assert s1 == s3 == S(1, 1, 1, 1, 0, 0)
    s1, s3, d1, d3 = submatrix_extremal(PartitionedInstance(mat([[1]]), mat([[0]]),
                                                            mat([[1]]), mat([[0]])))
    assert (s1.max_rank, s1.min_rank) == (1, 1)
    assert (s3.max_rank, s3.min_rank) == (1, 0)
    assert d1.verdict("all-pd") and d3.verdict("exists-zero")


def test_partitioned_premise():
    with pytest.raises(PremiseViolated):
        submatrix_extremal(PartitionedInstance(mat([[0]]), mat([[0]]), mat([[1]]), mat([[0]])))


# ---- decisions -------------------------------------------------------------

def test_summary_verdicts_cover_all_ids():
    v = summary_verdicts(S(2, 1, 1, 0, 2, 1), 2)
    assert set(v) == set(DECISION_IDS)
    assert v["exists-nonsingular"][0] and not v["all-nonsingular"][0]
    assert v["exists-nd"][0] and v["exists-nsd"][0] and not v["exists-pd"][0]


def test_build_report_flags_disagreement():
    with pytest.raises(InternalInconsistency):
        build_report(S(2, 1, 1, 0, 2, 1), 2, {"exists-pd": (True, "made up")})


@given(st.integers(0, 2**32), st.sampled_from(["pair", "linear", "linear_psd",
                                                  "partitioned", "free"]))
def test_analyze_summaries_are_coherent(seed, kind):
    inst, _ = gen_instance(kind, 1 + seed % 3, seed=seed)
    for name, s, rep in analyze(inst):
        size = rep.size
        assert s.violations(size) == []
        assert s.min_rank <= s.max_rank and s.max_ip + s.min_im <= max(s.max_rank, size)
        for key in DECISION_IDS:
            assert rep.verdict(key) == summary_verdicts(s, size)[key][0]


# ---- reduction chains ------------------------------------------------------

@given(st.integers(0, 2**32))
def test_linear_with_identity_objective_is_minus_solution_extremes(seed):
    inst, _ = gen_instance("linear", 1 + seed % 3, seed=seed)
    n = inst.B4.cols
    red = LinearInstance(Matrix.zeros(n, n), Matrix.identity(n), inst.A4, inst.B4)
    got, _ = extremal_linear_constrained(red)
    want, _ = solution_extremal_linear(inst.B4, inst.A4)
    assert got == want.negated()


@given(st.integers(0, 2**32))
def test_linear_with_shift_objective_is_minus_shift_extremes(seed):
    inst, _ = gen_instance("linear", 1 + seed % 3, seed=seed)
    n = inst.B4.cols
    P = random_hermitian(rng_for(seed, 1), n)
    red = LinearInstance(P, Matrix.identity(n), inst.A4, inst.B4)
    got, _ = extremal_linear_constrained(red)
    want, _ = solution_shift_extremal(inst.B4, inst.A4, P)
    assert got == want.negated()


@given(st.integers(0, 2**32))
def test_shift_psd_with_psd_solution_set(seed):
    inst, X = gen_instance("linear_psd", 1 + seed % 3, seed=seed)
    n = inst.B4.cols
    P = random_psd(rng_for(seed, 2), n, int(rng_for(seed, 3).integers(0, n + 1)))
    s, _ = solution_shift_extremal(inst.B4, inst.A4, P, psd=True)
    i = inertia(X - P)
    assert s.min_rank <= i.rank <= s.max_rank
    assert s.min_ip <= i.i_plus <= s.max_ip and s.min_im <= i.i_minus <= s.max_im


def test_free_instance_dispatch():
    inst = FreeInstance(mat([[1, 0], [0, -1]]), mat([[1], [0]]))
    [(name, s, rep)] = analyze(inst)
    assert s == S(2, 1, 1, 0, 2, 1) and rep.verdict("exists-nd")
