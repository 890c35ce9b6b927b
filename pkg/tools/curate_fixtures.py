"""Regenerate the fixture files under tests/data.

Usage: python3 tools/curate_fixtures.py [--count 24]

Each kind gets instances whose six extremes are all attained by the
oracle search at the fixed budget below, so the acceptance tests can ask
for exact agreement.  For the kinds with an ``A1`` block a further set ties
``A1`` to the planted solution (``A1 = B1 X B1^*``); a generic ``A1``
saturates the ranks of several blocks and hides faults in them.  The triple
file holds pair instances whose three equations are pairwise consistent but
have no common Hermitian solution.
"""

from __future__ import annotations

import argparse
import json
import pathlib
from dataclasses import asdict

import numpy as np
from gmpy2 import mpq

from hermrank.extremal import (
    LinearInstance,
    PairInstance,
    linear_blocks,
    triple_common_solvable,
)
from hermrank.io import instance_to_json
from hermrank.numeric import EXACT, Matrix, Scalar, rank, rref
from hermrank.oracle import SearchBudget, _herm_basis, _herm_coords, gen_instance, verify_instance
from hermrank.sampling import random_hermitian, random_matrix, rng_for
from hermrank.solvers import pair_congruence_condition

DATA = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"
BUDGET = SearchBudget(random_trials=300, grid_radius=2, seed=0)
KINDS = ("pair", "linear", "linear_psd", "partitioned")
TIED_KINDS = ("pair", "linear", "linear_psd")


def _trivial(outcomes):
    return all(o.predicted.max_rank == o.predicted.min_rank for o in outcomes)


def _tie(inst, X):
    A1 = inst.B1 @ X @ inst.B1.H
    if isinstance(inst, PairInstance):
        return PairInstance(A1, inst.B1, inst.A2, inst.B2, inst.A3, inst.B3)
    return LinearInstance(A1, inst.B1, inst.A4, inst.B4, inst.kind)


def _informative_tie(inst, X):
    """A tie only exposes faults if ``A1`` is nonzero and, for ``B4 X = A4``,
    the bordered ``[[A1, B1], [A4 B1^*, B4]]`` has room below full row rank."""
    if rank(inst.A1) == 0:
        return False
    if isinstance(inst, PairInstance):
        return True
    M = linear_blocks(inst)["M"]
    return rank(inst.A4) > 0 and rank(M) < M.rows


def curate(kind, count, tied=False):
    """First ``count`` seeds whose outcomes are all confirmed on a small grid."""
    picked, trivial = [], 0
    seed = 0
    while len(picked) < count:
        seed += 1
        n = 2 + seed % 2
        inst, X = gen_instance(kind, n, seed=seed)
        if tied:
            inst = _tie(inst, X)
            if not _informative_tie(inst, X):
                continue
        outcomes = verify_instance(inst, BUDGET)
        if not all(o.confirmed and o.grid_points and o.grid_dims <= BUDGET.grid_cap
                   for o in outcomes):
            continue
        # keep the suite from filling up with constant-rank families
        if _trivial(outcomes):
            if trivial >= count // 4:
                continue
            trivial += 1
        picked.append({"seed": seed, "n": n, "tied": tied,
                       "instance": instance_to_json(inst, X),
                       "summaries": [o.observed.as_dict() for o in outcomes]})
    return picked


def _pairwise_consistent(inst):
    eqs = [(inst.B1, inst.A1), (inst.B2, inst.A2), (inst.B3, inst.A3)]
    for i, j in ((0, 1), (0, 2), (1, 2)):
        lhs, rhs = pair_congruence_condition(eqs[i][0], eqs[i][1], eqs[j][0], eqs[j][1])
        if lhs != rhs:
            return False
    return True


def _real_matrix(rows):
    re_ = np.array(rows, dtype=object).reshape(len(rows), -1)
    return Matrix(re_, None, EXACT)


def _nullspace(L):
    """Exact basis of the real null space of a real rational matrix."""
    R, pivots = rref(L)
    free = [j for j in range(L.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [mpq(0)] * L.cols
        v[f] = mpq(1)
        for i, p in enumerate(pivots):
            v[p] = -R.re[i, f]
        basis.append(v)
    return basis


def _coord_map(B, basis):
    """Columns: Hermitian coordinates of ``B E B^*`` for each basis matrix ``E``."""
    cols = [_herm_coords(B @ E @ B.H) for E in basis]
    return [[c[i] for c in cols] for i in range(len(cols[0]))]


_UNITS = (Scalar.parse("1"), Scalar.parse("-1"), Scalar.parse("i"), Scalar.parse("-i"))


def _isotropic_rows(rng):
    """Three coefficient matrices whose row spaces are totally isotropic for
    one common indefinite form, moved by a random invertible map.

    Every ``B_i^* H B_i`` is then orthogonal to that form, which leaves room
    for relations among the three equations that no pair accounts for.
    """
    T = random_matrix(rng, 3, 3, bound=2)
    if rank(T) < 3:
        return None
    out = []
    for w in rng.choice(len(_UNITS), size=3, replace=False):
        base = Matrix.from_rows([[Scalar.parse("1"), _UNITS[w], Scalar.parse("0")],
                                 [Scalar.parse("0"), Scalar.parse("0"), Scalar.parse("1")]])
        L = random_matrix(rng, 2, 2, bound=2)
        if rank(L) < 2:
            return None
        out.append(L @ base @ T)
    return out


def triple_infeasible(count):
    """Pairwise-consistent, jointly infeasible pair instances.

    Plants ``X12`` for equations 1 and 2, then ``X13 = X12 + K1`` and
    ``X23 = X12 + K2`` with ``K1``, ``K2`` in the kernels of equations 1 and
    2 that agree under equation 3, so each pair has a planted solution.
    """
    picked, seed = [], 0
    while len(picked) < count:
        seed += 1
        rng = rng_for(seed, 99)
        n = 3
        B = _isotropic_rows(rng)
        if B is None:
            continue
        basis = _herm_basis(n)
        d = len(basis)
        L1, L2, L3 = (_coord_map(b, basis) for b in B)
        zero = [mpq(0)] * d
        rows = [r + zero for r in L1] + [zero + r for r in L2]
        rows += [r + [-x for x in r] for r in L3]
        null = _nullspace(_real_matrix(rows))
        if not null:
            continue
        coef = rng.integers(-2, 3, size=len(null))
        v = [sum(int(c) * b[j] for c, b in zip(coef, null)) for j in range(2 * d)]
        K1 = sum((basis[j] * v[j] for j in range(d)), Matrix.zeros(n, n))
        X12 = random_hermitian(rng, n, bound=2)
        X13 = X12 + K1
        inst = PairInstance(B[0] @ X12 @ B[0].H, B[0], B[1] @ X12 @ B[1].H, B[1],
                            B[2] @ X13 @ B[2].H, B[2])
        if not _pairwise_consistent(inst):
            raise AssertionError("planted pairwise solutions failed the rank test")
        if triple_common_solvable(inst).verdict("triple-common-solution"):
            continue
        picked.append({"seed": seed, "n": n, "instance": instance_to_json(inst)})
    return picked


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=24)
    ap.add_argument("--tied-count", type=int, default=12)
    ap.add_argument("--triple-only", action="store_true")
    args = ap.parse_args()
    DATA.mkdir(parents=True, exist_ok=True)
    for kind in KINDS if not args.triple_only else ():
        picked = curate(kind, args.count)
        if kind in TIED_KINDS:
            picked += curate(kind, args.tied_count, tied=True)
        doc = {"kind": kind, "budget": asdict(BUDGET), "instances": picked}
        (DATA / f"curated_{kind}.json").write_text(json.dumps(doc, indent=1) + "\n")
        print(kind, [(c["seed"], c["tied"]) for c in doc["instances"]])
    doc = {"kind": "pair", "instances": triple_infeasible(20)}
    (DATA / "triple_infeasible.json").write_text(json.dumps(doc, indent=1) + "\n")
    print("triple", [c["seed"] for c in doc["instances"]])


if __name__ == "__main__":
    main()
