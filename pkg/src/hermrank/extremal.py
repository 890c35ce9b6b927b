"""Closed-form extremal ranks and inertias of ``A1 - B1 X B1^*`` and relatives.

Each public operation checks its premises, evaluates the rank/inertia
formula on explicitly assembled block matrices and, where an explicit list
of definiteness conditions exists, derives every verdict twice: once from
that list and once from the summary itself
(``exists X > 0`` iff ``max i+ = m`` and so on).  A disagreement raises
:class:`InternalInconsistency`.

The ``*_summary`` functions accept ``overrides``, a mapping from block name
to a replacement matrix; the oracle's fault-injection tests use it to feed
corrupted blocks through an otherwise unchanged formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .blocks import assemble, bordered, hstack, vstack
from .errors import (
    DimensionMismatch,
    HypothesisViolated,
    InternalInconsistency,
    NotHermitian,
    PremiseViolated,
    Unsolvable,
)
from .numeric import DEFAULT_POLICY, Matrix, inertia, rank
from .solvers import (
    _linear_system_solution,
    check_congruence_consistent,
    hermitian_part,
    linear_hermitian_solve,
    linear_psd_solve,
    pair_congruence_condition,
)

SUMMARY_FIELDS = ("max_rank", "min_rank", "max_ip", "min_ip", "max_im", "min_im")


@dataclass(frozen=True)
class ExtremalSummary:
    max_rank: int
    min_rank: int
    max_ip: int
    min_ip: int
    max_im: int
    min_im: int

    def as_tuple(self):
        return tuple(getattr(self, f) for f in SUMMARY_FIELDS)

    def as_dict(self):
        return dict(zip(SUMMARY_FIELDS, self.as_tuple()))

    @classmethod
    def from_dict(cls, d):
        return cls(**{f: int(d[f]) for f in SUMMARY_FIELDS})

    def negated(self):
        """Summary of the negated objective (inertias swap)."""
        return ExtremalSummary(self.max_rank, self.min_rank, self.max_im, self.min_im,
                               self.max_ip, self.min_ip)

    def violations(self, size=None):
        """Invariant failures; an empty list means the summary is coherent."""
        out = []
        for lo, hi in (("min_rank", "max_rank"), ("min_ip", "max_ip"), ("min_im", "max_im")):
            if getattr(self, lo) > getattr(self, hi):
                out.append(f"{lo} > {hi}")
        if self.max_rank > self.max_ip + self.max_im:
            out.append("max_rank > max_ip + max_im")
        if any(v < 0 for v in self.as_tuple()):
            out.append("negative value")
        if size is not None and any(v > size for v in self.as_tuple()):
            out.append(f"value above ambient size {size}")
        return out

    def __str__(self):
        return ", ".join(f"{k}={v}" for k, v in self.as_dict().items())


@dataclass(frozen=True)
class Decision:
    id: str
    verdict: bool
    condition: str
    explicit: str | None = None


@dataclass(frozen=True)
class DecisionReport:
    decisions: dict
    size: int | None = None
    witness: Matrix | None = None

    def __getitem__(self, key):
        return self.decisions[key]

    def __contains__(self, key):
        return key in self.decisions

    def verdict(self, key):
        return self.decisions[key].verdict

    def items(self):
        return self.decisions.items()


# --------------------------------------------------------------------------
# instances
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PairInstance:
    """``A1 - B1 X B1^*`` over Hermitian ``X`` with ``B2 X B2^* = A2``, ``B3 X B3^* = A3``."""

    A1: Matrix
    B1: Matrix
    A2: Matrix
    B2: Matrix
    A3: Matrix
    B3: Matrix
    kind: str = field(default="pair", init=False)

    @property
    def n(self):
        return self.B1.cols

    @property
    def backend(self):
        return self.A1.backend


@dataclass(frozen=True)
class LinearInstance:
    """``A1 - B1 X B1^*`` over Hermitian (or PSD) ``X`` with ``B4 X = A4``."""

    A1: Matrix
    B1: Matrix
    A4: Matrix
    B4: Matrix
    kind: str = "linear"

    @property
    def n(self):
        return self.B1.cols

    @property
    def backend(self):
        return self.A1.backend


@dataclass(frozen=True)
class PartitionedInstance:
    """Hermitian solutions of ``[A1, A2] X = [B1, B2]`` and their diagonal blocks."""

    A1: Matrix
    A2: Matrix
    B1: Matrix
    B2: Matrix
    kind: str = field(default="partitioned", init=False)

    @property
    def A(self):
        return hstack(self.A1, self.A2)

    @property
    def B(self):
        return hstack(self.B1, self.B2)

    @property
    def n(self):
        return self.A1.cols + self.A2.cols

    @property
    def backend(self):
        return self.A1.backend


@dataclass(frozen=True)
class FreeInstance:
    """``A - B X B^*`` over all Hermitian ``X``."""

    A: Matrix
    B: Matrix
    kind: str = field(default="free", init=False)

    @property
    def n(self):
        return self.B.cols

    @property
    def backend(self):
        return self.A.backend


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

class _Eval:
    """Rank/inertia evaluation with a shared tolerance policy."""

    def __init__(self, pol):
        self.pol = pol or DEFAULT_POLICY

    def r(self, M):
        return rank(M, self.pol)

    def i(self, M):
        return inertia(M, self.pol)

    def ip(self, M):
        return self.i(M).i_plus

    def im(self, M):
        return self.i(M).i_minus

    def psd(self, M):
        return self.im(M) == 0

    def nsd(self, M):
        return self.ip(M) == 0

    def contains(self, big, small):
        """``R(small) ⊆ R(big)``."""
        return self.r(hstack(big, small)) == self.r(big)

    def range_equal(self, X, Y):
        rx, ry = self.r(X), self.r(Y)
        return rx == ry and self.r(hstack(X, Y)) == rx


def _require_hermitian(M, name, pol):
    if not M.is_square:
        raise DimensionMismatch(f"{name} must be square")
    if not M.is_hermitian(pol):
        raise NotHermitian(f"{name} must be Hermitian")


def _merge(blocks, overrides):
    if overrides:
        unknown = set(overrides) - set(blocks)
        if unknown:
            raise KeyError(f"unknown block names {sorted(unknown)}")
        blocks = {**blocks, **overrides}
    return blocks


def _summary(max_rank, min_rank, max_ip, min_ip, max_im, min_im):
    return ExtremalSummary(int(max_rank), int(min_rank), int(max_ip), int(min_ip),
                           int(max_im), int(min_im))


DECISION_IDS = (
    "exists-nonsingular", "all-nonsingular", "exists-zero", "all-zero",
    "exists-pd", "all-pd", "exists-nd", "all-nd",
    "exists-psd", "all-psd", "exists-nsd", "all-nsd",
    "rank-invariant", "ip-invariant", "im-invariant",
)


def summary_verdicts(s, m):
    """Verdicts implied by a summary ``s`` of an ``m x m`` objective."""
    return {
        "exists-nonsingular": (s.max_rank == m, f"max r = {s.max_rank} vs {m}"),
        "all-nonsingular": (s.min_rank == m, f"min r = {s.min_rank} vs {m}"),
        "exists-zero": (s.min_rank == 0, f"min r = {s.min_rank} vs 0"),
        "all-zero": (s.max_rank == 0, f"max r = {s.max_rank} vs 0"),
        "exists-pd": (s.max_ip == m, f"max i+ = {s.max_ip} vs {m}"),
        "all-pd": (s.min_ip == m, f"min i+ = {s.min_ip} vs {m}"),
        "exists-nd": (s.max_im == m, f"max i- = {s.max_im} vs {m}"),
        "all-nd": (s.min_im == m, f"min i- = {s.min_im} vs {m}"),
        "exists-psd": (s.min_im == 0, f"min i- = {s.min_im} vs 0"),
        "all-psd": (s.max_im == 0, f"max i- = {s.max_im} vs 0"),
        "exists-nsd": (s.min_ip == 0, f"min i+ = {s.min_ip} vs 0"),
        "all-nsd": (s.max_ip == 0, f"max i+ = {s.max_ip} vs 0"),
        "rank-invariant": (s.max_rank == s.min_rank,
                           f"max r = {s.max_rank} vs min r = {s.min_rank}"),
        "ip-invariant": (s.max_ip == s.min_ip, f"max i+ = {s.max_ip} vs min i+ = {s.min_ip}"),
        "im-invariant": (s.max_im == s.min_im, f"max i- = {s.max_im} vs min i- = {s.min_im}"),
    }


def _eq(label, left, right):
    return left == right, f"{label}: {left} = {right}"


def _all(*parts):
    return all(p[0] for p in parts), " and ".join(p[1] for p in parts)


def _any(*parts):
    return any(p[0] for p in parts), "(" + ") or (".join(p[1] for p in parts) + ")"


def _holds(label, value):
    return bool(value), f"{label}: {bool(value)}"


def build_report(summary, m, explicit=None, witness=None):
    """Decision report; verdicts from ``explicit`` are cross-checked against the summary."""
    explicit = explicit or {}
    base = summary_verdicts(summary, m)
    out = {}
    for key in DECISION_IDS:
        verdict, cond = base[key]
        exp = explicit.get(key)
        if exp is not None:
            ev, econd = exp
            if ev != verdict:
                raise InternalInconsistency(
                    f"decision {key}: explicit condition gives {ev} ({econd}) "
                    f"but the summary gives {verdict} ({cond})")
            out[key] = Decision(key, verdict, cond, econd)
        else:
            out[key] = Decision(key, verdict, cond)
    return DecisionReport(out, m, witness)


def _swap_pm(d):
    """Explicit conditions for ``-f`` from those of ``f`` (pd<->nd, psd<->nsd)."""
    swap = {"pd": "nd", "nd": "pd", "psd": "nsd", "nsd": "psd"}
    out = {}
    for k, v in d.items():
        head, _, tail = k.partition("-")
        out[f"{head}-{swap.get(tail, tail)}"] = v
    return out


# --------------------------------------------------------------------------
# unconstrained families
# --------------------------------------------------------------------------

def extremal_free(A, B, pol=None):
    """``A - B X B^*`` over all Hermitian ``X``."""
    ev = _Eval(pol)
    _require_hermitian(A, "A", ev.pol)
    if B.rows != A.rows:
        raise DimensionMismatch("B must have as many rows as A")
    rAB = ev.r(hstack(A, B))
    iM = ev.i(bordered(A, B))
    return _summary(rAB, 2 * rAB - iM.rank, iM.i_plus, rAB - iM.i_minus,
                    iM.i_minus, rAB - iM.i_plus)


def extremal_free_psd(A, B, sign=-1, pol=None):
    """``A + sign * B X B^*`` over ``X >= 0``; ``sign`` is ``+1`` or ``-1``."""
    ev = _Eval(pol)
    _require_hermitian(A, "A", ev.pol)
    if B.rows != A.rows:
        raise DimensionMismatch("B must have as many rows as A")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    rAB = ev.r(hstack(A, B))
    iA = ev.i(A)
    iM = ev.i(bordered(A, B))
    if sign == 1:
        return _summary(rAB, iA.i_plus + rAB - iM.i_plus, iM.i_plus, iA.i_plus,
                        iA.i_minus, rAB - iM.i_plus)
    return _summary(rAB, iA.i_minus + rAB - iM.i_minus, iA.i_plus, rAB - iM.i_minus,
                    iM.i_minus, iA.i_minus)


def bxc_blocks(A, B, C):
    Ch = C.H
    return {
        "M1": bordered(A, B),
        "M2": bordered(A, Ch),
        "N": hstack(A, B, Ch),
        "N1": assemble([[A, B, Ch], [B.H, 0, 0]]),
        "N2": assemble([[A, B, Ch], [C, 0, 0]]),
    }


def bxc_summary(A, B, C, pol=None, overrides=None):
    ev = _Eval(pol)
    b = _merge(bxc_blocks(A, B, C), overrides)
    iM1, iM2 = ev.i(b["M1"]), ev.i(b["M2"])
    rN, rN1, rN2 = ev.r(b["N"]), ev.r(b["N1"]), ev.r(b["N2"])
    s = (iM1.rank - 2 * rN1, iM2.rank - 2 * rN2,
         iM1.i_plus + iM2.i_minus - rN1 - rN2,
         iM1.i_minus + iM2.i_plus - rN1 - rN2)
    return _summary(
        min(rN, iM1.rank, iM2.rank),
        2 * rN + max(s),
        min(iM1.i_plus, iM2.i_plus),
        rN + max(iM1.i_plus - rN1, iM2.i_plus - rN2),
        min(iM1.i_minus, iM2.i_minus),
        rN + max(iM1.i_minus - rN1, iM2.i_minus - rN2),
    )


def bxc_special_summary(A, B, C, pol=None):
    """Specialized formula valid when ``R(C^*) ⊆ R(B)``."""
    ev = _Eval(pol)
    if not ev.contains(B, C.H):
        raise HypothesisViolated("range of C^* is not inside range of B")
    rAB = ev.r(hstack(A, B))
    iM2 = ev.i(bordered(A, C.H))
    rABC = ev.r(assemble([[A, B], [C, 0]]))
    return _summary(min(rAB, iM2.rank), 2 * rAB + iM2.rank - 2 * rABC,
                    iM2.i_plus, rAB + iM2.i_plus - rABC,
                    iM2.i_minus, rAB + iM2.i_minus - rABC)


def extremal_bxc(A, B, C, pol=None):
    """``A - B X C - (B X C)^*`` over all ``X``."""
    ev = _Eval(pol)
    _require_hermitian(A, "A", ev.pol)
    if B.rows != A.rows or C.cols != A.rows:
        raise DimensionMismatch("B must be m x p and C q x m for m x m A")
    s = bxc_summary(A, B, C, ev.pol)
    if ev.contains(B, C.H):
        s2 = bxc_special_summary(A, B, C, ev.pol)
        if s2 != s:
            raise InternalInconsistency(f"general and specialized formulas differ: {s} vs {s2}")
    return s


def two_var_blocks(A, B1, C1, B2, C2):
    C1h, C2h = C1.H, C2.H
    return {
        "N": assemble([[A, B2, C1h, C2h], [C1, 0, 0, 0]]),
        "N1": assemble([[A, B2, C1h, C2h], [B2.H, 0, 0, 0], [C1, 0, 0, 0]]),
        "N2": assemble([[A, B2, C1h, C2h], [C1, 0, 0, 0], [C2, 0, 0, 0]]),
        "M": assemble([[A, B1], [C1, 0]]),
        "M1": assemble([[A, B2, C1h], [B2.H, 0, 0], [C1, 0, 0]]),
        "M2": assemble([[A, C1h, C2h], [C1, 0, 0], [C2, 0, 0]]),
        "AB1": hstack(A, B1),
    }


def two_var_summary(A, B1, C1, B2, C2, pol=None, overrides=None):
    ev = _Eval(pol)
    b = _merge(two_var_blocks(A, B1, C1, B2, C2), overrides)
    rAB1 = ev.r(b["AB1"])
    rM, rN, rN1, rN2 = ev.r(b["M"]), ev.r(b["N"]), ev.r(b["N1"]), ev.r(b["N2"])
    iM1, iM2 = ev.i(b["M1"]), ev.i(b["M2"])
    s = (iM1.rank - 2 * rN1, iM2.rank - 2 * rN2,
         iM1.i_plus + iM2.i_minus - rN1 - rN2,
         iM1.i_minus + iM2.i_plus - rN1 - rN2)
    base = rAB1 - rM + rN
    return _summary(
        min(rAB1, rN, iM1.rank, iM2.rank),
        2 * rAB1 - 2 * rM + 2 * rN + max(s),
        min(iM1.i_plus, iM2.i_plus),
        base + max(iM1.i_plus - rN1, iM2.i_plus - rN2),
        min(iM1.i_minus, iM2.i_minus),
        base + max(iM1.i_minus - rN1, iM2.i_minus - rN2),
    )


def extremal_two_var(A, B1, C1, B2, C2, pol=None):
    """``A - B1 X1 C1 - (B1 X1 C1)^* - B2 X2 C2 - (B2 X2 C2)^*`` over all ``X1, X2``.

    Requires ``R(B2)``, ``R(C1^*)`` and ``R(C2^*)`` inside ``R(B1)``.
    """
    ev = _Eval(pol)
    _require_hermitian(A, "A", ev.pol)
    m = A.rows
    if any(M.rows != m for M in (B1, B2)) or any(M.cols != m for M in (C1, C2)):
        raise DimensionMismatch("factors are not conformant with A")
    for name, M in (("B2", B2), ("C1^*", C1.H), ("C2^*", C2.H)):
        if not ev.contains(B1, M):
            raise HypothesisViolated(f"range of {name} is not inside range of B1")
    return two_var_summary(A, B1, C1, B2, C2, ev.pol)


# --------------------------------------------------------------------------
# constraints from a pair of congruence equations
# --------------------------------------------------------------------------

def _check_pair_instance(inst, pol):
    n = inst.B1.cols
    for name in ("B2", "B3"):
        if getattr(inst, name).cols != n:
            raise DimensionMismatch(f"{name} must have {n} columns")
    for a, b in (("A1", "B1"), ("A2", "B2"), ("A3", "B3")):
        A, B = getattr(inst, a), getattr(inst, b)
        if A.shape != (B.rows, B.rows):
            raise DimensionMismatch(f"{a} must be {B.rows} x {B.rows}")
        _require_hermitian(A, a, pol)


def _require_pair_consistent(B2, A2, B3, A3, pol, names=("second", "third")):
    check_congruence_consistent(B2, A2, f"{names[0]} equation", pol)
    check_congruence_consistent(B3, A3, f"{names[1]} equation", pol)
    lhs, rhs = pair_congruence_condition(B2, A2, B3, A3, pol)
    if lhs != rhs:
        raise PremiseViolated(f"{names[0]} and {names[1]} equations have no common "
                              f"Hermitian solution ({lhs} != {rhs})")


def pair_blocks(inst):
    A1, B1, A2, B2, A3, B3 = inst.A1, inst.B1, inst.A2, inst.B2, inst.A3, inst.B3
    return {
        "AB1": hstack(A1, B1),
        "B": vstack(B2, B3),
        "B2": B2,
        "B3": B3,
        "P1": assemble([[A1, B1, 0, 0], [B1.H, 0, B2.H, B3.H]]),
        "P2": assemble([[A1, 0, B1], [0, -A2, B2], [B1.H, B2.H, 0]]),
        "P3": assemble([[A1, 0, B1], [0, -A3, B3], [B1.H, B3.H, 0]]),
        "Q1": assemble([[A1, 0, 0, B1, B1], [0, -A2, 0, B2, 0], [0, 0, -A3, 0, B3],
                        [B1.H, B2.H, B3.H, 0, 0]]),
        "Q2": assemble([[A1, 0, B1, B1], [0, -A2, B2, 0], [B1.H, B2.H, 0, 0],
                        [0, 0, 0, B3]]),
        "Q3": assemble([[A1, 0, B1, B1], [0, -A3, B3, 0], [B1.H, B3.H, 0, 0],
                        [0, 0, 0, B2]]),
    }


def pair_constrained_summary(inst, pol=None, overrides=None):
    ev = _Eval(pol)
    b = _merge(pair_blocks(inst), overrides)
    rAB1, rP1, rQ1 = ev.r(b["AB1"]), ev.r(b["P1"]), ev.r(b["Q1"])
    rQ2, rQ3 = ev.r(b["Q2"]), ev.r(b["Q3"])
    rB, rB2, rB3 = ev.r(b["B"]), ev.r(b["B2"]), ev.r(b["B3"])
    iP2, iP3 = ev.i(b["P2"]), ev.i(b["P3"])
    u1 = iP2.i_plus + iP3.i_minus - rQ2 - rQ3
    u2 = iP2.i_minus + iP3.i_plus - rQ2 - rQ3
    base = rAB1 - rP1 + rQ1
    return _summary(
        min(rAB1, rQ1 - rB - rB2 - rB3, iP2.rank - 2 * rB2, iP3.rank - 2 * rB3),
        2 * base + max(iP2.rank - 2 * rQ2, iP3.rank - 2 * rQ3, u1, u2),
        min(iP2.i_plus - rB2, iP3.i_plus - rB3),
        base + max(iP2.i_plus - rQ2, iP3.i_plus - rQ3),
        min(iP2.i_minus - rB2, iP3.i_minus - rB3),
        base + max(iP2.i_minus - rQ2, iP3.i_minus - rQ3),
    )


def extremal_pair_constrained(inst, pol=None):
    """``A1 - B1 X B1^*`` over common Hermitian solutions of the second and third equations."""
    ev = _Eval(pol)
    _check_pair_instance(inst, ev.pol)
    _require_pair_consistent(inst.B2, inst.A2, inst.B3, inst.A3, ev.pol)
    s = pair_constrained_summary(inst, ev.pol)
    return s, build_report(s, inst.A1.rows)


def _stack_K(B1, B2, B3):
    return assemble([[B1, B1], [B2, 0], [0, B3]])


def extremal_pair_allpairs(inst, pol=None):
    """Same objective when every pair of the three equations is jointly solvable.

    The formula only involves ranks of the coefficient matrices and of
    one bordered block; it is checked against the general formula.
    """
    ev = _Eval(pol)
    _check_pair_instance(inst, ev.pol)
    A1, B1, A2, B2, A3, B3 = inst.A1, inst.B1, inst.A2, inst.B2, inst.A3, inst.B3
    _require_pair_consistent(B1, A1, B2, A2, ev.pol, ("first", "second"))
    _require_pair_consistent(B1, A1, B3, A3, ev.pol, ("first", "third"))
    _require_pair_consistent(B2, A2, B3, A3, ev.pol)
    b = pair_blocks(inst)
    rQ1 = ev.r(b["Q1"])
    rB, rB2, rB3 = ev.r(b["B"]), ev.r(B2), ev.r(B3)
    r12, r13 = ev.r(vstack(B1, B2)), ev.r(vstack(B1, B3))
    r123 = ev.r(vstack(B1, B2, B3))
    rK = ev.r(_stack_K(B1, B2, B3))
    mx_i = min(r12 - rB2, r13 - rB3)
    mn_i = rQ1 - r123 - rK
    s = _summary(min(ev.r(B1), rQ1 - rB - rB2 - rB3, 2 * r12 - 2 * rB2, 2 * r13 - 2 * rB3),
                 2 * rQ1 - 2 * r123 - 2 * rK, mx_i, mn_i, mx_i, mn_i)
    general = pair_constrained_summary(inst, ev.pol)
    if s != general:
        raise InternalInconsistency(f"pairwise formula {s} differs from general {general}")
    return s, build_report(s, A1.rows)


def _triple_linear_solution(inst, pol):
    pairs = [(inst.B1, inst.B1.H, inst.A1), (inst.B2, inst.B2.H, inst.A2),
             (inst.B3, inst.B3.H, inst.A3)]
    n = inst.n
    x = _linear_system_solution(pairs, n, n, pol)
    return None if x is None else hermitian_part(x)


def triple_common_solvable(inst, pol=None):
    """Common Hermitian solution of all three congruence equations.

    Premise: each pair is jointly solvable.  The verdict comes from one
    block-rank equality; the witness (or infeasibility) from exact
    elimination on the stacked linear system, and the two must agree.
    """
    ev = _Eval(pol)
    _check_pair_instance(inst, ev.pol)
    A1, B1, A2, B2, A3, B3 = inst.A1, inst.B1, inst.A2, inst.B2, inst.A3, inst.B3
    _require_pair_consistent(B1, A1, B2, A2, ev.pol, ("first", "second"))
    _require_pair_consistent(B1, A1, B3, A3, ev.pol, ("first", "third"))
    _require_pair_consistent(B2, A2, B3, A3, ev.pol)
    lhs = ev.r(pair_blocks(inst)["Q1"])
    rhs = ev.r(_stack_K(B1, B2, B3)) + ev.r(vstack(B1, B2, B3))
    verdict = lhs == rhs
    witness = _triple_linear_solution(inst, ev.pol)
    if verdict != (witness is not None):
        raise InternalInconsistency(
            f"block-rank test says {verdict} but elimination says {witness is not None}")
    d = Decision("triple-common-solution", verdict, f"bordered rank {lhs} vs required {rhs}",
                 "stacked linear system " + ("consistent" if witness is not None
                                             else "inconsistent"))
    return DecisionReport({d.id: d}, inst.n, witness)


def lsq_common_condition(inst, pol=None):
    """Common least-squares Hermitian solution of the three equations.

    Applies the pairwise and triple tests to the normal equations
    ``Bi^* Bi X Bi^* Bi = Bi^* Ai Bi``, which are always consistent.
    """
    ev = _Eval(pol)
    _check_pair_instance(inst, ev.pol)
    Bs = (inst.B1, inst.B2, inst.B3)
    As = (inst.A1, inst.A2, inst.A3)
    Nt = tuple(B.H @ A @ B for A, B in zip(As, Bs))
    Bt = tuple(B.H @ B for B in Bs)
    decisions = {}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        lhs, _ = pair_congruence_condition(Bt[i], Nt[i], Bt[j], Nt[j], ev.pol)
        rhs = 2 * ev.r(vstack(Bs[i], Bs[j]))
        key = f"pair-{i + 1}{j + 1}"
        decisions[key] = Decision(key, lhs == rhs, f"bordered rank {lhs} vs required {rhs}")
    normal = PairInstance(Nt[0], Bt[0], Nt[1], Bt[1], Nt[2], Bt[2])
    lhs = ev.r(pair_blocks(normal)["Q1"])
    rhs = ev.r(_stack_K(*Bs)) + ev.r(vstack(*Bs))
    decisions["triple"] = Decision("triple", lhs == rhs, f"bordered rank {lhs} vs required {rhs}")
    verdict = all(d.verdict for d in decisions.values())
    witness = _triple_linear_solution(normal, ev.pol)
    if verdict != (witness is not None):
        raise InternalInconsistency(
            f"rank tests say {verdict} but the normal equations say {witness is not None}")
    decisions["common-least-squares"] = Decision(
        "common-least-squares", verdict, " and ".join(d.condition for d in decisions.values()),
        "stacked normal equations " + ("consistent" if witness is not None else "inconsistent"))
    return DecisionReport(decisions, inst.n, witness)


def _pair_solution_blocks(B2, A2, B3, A3):
    return {
        "W": assemble([[A2, 0, B2], [0, A3, B3]]),
        "W2": assemble([[A2, B2], [0, B3]]),
        "W3": assemble([[0, B2], [A3, B3]]),
        "B": vstack(B2, B3),
    }


def solution_extremal_pair(B2, A2, B3, A3, pol=None):
    """Rank and inertia range of the common Hermitian solutions themselves."""
    ev = _Eval(pol)
    n = B2.cols
    if B3.cols != n:
        raise DimensionMismatch("B2 and B3 must have the same number of columns")
    _require_pair_consistent(B2, A2, B3, A3, ev.pol)
    b = _pair_solution_blocks(B2, A2, B3, A3)
    rW, rW2, rW3 = ev.r(b["W"]), ev.r(b["W2"]), ev.r(b["W3"])
    rB, rB2, rB3 = ev.r(b["B"]), ev.r(B2), ev.r(B3)
    iA2, iA3 = ev.i(A2), ev.i(A3)
    t = (iA2.rank - 2 * rW2, iA3.rank - 2 * rW3,
         iA2.i_plus + iA3.i_minus - rW2 - rW3,
         iA2.i_minus + iA3.i_plus - rW2 - rW3)
    s = _summary(
        min(n, 2 * n + rW - rB - rB2 - rB3, 2 * n + iA2.rank - 2 * rB2,
            2 * n + iA3.rank - 2 * rB3),
        2 * rW + max(t),
        min(n + iA2.i_plus - rB2, n + iA3.i_plus - rB3),
        rW + max(iA2.i_plus - rW2, iA3.i_plus - rW3),
        min(n + iA2.i_minus - rB2, n + iA3.i_minus - rB3),
        rW + max(iA2.i_minus - rW2, iA3.i_minus - rW3),
    )
    psd2, psd3 = _holds("A2 >= 0", ev.psd(A2)), _holds("A3 >= 0", ev.psd(A3))
    nsd2, nsd3 = _holds("A2 <= 0", ev.nsd(A2)), _holds("A3 <= 0", ev.nsd(A3))
    rA2, rA3 = iA2.rank, iA3.rank
    same2, same3 = _eq("r(A2) = r(B2)", rA2, rB2), _eq("r(A3) = r(B3)", rA3, rB3)
    full2 = _holds(f"r(A2) = r(B2) = {n}", rA2 == rB2 == n)
    full3 = _holds(f"r(A3) = r(B3) = {n}", rA3 == rB3 == n)
    incl = _all(
        _holds("R[A2; 0] in R(W3)", ev.contains(b["W3"], vstack(A2, Matrix.zeros(
            A3.rows, A2.cols, A2.backend)))),
        _holds("R[0; A3] in R(W2)", ev.contains(b["W2"], vstack(Matrix.zeros(
            A2.rows, A3.cols, A3.backend), A3))),
    )
    fullB = _any(_eq("r(B2)", rB2, n), _eq("r(B3)", rB3, n))
    explicit = {
        "exists-pd": _all(psd2, psd3, same2, same3),
        "all-pd": _all(psd2, psd3, _any(full2, full3)),
        "exists-nd": _all(nsd2, nsd3, same2, same3),
        "all-nd": _all(nsd2, nsd3, _any(full2, full3)),
        "exists-psd": _all(psd2, psd3, incl),
        "all-psd": _all(psd2, psd3, fullB),
        "exists-nsd": _all(nsd2, nsd3, incl),
        "all-nsd": _all(nsd2, nsd3, fullB),
    }
    return s, build_report(s, n, explicit)


# --------------------------------------------------------------------------
# constraint B4 X = A4
# --------------------------------------------------------------------------

def _check_linear_instance(inst, pol):
    A1, B1, A4, B4 = inst.A1, inst.B1, inst.A4, inst.B4
    n = B1.cols
    if A1.shape != (B1.rows, B1.rows):
        raise DimensionMismatch("A1 must be square with as many rows as B1")
    _require_hermitian(A1, "A1", pol)
    if B4.cols != n or A4.shape != B4.shape:
        raise DimensionMismatch(f"A4 and B4 must both be m x {n}")


def linear_blocks(inst):
    A1, B1, A4, B4 = inst.A1, inst.B1, inst.A4, inst.B4
    return {
        "M": assemble([[A1, B1], [A4 @ B1.H, B4]]),
        "N": assemble([[A1, B1, 0], [B1.H, 0, B4.H], [0, B4, -(A4 @ B4.H)]]),
        "M2": assemble([[A1, B1 @ A4.H], [A4 @ B1.H, A4 @ B4.H]]),
        "B4": B4,
        "A4": A4,
        "B14": vstack(B1, B4),
    }


def linear_constrained_summary(inst, pol=None, overrides=None):
    ev = _Eval(pol)
    b = _merge(linear_blocks(inst), overrides)
    rM, rB4 = ev.r(b["M"]), ev.r(b["B4"])
    iN = ev.i(b["N"])
    return _summary(rM - rB4, 2 * rM - iN.rank, iN.i_plus - rB4, rM - iN.i_minus,
                    iN.i_minus - rB4, rM - iN.i_plus)


def extremal_linear_constrained(inst, pol=None):
    """``A1 - B1 X B1^*`` over Hermitian solutions of ``B4 X = A4``."""
    ev = _Eval(pol)
    _check_linear_instance(inst, ev.pol)
    try:
        linear_hermitian_solve(inst.B4, inst.A4, ev.pol)
    except Unsolvable as exc:
        raise PremiseViolated(f"B4 X = A4 has no Hermitian solution ({exc})") from exc
    s = linear_constrained_summary(inst, ev.pol)
    b = linear_blocks(inst)
    m1 = inst.A1.rows
    rM, rB4 = ev.r(b["M"]), ev.r(b["B4"])
    iN = ev.i(b["N"])
    explicit = {
        "exists-nonsingular": _eq("r(M) = r(B4) + m1", rM, rB4 + m1),
        "all-nonsingular": _eq("2r(M) = r(N) + m1", 2 * rM, iN.rank + m1),
        "exists-zero": _eq("r(M) = r[B1; B4]", rM, ev.r(b["B14"])),
        "all-zero": _eq("r(M) = r(B4)", rM, rB4),
        "exists-pd": _eq("i+(N) = r(B4) + m1", iN.i_plus, rB4 + m1),
        "exists-nd": _eq("i-(N) = r(B4) + m1", iN.i_minus, rB4 + m1),
        "all-pd": _eq("r(M) = i-(N) + m1", rM, iN.i_minus + m1),
        "all-nd": _eq("r(M) = i+(N) + m1", rM, iN.i_plus + m1),
        "exists-psd": _eq("r(M) = i+(N)", rM, iN.i_plus),
        "exists-nsd": _eq("r(M) = i-(N)", rM, iN.i_minus),
        "all-psd": _eq("i-(N) = r(B4)", iN.i_minus, rB4),
        "all-nsd": _eq("i+(N) = r(B4)", iN.i_plus, rB4),
    }
    return s, build_report(s, m1, explicit)


def linear_psd_summary(inst, pol=None, overrides=None):
    ev = _Eval(pol)
    b = _merge(linear_blocks(inst), overrides)
    rM1, rB4, rA4 = ev.r(b["M"]), ev.r(b["B4"]), ev.r(b["A4"])
    iN, iM2 = ev.i(b["N"]), ev.i(b["M2"])
    return _summary(rM1 - rB4, rM1 + iM2.i_minus - iN.i_minus, iM2.i_plus - rA4,
                    rM1 - iN.i_minus, iN.i_minus - rB4, iM2.i_minus)


def extremal_linear_psd_constrained(inst, pol=None):
    """``A1 - B1 X B1^*`` over positive semidefinite solutions of ``B4 X = A4``."""
    ev = _Eval(pol)
    _check_linear_instance(inst, ev.pol)
    try:
        linear_psd_solve(inst.B4, inst.A4, ev.pol)
    except Unsolvable as exc:
        raise PremiseViolated(f"B4 X = A4 has no PSD solution ({exc})") from exc
    s = linear_psd_summary(inst, ev.pol)
    b = linear_blocks(inst)
    m1 = inst.A1.rows
    rM1, rB4, rA4 = ev.r(b["M"]), ev.r(b["B4"]), ev.r(b["A4"])
    iN, iM2 = ev.i(b["N"]), ev.i(b["M2"])
    explicit = {
        "exists-nonsingular": _eq("r(M1) = r(B4) + m1", rM1, rB4 + m1),
        "all-nonsingular": _eq("r(M1) + i-(M2) = i-(N) + m1", rM1 + iM2.i_minus,
                               iN.i_minus + m1),
        "exists-zero": _eq("r(M1) + i-(M2) = i-(N)", rM1 + iM2.i_minus, iN.i_minus),
        "all-zero": _eq("r(M1) = r(B4)", rM1, rB4),
        "exists-pd": _eq("i+(M2) = r(A4) + m1", iM2.i_plus, rA4 + m1),
        "all-pd": _eq("r(M1) = i-(N) + m1", rM1, iN.i_minus + m1),
        "exists-nd": _eq("i-(N) = r(B4) + m1", iN.i_minus, rB4 + m1),
        "all-nd": _eq("i-(M2) = m1", iM2.i_minus, m1),
        "exists-psd": _holds("M2 >= 0", iM2.i_minus == 0),
        "all-psd": _eq("i-(N) = r(B4)", iN.i_minus, rB4),
        "exists-nsd": _eq("r(M1) = i-(N)", rM1, iN.i_minus),
        "all-nsd": _eq("i+(M2) = r(A4)", iM2.i_plus, rA4),
    }
    return s, build_report(s, m1, explicit)


def solution_shift_extremal(A, B, P, psd=False, pol=None):
    """Range of rank and inertia of ``X - P`` over Hermitian (or PSD) solutions of ``A X = B``."""
    ev = _Eval(pol)
    n = A.cols
    if B.shape != A.shape or P.shape != (n, n):
        raise DimensionMismatch("A, B must be m x n and P n x n")
    _require_hermitian(P, "P", ev.pol)
    try:
        (linear_psd_solve if psd else linear_hermitian_solve)(A, B, ev.pol)
    except Unsolvable as exc:
        raise PremiseViolated(f"A X = B has no admissible solution ({exc})") from exc
    if psd and not ev.psd(P):
        raise PremiseViolated("P must be positive semidefinite")
    R = B - A @ P
    H = B @ A.H - A @ P @ A.H
    rR, rA = ev.r(R), ev.r(A)
    iH = ev.i(H)
    Hpsd, Hnsd = _holds("H >= 0", iH.i_minus == 0), _holds("H <= 0", iH.i_plus == 0)
    rangeRA = _holds("R(B - AP) = R(A)", ev.range_equal(R, A))
    rangeHA = _holds("R(H) = R(A)", ev.range_equal(H, A))
    rangeRH = _holds("R(B - AP) = R(H)", ev.range_equal(R, H))
    fullR = _eq("r(B - AP) = n", rR, n)
    if not psd:
        s = _summary(rR - rA + n, 2 * rR - iH.rank, iH.i_plus - rA + n, rR - iH.i_minus,
                     iH.i_minus - rA + n, rR - iH.i_plus)
        fullA = _eq("r(A) = n", rA, n)
        explicit = {
            "exists-nonsingular": rangeRA,
            "all-nonsingular": _eq("2r(B - AP) = r(H) + n", 2 * rR, iH.rank + n),
            "exists-pd": _all(rangeHA, Hpsd),
            "exists-nd": _all(rangeHA, Hnsd),
            "all-pd": _all(fullR, Hpsd),
            "all-nd": _all(fullR, Hnsd),
            "exists-psd": _all(rangeRH, Hpsd),
            "exists-nsd": _all(rangeRH, Hnsd),
            "all-psd": _all(Hpsd, fullA),
            "all-nsd": _all(Hnsd, fullA),
        }
        return s, build_report(s, n, explicit)
    iM = ev.i(assemble([[B @ A.H, B], [B.H, P]]))
    rB = ev.r(B)
    s = _summary(rR - rA + n, iM.i_minus + rR - iH.i_plus, iH.i_plus - rA + n, iM.i_minus,
                 iM.i_plus - rB, rR - iH.i_plus)
    explicit = {
        "exists-nonsingular": rangeRA,
        "all-nonsingular": _eq("i-(M) + r(B - AP) = i+(H) + n", iM.i_minus + rR,
                               iH.i_plus + n),
        "exists-pd": _all(rangeHA, Hpsd),
        "all-pd": _eq("i-(M) = n", iM.i_minus, n),
        "exists-nd": _eq("i+(M) = r(B) + n", iM.i_plus, rB + n),
        "all-nd": _all(fullR, Hnsd),
        "exists-psd": _all(rangeRH, Hpsd),
        "all-psd": _eq("i+(M) = r(B)", iM.i_plus, rB),
        "exists-nsd": _holds("M >= 0", iM.i_minus == 0),
        "all-nsd": _eq("i+(H) = r(A) - n", iH.i_plus, rA - n),
    }
    return s, build_report(s, n, explicit)


def solution_extremal_linear(A, B, pol=None):
    """Range of rank and inertia of the Hermitian solutions of ``A X = B``."""
    ev = _Eval(pol)
    n = A.cols
    if B.shape != A.shape:
        raise DimensionMismatch("A and B must have the same shape")
    try:
        linear_hermitian_solve(A, B, ev.pol)
    except Unsolvable as exc:
        raise PremiseViolated(f"A X = B has no Hermitian solution ({exc})") from exc
    rA, rB = ev.r(A), ev.r(B)
    iC = ev.i(A @ B.H)
    s = _summary(n + rB - rA, 2 * rB - iC.rank, n + iC.i_plus - rA, rB - iC.i_minus,
                 n + iC.i_minus - rA, rB - iC.i_plus)
    inv = _eq("r(AB^*) = r(A) + r(B) - n", iC.rank, rA + rB - n)
    explicit = {
        "exists-nonsingular": _eq("r(A) = r(B)", rA, rB),
        "exists-pd": _all(_holds("AB^* >= 0", iC.i_minus == 0), _eq("r(AB^*) = r(A)",
                                                                     iC.rank, rA)),
        "exists-nd": _all(_holds("AB^* <= 0", iC.i_plus == 0), _eq("r(AB^*) = r(A)",
                                                                    iC.rank, rA)),
        "exists-psd": _all(_holds("AB^* >= 0", iC.i_minus == 0), _eq("r(AB^*) = r(B)",
                                                                      iC.rank, rB)),
        "exists-nsd": _all(_holds("AB^* <= 0", iC.i_plus == 0), _eq("r(AB^*) = r(B)",
                                                                     iC.rank, rB)),
        "rank-invariant": inv,
        "ip-invariant": inv,
        "im-invariant": inv,
    }
    return s, build_report(s, n, explicit)


def partitioned_blocks(inst):
    A, B = inst.A, inst.B
    ABh = A @ B.H
    return {
        "K1": bordered(ABh, inst.A2),
        "K3": bordered(ABh, inst.A1),
        "A2B1": hstack(inst.A2, inst.B1),
        "A1B2": hstack(inst.A1, inst.B2),
        "A": A,
    }


def _sub_summary(rAB, iK, rA, nk):
    return _summary(nk + rAB - rA, 2 * rAB - iK.rank, nk + iK.i_plus - rA,
                    rAB - iK.i_minus, nk + iK.i_minus - rA, rAB - iK.i_plus)


def partitioned_summaries(inst, pol=None, overrides=None):
    ev = _Eval(pol)
    b = _merge(partitioned_blocks(inst), overrides)
    rA = ev.r(b["A"])
    s1 = _sub_summary(ev.r(b["A2B1"]), ev.i(b["K1"]), rA, inst.A1.cols)
    s3 = _sub_summary(ev.r(b["A1B2"]), ev.i(b["K3"]), rA, inst.A2.cols)
    return s1, s3


def _check_partitioned(inst, pol):
    A1, A2, B1, B2 = inst.A1, inst.A2, inst.B1, inst.B2
    if B1.shape != A1.shape or B2.shape != A2.shape or A1.rows != A2.rows:
        raise DimensionMismatch("need A1, B1 m x n1 and A2, B2 m x n2")
    try:
        linear_hermitian_solve(inst.A, inst.B, pol)
    except Unsolvable as exc:
        raise PremiseViolated(f"[A1, A2] X = [B1, B2] has no Hermitian solution ({exc})") \
            from exc


def submatrix_extremal(inst, pol=None):
    """Extremes for the two diagonal blocks of Hermitian solutions of ``[A1, A2] X = [B1, B2]``.

    Returns ``(summary of X1, summary of X3, decisions for X1, decisions for X3)``.
    """
    ev = _Eval(pol)
    _check_partitioned(inst, ev.pol)
    s1, s3 = partitioned_summaries(inst, ev.pol)
    b = partitioned_blocks(inst)
    n1 = inst.A1.cols
    rA, rAB = ev.r(b["A"]), ev.r(b["A2B1"])
    iK = ev.i(b["K1"])
    inv = _eq("r(K1) = r[A2, B1] + r(A) - n1", iK.rank, rAB + rA - n1)
    explicit = {
        "exists-nonsingular": _eq("r[A2, B1] = r(A)", rAB, rA),
        "all-nonsingular": _eq("r(K1) = 2r[A2, B1] - n1", iK.rank, 2 * rAB - n1),
        "exists-pd": _eq("i+(K1) = r(A)", iK.i_plus, rA),
        "exists-nd": _eq("i-(K1) = r(A)", iK.i_minus, rA),
        "all-pd": _eq("i-(K1) = r[A2, B1] - n1", iK.i_minus, rAB - n1),
        "all-nd": _eq("i+(K1) = r[A2, B1] - n1", iK.i_plus, rAB - n1),
        "exists-psd": _eq("i+(K1) = r[A2, B1]", iK.i_plus, rAB),
        "exists-nsd": _eq("i-(K1) = r[A2, B1]", iK.i_minus, rAB),
        "all-psd": _eq("i-(K1) = r(A) - n1", iK.i_minus, rA - n1),
        "all-nsd": _eq("i+(K1) = r(A) - n1", iK.i_plus, rA - n1),
        "exists-zero": _holds("R(B1) in R(A2)", ev.contains(inst.A2, inst.B1)),
        "all-zero": _eq("r[A2, B1] = r(A) - n1", rAB, rA - n1),
        "rank-invariant": inv,
        "ip-invariant": inv,
        "im-invariant": inv,
    }
    return s1, s3, build_report(s1, n1, explicit), build_report(s3, inst.A2.cols)


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

def analyze(inst, pol=None):
    """Summary and decisions for any instance kind.

    Returns a list of ``(objective name, summary, report)`` triples.
    """
    if isinstance(inst, PairInstance):
        s, d = extremal_pair_constrained(inst, pol)
        return [("A1 - B1 X B1^*", s, d)]
    if isinstance(inst, LinearInstance):
        op = extremal_linear_psd_constrained if inst.kind == "linear_psd" \
            else extremal_linear_constrained
        s, d = op(inst, pol)
        return [("A1 - B1 X B1^*", s, d)]
    if isinstance(inst, PartitionedInstance):
        s1, s3, d1, d3 = submatrix_extremal(inst, pol)
        return [("X1", s1, d1), ("X3", s3, d3)]
    if isinstance(inst, FreeInstance):
        s = extremal_free(inst.A, inst.B, pol)
        return [("A - B X B^*", s, build_report(s, inst.A.rows))]
    raise TypeError(f"unsupported instance {type(inst).__name__}")
