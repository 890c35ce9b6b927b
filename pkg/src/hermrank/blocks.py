"""Block-matrix assembly and the rank/inertia expansion identities.

Every identity is evaluated on both sides with the numeric kernel; nothing
here is assumed.  The suites exist as a cross-check surface for block
assembly, where a sign or an adjoint in the wrong place is the usual bug.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, HypothesisNotChecked
from .numeric import (
    DEFAULT_POLICY,
    Matrix,
    assemble_col,
    assemble_row,
    inertia,
    is_nsd,
    is_psd,
    pinv,
    projectors,
    rank,
)


def _is_zero_marker(b):
    return b is None or (not isinstance(b, Matrix) and b == 0)


def assemble(grid, backend=None):
    """Dense concatenation of a 2-D grid of blocks.

    ``0`` or ``None`` marks a zero block whose size is inferred from the
    other blocks in its block row and block column.  A block row or column
    made only of zero markers has size 0.
    """
    grid = [list(row) for row in grid]
    if not grid or not grid[0]:
        raise DimensionMismatch("empty block grid")
    ncols = len(grid[0])
    if any(len(row) != ncols for row in grid):
        raise DimensionMismatch("ragged block grid")
    row_h = [None] * len(grid)
    col_w = [None] * ncols
    for i, row in enumerate(grid):
        for j, b in enumerate(row):
            if _is_zero_marker(b):
                continue
            if backend is None:
                backend = b.backend
            if row_h[i] is None:
                row_h[i] = b.rows
            elif row_h[i] != b.rows:
                raise DimensionMismatch(f"block row {i} has inconsistent heights")
            if col_w[j] is None:
                col_w[j] = b.cols
            elif col_w[j] != b.cols:
                raise DimensionMismatch(f"block column {j} has inconsistent widths")
    if backend is None:
        raise DimensionMismatch("block grid contains only zero markers")
    row_h = [h or 0 for h in row_h]
    col_w = [w or 0 for w in col_w]
    rows = []
    for i, row in enumerate(grid):
        filled = [Matrix.zeros(row_h[i], col_w[j], backend) if _is_zero_marker(b) else b
                  for j, b in enumerate(row)]
        rows.append(assemble_row(filled))
    return assemble_col(rows)


def hstack(*blocks):
    return assemble([list(blocks)])


def vstack(*blocks):
    return assemble([[b] for b in blocks])


def bordered(A, B):
    """``[[A, B], [B^*, 0]]``."""
    return assemble([[A, B], [B.H, 0]])


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    left: tuple
    right: tuple

    @property
    def equal(self):
        return self.left == self.right


def _report(name, left, right):
    left = tuple(left) if isinstance(left, (tuple, list)) else (left,)
    right = tuple(right) if isinstance(right, (tuple, list)) else (right,)
    return IdentityReport(name, left, right)


def rank_expansion_suite(A, B, C, P, Q, pol=None):
    """Both sides of the six rank expansions of ``A``-bordered blocks.

    Shapes: ``A`` m x n, ``B`` m x p, ``C`` q x n, ``P`` q x s, ``Q`` t x p.
    """
    pol = pol or DEFAULT_POLICY
    m, n = A.shape
    if B.rows != m or C.cols != n or P.rows != C.rows or Q.cols != B.cols:
        raise DimensionMismatch("blocks are not conformant")
    r = lambda M: rank(M, pol)  # noqa: E731
    EA, FA = projectors(A, pol)
    EB, _ = projectors(B, pol)
    _, FC = projectors(C, pol)
    EP, _ = projectors(P, pol)
    _, FQ = projectors(Q, pol)
    AB = hstack(A, B)
    AC = vstack(A, C)
    out = [
        _report("row-block", (r(AB), r(AB)), (r(A) + r(EA @ B), r(B) + r(EB @ A))),
        _report("column-block", (r(AC), r(AC)), (r(A) + r(C @ FA), r(C) + r(A @ FC))),
        _report("bordered", r(assemble([[A, B], [C, 0]])),
                r(B) + r(C) + r(EB @ A @ FC)),
        _report("bordered-right-P",
                r(assemble([[A, B, 0], [C, 0, P]])),
                r(P) + r(assemble([[A, B], [EP @ C, 0]]))),
        _report("bordered-below-Q",
                r(assemble([[A, B], [C, 0], [0, Q]])),
                r(Q) + r(assemble([[A, B @ FQ], [C, 0]]))),
        _report("bordered-P-Q",
                r(assemble([[A, B, 0], [C, 0, P], [0, Q, 0]])),
                r(P) + r(Q) + r(assemble([[A, B @ FQ], [EP @ C, 0]]))),
    ]
    return out


def _pm(inertia_value):
    return (inertia_value.i_plus, inertia_value.i_minus)


def _add_pm(*terms):
    return tuple(sum(t[k] for t in terms) for k in range(2))


def _scalar_pm(x):
    return (x, x)


def inertia_expansion_suite(A, B, D, P, pol=None, strict=False):
    """Both sides of the inertia expansions of ``U = [[A,B],[B*,0]]`` and
    ``V = [[A,B],[B*,D]]``, plus the ``F_P``-bordered forms.

    ``A`` m x m Hermitian, ``B`` m x n, ``D`` n x n Hermitian, ``P`` k x n.
    Special cases whose hypothesis fails are skipped, or raise
    :class:`HypothesisNotChecked` when ``strict`` is set.
    """
    pol = pol or DEFAULT_POLICY
    m = A.rows
    n = B.cols
    if B.rows != m or D.shape != (n, n) or P.cols != n:
        raise DimensionMismatch("blocks are not conformant")
    r = lambda M: rank(M, pol)  # noqa: E731
    ip = lambda M: _pm(inertia(M, pol))  # noqa: E731
    EA, _ = projectors(A, pol)
    EB, _ = projectors(B, pol)
    _, FP = projectors(P, pol)
    U = bordered(A, B)
    V = assemble([[A, B], [B.H, D]])
    schur = D - B.H @ pinv(A, pol) @ B
    rB = r(B)
    rAB = r(hstack(A, B))
    out = [
        _report("bordered-inertia", ip(U), _add_pm(_scalar_pm(rB), ip(EB @ A @ EB))),
        _report("general-inertia", ip(V),
                _add_pm(ip(A), ip(assemble([[Matrix.zeros(m, m, A.backend), EA @ B],
                                            [B.H @ EA, schur]])))),
    ]

    def skipped(name):
        if strict:
            raise HypothesisNotChecked(f"hypothesis of {name} does not hold")

    if is_psd(A, pol):
        out.append(_report("psd-bordered", (*ip(U), r(U)), (rAB, rB, rAB + rB)))
    else:
        skipped("psd-bordered")
    if is_nsd(A, pol):
        out.append(_report("nsd-bordered", (*ip(U), r(U)), (rB, rAB, rAB + rB)))
    else:
        skipped("nsd-bordered")
    if rAB == r(A):
        out.append(_report("range-schur", (*ip(V), r(V)),
                           (*_add_pm(ip(A), ip(schur)), r(A) + r(schur))))
    else:
        skipped("range-schur")
    if rAB == r(A) + rB and r(hstack(B.H, D)) == rB + r(D):
        out.append(_report("disjoint-ranges", (*ip(V), r(V)),
                           (*_add_pm(ip(A), ip(D), _scalar_pm(rB)),
                            r(A) + 2 * rB + r(D))))
    else:
        skipped("disjoint-ranges")
    big = assemble([[A, B, 0], [B.H, 0, P.H], [0, P, 0]])
    rP = r(P)
    small = bordered(A, B @ FP)
    big_pm = ip(big)
    out.append(_report("projector-bordered", (*ip(small), r(small)),
                       (big_pm[0] - rP, big_pm[1] - rP, r(big) - 2 * rP)))
    return out
