"""Solvability tests and general-solution parametrizations.

Each solver returns an :class:`AffineSolutionSet` (a particular solution
plus correction terms) or raises :class:`Unsolvable` naming the failed
condition.  Every set records the linear constraints it came from so that
samples can be checked for zero residual.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .blocks import assemble, hstack, vstack
from .errors import DimensionMismatch, InternalInconsistency, PremiseViolated, Unsolvable
from .numeric import (
    DEFAULT_POLICY,
    Matrix,
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

PLAIN = "plain"
ADJOINT_PAIR = "adjoint_pair"
HERMITIAN_SANDWICH = "hermitian_sandwich"
PSD_SANDWICH = "psd_sandwich"
COMPLEMENT = "complement"
KINDS = (PLAIN, ADJOINT_PAIR, HERMITIAN_SANDWICH, PSD_SANDWICH, COMPLEMENT)


@dataclass(frozen=True)
class CorrectionTerm:
    """One parametrized summand of a general solution.

    ========================  =====================================
    kind                      contribution for parameter ``V``/``U``
    ========================  =====================================
    ``plain``                 ``L V R``
    ``adjoint_pair``          ``L V R + (L V R)^*``
    ``hermitian_sandwich``    ``L U L^*``, ``U`` Hermitian
    ``psd_sandwich``          ``L U L^*``, ``U >= 0``
    ``complement``            ``L (U - P U P) L^*``, ``U`` Hermitian
    ========================  =====================================

    The contribution is multiplied by ``sign``; this only changes the set
    for ``psd_sandwich``.
    """

    kind: str
    left: Matrix
    right: Matrix | None = None
    proj: Matrix | None = None
    sign: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown correction kind {self.kind!r}")
        if self.kind in (PLAIN, ADJOINT_PAIR) and self.right is None:
            raise ValueError(f"{self.kind} term needs a right factor")
        if self.kind == COMPLEMENT and (self.proj is None or not self.proj.is_square
                                        or self.proj.rows != self.left.cols):
            raise DimensionMismatch("complement term needs a square projector")

    @property
    def param_shape(self):
        if self.kind in (PLAIN, ADJOINT_PAIR):
            return (self.left.cols, self.right.rows)
        return (self.left.cols, self.left.cols)

    @property
    def out_shape(self):
        if self.kind == PLAIN:
            return (self.left.rows, self.right.cols)
        return (self.left.rows, self.left.rows)

    @property
    def hermitian_param(self):
        return self.kind in (HERMITIAN_SANDWICH, PSD_SANDWICH, COMPLEMENT)

    def apply(self, V):
        """Contribution of the term for parameter ``V`` (``U = V`` for sandwiches).

        For ``psd_sandwich`` the caller passes ``U`` already PSD.
        """
        L = self.left
        if self.kind == PLAIN:
            out = L @ V @ self.right
        elif self.kind == ADJOINT_PAIR:
            T = L @ V @ self.right
            out = T + T.H
        elif self.kind == COMPLEMENT:
            P = self.proj
            out = L @ (V - P @ V @ P) @ L.H
        else:
            out = L @ V @ L.H
        return out if self.sign == 1 else -out

    def pushforward(self, C, sign):
        """The term of ``sign * C X C^*`` when ``X`` carries this term."""
        new_sign = self.sign * sign
        if self.kind == PLAIN:
            return replace(self, left=C @ self.left, right=self.right @ C.H, sign=new_sign)
        if self.kind == ADJOINT_PAIR:
            return replace(self, left=C @ self.left, right=self.right @ C.H, sign=new_sign)
        return replace(self, left=C @ self.left, sign=new_sign)


@dataclass(frozen=True)
class LinearConstraint:
    """``L X R = C``."""

    L: Matrix
    R: Matrix
    C: Matrix

    def residual(self, X):
        return self.L @ X @ self.R - self.C


@dataclass(frozen=True)
class AffineSolutionSet:
    """``x0 + sum(terms)``: a general solution family.

    ``hermitian`` says every member is Hermitian; ``psd`` says every member
    is positive semidefinite.  ``constraints`` are the source equations.
    """

    x0: Matrix
    terms: tuple = ()
    constraints: tuple = ()
    hermitian: bool = False
    psd: bool = False

    @property
    def backend(self):
        return self.x0.backend

    @property
    def shape(self):
        return self.x0.shape

    def evaluate(self, params):
        """Member for one parameter matrix per term (``U`` for sandwiches)."""
        if len(params) != len(self.terms):
            raise ValueError("one parameter per correction term is required")
        X = self.x0
        for t, V in zip(self.terms, params):
            if V.shape != t.param_shape:
                raise DimensionMismatch(f"parameter has shape {V.shape}, need {t.param_shape}")
            X = X + t.apply(V)
        return X

    def satisfies(self, X, pol=None):
        """Zero residual on every constraint plus the required symmetry/sign."""
        pol = pol or DEFAULT_POLICY
        for c in self.constraints:
            if not (c.L @ X @ c.R).equals(c.C, pol):
                return False
        if self.hermitian and not X.is_hermitian(pol):
            return False
        if self.psd and inertia(X, pol).i_minus != 0:
            return False
        return True

    def congruence(self, C, offset=None, sign=1):
        """Image of the set under ``X -> offset + sign * C X C^*``."""
        base = C @ self.x0 @ C.H
        base = base if sign == 1 else -base
        if offset is not None:
            base = offset + base
        terms = tuple(t.pushforward(C, sign) for t in self.terms)
        return AffineSolutionSet(base, terms, (), self.hermitian, False)

    def without_zero_terms(self):
        keep = tuple(t for t in self.terms if not _term_vanishes(t))
        return replace(self, terms=keep)


def _term_vanishes(t):
    if t.kind in (PLAIN, ADJOINT_PAIR):
        return t.left.is_zero() or t.right.is_zero()
    if t.kind == COMPLEMENT:
        return t.left.is_zero() or (t.proj.rows and t.proj.equals(Matrix.identity(
            t.proj.rows, t.proj.backend)))
    return t.left.is_zero()


def _check(cond, name, left, right):
    if not cond:
        raise Unsolvable(name, left, right)


def _I(n, backend):
    return Matrix.identity(n, backend)


def _linear_system_solution(pairs, n, p, pol):
    """Solve ``L_j X R_j = C_j`` jointly for ``X`` (``n x p``) via Kronecker form.

    Returns ``None`` when inconsistent.
    """
    blocks, rhs = [], []
    for L, R, C in pairs:
        if L.rows == 0 or R.cols == 0:
            continue
        blocks.append(kron(R.T, L))
        rhs.append(vec(C))
    backend = pairs[0][0].backend
    if not blocks:
        return Matrix.zeros(n, p, backend)
    K = vstack(*blocks)
    c = vstack(*rhs)
    x = solve(K, c, pol)
    return None if x is None else unvec(x, n, p)


def pair_linear_common(A1, B1, C1, A2, B2, C2, pol=None):
    """Common solution of ``A1 X B1 = C1`` and ``A2 X B2 = C2``.

    Returns ``X0 + F_A V1 + V2 E_B + F_A1 V3 E_B2 + F_A2 V4 E_B1`` with
    ``A = [A1; A2]`` and ``B = [B1, B2]``.
    """
    pol = pol or DEFAULT_POLICY
    n, p = A1.cols, B1.rows
    if A2.cols != n or B2.rows != p:
        raise DimensionMismatch("the two equations act on different unknown shapes")
    for j, (A, B, C) in enumerate(((A1, B1, C1), (A2, B2, C2)), 1):
        if C.shape != (A.rows, B.cols):
            raise DimensionMismatch(f"right-hand side {j} has shape {C.shape}")
    r = lambda M: rank(M, pol)  # noqa: E731
    for j, (A, B, C) in enumerate(((A1, B1, C1), (A2, B2, C2)), 1):
        lhs, rhs = r(hstack(A, C)), r(A)
        _check(lhs == rhs, f"range of C{j} inside range of A{j}", lhs, rhs)
        lhs, rhs = r(vstack(B, C)), r(B)
        _check(lhs == rhs, f"row space of C{j} inside row space of B{j}", lhs, rhs)
    big = assemble([[C1, 0, A1], [0, -C2, A2], [B1, B2, 0]])
    lhs = r(big)
    rhs = r(vstack(A1, A2)) + r(hstack(B1, B2))
    _check(lhs == rhs, "coupled block rank", lhs, rhs)
    x0 = _linear_system_solution([(A1, B1, C1), (A2, B2, C2)], n, p, pol)
    if x0 is None:
        raise InternalInconsistency("rank conditions hold but the linear system is inconsistent")
    b = A1.backend
    _, FA = projectors(vstack(A1, A2), pol)
    EB, _ = projectors(hstack(B1, B2), pol)
    _, FA1 = projectors(A1, pol)
    _, FA2 = projectors(A2, pol)
    EB1, _ = projectors(B1, pol)
    EB2, _ = projectors(B2, pol)
    terms = (
        CorrectionTerm(PLAIN, FA, _I(p, b)),
        CorrectionTerm(PLAIN, _I(n, b), EB),
        CorrectionTerm(PLAIN, FA1, EB2),
        CorrectionTerm(PLAIN, FA2, EB1),
    )
    cons = (LinearConstraint(A1, B1, C1), LinearConstraint(A2, B2, C2))
    return AffineSolutionSet(x0, terms, cons)


def _require_hermitian(M, name, pol):
    from .errors import NotHermitian

    if not M.is_square or not M.is_hermitian(pol):
        raise NotHermitian(f"{name} must be Hermitian")


def congruence_solve(A, B, form="sandwich", pol=None):
    """Hermitian solutions of ``A X A^* = B``.

    ``form="sandwich"`` gives ``A^+ B A^+* + U - A^+A U A^+A``;
    ``form="adjoint"`` gives ``A^+ B A^+* + F_A V + V^* F_A``.
    """
    pol = pol or DEFAULT_POLICY
    if B.shape != (A.rows, A.rows):
        raise DimensionMismatch("B must be square with as many rows as A")
    _require_hermitian(B, "B", pol)
    Ap = pinv(A, pol)
    ok = (A @ Ap @ B).equals(B, pol)
    _check(ok, "range of B inside range of A", "A A^+ B", "B")
    x0 = Ap @ B @ Ap.H
    n = A.cols
    b = A.backend
    _, FA = projectors(A, pol)
    if form == "sandwich":
        term = CorrectionTerm(COMPLEMENT, _I(n, b), proj=Ap @ A)
    elif form == "adjoint":
        term = CorrectionTerm(ADJOINT_PAIR, FA, _I(n, b))
    else:
        raise ValueError(f"unknown form {form!r}")
    return AffineSolutionSet(x0, (term,), (LinearConstraint(A, A.H, B),), hermitian=True)


def _check_linear_hermitian(A, B, pol):
    if A.shape != B.shape:
        raise DimensionMismatch("A and B must have the same shape")
    r = lambda M: rank(M, pol)  # noqa: E731
    lhs, rhs = r(hstack(A, B)), r(A)
    _check(lhs == rhs, "range of B inside range of A", lhs, rhs)
    _check((A @ B.H).equals(B @ A.H, pol), "A B^* Hermitian", "A B^*", "B A^*")


def linear_hermitian_solve(A, B, pol=None):
    """Hermitian solutions of ``A X = B``: ``A^+B + (A^+B)^* - A^+BA^+A + F_A U F_A``."""
    pol = pol or DEFAULT_POLICY
    _check_linear_hermitian(A, B, pol)
    Ap = pinv(A, pol)
    T = Ap @ B
    x0 = T + T.H - T @ Ap @ A
    _, FA = projectors(A, pol)
    n = A.cols
    cons = (LinearConstraint(A, _I(n, A.backend), B),)
    return AffineSolutionSet(x0, (CorrectionTerm(HERMITIAN_SANDWICH, FA),), cons,
                             hermitian=True)


def linear_psd_solve(A, B, pol=None):
    """Positive semidefinite solutions of ``A X = B``: ``B^*(AB^*)^+B + F_A U F_A``, ``U >= 0``."""
    pol = pol or DEFAULT_POLICY
    _check_linear_hermitian(A, B, pol)
    ABh = A @ B.H
    i_minus = inertia(ABh, pol).i_minus
    _check(i_minus == 0, "A B^* positive semidefinite", f"i-(A B^*)={i_minus}", 0)
    lhs, rhs = rank(ABh, pol), rank(B, pol)
    _check(lhs == rhs, "rank of A B^* equals rank of B", lhs, rhs)
    x0 = B.H @ pinv(ABh, pol) @ B
    _, FA = projectors(A, pol)
    n = A.cols
    cons = (LinearConstraint(A, _I(n, A.backend), B),)
    return AffineSolutionSet(x0, (CorrectionTerm(PSD_SANDWICH, FA),), cons,
                             hermitian=True, psd=True)


def check_congruence_consistent(Bi, Ai, name, pol):
    """Premise ``R(A_i) ⊆ R(B_i)`` for ``B_i X B_i^* = A_i``."""
    if Ai.shape != (Bi.rows, Bi.rows):
        raise DimensionMismatch(f"{name}: A must be square with as many rows as B")
    _require_hermitian(Ai, name, pol)
    lhs, rhs = rank(hstack(Bi, Ai), pol), rank(Bi, pol)
    if lhs != rhs:
        raise PremiseViolated(f"{name}: equation is not individually consistent "
                              f"(r[B,A]={lhs}, r(B)={rhs})")


def pair_congruence_condition(B2, A2, B3, A3, pol=None):
    """The two sides of the coupled rank test for a common Hermitian solution."""
    pol = pol or DEFAULT_POLICY
    big = assemble([[A2, 0, B2], [0, -A3, B3], [B2.H, B3.H, 0]])
    return rank(big, pol), 2 * rank(vstack(B2, B3), pol)


def hermitize_common_solution(s, pol=None):
    """``(X + X^*)/2`` for a common solution ``X`` of two congruence equations.

    ``s`` comes from :func:`pair_linear_common` applied to
    ``(B2, B2^*, A2, B3, B3^*, A3)``; Hermitian right-hand sides make the
    average a solution too.
    """
    pol = pol or DEFAULT_POLICY
    X = s.x0
    if not X.is_square:
        raise PremiseViolated("common solution must be square")
    H = hermitian_part(X)
    for c in s.constraints:
        if not c.C.is_hermitian(pol):
            raise PremiseViolated("right-hand sides must be Hermitian")
        if not c.residual(H).is_zero(pol):
            raise PremiseViolated("hermitized matrix does not solve the equations")
    return H


def pair_congruence_common(B2, A2, B3, A3, pol=None):
    """Common Hermitian solutions of ``B2 X B2^* = A2`` and ``B3 X B3^* = A3``.

    Returns ``X0 + V F_B + F_B V^* + F_B2 U F_B3 + F_B3 U^* F_B2`` with
    ``B = [B2; B3]``.
    """
    pol = pol or DEFAULT_POLICY
    if B2.cols != B3.cols:
        raise DimensionMismatch("B2 and B3 must have the same number of columns")
    check_congruence_consistent(B2, A2, "second equation", pol)
    check_congruence_consistent(B3, A3, "third equation", pol)
    lhs, rhs = pair_congruence_condition(B2, A2, B3, A3, pol)
    _check(lhs == rhs, "coupled bordered rank", lhs, rhs)
    s = pair_linear_common(B2, B2.H, A2, B3, B3.H, A3, pol)
    x0 = hermitize_common_solution(s, pol)
    n = B2.cols
    b = B2.backend
    _, FB = projectors(vstack(B2, B3), pol)
    _, FB2 = projectors(B2, pol)
    _, FB3 = projectors(B3, pol)
    terms = (CorrectionTerm(ADJOINT_PAIR, _I(n, b), FB),
             CorrectionTerm(ADJOINT_PAIR, FB2, FB3))
    return AffineSolutionSet(x0, terms, s.constraints, hermitian=True)
