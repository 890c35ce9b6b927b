"""Brute-force verification of extremal summaries.

Every objective handled here is an affine family ``Y0 + sum of terms`` of
Hermitian matrices (see :class:`AffineSolutionSet`).  The family is first
reduced to its image: an exact basis of the real span of the Hermitian
directions, plus one ``Z S Z^*`` block per PSD-parameter term (``Z`` a
column basis of the term's left factor, ``S >= 0``).  Probes are integer
coordinate vectors in that basis, so a whole batch of objective values can
be formed with integer arithmetic.

Inertias of a batch are taken from float eigenvalues; any sample with an
eigenvalue inside a small band around zero is recomputed exactly from its
characteristic polynomial (all roots are real, so Descartes' sign count is
exact).  The result is exact for every sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import lcm

import numpy as np
from gmpy2 import mpq

from .errors import BudgetUnsatisfiable
from .extremal import (
    SUMMARY_FIELDS,
    ExtremalSummary,
    FreeInstance,
    LinearInstance,
    PairInstance,
    PartitionedInstance,
    analyze,
)
from .numeric import EXACT, Matrix, hermitian_part, rref
from .sampling import random_hermitian, random_matrix, random_psd, rng_for
from .solvers import (
    HERMITIAN_SANDWICH,
    PSD_SANDWICH,
    AffineSolutionSet,
    CorrectionTerm,
    linear_hermitian_solve,
    linear_psd_solve,
    pair_congruence_common,
)

CONFIRMED = "confirmed-equal"
SANDWICH_ONLY = "sandwich-only"
VIOLATED = "violated"
VIOLATED_BY_BOUND = "violated-by-bound"

MAX_FIELDS = ("max_rank", "max_ip", "max_im")
MIN_FIELDS = ("min_rank", "min_ip", "min_im")
KINDS = ("pair", "linear", "linear_psd", "partitioned", "free")

# Random-trial coordinates are integers in [-TRIAL_BOUND, TRIAL_BOUND].
TRIAL_BOUND = 97


@dataclass(frozen=True)
class SearchBudget:
    random_trials: int = 1000
    grid_radius: int = 2
    seed: int = 0
    grid_cap: int = 6
    ascent_restarts: int = 4
    ascent_steps: int = 150


# --------------------------------------------------------------------------
# batched exact inertia
# --------------------------------------------------------------------------

def _charpoly(re_, im_):
    """Characteristic polynomial coefficients of integer Hermitian matrices.

    ``re_``, ``im_`` are ``(N, m, m)`` object arrays of Python ints.  Returns
    an ``(N, m + 1)`` array ``[1, c_{m-1}, ..., c_0]`` via the
    Faddeev-LeVerrier recurrence; every division is exact.
    """
    N, m, _ = re_.shape
    coeffs = np.empty((N, m + 1), dtype=object)
    coeffs[:, 0] = 1
    Mr = np.zeros((N, m, m), dtype=object)
    Mi = np.zeros((N, m, m), dtype=object)
    eye = np.eye(m, dtype=int).astype(object)
    prev = np.ones(N, dtype=object)
    for k in range(1, m + 1):
        Mr, Mi = (re_ @ Mr - im_ @ Mi + prev[:, None, None] * eye,
                  re_ @ Mi + im_ @ Mr)
        AMr = re_ @ Mr - im_ @ Mi
        tr = np.trace(AMr, axis1=1, axis2=2)
        prev = np.array([-(int(t) // k) for t in tr], dtype=object)
        coeffs[:, k] = prev
    return coeffs


def _sign_changes(seq):
    """Sign changes per row, zeros skipped."""
    N, L = seq.shape
    out = np.zeros(N, dtype=int)
    last = np.zeros(N, dtype=int)
    for j in range(L):
        s = np.array([(x > 0) - (x < 0) for x in seq[:, j]], dtype=int)
        flip = (s != 0) & (last != 0) & (s != last)
        out += flip
        last = np.where(s != 0, s, last)
    return out


def exact_batch_inertia(re_, im_):
    """``(i_plus, i_minus)`` arrays for integer Hermitian matrices, exactly."""
    N, m, _ = re_.shape
    if m == 0 or N == 0:
        z = np.zeros(N, dtype=int)
        return z, z.copy()
    c = _charpoly(re_, im_)
    # all roots are real, so Descartes' rule counts them exactly
    pos = _sign_changes(c)
    alt = c.copy()
    for j in range(m + 1):
        # coefficient of lambda^(m - j); substitute lambda -> -lambda
        if (m - j) % 2:
            alt[:, j] = -alt[:, j]
    neg = _sign_changes(alt)
    return pos, neg


def batch_inertia(re_, im_):
    """Exact inertias of a batch of integer Hermitian matrices.

    Float eigenvalues decide every sample whose spectrum stays clear of
    zero; the rest go through :func:`exact_batch_inertia`.
    """
    N, m, _ = re_.shape
    if m == 0 or N == 0:
        z = np.zeros(N, dtype=int)
        return z, z.copy()
    F = re_.astype(float) + 1j * im_.astype(float)
    w = np.linalg.eigvalsh(F)
    scale = np.linalg.norm(F.reshape(N, -1), axis=1)
    tau = (1e-7 * m * scale)[:, None]
    ip = (w > tau).sum(axis=1)
    im = (w < -tau).sum(axis=1)
    unsure = np.nonzero((np.abs(w) <= tau).any(axis=1) & (scale > 0))[0]
    if unsure.size:
        p, q = exact_batch_inertia(re_[unsure], im_[unsure])
        ip[unsure] = p
        im[unsure] = q
    return ip, im


# --------------------------------------------------------------------------
# reduced coordinates of an affine Hermitian family
# --------------------------------------------------------------------------

def _herm_coords(Y):
    """Real coordinates of a Hermitian matrix: diagonal, then Re/Im above it."""
    m = Y.rows
    out = [mpq(Y.re[j, j]) for j in range(m)]
    for j in range(m):
        for k in range(j + 1, m):
            out.append(mpq(Y.re[j, k]))
            out.append(mpq(Y.im[j, k]) if Y.im is not None else mpq(0))
    return out


def _herm_basis(p):
    """Matrices whose coefficients are exactly :func:`_herm_coords`."""
    out = []
    for j in range(p):
        re_ = np.full((p, p), mpq(0), dtype=object)
        re_[j, j] = mpq(1)
        out.append(Matrix(re_, None, EXACT))
    for j in range(p):
        for k in range(j + 1, p):
            re_ = np.full((p, p), mpq(0), dtype=object)
            re_[j, k] = re_[k, j] = mpq(1)
            out.append(Matrix(re_, None, EXACT))
            im_ = np.full((p, p), mpq(0), dtype=object)
            im_[j, k], im_[k, j] = mpq(1), mpq(-1)
            out.append(Matrix(np.full((p, p), mpq(0), dtype=object), im_, EXACT))
    return out


def _general_basis(p, q):
    out = []
    for j in range(p):
        for k in range(q):
            e = np.full((p, q), mpq(0), dtype=object)
            e[j, k] = mpq(1)
            out.append(Matrix(e, None, EXACT))
            out.append(Matrix(np.full((p, q), mpq(0), dtype=object), e.copy(), EXACT))
    return out


def _coords_to_batch(Y, m):
    """``(N, m*m)`` coordinate rows to ``(N, m, m)`` real/imag parts."""
    N = Y.shape[0]
    re_ = np.zeros((N, m, m), dtype=object)
    im_ = np.zeros((N, m, m), dtype=object)
    for j in range(m):
        re_[:, j, j] = Y[:, j]
    col = m
    for j in range(m):
        for k in range(j + 1, m):
            re_[:, j, k] = re_[:, k, j] = Y[:, col]
            im_[:, j, k] = Y[:, col + 1]
            im_[:, k, j] = -Y[:, col + 1]
            col += 2
    return re_, im_


def _matrix_from_coords(y, m, denom):
    re_, im_ = _coords_to_batch(np.array([list(y)], dtype=object), m)
    conv = np.vectorize(lambda v: mpq(int(v), denom), otypes=[object])
    re_ = conv(re_[0]) if m else np.zeros((0, 0), dtype=object)
    im_ = conv(im_[0]) if m else None
    M = Matrix(re_, im_, EXACT)
    return M if M.is_real is False else Matrix(re_, None, EXACT)


def _int_rows(rows, denom):
    if not rows:
        return None
    return np.array([[int(v * denom) for v in r] for r in rows], dtype=object)


@dataclass
class ReducedFamily:
    """Image of an affine Hermitian family in integer coordinates.

    A member is ``(base + c @ lin + sum_b s_b @ psd[b]) / denom`` in
    Hermitian coordinates, with ``c`` unconstrained and each ``s_b`` the
    coordinates of a PSD ``k_b x k_b`` matrix.
    """

    m: int
    denom: int
    base: np.ndarray
    lin: np.ndarray | None
    psd: list = field(default_factory=list)   # (k, rows) pairs

    @classmethod
    def from_family(cls, family):
        if family.backend != EXACT:
            raise ValueError("the oracle works on the exact backend only")
        Y0 = family.x0
        m = Y0.rows
        base = _herm_coords(Y0)
        dirs = []
        psd_blocks = []
        for t in family.terms:
            if t.kind == PSD_SANDWICH:
                L = t.left
                _, piv = rref(L)
                Z = L[:, list(piv)]
                k = len(piv)
                rows = []
                for E in _herm_basis(k):
                    D = Z @ E @ Z.H
                    rows.append(_herm_coords(D if t.sign == 1 else -D))
                psd_blocks.append((k, rows))
                continue
            p, q = t.param_shape
            basis = _herm_basis(p) if t.hermitian_param else _general_basis(p, q)
            for V in basis:
                dirs.append(_herm_coords(t.apply(V)))
        lin_rows = []
        if dirs:
            R, piv = rref(Matrix(np.array(dirs, dtype=object), None, EXACT))
            lin_rows = [list(R.re[i]) for i in range(len(piv))]
        vals = base + [v for r in lin_rows for v in r] + \
            [v for _, rows in psd_blocks for r in rows for v in r]
        denom = lcm(1, *[int(mpq(v).denominator) for v in vals])
        return cls(m, denom,
                   np.array([int(v * denom) for v in base], dtype=object),
                   _int_rows(lin_rows, denom),
                   [(k, _int_rows(rows, denom)) for k, rows in psd_blocks])

    @property
    def lin_dim(self):
        return 0 if self.lin is None else self.lin.shape[0]

    @property
    def dims(self):
        return self.lin_dim + sum(k * k for k, _ in self.psd)

    def values(self, c, s_list):
        """Coordinate rows for coefficient arrays ``c`` and per-block ``s``."""
        N = c.shape[0]
        Y = np.tile(self.base, (N, 1))
        if self.lin is not None and self.lin_dim:
            Y = Y + c.dot(self.lin)
        for (k, rows), s in zip(self.psd, s_list):
            if k:
                Y = Y + s.dot(rows)
        return Y

    def matrix(self, y, scale=1):
        return _matrix_from_coords(y, self.m, self.denom * scale)


# --------------------------------------------------------------------------
# probes
# --------------------------------------------------------------------------

@dataclass
class Observation:
    summary: ExtremalSummary
    witnesses: dict
    trials: int
    grid_points: int
    grid_dims: int


class _Tracker:
    def __init__(self, red):
        self.red = red
        self.best = {}

    def update(self, Y, scale=1):
        if Y.shape[0] == 0:
            return
        re_, im_ = _coords_to_batch(Y, self.red.m)
        ip, im = batch_inertia(re_, im_)
        r = ip + im
        for name, vals, pick in (("max_rank", r, np.argmax), ("min_rank", r, np.argmin),
                                 ("max_ip", ip, np.argmax), ("min_ip", ip, np.argmin),
                                 ("max_im", im, np.argmax), ("min_im", im, np.argmin)):
            j = int(pick(vals))
            v = int(vals[j])
            old = self.best.get(name)
            better = old is None or (v > old[0] if name.startswith("max") else v < old[0])
            if better:
                self.best[name] = (v, Y[j].copy(), scale)

    def summary(self):
        return ExtremalSummary(**{f: self.best[f][0] for f in SUMMARY_FIELDS})

    def witnesses(self):
        return {f: self.red.matrix(self.best[f][1], self.best[f][2]) for f in SUMMARY_FIELDS}


def _herm_coords_int(re_, im_):
    """Integer Hermitian coordinates of a batch ``(N, k, k)``."""
    N, k, _ = re_.shape
    cols = [re_[:, j, j] for j in range(k)]
    for j in range(k):
        for l in range(j + 1, k):
            cols.append(re_[:, j, l])
            cols.append(im_[:, j, l])
    return np.stack(cols, axis=1) if cols else np.zeros((N, 0), dtype=object)


def _random_psd_coords(rng, k, bound):
    """Coordinates of ``G G^*`` for a random complex ``k x j`` factor, ``0 <= j <= k``."""
    j = int(rng.integers(0, k + 1))
    G = rng.integers(-bound, bound + 1, size=(k, j)).astype(object)
    H = rng.integers(-bound, bound + 1, size=(k, j)).astype(object)
    re_ = G.dot(G.T) + H.dot(H.T)
    im_ = H.dot(G.T) - G.dot(H.T)
    return _herm_coords_int(re_[None], im_[None])[0]


def _random_target(rng, m):
    """Hermitian coordinates (floats) of ``G diag(+-1) G^*`` with a random signature."""
    G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    p = int(rng.integers(0, m + 1))
    q = int(rng.integers(0, m - p + 1))
    d = np.array([1.0] * p + [-1.0] * q + [0.0] * (m - p - q))
    T = (G * d) @ G.conj().T
    out = [T[j, j].real for j in range(m)]
    for j in range(m):
        for k in range(j + 1, m):
            out += [T[j, k].real, T[j, k].imag]
    return np.array(out)


def _random_coords(red, budget):
    """Trial coordinates: each trial owns the stream ``(seed, trial)``.

    Half the trials draw coefficients directly; the other half fit the
    family in least squares to a random target of random signature, which
    reaches inertia patterns that only hold on small open sets.  Scales
    are spread over many orders of magnitude so that a large base offset
    cannot hide the directions.
    """
    n = budget.random_trials
    d = red.lin_dim
    c = np.zeros((n, d), dtype=object)
    s_list = [np.zeros((n, k * k), dtype=object) for k, _ in red.psd]
    lin_f = red.lin.astype(float) if d else None
    base_f = red.base.astype(float)
    size = float(np.abs(base_f).max()) + 1.0 if base_f.size else 1.0
    for t in range(n):
        rng = rng_for(budget.seed, t)
        scale = 10 ** int(rng.integers(0, 9))
        shift = np.zeros(red.base.shape, dtype=object)
        for b, (k, rows) in enumerate(red.psd):
            if k:
                s = _random_psd_coords(rng, k, TRIAL_BOUND) * scale
                s_list[b][t] = s
                shift = shift + s.dot(rows)
        if not d:
            continue
        if t % 2 == 0 or red.m == 0:
            c[t] = rng.integers(-TRIAL_BOUND, TRIAL_BOUND + 1, size=d).astype(object) * scale
            continue
        goal = _random_target(rng, red.m) * size * scale - base_f - shift.astype(float)
        sol, *_ = np.linalg.lstsq(lin_f.T, goal, rcond=None)
        c[t] = np.array([int(round(x)) for x in sol], dtype=object)
    return c, s_list


def _grid_coords(red, g):
    d = red.lin_dim
    sizes = [d] + [k * k for k, _ in red.psd]
    total = sum(sizes)
    pts = np.array(list(product(range(-g, g + 1), repeat=total)), dtype=object)
    if total == 0:
        pts = np.zeros((1, 0), dtype=object)
    keep = np.ones(pts.shape[0], dtype=bool)
    parts = []
    off = 0
    for size in sizes:
        parts.append(pts[:, off:off + size])
        off += size
    for (k, _), s in zip(red.psd, parts[1:]):
        if k:
            re_, im_ = _coords_to_batch(s, k)
            _, neg = batch_inertia(re_, im_)
            keep &= neg == 0
    return parts[0][keep], [s[keep] for s in parts[1:]]


def _phi(v, m):
    """Coordinates ``g`` with ``v^* G v = g . coords(G)`` for Hermitian ``G``."""
    out = [abs(v[j]) ** 2 for j in range(m)]
    for j in range(m):
        for k in range(j + 1, m):
            z = np.conj(v[j]) * v[k]
            out += [2 * z.real, -2 * z.imag]
    return np.array(out)


def _coords_to_complex(y, m):
    Y = np.zeros((m, m), dtype=complex)
    for j in range(m):
        Y[j, j] = y[j]
    col = m
    for j in range(m):
        for k in range(j + 1, m):
            Y[j, k] = y[col] + 1j * y[col + 1]
            Y[k, j] = np.conj(Y[j, k])
            col += 2
    return Y


def _gram_coords(G):
    """Hermitian coordinates of ``G G^*`` for a complex (float or Gaussian int) ``G``."""
    k = G.shape[0]
    re_, im_ = G.real, G.imag
    gre = re_ @ re_.T + im_ @ im_.T
    gim = im_ @ re_.T - re_ @ im_.T
    out = [gre[j, j] for j in range(k)]
    for j in range(k):
        for l in range(j + 1, k):
            out += [gre[j, l], gim[j, l]]
    return out


class _Ascent:
    """Eigenvalue ascent over the reduced coordinates.

    ``i+(Y) >= k`` holds iff some ``k``-column ``W`` makes ``W^* Y W``
    positive definite.  With ``W`` fixed, ``lambda_min(W^* Y W)`` is concave
    in the linear coordinates, so the search alternates: ``W`` is reset to
    the top ``k`` eigenvectors of ``Y``, then that smallest eigenvalue is
    pushed up by adaptive gradient steps.
    """

    def __init__(self, red):
        self.red = red
        self.base = red.base.astype(float)
        self.lin = red.lin.astype(float) if red.lin_dim else np.zeros((0, red.base.size))
        self.psd = [(k, rows.astype(float) if k else None) for k, rows in red.psd]

    def coords(self, c, Gs):
        y = self.base + c @ self.lin
        for (k, rows), G in zip(self.psd, Gs):
            if k:
                y = y + np.array(_gram_coords(G)) @ rows
        return y

    def matrix(self, c, Gs, sign):
        return sign * _coords_to_complex(self.coords(c, Gs), self.red.m)

    def frame(self, c, Gs, k, sign):
        w, V = np.linalg.eigh(self.matrix(c, Gs, sign))
        return V[:, -k:], w[-k]

    def value(self, c, Gs, W, sign, beta):
        """Soft minimum of the eigenvalues of ``W^* (sign Y) W`` and its gradient.

        The soft minimum is a smooth concave lower bound of the smallest
        eigenvalue, so a positive value already certifies positivity.
        Also returns the true smallest eigenvalue and ``|Y|``.
        """
        Y = self.matrix(c, Gs, sign)
        w, U = np.linalg.eigh(W.conj().T @ Y @ W)
        z = -beta * (w - w[0])
        e = np.exp(z)
        soft = w[0] - np.log(e.sum()) / beta
        pj = e / e.sum()
        phi = sum(pj[j] * _phi(W @ U[:, j], self.red.m) for j in range(len(w))) * sign
        gc = self.lin @ phi
        gG = []
        for (kb, rows), G in zip(self.psd, Gs):
            if not kb:
                gG.append(G)
                continue
            # tr(M dS) with M built from coordinate gradients; off-diagonals count twice
            M = _coords_to_complex(rows @ phi, kb)
            off = ~np.eye(kb, dtype=bool)
            M[off] = M[off] / 2
            gG.append(M.conj() @ G)
        return soft, gc, gG, w[0], np.linalg.norm(Y)

    def exact_row(self, c, Gs, p):
        """Integer coordinates of ``D^2 Y`` with ``D = 2^p`` after rounding."""
        D = 2 ** p
        red = self.red
        y = red.base * (D * D)
        if red.lin_dim:
            ci = np.array([int(round(x * D * D)) for x in c], dtype=object)
            y = y + ci.dot(red.lin)
        for (k, rows), G in zip(red.psd, Gs):
            if k:
                gre = np.array([[int(round(z.real * D)) for z in r] for r in G], dtype=object)
                gim = np.array([[int(round(z.imag * D)) for z in r] for r in G], dtype=object)
                re_ = gre.dot(gre.T) + gim.dot(gim.T)
                im_ = gim.dot(gre.T) - gre.dot(gim.T)
                y = y + _herm_coords_int(re_[None], im_[None])[0].dot(rows)
        return y, D * D


def _ascent(red, budget, tr):
    """Try to raise the observed maximal inertias.

    Maximal inertia is attained on an open set that can be small and far
    from where random draws land.  Each success is converted to integer
    coordinates and its inertia recomputed exactly before it counts.
    """
    asc = _Ascent(red)
    rng = rng_for(budget.seed, 2**31)
    scale = np.linalg.norm(asc.base) + 1.0
    lin_norm = np.linalg.norm(asc.lin, axis=1).mean() if red.lin_dim else 1.0
    psd_norm = [np.linalg.norm(rows, axis=1).mean() if k else 1.0 for k, rows in asc.psd]
    for sign, field in ((1, "max_ip"), (-1, "max_im")):
        k = tr.best[field][0] + 1
        while k <= red.m:
            if not _ascend_one(asc, red, budget, tr, rng, k, sign, field, scale, lin_norm,
                               psd_norm):
                break
            k = tr.best[field][0] + 1


def _certify(asc, tr, c, Gs, k, field):
    for p in (12, 24, 40):
        y, sc = asc.exact_row(c, Gs, p)
        tr.update(np.array([y], dtype=object), sc)
        if tr.best[field][0] >= k:
            return True
    return False


def _pack(c, Gs):
    parts = [c] + [np.concatenate([G.real.ravel(), G.imag.ravel()]) for G in Gs]
    return np.concatenate(parts) if parts else np.zeros(0)


def _unpack(theta, d, shapes):
    c = theta[:d]
    Gs, off = [], d
    for kb in shapes:
        n = kb * kb
        Gs.append(theta[off:off + n].reshape(kb, kb) + 1j * theta[off + n:off + 2 * n]
                  .reshape(kb, kb))
        off += 2 * n
    return c, Gs


def _ascend_one(asc, red, budget, tr, rng, k, sign, field, scale, lin_norm, psd_norm):
    """Quasi-Newton ascent of the soft minimum, restarted from random points."""
    d = red.lin_dim
    shapes = [kb for kb, _ in red.psd]
    epoch = 20
    for _ in range(budget.ascent_restarts):
        spread = 10.0 ** rng.uniform(-2, 2)
        c = rng.standard_normal(d) * spread * scale / lin_norm
        Gs = [(rng.standard_normal((kb, kb)) + 1j * rng.standard_normal((kb, kb)))
              * np.sqrt(spread * scale / pn) for kb, pn in zip(shapes, psd_norm)]
        theta = _pack(c, Gs)
        steps = 0
        while steps < budget.ascent_steps:
            c, Gs = _unpack(theta, d, shapes)
            W, _ = asc.frame(c, Gs, k, sign)
            beta = 20.0 * k / (np.linalg.norm(asc.matrix(c, Gs, sign)) + 1e-300)

            def f(th):
                cc, GG = _unpack(th, d, shapes)
                val, gc, gG, lam, nrm = asc.value(cc, GG, W, sign, beta)
                return val, _pack(gc, [2 * g for g in gG]), lam, nrm

            val, g, lam, nrm = f(theta)
            H = np.eye(theta.size) * (0.1 * (np.linalg.norm(theta) + 1.0)
                                      / (np.linalg.norm(g) + 1e-300))
            for _ in range(epoch):
                steps += 1
                if lam > 1e-6 * nrm:
                    c, Gs = _unpack(theta, d, shapes)
                    if _certify(asc, tr, c, Gs, k, field):
                        return True
                    break
                # homogeneous families can run off to infinity; nothing is gained there
                if np.linalg.norm(theta) > 1e60:
                    break
                step = H @ g
                slope = g @ step
                if not np.isfinite(slope) or slope <= 0:
                    break
                alpha, accepted = 1.0, None
                for _ in range(40):
                    out = f(theta + alpha * step)
                    if out[0] >= val + 1e-4 * alpha * slope:
                        accepted = out
                        break
                    alpha *= 0.5
                if accepted is None:
                    break
                s_vec = alpha * step
                y_vec = g - accepted[1]
                theta = theta + s_vec
                val, g_new, lam, nrm = accepted
                sy = s_vec @ y_vec
                if sy > 1e-300:
                    rho = 1.0 / sy
                    I = np.eye(theta.size)
                    H = (I - rho * np.outer(s_vec, y_vec)) @ H @ \
                        (I - rho * np.outer(y_vec, s_vec)) + rho * np.outer(s_vec, s_vec)
                g = g_new
            else:
                continue
            break
    return False


def observed_extremes(family, budget):
    """Observed extremes of rank and inertia over random and lattice probes."""
    red = family if isinstance(family, ReducedFamily) else ReducedFamily.from_family(family)
    use_grid = red.dims <= budget.grid_cap and budget.grid_radius >= 0
    if not use_grid and budget.random_trials == 0:
        raise BudgetUnsatisfiable(
            f"{red.dims} free real dimensions exceed the grid cap {budget.grid_cap} "
            "and no random trials are allowed")
    tr = _Tracker(red)
    if budget.random_trials:
        tr.update(red.values(*_random_coords(red, budget)))
    grid_points = 0
    if use_grid:
        c, s_list = _grid_coords(red, budget.grid_radius)
        grid_points = c.shape[0]
        tr.update(red.values(c, s_list))
    if not tr.best:
        tr.update(red.values(np.zeros((1, red.lin_dim), dtype=object),
                             [np.zeros((1, k * k), dtype=object) for k, _ in red.psd]))
    if budget.ascent_restarts and red.m:
        # overflowing trial points are rejected by the line search
        with np.errstate(over="ignore", invalid="ignore"):
            _ascent(red, budget, tr)
    return Observation(tr.summary(), tr.witnesses(), budget.random_trials, grid_points,
                       red.dims if use_grid else 0)


# --------------------------------------------------------------------------
# verification
# --------------------------------------------------------------------------

@dataclass
class VerificationOutcome:
    objective: str
    predicted: ExtremalSummary
    observed: ExtremalSummary
    status: dict
    counterexamples: dict
    trials: int = 0
    grid_points: int = 0
    grid_dims: int = 0

    @property
    def violated(self):
        return any(s in (VIOLATED, VIOLATED_BY_BOUND) for s in self.status.values())

    @property
    def confirmed(self):
        return all(s == CONFIRMED for s in self.status.values())

    def describe(self):
        lines = [f"{self.objective}: predicted {self.predicted.as_tuple()} "
                 f"observed {self.observed.as_tuple()}"]
        for f in SUMMARY_FIELDS:
            lines.append(f"  {f}: {self.status[f]}")
            if f in self.counterexamples:
                lines.append(f"    witness {self.counterexamples[f]!r}")
        return "\n".join(lines)


def classify(predicted, obs):
    status, cex = {}, {}
    for f in MAX_FIELDS:
        p, o = getattr(predicted, f), getattr(obs.summary, f)
        if o > p:
            status[f], cex[f] = VIOLATED, obs.witnesses[f]
        elif o == p:
            status[f] = CONFIRMED
        else:
            status[f] = VIOLATED_BY_BOUND
    for f in MIN_FIELDS:
        p, o = getattr(predicted, f), getattr(obs.summary, f)
        if o < p:
            status[f], cex[f] = VIOLATED, obs.witnesses[f]
        elif o == p:
            status[f] = CONFIRMED
        else:
            status[f] = SANDWICH_ONLY
    return status, cex


def verify_family(family, predicted, budget, objective="objective"):
    obs = observed_extremes(family, budget)
    status, cex = classify(predicted, obs)
    return VerificationOutcome(objective, predicted, obs.summary, status, cex,
                               obs.trials, obs.grid_points, obs.grid_dims)


def _selector(n, start, size):
    re_ = np.full((size, n), mpq(0), dtype=object)
    for j in range(size):
        re_[j, start + j] = mpq(1)
    return Matrix(re_, None, EXACT)


def objective_families(inst, pol=None):
    """``(name, family)`` pairs matching the objectives of :func:`analyze`."""
    if isinstance(inst, PairInstance):
        S = pair_congruence_common(inst.B2, inst.A2, inst.B3, inst.A3, pol)
        return [("A1 - B1 X B1^*", S.congruence(inst.B1, inst.A1, -1))]
    if isinstance(inst, LinearInstance):
        solver = linear_psd_solve if inst.kind == "linear_psd" else linear_hermitian_solve
        S = solver(inst.B4, inst.A4, pol)
        return [("A1 - B1 X B1^*", S.congruence(inst.B1, inst.A1, -1))]
    if isinstance(inst, PartitionedInstance):
        S = linear_hermitian_solve(inst.A, inst.B, pol)
        n1, n2 = inst.A1.cols, inst.A2.cols
        return [("X1", S.congruence(_selector(n1 + n2, 0, n1))),
                ("X3", S.congruence(_selector(n1 + n2, n1, n2)))]
    if isinstance(inst, FreeInstance):
        term = CorrectionTerm(HERMITIAN_SANDWICH, inst.B, sign=-1)
        return [("A - B X B^*", AffineSolutionSet(inst.A, (term,), (), hermitian=True))]
    raise TypeError(f"unsupported instance {type(inst).__name__}")


def verify_instance(inst, budget, predicted=None, pol=None):
    """One :class:`VerificationOutcome` per objective of ``inst``.

    ``predicted`` (a list of summaries) replaces the engine's output; the
    fault-injection tests use it.
    """
    if predicted is None:
        predicted = [s for _, s, _ in analyze(inst, pol)]
    fams = objective_families(inst, pol)
    return [verify_family(fam, p, budget, name) for (name, fam), p in zip(fams, predicted)]


# --------------------------------------------------------------------------
# instances and samples
# --------------------------------------------------------------------------

def _rank_for(rng, m, n):
    """Full rank most of the time, otherwise a random deficient rank."""
    full = min(m, n)
    if full == 0 or rng.random() < 0.6:
        return None
    return int(rng.integers(0, full + 1))


def _rand(rng, m, n, bound=3):
    return random_matrix(rng, m, n, bound=bound, rank=_rank_for(rng, m, n))


def gen_instance(kind, n, dims=None, seed=0, bound=3):
    """Random consistent instance with a planted solution ``X_hat``.

    ``dims`` maps row-count names (``m1``..``m4``, ``m``, ``n1``) to sizes;
    missing ones are drawn from the seed.  Returns ``(instance, X_hat)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    dims = dict(dims or {})
    rng = rng_for(seed, KINDS.index(kind), n)

    def dim(name, lo=1, hi=None):
        if name not in dims:
            dims[name] = int(rng.integers(lo, (hi or n) + 1))
        return dims[name]

    if kind == "linear_psd":
        X = random_psd(rng, n, int(rng.integers(0, n + 1)), bound=bound)
    else:
        X = random_hermitian(rng, n, bound=bound, rank=_rank_for(rng, n, n))
    if kind == "free":
        m = dim("m")
        return FreeInstance(random_hermitian(rng, m, bound=bound), _rand(rng, m, n, bound)), X
    if kind == "pair":
        B = [_rand(rng, dim(f"m{i}"), n, bound) for i in (1, 2, 3)]
        A1 = random_hermitian(rng, B[0].rows, bound=bound)
        inst = PairInstance(A1, B[0], B[1] @ X @ B[1].H, B[1], B[2] @ X @ B[2].H, B[2])
        return inst, X
    if kind in ("linear", "linear_psd"):
        B1 = _rand(rng, dim("m1"), n, bound)
        B4 = _rand(rng, dim("m4"), n, bound)
        A1 = random_hermitian(rng, B1.rows, bound=bound)
        return LinearInstance(A1, B1, B4 @ X, B4, kind), X
    n1 = dim("n1", 1, max(1, n - 1)) if n > 1 else dims.setdefault("n1", 1)
    n1 = min(n1, n)
    m = dim("m")
    A = _rand(rng, m, n, bound)
    B = A @ X
    n2 = n - n1
    return PartitionedInstance(A[:, :n1], A[:, n1:] if n2 else Matrix.zeros(m, 0),
                               B[:, :n1], B[:, n1:] if n2 else Matrix.zeros(m, 0)), X


def _random_param(rng, t, scale):
    p, q = t.param_shape
    if t.kind == PSD_SANDWICH:
        G = random_matrix(rng, p, p, bound=scale, den=scale)
        return G @ G.H
    V = random_matrix(rng, p, q, bound=scale, den=scale)
    return hermitian_part(V) if t.hermitian_param else V


def sample_solutions(s, count, seed=0, scale=3):
    """``count`` members of ``s`` with random rational parameters."""
    out = []
    for j in range(count):
        rng = rng_for(seed, j)
        out.append(s.evaluate([_random_param(rng, t, scale) for t in s.terms]))
    return out

