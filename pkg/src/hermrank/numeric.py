"""Dense complex matrices over two arithmetic backends.

The ``exact`` backend stores Gaussian rationals as a pair of numpy object
arrays of :class:`gmpy2.mpq` (real and imaginary parts); every rank, inertia
and pseudoinverse it reports is exact.  The ``float`` backend stores float64
arrays and decides zero-ness through a :class:`TolerancePolicy`.

Both backends share the same :class:`Matrix` type, so matrix algebra
(sums, products, adjoints, block assembly) is written once; only the
kernels ``rank``, ``inertia``, ``pinv`` and ``solve`` dispatch on backend.
An imaginary part of ``None`` means "identically zero" and lets real data
skip three quarters of the arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational, Real

import numpy as np
from gmpy2 import mpq

from .errors import BackendMismatch, DimensionMismatch, NotHermitian, NotSquare

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

_ZERO = mpq(0)
_ONE = mpq(1)


@dataclass(frozen=True)
class TolerancePolicy:
    """Zero thresholds for the float backend, relative to the largest scale.

    A singular value counts toward the rank when it exceeds
    ``rank_tol * sigma_max * max(m, n)``; an eigenvalue counts as nonzero
    when its magnitude exceeds ``inertia_tol * max|lambda|``.  The exact
    backend ignores the policy.
    """

    rank_tol: float = 1e-9
    inertia_tol: float = 1e-9

    def __post_init__(self):
        if self.rank_tol < 0 or self.inertia_tol < 0:
            raise ValueError("tolerances must be nonnegative")


DEFAULT_POLICY = TolerancePolicy()


@dataclass(frozen=True)
class Inertia:
    i_plus: int
    i_minus: int
    i_zero: int

    @property
    def rank(self):
        return self.i_plus + self.i_minus

    @property
    def size(self):
        return self.i_plus + self.i_minus + self.i_zero

    def swapped(self):
        """Inertia of the negated matrix."""
        return Inertia(self.i_minus, self.i_plus, self.i_zero)

    def __iter__(self):
        return iter((self.i_plus, self.i_minus, self.i_zero))


# --------------------------------------------------------------------------
# scalars
# --------------------------------------------------------------------------

_RAT = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^\s*(?:(?P<re>{_RAT})(?P<im>[+-](?:\d+(?:/\d+)?)?)i"
    rf"|(?P<only_re>{_RAT})"
    rf"|(?P<only_im>[+-]?(?:\d+(?:/\d+)?)?)i)\s*$"
)


def _to_mpq(value):
    if isinstance(value, type(_ZERO)):
        return value
    if isinstance(value, (Integral, Fraction)):
        return mpq(value)
    if isinstance(value, Rational):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(value.strip().lstrip("+"))
    if isinstance(value, Real):
        return mpq(float(value))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def _imag_coefficient(text):
    if text in ("", "+"):
        return _ONE
    if text == "-":
        return -_ONE
    return _to_mpq(text)


@dataclass(frozen=True)
class Scalar:
    """A complex number tagged with its arithmetic backend."""

    re: object
    im: object
    backend: str = EXACT

    @classmethod
    def parse(cls, text):
        """Parse ``"a/b"``, ``"a/b+c/di"``, ``"c/di"`` into an exact scalar."""
        m = _SCALAR_RE.match(text)
        if m is None:
            raise ValueError(f"malformed exact scalar {text!r}")
        if m.group("only_re") is not None:
            return cls(_to_mpq(m.group("only_re")), _ZERO)
        if m.group("only_im") is not None:
            return cls(_ZERO, _imag_coefficient(m.group("only_im")))
        return cls(_to_mpq(m.group("re")), _imag_coefficient(m.group("im")))

    @classmethod
    def coerce(cls, value, backend=None):
        if isinstance(value, Scalar):
            if backend is not None and value.backend != backend:
                raise BackendMismatch(f"scalar is {value.backend}, expected {backend}")
            return value
        if isinstance(value, str):
            s = cls.parse(value)
            return s if backend in (None, EXACT) else s.to_backend(backend)
        if backend is None:
            backend = FLOAT if isinstance(value, (float, complex)) else EXACT
        if backend == FLOAT:
            z = complex(value)
            return cls(z.real, z.imag, FLOAT)
        if isinstance(value, complex):
            return cls(_to_mpq(value.real), _to_mpq(value.imag))
        return cls(_to_mpq(value), _ZERO)

    def to_backend(self, backend):
        if backend == self.backend:
            return self
        if backend == FLOAT:
            return Scalar(float(self.re), float(self.im), FLOAT)
        return Scalar(_to_mpq(self.re), _to_mpq(self.im), EXACT)

    def _check(self, other):
        other = Scalar.coerce(other, None if isinstance(other, Scalar) else self.backend)
        if other.backend != self.backend:
            raise BackendMismatch("mixed-backend scalar arithmetic")
        return other

    def __add__(self, other):
        o = self._check(other)
        return Scalar(self.re + o.re, self.im + o.im, self.backend)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im, self.backend)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        o = self._check(other)
        return Scalar(self.re * o.re - self.im * o.im,
                      self.re * o.im + self.im * o.re, self.backend)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("scalar division by zero")
        return Scalar((self.re * o.re + self.im * o.im) / d,
                      (self.im * o.re - self.re * o.im) / d, self.backend)

    def conjugate(self):
        return Scalar(self.re, -self.im, self.backend)

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other, self.backend)
            except (TypeError, ValueError):
                return NotImplemented
        return (self.backend == other.backend and self.re == other.re
                and self.im == other.im)

    def __hash__(self):
        return hash((self.backend, self.re, self.im))

    def __str__(self):
        if self.backend == FLOAT:
            return repr(complex(self)) if self.im else repr(float(self.re))
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        im = abs(self.im)
        im_txt = "" if im == 1 else str(im)
        if self.re == 0:
            return f"{'-' if sign == '-' else ''}{im_txt}i"
        return f"{self.re}{sign}{im_txt}i"


# --------------------------------------------------------------------------
# array helpers
# --------------------------------------------------------------------------

def _zeros(shape, backend):
    if backend == EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(_ZERO)
        return out
    return np.zeros(shape, dtype=float)


def _add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def _sub(a, b):
    if b is None:
        return a
    if a is None:
        return -b
    return a - b


def _mm(a, b, backend):
    if a is None or b is None:
        return None
    if a.shape[1] == 0:
        return _zeros((a.shape[0], b.shape[1]), backend)
    return a @ b


def _any_nonzero(arr):
    return arr is not None and arr.size > 0 and bool(np.any(arr != 0))


# --------------------------------------------------------------------------
# Matrix
# --------------------------------------------------------------------------

class Matrix:
    """Immutable dense complex matrix; see the module docstring."""

    __slots__ = ("re", "im", "backend")
    __array_priority__ = 1000

    def __init__(self, re, im=None, backend=EXACT):
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend {backend!r}")
        re = np.asarray(re, dtype=object if backend == EXACT else float)
        if re.ndim != 2:
            raise DimensionMismatch("matrix data must be two-dimensional")
        if im is not None:
            im = np.asarray(im, dtype=re.dtype)
            if im.shape != re.shape:
                raise DimensionMismatch("real and imaginary parts differ in shape")
        self.re = re
        self.im = im
        self.backend = backend

    # construction ---------------------------------------------------------

    @classmethod
    def from_rows(cls, rows, backend=None, cols=None):
        """Build a matrix from nested rows of numbers, strings or Scalars.

        Backend defaults to ``float`` when any entry is a Python float or
        complex and to ``exact`` otherwise.  ``cols`` fixes the width of a
        matrix with no rows.
        """
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if m else (cols or 0)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("ragged rows")
        if backend is None:
            flat = [x for r in rows for x in r]
            kinds = {x.backend if isinstance(x, Scalar) else
                     (FLOAT if isinstance(x, (float, complex)) else EXACT)
                     for x in flat}
            if len(kinds) > 1:
                raise BackendMismatch("entries mix exact and float values")
            backend = kinds.pop() if kinds else EXACT
        re_, im_ = _zeros((m, n), backend), _zeros((m, n), backend)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                s = Scalar.coerce(x, backend if not isinstance(x, Scalar) else None)
                if s.backend != backend:
                    raise BackendMismatch("entries mix exact and float values")
                re_[i, j] = s.re
                im_[i, j] = s.im
        return cls(re_, im_ if _any_nonzero(im_) else None, backend)

    @classmethod
    def zeros(cls, m, n, backend=EXACT):
        return cls(_zeros((m, n), backend), None, backend)

    @classmethod
    def identity(cls, n, backend=EXACT):
        re_ = _zeros((n, n), backend)
        for i in range(n):
            re_[i, i] = _ONE if backend == EXACT else 1.0
        return cls(re_, None, backend)

    @classmethod
    def from_complex(cls, arr):
        arr = np.asarray(arr, dtype=complex)
        if arr.ndim != 2:
            raise DimensionMismatch("matrix data must be two-dimensional")
        im = arr.imag.copy()
        return cls(arr.real.copy(), im if np.any(im != 0) else None, FLOAT)

    def _like(self, re, im):
        if im is not None and self.backend == EXACT and not _any_nonzero(im):
            im = None
        return Matrix(re, im, self.backend)

    # shape and access -----------------------------------------------------

    @property
    def shape(self):
        return self.re.shape

    @property
    def rows(self):
        return self.re.shape[0]

    @property
    def cols(self):
        return self.re.shape[1]

    @property
    def is_square(self):
        return self.rows == self.cols

    @property
    def is_real(self):
        return not _any_nonzero(self.im)

    def __getitem__(self, key):
        if isinstance(key, tuple) and len(key) == 2 and all(
                isinstance(k, (int, np.integer)) for k in key):
            im = self.im[key] if self.im is not None else (_ZERO if self.backend == EXACT else 0.0)
            return Scalar(self.re[key], im, self.backend)
        if not isinstance(key, tuple):
            key = (key, slice(None))
        key = tuple(slice(k, k + 1) if isinstance(k, (int, np.integer)) else k for k in key)
        re_ = self.re[key]
        im_ = self.im[key] if self.im is not None else None
        return self._like(re_.copy(), None if im_ is None else im_.copy())

    def entries(self):
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def to_complex(self):
        re_ = self.re.astype(float)
        if self.im is None:
            return re_.astype(complex)
        return re_ + 1j * self.im.astype(float)

    def to_backend(self, backend):
        if backend == self.backend:
            return self
        if backend == FLOAT:
            return Matrix(self.re.astype(float),
                          None if self.im is None else self.im.astype(float), FLOAT)
        conv = np.vectorize(_to_mpq, otypes=[object])
        re_ = conv(self.re) if self.re.size else _zeros(self.shape, EXACT)
        im_ = None
        if self.im is not None and self.im.size:
            im_ = conv(self.im)
        return Matrix(re_, im_, EXACT)._like(re_, im_)

    # algebra --------------------------------------------------------------

    def _coerce_other(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.backend != self.backend:
            raise BackendMismatch(f"{self.backend} matrix combined with {other.backend} matrix")
        return other

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        if other.shape != self.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return self._like(self.re + other.re, _add(self.im, other.im))

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        if other.shape != self.shape:
            raise DimensionMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return self._like(self.re - other.re, _sub(self.im, other.im))

    def __neg__(self):
        return Matrix(-self.re, None if self.im is None else -self.im, self.backend)

    def __matmul__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        b = self.backend
        rr = _mm(self.re, other.re, b)
        re_ = _sub(rr, _mm(self.im, other.im, b))
        im_ = _add(_mm(self.re, other.im, b), _mm(self.im, other.re, b))
        return self._like(re_, im_)

    def scale(self, value):
        s = Scalar.coerce(value, self.backend)
        if s.im == 0:
            return Matrix(self.re * s.re, None if self.im is None else self.im * s.re,
                          self.backend)
        im_ = self.re * s.im if self.im is None else self.re * s.im + self.im * s.re
        re_ = self.re * s.re if self.im is None else self.re * s.re - self.im * s.im
        return self._like(re_, im_)

    def __mul__(self, value):
        if isinstance(value, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(value)

    __rmul__ = __mul__

    @property
    def H(self):
        """Conjugate transpose."""
        return Matrix(self.re.T.copy(), None if self.im is None else -self.im.T,
                      self.backend)

    @property
    def T(self):
        return Matrix(self.re.T.copy(), None if self.im is None else self.im.T.copy(),
                      self.backend)

    def conj(self):
        return Matrix(self.re, None if self.im is None else -self.im, self.backend)

    # predicates -----------------------------------------------------------

    def _scale(self):
        z = self.to_complex()
        return float(np.abs(z).max()) if z.size else 0.0

    def is_zero(self, pol=None):
        if self.backend == EXACT:
            return not (_any_nonzero(self.re) or _any_nonzero(self.im))
        pol = pol or DEFAULT_POLICY
        return self._scale() <= pol.rank_tol

    def equals(self, other, pol=None):
        """Exact equality (exact backend) or equality within tolerance (float)."""
        if self.shape != other.shape:
            return False
        if self.backend == EXACT and other.backend == EXACT:
            return (self - other).is_zero()
        if self.backend != other.backend:
            raise BackendMismatch("cannot compare matrices on different backends")
        pol = pol or DEFAULT_POLICY
        scale = max(1.0, self._scale(), other._scale())
        return (self - other)._scale() <= pol.inertia_tol * scale

    def is_hermitian(self, pol=None):
        return self.is_square and self.equals(self.H, pol)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.backend == other.backend and self.shape == other.shape and \
            (self - other).is_zero(TolerancePolicy(0.0, 0.0))

    __hash__ = None

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self.entries())
        return f"Matrix<{self.backend} {self.rows}x{self.cols}>[{body}]"


# --------------------------------------------------------------------------
# exact elimination kernels
# --------------------------------------------------------------------------

def _copy_parts(m):
    re_ = m.re.copy()
    im_ = None if m.im is None or not _any_nonzero(m.im) else m.im.copy()
    return re_, im_


def _eliminate(re_, im_, full):
    """In-place row reduction; returns pivot columns.

    ``full=False`` stops at row echelon form; ``full=True`` produces the
    reduced row echelon form with unit pivots.
    """
    m, n = re_.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = re_[r:, c] != 0
        if im_ is not None:
            nz = nz | (im_[r:, c] != 0)
        idx = np.flatnonzero(nz)
        if idx.size == 0:
            continue
        p = r + int(idx[0])
        if p != r:
            re_[[r, p]] = re_[[p, r]]
            if im_ is not None:
                im_[[r, p]] = im_[[p, r]]
        if full:
            _normalize_row(re_, im_, r, c)
        rows = np.arange(r + 1, m) if not full else np.array(
            [i for i in range(m) if i != r], dtype=int)
        if rows.size:
            _clear_column(re_, im_, r, c, rows)
        pivots.append(c)
        r += 1
    return pivots


def _normalize_row(re_, im_, r, c):
    pr = re_[r, c]
    if im_ is None:
        re_[r, c:] = re_[r, c:] / pr
        return
    pi = im_[r, c]
    d = pr * pr + pi * pi
    xr, xi = re_[r, c:].copy(), im_[r, c:].copy()
    # x / p = x * conj(p) / |p|^2
    re_[r, c:] = (xr * pr + xi * pi) / d
    im_[r, c:] = (xi * pr - xr * pi) / d


def _clear_column(re_, im_, r, c, rows):
    pr = re_[r, c]
    if im_ is None:
        col = re_[rows, c]
        sel = rows[col != 0]
        if sel.size == 0:
            return
        f = re_[sel, c] / pr
        re_[sel, c:] -= np.outer(f, re_[r, c:])
        return
    pi = im_[r, c]
    col_nz = (re_[rows, c] != 0) | (im_[rows, c] != 0)
    sel = rows[col_nz]
    if sel.size == 0:
        return
    d = pr * pr + pi * pi
    xr, xi = re_[sel, c], im_[sel, c]
    fr = (xr * pr + xi * pi) / d
    fi = (xi * pr - xr * pi) / d
    rr, ri = re_[r, c:], im_[r, c:]
    re_[sel, c:] -= np.outer(fr, rr) - np.outer(fi, ri)
    im_[sel, c:] -= np.outer(fr, ri) + np.outer(fi, rr)


def rref(M):
    """Reduced row echelon form of an exact matrix and its pivot columns."""
    if M.backend != EXACT:
        raise BackendMismatch("rref is defined for the exact backend only")
    re_, im_ = _copy_parts(M)
    pivots = _eliminate(re_, im_, full=True)
    return Matrix(re_, im_, EXACT), pivots


def _inertia_exact(re_, im_):
    """Congruence diagonalization by symmetric elimination.

    Pivots on the first nonzero diagonal entry; when the remaining diagonal
    vanishes but an off-diagonal entry a does not, the hyperbolic block
    [[0, a], [conj(a), 0]] contributes one positive and one negative square.
    """
    H_re = re_.copy()
    H_im = None if im_ is None else im_.copy()
    plus = minus = zero = 0
    while H_re.shape[0]:
        size = H_re.shape[0]
        diag = np.array([H_re[i, i] for i in range(size)], dtype=object)
        nz = np.flatnonzero(diag != 0)
        if nz.size:
            k = int(nz[0])
            piv = H_re[k, k]
            if piv > 0:
                plus += 1
            else:
                minus += 1
            keep = np.array([i for i in range(size) if i != k], dtype=int)
            hr = H_re[keep, k]
            new_re = H_re[np.ix_(keep, keep)] - np.outer(hr, hr) / piv
            if H_im is None:
                H_re = new_re
                continue
            hi = H_im[keep, k]
            H_re = new_re - np.outer(hi, hi) / piv
            H_im = H_im[np.ix_(keep, keep)] - (np.outer(hi, hr) - np.outer(hr, hi)) / piv
            continue
        nz = H_re != 0
        if H_im is not None:
            nz = nz | (H_im != 0)
        flat = np.flatnonzero(nz)
        if flat.size == 0:
            zero += size
            break
        j, k = divmod(int(flat[0]), size)
        plus += 1
        minus += 1
        keep = np.array([i for i in range(size) if i not in (j, k)], dtype=int)
        ar = H_re[j, k]
        ai = _ZERO if H_im is None else H_im[j, k]
        d = ar * ar + ai * ai
        jr, kr = H_re[keep, j], H_re[keep, k]
        ji = H_im[keep, j] if H_im is not None else None
        ki = H_im[keep, k] if H_im is not None else None
        # S = (c_k / a) c_j^* + its adjoint; c_k / a = c_k * conj(a) / |a|^2
        if H_im is None and ai == 0:
            ur = kr / ar
            S = np.outer(ur, jr)
            H_re = H_re[np.ix_(keep, keep)] - (S + S.T)
            continue
        if ji is None:
            ji = np.array([_ZERO] * keep.size, dtype=object)
            ki = np.array([_ZERO] * keep.size, dtype=object)
        ur = (kr * ar + ki * ai) / d
        ui = (ki * ar - kr * ai) / d
        # u c_j^*: (ur + i ui)(jr - i ji)^T
        Sr = np.outer(ur, jr) + np.outer(ui, ji)
        Si = np.outer(ui, jr) - np.outer(ur, ji)
        base_im = H_im[np.ix_(keep, keep)] if H_im is not None else _zeros((keep.size,) * 2, EXACT)
        H_re = H_re[np.ix_(keep, keep)] - (Sr + Sr.T)
        H_im = base_im - (Si - Si.T)
    return Inertia(plus, minus, zero)


def _inverse_exact(M):
    n = M.rows
    aug = assemble_row([M, Matrix.identity(n, EXACT)])
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


# --------------------------------------------------------------------------
# public kernel
# --------------------------------------------------------------------------

def assemble_row(blocks):
    """Horizontal concatenation of matrices with equal row counts."""
    backend = blocks[0].backend
    if any(b.backend != backend for b in blocks):
        raise BackendMismatch("blocks on different backends")
    if len({b.rows for b in blocks}) > 1:
        raise DimensionMismatch("row counts differ in horizontal concatenation")
    re_ = np.concatenate([b.re for b in blocks], axis=1)
    if all(b.im is None for b in blocks):
        return Matrix(re_, None, backend)
    im_ = np.concatenate([b.im if b.im is not None else _zeros(b.shape, backend)
                          for b in blocks], axis=1)
    return Matrix(re_, im_, backend)


def assemble_col(blocks):
    return assemble_row([b.T for b in blocks]).T


def rank(M, pol=None):
    """Rank of ``M``.

    Exact: Gaussian elimination over the Gaussian rationals.  Float: number
    of singular values above ``rank_tol * sigma_max * max(m, n)``.
    """
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.backend == EXACT:
        re_, im_ = _copy_parts(M)
        if re_.shape[0] > re_.shape[1]:
            re_ = re_.T.copy()
            im_ = None if im_ is None else im_.T.copy()
        return len(_eliminate(re_, im_, full=False))
    pol = pol or DEFAULT_POLICY
    s = np.linalg.svd(M.to_complex(), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > pol.rank_tol * s[0] * max(M.shape)))


def _require_hermitian(A, pol):
    if not A.is_square:
        raise NotSquare(f"expected a square matrix, got {A.shape}")
    if A.backend == EXACT:
        ok = A.is_hermitian()
    else:
        pol = pol or DEFAULT_POLICY
        z = A.to_complex()
        scale = max(1.0, float(np.abs(z).max()) if z.size else 0.0)
        ok = float(np.abs(z - z.conj().T).max(initial=0.0)) <= pol.inertia_tol * scale
    if not ok:
        raise NotHermitian("matrix is not Hermitian")


def inertia(A, pol=None):
    """Numbers of positive, negative and zero eigenvalues of Hermitian ``A``."""
    _require_hermitian(A, pol)
    n = A.rows
    if n == 0:
        return Inertia(0, 0, 0)
    if A.backend == EXACT:
        re_, im_ = _copy_parts(A)
        return _inertia_exact(re_, im_)
    pol = pol or DEFAULT_POLICY
    z = A.to_complex()
    lam = np.linalg.eigvalsh((z + z.conj().T) / 2)
    top = float(np.abs(lam).max())
    if top == 0:
        return Inertia(0, 0, n)
    thr = pol.inertia_tol * top
    p = int(np.count_nonzero(lam > thr))
    q = int(np.count_nonzero(lam < -thr))
    return Inertia(p, q, n - p - q)


def pinv(M, pol=None):
    """Moore-Penrose inverse.

    Exact: full-rank factorization ``M = F G`` read off the reduced row
    echelon form, then ``G^*(G G^*)^{-1}(F^* F)^{-1} F^*``.  Float: SVD with
    singular values below the rank threshold discarded.
    """
    m, n = M.shape
    if m == 0 or n == 0:
        return Matrix.zeros(n, m, M.backend)
    if M.backend == EXACT:
        R, piv = rref(M)
        r = len(piv)
        if r == 0:
            return Matrix.zeros(n, m, EXACT)
        G = R[:r, :]
        F = M[:, piv]
        left = G.H @ _inverse_exact(G @ G.H)
        right = _inverse_exact(F.H @ F) @ F.H
        return left @ right
    pol = pol or DEFAULT_POLICY
    z = M.to_complex()
    u, s, vh = np.linalg.svd(z, full_matrices=False)
    if s[0] == 0:
        return Matrix.zeros(n, m, FLOAT)
    keep = s > pol.rank_tol * s[0] * max(m, n)
    inv = (vh[keep].conj().T / s[keep]) @ u[:, keep].conj().T
    return Matrix.from_complex(inv)


def projectors(A, pol=None):
    """Return ``(E_A, F_A) = (I - A A^+, I - A^+ A)``."""
    Ap = pinv(A, pol)
    m, n = A.shape
    E = Matrix.identity(m, A.backend) - A @ Ap
    F = Matrix.identity(n, A.backend) - Ap @ A
    return E, F


def hermitian_part(M):
    """``(M + M^*) / 2``."""
    if not M.is_square:
        raise NotSquare(f"expected a square matrix, got {M.shape}")
    half = mpq(1, 2) if M.backend == EXACT else 0.5
    return (M + M.H).scale(half)


def solve(K, c, pol=None):
    """A particular solution ``x`` of ``K x = c`` (free variables set to 0).

    Returns ``None`` when the system is inconsistent.
    """
    if K.rows != c.rows:
        raise DimensionMismatch("right-hand side has the wrong number of rows")
    if K.backend == FLOAT:
        pol = pol or DEFAULT_POLICY
        x = pinv(K, pol) @ c
        return x if (K @ x).equals(c, pol) else None
    n = K.cols
    R, piv = rref(assemble_row([K, c]))
    if any(p >= n for p in piv):
        return None
    x = Matrix.zeros(n, c.cols, EXACT)
    re_ = x.re
    im_ = None if R.im is None else _zeros((n, c.cols), EXACT)
    for i, p in enumerate(piv):
        re_[p, :] = R.re[i, n:]
        if im_ is not None:
            im_[p, :] = R.im[i, n:]
    return Matrix(re_, im_, EXACT)._like(re_, im_)


def kron(A, B):
    """Kronecker product."""
    if A.backend != B.backend:
        raise BackendMismatch("kron of matrices on different backends")
    b = A.backend
    rr = np.kron(A.re, B.re) if A.re.size and B.re.size else _zeros(
        (A.rows * B.rows, A.cols * B.cols), b)
    if A.im is None and B.im is None:
        return Matrix(rr, None, b)
    z = _zeros(A.shape, b)
    ai = A.im if A.im is not None else z
    bi = B.im if B.im is not None else _zeros(B.shape, b)
    if not rr.size:
        return Matrix(rr, None, b)
    re_ = rr - np.kron(ai, bi)
    im_ = np.kron(A.re, bi) + np.kron(ai, B.re)
    return Matrix(re_, im_, b)


def vec(M):
    """Column-major vectorization as an ``(m n) x 1`` matrix."""
    return Matrix(M.re.T.reshape(-1, 1).copy(),
                  None if M.im is None else M.im.T.reshape(-1, 1).copy(), M.backend)


def unvec(v, m, n):
    return Matrix(v.re.reshape(n, m).T.copy(),
                  None if v.im is None else v.im.reshape(n, m).T.copy(), v.backend)


def is_psd(A, pol=None):
    return inertia(A, pol).i_minus == 0


def is_nsd(A, pol=None):
    return inertia(A, pol).i_plus == 0


def range_contains(A, C, pol=None):
    """``R(C) ⊆ R(A)`` tested as ``r[A, C] = r(A)``."""
    return rank(assemble_row([A, C]), pol) == rank(A, pol)
