"""Seeded random matrices over the exact and float backends."""

from __future__ import annotations

import numpy as np
from gmpy2 import mpq

from .numeric import EXACT, FLOAT, Matrix


def rng_for(seed, *index):
    """Independent random stream for ``(seed, index...)``."""
    return np.random.default_rng([int(seed) & (2**64 - 1), *[int(i) for i in index]])


def _ints(rng, shape, bound):
    return rng.integers(-bound, bound + 1, size=shape)


def _rationals(rng, shape, bound, den):
    num = _ints(rng, shape, bound)
    if den <= 1:
        out = np.empty(shape, dtype=object)
        out.flat[:] = [mpq(int(x)) for x in num.flat]
        return out
    d = rng.integers(1, den + 1, size=shape)
    out = np.empty(shape, dtype=object)
    out.flat[:] = [mpq(int(a), int(b)) for a, b in zip(num.flat, d.flat)]
    return out


def random_matrix(rng, m, n, bound=3, den=1, complex_=True, backend=EXACT, rank=None):
    """Random ``m x n`` matrix with entries ``a/b``, ``|a| <= bound``, ``1 <= b <= den``.

    ``rank`` requests a product of two random factors of that inner size,
    which has that rank with high probability (at most that rank always).
    """
    if rank is not None:
        L = random_matrix(rng, m, rank, bound, den, complex_, EXACT)
        R = random_matrix(rng, rank, n, bound, den, complex_, EXACT)
        return (L @ R).to_backend(backend)
    re_ = _rationals(rng, (m, n), bound, den)
    im_ = _rationals(rng, (m, n), bound, den) if complex_ else None
    M = Matrix(re_, im_, EXACT)
    if im_ is not None and M.is_real:
        M = Matrix(re_, None, EXACT)
    return M.to_backend(backend) if backend == FLOAT else M


def random_hermitian(rng, n, bound=3, den=1, complex_=True, backend=EXACT, rank=None,
                     signature=None):
    """Random Hermitian matrix.

    ``signature=(p, q)`` builds ``G diag(I_p, -I_q) G^*`` with ``G`` an
    ``n x (p+q)`` random factor; ``rank`` builds an indefinite one of that rank.
    """
    if signature is not None:
        p, q = signature
        G = random_matrix(rng, n, p + q, bound, den, complex_)
        D = Matrix.identity(p + q)
        for k in range(p, p + q):
            D.re[k, k] = -D.re[k, k]
        return (G @ D @ G.H).to_backend(backend)
    if rank is not None:
        p = int(rng.integers(0, rank + 1))
        return random_hermitian(rng, n, bound, den, complex_, backend,
                                signature=(p, rank - p))
    M = random_matrix(rng, n, n, bound, den, complex_)
    H = M + M.H
    return H.to_backend(backend)


def random_psd(rng, n, k=None, bound=3, den=1, complex_=True, backend=EXACT):
    k = n if k is None else k
    return random_hermitian(rng, n, bound, den, complex_, backend, signature=(k, 0))
