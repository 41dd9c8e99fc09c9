"""
Small dense real linear algebra.

Everything here works on square ``float64`` arrays of modest size
(n up to a few dozen). The QR factorization always returns an upper
triangular factor with a nonnegative diagonal, which is the form the
frame alignment in :mod:`isostab.canonical` relies on.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InvalidInputError

__all__ = [
    "QrResult",
    "as_square_matrix",
    "as_vector",
    "householder_qr",
    "is_orthogonal",
    "jacobi_svd",
    "random_orthogonal",
]

MAX_JACOBI_SWEEPS = 100


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def as_square_matrix(a, name="a"):
    """Validate ``a`` as a finite n x n float matrix and return a copy."""
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInputError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return a


def as_vector(x, n=None, name="x"):
    """Validate ``x`` as a finite 1-D float vector (of length ``n`` if given)."""
    x = np.array(x, dtype=float)
    if x.ndim != 1 or x.shape[0] < 1:
        raise InvalidInputError(f"{name} must be a non-empty vector, got shape {x.shape}")
    if n is not None and x.shape[0] != n:
        raise InvalidInputError(f"{name} has length {x.shape[0]}, expected {n}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return x


@dataclass(frozen=True)
class QrResult:
    """Factors of ``a = q @ r`` with ``q`` orthogonal and ``r`` upper triangular."""

    q: np.ndarray
    r: np.ndarray

    def __iter__(self):
        return iter((self.q, self.r))


def householder_qr(a):
    """
    QR factorization by Householder reflections, with ``diag(r) >= 0``.

    Parameters
    ----------
    a : (n, n) array_like
        Finite square matrix. Rank-deficient input is fine; a zero pivot
        shows up as an exact zero on the diagonal of ``r``.

    Returns
    -------
    QrResult
        ``q`` is orthogonal, ``r`` is upper triangular with exact zeros
        below the diagonal and a nonnegative diagonal.

    Raises
    ------
    InvalidInputError
        If ``a`` is not square or has non-finite entries.

    Notes
    -----
    The reflector for column ``k`` is chosen to avoid cancellation, which
    may leave a negative pivot. Such pivots are fixed afterwards by
    negating row ``k`` of ``r`` together with column ``k`` of ``q``; the
    product is unchanged.
    """
    r = as_square_matrix(a)
    n = r.shape[0]
    q = np.eye(n)
    for k in range(n - 1):
        scale = np.max(np.abs(r[k:, k]))
        if scale == 0.0:
            continue
        # Scaled so that squaring cannot underflow or overflow.
        v = r[k:, k] / scale
        normx = np.linalg.norm(v)
        v[0] += normx if v[0] >= 0.0 else -normx
        v /= np.linalg.norm(v)
        r[k:, k:] -= 2.0 * np.outer(v, v @ r[k:, k:])
        q[:, k:] -= 2.0 * np.outer(q[:, k:] @ v, v)
        r[k + 1:, k] = 0.0
    neg = np.diag(r) < 0.0
    r[neg, :] *= -1.0
    q[:, neg] *= -1.0
    return QrResult(_frozen(q), _frozen(np.triu(r)))


def is_orthogonal(q, tol=1e-12):
    """Return True iff ``max |q^T q - I| <= tol`` (entrywise max norm)."""
    q = as_square_matrix(q, "q")
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    err = np.max(np.abs(q.T @ q - np.eye(q.shape[0])))
    return bool(err <= tol)


def _orthonormal_completion(u, rank):
    # Keep the first `rank` (orthonormal) columns and fill the rest.
    n = u.shape[0]
    seed = np.eye(n)
    seed[:, :rank] = u[:, :rank]
    q, r = householder_qr(seed)
    q = np.array(q)
    # QR with positive diagonal reproduces orthonormal leading columns.
    q[:, :rank] = u[:, :rank]
    return q


def jacobi_svd(a, max_sweeps=MAX_JACOBI_SWEEPS):
    """
    Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

    Returns ``(u, s, v)`` with ``a = u @ diag(s) @ v.T``, ``u`` and ``v``
    orthogonal and ``s`` nonincreasing and nonnegative.

    Columns of a working copy of ``a`` are rotated pairwise until every
    pair is numerically orthogonal; ``v`` accumulates the rotations and
    the column norms are the singular values.

    Raises
    ------
    InvalidInputError
        If ``a`` is not square or has non-finite entries.
    ConvergenceError
        If ``max_sweeps`` sweeps pass without convergence.
    """
    w = as_square_matrix(a)
    n = w.shape[0]
    v = np.eye(n)
    scale = np.max(np.abs(w))
    if scale > 0.0:
        w /= scale
    eps = np.finfo(float).eps
    # Columns below this squared norm are numerically zero.
    negligible = (eps * np.linalg.norm(w)) ** 2
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                wp, wq = w[:, p], w[:, q]
                alpha = wp @ wp
                beta = wq @ wq
                gamma = wp @ wq
                if min(alpha, beta) <= negligible or abs(gamma) <= eps * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                cols = w[:, [p, q]]
                w[:, p] = c * cols[:, 0] - s * cols[:, 1]
                w[:, q] = s * cols[:, 0] + c * cols[:, 1]
                cols = v[:, [p, q]]
                v[:, p] = c * cols[:, 0] - s * cols[:, 1]
                v[:, q] = s * cols[:, 0] + c * cols[:, 1]
        if not rotated:
            break
    else:
        raise ConvergenceError(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")

    sv = np.linalg.norm(w, axis=0)
    if scale > 0.0:
        w *= scale
        sv *= scale
    order = np.argsort(-sv, kind="stable")
    sv, w, v = sv[order], w[:, order], v[:, order]
    cutoff = n * eps * (sv[0] if sv[0] > 0 else 1.0)
    rank = int(np.sum(sv > cutoff))
    u = np.zeros((n, n))
    u[:, :rank] = w[:, :rank] / sv[:rank]
    if rank < n:
        u = _orthonormal_completion(u, rank)
    return _frozen(u), _frozen(sv), _frozen(v)


def random_orthogonal(n, seed):
    """Haar-distributed orthogonal n x n matrix, deterministic in ``(n, seed)``.

    This is the ``q`` factor of :func:`householder_qr` applied to a
    standard Gaussian matrix drawn from ``numpy.random.default_rng(seed)``.
    """
    if int(n) != n or n < 1:
        raise InvalidInputError(f"n must be a positive integer, got {n!r}")
    rng = np.random.default_rng(seed)
    return householder_qr(rng.standard_normal((int(n), int(n)))).q
