"""
Canonical frame alignment for the images of the standard basis.

Given ``f(e_1), ..., f(e_n)`` there is an orthogonal ``p`` that carries
each ``f(e_i)`` to a vector whose entries after position ``i`` vanish and
whose ``i``-th entry is nonnegative. ``p`` is the transpose of the ``q``
factor of the matrix with columns ``f(e_i)``; the nonzero entries are read
off the ``r`` factor.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .linalg import as_vector, householder_qr

__all__ = ["AlignedFrame", "canonical_alignment", "apply_alignment"]


@dataclass(frozen=True)
class AlignedFrame:
    """
    Result of :func:`canonical_alignment`.

    Attributes
    ----------
    p : (n, n) ndarray
        Orthogonal change of frame.
    eprime : (n, n) ndarray
        Lower triangular table; row ``i`` holds the aligned coordinates of
        the ``i``-th basis image, i.e. ``p @ f(e_i) == eprime[i]``
        (0-based). Entries above the diagonal are exact zeros.
    """

    p: np.ndarray
    eprime: np.ndarray

    @property
    def n(self):
        return self.p.shape[0]

    @property
    def q(self):
        """The orthogonal factor ``p.T`` (inverse alignment)."""
        return self.p.T


def canonical_alignment(basis_images):
    """Align the images of ``e_1, ..., e_n`` into lower triangular form.

    Parameters
    ----------
    basis_images : sequence of n vectors of length n
        ``f(e_1), ..., f(e_n)`` in order.

    Returns
    -------
    AlignedFrame
    """
    rows = [np.asarray(v, dtype=float) for v in basis_images]
    n = len(rows)
    if n < 1:
        raise InvalidInputError("need at least one basis image")
    cols = [as_vector(v, name=f"basis_images[{i}]") for i, v in enumerate(rows)]
    for i, v in enumerate(cols):
        if v.shape[0] != n:
            raise InvalidInputError(
                f"basis_images[{i}] has length {v.shape[0]} but {n} images were given"
            )
    a = np.column_stack(cols)
    q, r = householder_qr(a)
    eprime = np.tril(r.T)
    p = np.ascontiguousarray(q.T)
    p.setflags(write=False)
    eprime.setflags(write=False)
    return AlignedFrame(p=p, eprime=eprime)


def apply_alignment(frame, y):
    """Return ``frame.p @ y``. Accepts a single vector or rows of vectors."""
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = as_vector(y, frame.n, name="y")
        return frame.p @ y
    if y.ndim == 2 and y.shape[1] == frame.n:
        return y @ frame.p.T
    raise InvalidInputError(f"cannot align array of shape {y.shape} in dimension {frame.n}")
