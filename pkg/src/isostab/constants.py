"""
Integer stability constants for epsilon-isometries of the standard frame.

The constants ``c_ij`` (``1 <= j <= i <= n``) bound the aligned
coordinates of the basis images of an epsilon-isometry::

    |e'_ij| <= c_ij * eps          for i > j
    1 - c_ii * eps <= e'_ii <= 1 + eps

They are produced by two interleaved recurrences. The diagonal entry is
the smallest positive integer with

    (3 c_jj - 1)(c_jj - 1) >= sum_{i<j} c_(i+1)i^2

and the subdiagonal entry is the smallest positive integer with

    c_(k+1)k >= (4 + 2 sqrt(2) + eps + 2 eps sum_{i<k} c_(i+1)i^2)
                / (2 (1 - c_kk eps)),

evaluated at an upper bound for eps. Every other entry is copied down its
column, ``c_ik = c_(k+1)k`` for ``i > k``.

All inequalities are decided in exact rational arithmetic; the only
irrational quantity, sqrt(2), is removed by squaring.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import isqrt, sqrt

import numpy as np

from .errors import AdmissibilityError, InvalidInputError, SequencingError

__all__ = [
    "Mode",
    "ConstantTable",
    "EpsilonBudget",
    "diagonal_constant",
    "subdiagonal_constant",
    "diagonal_inequality_holds",
    "subdiagonal_inequality_holds",
    "schedule_eps_upper",
    "build_constant_table",
    "sigma",
    "epsilon_sup",
]

ONE_TWELFTH = Fraction(1, 12)


class Mode(str, Enum):
    """How the epsilon upper bound is chosen at each subdiagonal step.

    ``PAPER`` uses 1/12 for the first two steps and afterwards the
    reciprocal of the running sum of squared subdiagonals. ``TIGHT`` uses
    the smallest bound available at every step.
    """

    PAPER = "paper"
    TIGHT = "tight"


@dataclass(frozen=True)
class ConstantTable:
    """
    Lower triangular table of positive integers ``c_ij``.

    ``rows[i - 1][j - 1]`` is ``c_ij`` for ``j <= i``. Use :meth:`entry`
    for 1-based access matching the usual index notation.
    """

    n: int
    rows: tuple
    mode: Mode

    def entry(self, i, j):
        if not 1 <= j <= i <= self.n:
            raise IndexError(f"c_{i}{j} is outside the lower triangle of an n={self.n} table")
        return self.rows[i - 1][j - 1]

    @property
    def diagonal(self):
        return tuple(self.rows[i][i] for i in range(self.n))

    @property
    def subdiagonal(self):
        """``(c_21, c_32, ..., c_n(n-1))``."""
        return tuple(self.rows[i + 1][i] for i in range(self.n - 1))

    def row_sums(self):
        return tuple(sum(r) for r in self.rows)

    def as_array(self):
        out = np.zeros((self.n, self.n), dtype=np.int64)
        for i, row in enumerate(self.rows):
            out[i, : i + 1] = row
        return out

    def leading(self, m):
        """The leading ``m x m`` table (same mode)."""
        if not 1 <= m <= self.n:
            raise InvalidInputError(f"cannot take a {m}-prefix of an n={self.n} table")
        return ConstantTable(m, self.rows[:m], self.mode)


@dataclass(frozen=True)
class EpsilonBudget:
    """Sum of squared subdiagonals and the admissible epsilon supremum."""

    sigma: int
    eps_sup: Fraction

    @property
    def eps_sup_float(self):
        return float(self.eps_sup)


def _partial_sigma(subdiagonal, upto):
    return sum(c * c for c in subdiagonal[:upto])


def diagonal_inequality_holds(c, s):
    """Exact check of ``(3c - 1)(c - 1) >= s``."""
    return (3 * c - 1) * (c - 1) >= s


def diagonal_constant(j, subdiagonal):
    """
    Smallest positive integer ``c`` with ``(3c - 1)(c - 1) >= sum``.

    ``sum`` is taken over the first ``j - 1`` entries of ``subdiagonal``
    (``c_21, c_32, ...``). The search starts one below the integer ceiling
    of ``(2 + sqrt(1 + 3 sum)) / 3``, computed with ``math.isqrt``, and
    steps upward using the exact integer inequality.
    """
    if j < 1:
        raise InvalidInputError(f"j must be >= 1, got {j}")
    if len(subdiagonal) < j - 1:
        raise SequencingError(
            f"c_{j}{j} needs {j - 1} subdiagonal constants, only {len(subdiagonal)} known"
        )
    s = _partial_sigma(subdiagonal, j - 1)
    root = isqrt(1 + 3 * s)
    c = max(1, (2 + root) // 3 - 1)
    while not diagonal_inequality_holds(c, s):
        c += 1
    return c


def subdiagonal_inequality_holds(c, ckk, s, eps):
    """
    Exact check of ``c >= (4 + 2 sqrt 2 + eps + 2 s eps) / (2 (1 - ckk eps))``.

    With ``1 - ckk eps > 0`` this is ``L >= 2 sqrt 2`` for
    ``L = 2 c (1 - ckk eps) - 4 - eps - 2 s eps``, i.e. ``L >= 0`` and
    ``L**2 >= 8``.
    """
    eps = Fraction(eps)
    lhs = 2 * c * (1 - ckk * eps) - 4 - eps - 2 * s * eps
    return lhs >= 0 and lhs * lhs >= 8


def subdiagonal_threshold(ckk, s, eps):
    """Floating-point value of the right-hand side (for display only)."""
    eps = float(eps)
    return (4 + 2 * sqrt(2) + eps + 2 * s * eps) / (2 * (1 - ckk * eps))


def subdiagonal_constant(k, diagonal, subdiagonal, eps_upper):
    """
    Smallest positive integer ``c_(k+1)k`` for a given epsilon upper bound.

    Parameters
    ----------
    k : int
        Column index, ``1 <= k``.
    diagonal : sequence of int
        ``c_11, c_22, ...``; needs at least ``k`` entries.
    subdiagonal : sequence of int
        ``c_21, c_32, ...``; needs at least ``k - 1`` entries.
    eps_upper : Fraction
        Upper bound for epsilon, ``0 < eps_upper <= 1/12`` and
        ``eps_upper < 1 / (2 c_kk)``.

    Notes
    -----
    The cross sum ``sum_{i<k} c_ki c_(k+1)i`` collapses to
    ``sum_{i<k} c_(i+1)i^2`` because both rows repeat the subdiagonal.
    """
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    if len(diagonal) < k or len(subdiagonal) < k - 1:
        raise SequencingError(
            f"c_{k + 1}{k} needs c_{k}{k} and {k - 1} subdiagonal constants"
        )
    eps = Fraction(eps_upper)
    if not 0 < eps <= ONE_TWELFTH:
        raise AdmissibilityError(f"eps_upper must lie in (0, 1/12], got {eps}")
    ckk = diagonal[k - 1]
    if eps >= Fraction(1, 2 * ckk):
        raise AdmissibilityError(f"eps_upper={eps} is not below 1/(2 c_{k}{k}) = 1/{2 * ckk}")
    s = _partial_sigma(subdiagonal, k - 1)
    c = max(1, int(subdiagonal_threshold(ckk, s, eps)) - 1)
    while not subdiagonal_inequality_holds(c, ckk, s, eps):
        c += 1
    return c


def schedule_eps_upper(k, diagonal, subdiagonal, mode):
    """The epsilon upper bound used at subdiagonal step ``k``."""
    mode = Mode(mode)
    s = _partial_sigma(subdiagonal, k - 1)
    if mode is Mode.PAPER:
        if k <= 2:
            return ONE_TWELFTH
        return Fraction(1, s)
    bounds = [ONE_TWELFTH, Fraction(1, 2 * diagonal[k - 1])]
    if s > 0:
        bounds.append(Fraction(1, s))
    return min(bounds)


def build_constant_table(n, mode=Mode.PAPER):
    """
    Run the recurrences up to dimension ``n``.

    Order of evaluation is ``c_11, c_21, c_22, c_32, c_33, ...``; each
    column is then filled by propagation ``c_ik = c_(k+1)k`` for ``i > k``.

    Raises
    ------
    InvalidInputError
        If ``n < 3``.
    """
    if int(n) != n or n < 3:
        raise InvalidInputError(f"constant tables are defined for integer n >= 3, got {n!r}")
    n = int(n)
    mode = Mode(mode)
    diagonal = [1]
    subdiagonal = []
    for k in range(1, n):
        eps = schedule_eps_upper(k, diagonal, subdiagonal, mode)
        subdiagonal.append(subdiagonal_constant(k, diagonal, subdiagonal, eps))
        diagonal.append(diagonal_constant(k + 1, subdiagonal))
    rows = tuple(tuple(subdiagonal[:i]) + (diagonal[i],) for i in range(n))
    return ConstantTable(n, rows, mode)


def sigma(table):
    """``sum_{i=1}^{n-1} c_(i+1)i^2`` as an exact integer."""
    return sum(c * c for c in table.subdiagonal)


def epsilon_sup(table):
    """``min{1/sigma, min_i 1/(2 c_ii), 1/12}`` as an exact rational."""
    s = sigma(table)
    bound = min([Fraction(1, s), ONE_TWELFTH] + [Fraction(1, 2 * c) for c in table.diagonal])
    return EpsilonBudget(sigma=s, eps_sup=bound)
