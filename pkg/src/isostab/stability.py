"""
Deviation bounds for epsilon-isometries and certification of point maps.

A point map is a finite domain ``D`` in R^n, containing the origin and
the standard basis and lying in the closed ball of radius ``d``, with
images ``f(x)`` for each point. With distortion ``eps`` (the largest
pairwise change in distance) below the budget of a constant table, some
isometry ``U`` satisfies

    ||f(x) - U(x)|| <= B(n, d) * eps     for every x in D,

    B(n, d)^2 = sum_i ((2 + S_i) d + 4 + S_i)^2,   S_i = sum_j c_ij.

``U`` is recovered by aligning the basis images (``U(x) = p.T @ x``).
An orthogonal Procrustes fit is computed alongside as an independent,
least-squares-optimal comparison.
"""
from dataclasses import dataclass, field
from enum import Enum
from math import sqrt

import numpy as np

from .canonical import canonical_alignment
from .constants import epsilon_sup
from .errors import AmbiguityError, InvalidInputError
from .linalg import jacobi_svd

__all__ = [
    "PointMap",
    "IsometryEstimate",
    "StabilityReport",
    "Verdict",
    "distortion",
    "recenter",
    "bound_polynomial",
    "linear_majorant",
    "stability_bound_coefficient",
    "fickett_bound",
    "crossover_epsilon",
    "crossover_epsilon_bisect",
    "recover_isometry_alignment",
    "recover_isometry_procrustes",
    "verify_coordinate_bounds",
    "deviations",
    "certify",
]

MATCH_TOL = 1e-12
# Floating-point stand-in for "zero" when comparing against a bound.
BOUND_SLACK = 1e-10
COORD_SLACK = 1e-12


@dataclass(frozen=True)
class PointMap:
    """Finite domain points with their images, row-aligned.

    ``domain_points`` and ``image_points`` are ``(m, n)`` arrays. The
    domain must contain the origin and every ``e_i`` and lie within the
    ball of radius ``d >= 1``.
    """

    domain_points: np.ndarray
    image_points: np.ndarray
    d: float
    origin_index: int = field(init=False, repr=False)
    basis_indices: tuple = field(init=False, repr=False)

    def __post_init__(self):
        x = np.array(self.domain_points, dtype=float)
        y = np.array(self.image_points, dtype=float)
        if x.ndim != 2 or x.shape[0] == 0 or x.shape[1] == 0:
            raise InvalidInputError(f"domain_points must be a non-empty (m, n) array, got {x.shape}")
        if y.shape != x.shape:
            raise InvalidInputError(
                f"image_points shape {y.shape} does not match domain_points {x.shape}"
            )
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidInputError("point map contains non-finite coordinates")
        d = float(self.d)
        if not np.isfinite(d) or d < 1.0:
            raise InvalidInputError(f"radius d must be >= 1, got {self.d!r}")
        norms = np.linalg.norm(x, axis=1)
        outside = np.flatnonzero(norms > d + MATCH_TOL)
        if outside.size:
            i = int(outside[0])
            raise InvalidInputError(f"domain point {i} has norm {norms[i]!r} > d = {d!r}")
        n = x.shape[1]
        origin = _find_point(x, np.zeros(n))
        if origin is None:
            raise InvalidInputError("domain does not contain the origin")
        basis = []
        for i in range(n):
            idx = _find_point(x, np.eye(n)[i])
            if idx is None:
                raise InvalidInputError(f"domain does not contain e_{i + 1}")
            basis.append(idx)
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "domain_points", x)
        object.__setattr__(self, "image_points", y)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "origin_index", origin)
        object.__setattr__(self, "basis_indices", tuple(basis))

    @property
    def n(self):
        return self.domain_points.shape[1]

    @property
    def size(self):
        return self.domain_points.shape[0]

    @property
    def origin_image(self):
        return self.image_points[self.origin_index]

    def basis_images(self):
        return self.image_points[list(self.basis_indices)]


def _find_point(points, target):
    hits = np.flatnonzero(np.max(np.abs(points - target), axis=1) <= MATCH_TOL)
    return int(hits[0]) if hits.size else None


@dataclass(frozen=True)
class IsometryEstimate:
    """Affine isometry ``x -> q @ x + t``."""

    q: np.ndarray
    t: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x @ self.q.T + self.t


class Verdict(str, Enum):
    CERTIFIED = "certified"
    INADMISSIBLE_EPSILON = "inadmissible_epsilon"
    BOUND_VIOLATED = "bound_violated"


@dataclass(frozen=True)
class StabilityReport:
    epsilon_measured: float
    eps_sup: object
    admissible: bool
    bound_coefficient: float
    bound_value: float
    sup_deviation_alignment: float
    sup_deviation_procrustes: float
    frobenius_deviation_alignment: float
    frobenius_deviation_procrustes: float
    coordinate_bound_violations: int
    verdict: Verdict
    alignment: IsometryEstimate
    procrustes: IsometryEstimate
    recentered: bool

    @property
    def ratio(self):
        """Sup deviation of the alignment recovery relative to the bound."""
        if self.bound_value > 0:
            return self.sup_deviation_alignment / self.bound_value
        return 0.0 if self.sup_deviation_alignment <= BOUND_SLACK else float("inf")


def _pairwise_distances(p):
    diff = p[:, None, :] - p[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def distortion(pm, anchor_origin=True):
    """
    Largest ``| ||f(x) - f(y)|| - ||x - y|| |`` over all pairs of ``D``.

    With ``anchor_origin`` (the default) the offset ``||f(0)||`` is folded
    into the maximum, so a map with ``f(0) != 0`` never looks better than
    its recentered version.
    """
    dx = _pairwise_distances(pm.domain_points)
    dy = _pairwise_distances(pm.image_points)
    eps = float(np.max(np.abs(dy - dx))) if pm.size > 1 else 0.0
    if anchor_origin:
        eps = max(eps, float(np.linalg.norm(pm.origin_image)))
    return eps


def recenter(pm):
    """The map ``g(x) = f(x) - f(0)``; pairwise image differences are unchanged."""
    return PointMap(pm.domain_points, pm.image_points - pm.origin_image, pm.d)


def bound_polynomial(table):
    """Integer coefficients ``(a, b, c)`` with ``B(n, d)^2 = a d^2 + b d + c``."""
    a = b = c = 0
    for s in table.row_sums():
        a += (2 + s) ** 2
        b += 2 * (2 + s) * (4 + s)
        c += (4 + s) ** 2
    return a, b, c


def linear_majorant(table):
    """
    Integers ``(alpha, beta)`` with ``B(n, d) < alpha d + beta`` for all d >= 1.

    ``alpha`` is the least integer with ``alpha^2 > a``; ``beta`` the least
    with ``2 alpha beta >= b`` and ``beta^2 > c``, so every coefficient of
    ``(alpha d + beta)^2 - B^2`` is nonnegative and the leading one positive.
    """
    a, b, c = bound_polynomial(table)
    alpha = 1
    while alpha * alpha <= a:
        alpha += 1
    beta = max(-(-b // (2 * alpha)), 0)
    while beta * beta <= c:
        beta += 1
    return alpha, beta


def stability_bound_coefficient(n, d, table):
    """``B(n, d)``; the guaranteed deviation is ``B(n, d) * eps``."""
    if n != table.n:
        raise InvalidInputError(f"table has dimension {table.n}, expected {n}")
    d = float(d)
    if not d >= 1.0:
        raise InvalidInputError(f"d must be >= 1, got {d!r}")
    return sqrt(sum(((2 + s) * d + 4 + s) ** 2 for s in table.row_sums()))


def fickett_bound(n, eps):
    """The classical bound ``27 * eps ** (1 / 2**n)``."""
    if n < 2:
        raise InvalidInputError(f"n must be >= 2, got {n}")
    if not eps > 0:
        raise InvalidInputError(f"eps must be positive, got {eps!r}")
    return 27.0 * eps ** (1.0 / 2 ** n)


def _crossover_from_coefficient(n, b):
    m = 2 ** n
    return (27.0 / b) ** (m / (m - 1))


def crossover_epsilon(n, d, table):
    """The ``eps`` at which ``B(n, d) eps`` equals Fickett's bound."""
    return _crossover_from_coefficient(n, stability_bound_coefficient(n, d, table))


def crossover_epsilon_bisect(n, b, iterations=200):
    """
    Solve ``b * eps = 27 * eps ** (1 / 2**n)`` by bisection on ``log eps``.

    Independent of the closed form used by :func:`crossover_epsilon`.
    """
    m = 2 ** n

    def g(u):
        # log(b eps) - log(27 eps^(1/m)) at eps = exp(u); increasing in u.
        return np.log(b) + u - np.log(27.0) - u / m

    lo, hi = -1.0, 1.0
    while g(lo) > 0:
        lo *= 2
    while g(hi) < 0:
        hi *= 2
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return float(np.exp(0.5 * (lo + hi)))


def _require_origin_fixed(pm):
    if np.linalg.norm(pm.origin_image) > MATCH_TOL:
        raise InvalidInputError("f(0) must be 0; recenter the map first")


def recover_isometry_alignment(pm):
    """Isometry ``x -> p.T @ x`` from the canonical alignment of the basis images."""
    _require_origin_fixed(pm)
    frame = canonical_alignment(pm.basis_images())
    return IsometryEstimate(q=frame.q, t=np.zeros(pm.n))


def recover_isometry_procrustes(pm):
    """
    Orthogonal ``q`` minimising ``sum_k ||f(x_k) - q x_k||^2``.

    ``q = u @ v.T`` from the SVD of the cross-covariance
    ``sum_k f(x_k) x_k^T``. Reflections are allowed.
    """
    _require_origin_fixed(pm)
    m = pm.image_points.T @ pm.domain_points
    if not np.any(m):
        raise AmbiguityError("cross-covariance is zero; every orthogonal matrix fits equally well")
    u, _, v = jacobi_svd(m)
    return IsometryEstimate(q=u @ v.T, t=np.zeros(pm.n))


def verify_coordinate_bounds(pm, table, eps):
    """
    Count aligned basis coordinates that leave their constant-table window.

    Checks ``|e'_ij| <= c_ij eps`` below the diagonal and
    ``1 - c_ii eps <= e'_ii <= 1 + eps`` on it, with a ``1e-12`` float
    allowance. Under the admissibility hypothesis the count is zero;
    outside it the count is only reported.
    """
    if table.n != pm.n:
        raise InvalidInputError(f"table has dimension {table.n}, map has {pm.n}")
    e = canonical_alignment(pm.basis_images()).eprime
    c = table.as_array()
    violations = 0
    for i in range(pm.n):
        for j in range(i):
            if abs(e[i, j]) > c[i, j] * eps + COORD_SLACK:
                violations += 1
        if not (1 - c[i, i] * eps - COORD_SLACK <= e[i, i] <= 1 + eps + COORD_SLACK):
            violations += 1
    return violations


def deviations(pm, estimate):
    """``(sup_x ||f(x) - U(x)||, sqrt(sum_x ||f(x) - U(x)||^2))`` over ``D``."""
    res = np.linalg.norm(pm.image_points - estimate(pm.domain_points), axis=1)
    return float(np.max(res)), float(np.sqrt(np.sum(res * res)))


def certify(pm, table, recenter_map=False):
    """
    Measure, recover, and check a point map against the deviation bound.

    Parameters
    ----------
    pm : PointMap
    table : ConstantTable
        Must have the map's dimension.
    recenter_map : bool
        Subtract ``f(0)`` before analysis. Without it, a map with
        ``f(0) != 0`` is reported as inadmissible.

    Returns
    -------
    StabilityReport
        Deviations are measured on the original map; when recentered the
        recovered isometries carry ``t = f(0)``.
    """
    if table.n != pm.n:
        raise InvalidInputError(f"table has dimension {table.n}, map has {pm.n}")
    offset = np.array(pm.origin_image)
    origin_fixed = bool(np.linalg.norm(offset) <= MATCH_TOL)
    if recenter_map:
        eps = distortion(recenter(pm))
    else:
        eps = distortion(pm, anchor_origin=True)
    budget = epsilon_sup(table)
    admissible = (recenter_map or origin_fixed) and eps < budget.eps_sup
    coefficient = stability_bound_coefficient(pm.n, pm.d, table)
    bound_value = coefficient * eps

    # Recovery always runs on an origin-fixed map so it can be reported
    # even when the hypothesis fails; deviations are translation-free.
    if recenter_map or not origin_fixed:
        work, shift = recenter(pm), offset
    else:
        work, shift = pm, np.zeros(pm.n)
    align = recover_isometry_alignment(work)
    procr = recover_isometry_procrustes(work)
    sup_a, frob_a = deviations(work, align)
    sup_p, frob_p = deviations(work, procr)
    violations = verify_coordinate_bounds(work, table, eps)

    if not admissible:
        verdict = Verdict.INADMISSIBLE_EPSILON
    elif sup_a <= bound_value + BOUND_SLACK:
        verdict = Verdict.CERTIFIED
    else:
        verdict = Verdict.BOUND_VIOLATED
    return StabilityReport(
        epsilon_measured=eps,
        eps_sup=budget.eps_sup,
        admissible=admissible,
        bound_coefficient=coefficient,
        bound_value=bound_value,
        sup_deviation_alignment=sup_a,
        sup_deviation_procrustes=sup_p,
        frobenius_deviation_alignment=frob_a,
        frobenius_deviation_procrustes=frob_p,
        coordinate_bound_violations=violations,
        verdict=verdict,
        alignment=IsometryEstimate(align.q, shift),
        procrustes=IsometryEstimate(procr.q, shift),
        recentered=recenter_map,
    )
