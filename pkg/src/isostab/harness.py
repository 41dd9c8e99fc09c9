"""
Seeded synthetic point maps and the Monte Carlo certification driver.

Seeds
-----
Every random draw is keyed by an integer seed. Per-trial seeds come from
the root seed through SplitMix64::

    trial_seed = mix64(mix64(root) ^ index)

and each trial splits its own seed the same way into three streams
(0: domain cloud, 1: rotation, 2: noise). Trials therefore depend only
on ``(root, index)``, not on execution order.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import Mode, build_constant_table, epsilon_sup
from .errors import GenerationError, InvalidInputError
from .linalg import random_orthogonal
from .stability import PointMap, Verdict, certify, distortion

__all__ = [
    "mix64",
    "derive_seed",
    "ExperimentConfig",
    "TrialRecord",
    "ExperimentSummary",
    "random_point_cloud",
    "noise_field",
    "perturbed_isometry",
    "trial_point_map",
    "run_trial",
    "run_experiment",
]

MASK64 = (1 << 64) - 1
WINDOW_LOW = 0.8
MAX_BISECTION = 60


def mix64(z):
    """SplitMix64 finalizer on a 64-bit integer."""
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(root, index):
    return mix64(mix64(int(root) & MASK64) ^ (int(index) & MASK64))


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    d: float
    eps_target: float
    trials: int = 1000
    extra_points: int = 20
    seed: int = 0
    mode: Mode = Mode.PAPER

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.trials < 1:
            raise InvalidInputError(f"trials must be >= 1, got {self.trials}")
        if self.extra_points < 0:
            raise InvalidInputError(f"extra_points must be >= 0, got {self.extra_points}")
        if not self.d >= 1:
            raise InvalidInputError(f"d must be >= 1, got {self.d}")
        budget = epsilon_sup(build_constant_table(self.n, self.mode)).eps_sup
        if not 0 < self.eps_target or not Fraction(self.eps_target) < budget:
            raise InvalidInputError(
                f"eps_target={self.eps_target} must lie in (0, {budget}) for n={self.n}, "
                f"mode={self.mode.value}"
            )

    def table(self):
        return build_constant_table(self.n, self.mode)


@dataclass(frozen=True)
class TrialRecord:
    index: int
    seed: int
    epsilon_measured: float
    sup_deviation: float
    bound: float
    ratio: float
    certified: bool
    coordinate_violations: int
    frobenius_alignment: float
    frobenius_procrustes: float


@dataclass(frozen=True)
class ExperimentSummary:
    trials_run: int
    certified_count: int
    max_ratio: float
    mean_ratio: float
    max_coordinate_violations: int
    records: tuple

    @classmethod
    def from_records(cls, records):
        records = tuple(sorted(records, key=lambda r: r.index))
        ratios = np.array([r.ratio for r in records])
        return cls(
            trials_run=len(records),
            certified_count=sum(r.certified for r in records),
            max_ratio=float(ratios.max()),
            mean_ratio=float(ratios.mean()),
            max_coordinate_violations=max(r.coordinate_violations for r in records),
            records=records,
        )


def random_point_cloud(n, d, extra_points, seed):
    """
    ``{0, e_1, ..., e_n}`` followed by ``extra_points`` uniform draws from
    the closed ball of radius ``d`` (rejection sampling from the cube).
    """
    if not d >= 1:
        raise InvalidInputError(f"d must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    pts = [np.zeros(n)] + list(np.eye(n))
    while len(pts) < n + 1 + extra_points:
        x = rng.uniform(-d, d, size=n)
        if x @ x <= d * d:
            pts.append(x)
    return np.array(pts)


def _unit_noise(rng, m, n):
    # Uniform direction, magnitude uniform in [0, 1].
    g = rng.standard_normal((m, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * rng.uniform(0.0, 1.0, size=(m, 1))


def noise_field(cloud, seed):
    """Seeded per-point noise of norm at most 1, zero at the origin."""
    cloud = np.asarray(cloud, dtype=float)
    eta = _unit_noise(np.random.default_rng(seed), *cloud.shape)
    eta[np.all(cloud == 0.0, axis=1)] = 0.0
    return eta


def perturbed_isometry(cloud, q0, eps_target, seed, d=None):
    """
    Images ``q0 x + s * eta_x`` with distortion in ``[0.8, 1] * eps_target``.

    ``eta`` comes from :func:`noise_field`. The global scale ``s`` starts
    from a linear estimate and is refined by bisection (at most 60 steps).

    Raises
    ------
    GenerationError
        If the distortion window cannot be reached.
    """
    cloud = np.asarray(cloud, dtype=float)
    if d is None:
        d = max(1.0, float(np.max(np.linalg.norm(cloud, axis=1))))
    if not eps_target > 0:
        raise InvalidInputError(f"eps_target must be positive, got {eps_target}")
    eta = noise_field(cloud, seed)
    base = cloud @ np.asarray(q0).T

    def build(s):
        return PointMap(cloud, base + s * eta, d)

    def measure(s):
        return distortion(build(s))

    lo, hi = WINDOW_LOW * eps_target, eps_target
    unit = measure(1.0)
    if unit == 0.0:
        raise GenerationError("noise has zero effect on distortion")
    s = 0.9 * eps_target / unit
    lo_s, hi_s = 0.0, None
    for _ in range(MAX_BISECTION):
        val = measure(s)
        if lo <= val <= hi:
            return build(s)
        if val > hi:
            hi_s = s
        else:
            lo_s = s
        s = 2.0 * s if hi_s is None else 0.5 * (lo_s + hi_s)
    raise GenerationError(f"could not bring distortion into [{lo}, {hi}]")


def trial_point_map(config, index):
    """The seeded point map for trial ``index`` and its trial seed."""
    seed = derive_seed(config.seed, index)
    cloud = random_point_cloud(config.n, config.d, config.extra_points, derive_seed(seed, 0))
    q0 = random_orthogonal(config.n, derive_seed(seed, 1))
    try:
        pm = perturbed_isometry(cloud, q0, config.eps_target, derive_seed(seed, 2), d=config.d)
    except GenerationError as exc:
        raise GenerationError(f"trial {index}: {exc}") from exc
    return pm, seed


def run_trial(config, index, table=None):
    table = config.table() if table is None else table
    pm, seed = trial_point_map(config, index)
    report = certify(pm, table)
    return TrialRecord(
        index=index,
        seed=seed,
        epsilon_measured=report.epsilon_measured,
        sup_deviation=report.sup_deviation_alignment,
        bound=report.bound_value,
        ratio=report.ratio,
        certified=report.verdict is Verdict.CERTIFIED,
        coordinate_violations=report.coordinate_bound_violations,
        frobenius_alignment=report.frobenius_deviation_alignment,
        frobenius_procrustes=report.frobenius_deviation_procrustes,
    )


def _run_chunk(args):
    config, indices = args
    table = config.table()
    return [run_trial(config, i, table) for i in indices]


def run_experiment(config, workers=1):
    """Run ``config.trials`` independent trials and summarise them.

    ``workers > 1`` spreads trials over processes; results are identical.
    """
    indices = list(range(config.trials))
    if workers <= 1:
        records = _run_chunk((config, indices))
    else:
        chunks = [(config, indices[w::workers]) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = [r for part in pool.map(_run_chunk, chunks) for r in part]
    return ExperimentSummary.from_records(records)
