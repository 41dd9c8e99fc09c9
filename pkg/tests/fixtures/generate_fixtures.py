"""Regenerate the point-map fixtures used by the CLI tests.

    python tests/fixtures/generate_fixtures.py
"""
from pathlib import Path

import numpy as np

from isostab.harness import ExperimentConfig, random_point_cloud, trial_point_map
from isostab.linalg import random_orthogonal
from isostab.pointmap_io import write_point_map
from isostab.stability import PointMap

HERE = Path(__file__).parent


def main():
    config = ExperimentConfig(n=4, d=2.0, eps_target=1 / 200, trials=1, extra_points=20, seed=42)
    pm, _ = trial_point_map(config, 0)
    write_point_map(HERE / "perturbed_rotation_n4.json", pm)

    cloud = random_point_cloud(3, 1.0, 5, seed=3)
    write_point_map(HERE / "identity_n3.json", PointMap(cloud, cloud, 1.0))

    cloud = random_point_cloud(4, 1.0, 8, seed=4)
    q0 = random_orthogonal(4, 5)
    images = cloud @ q0.T
    images[1:] += 0.05 * np.random.default_rng(6).standard_normal(images[1:].shape)
    write_point_map(HERE / "over_budget_n4.json", PointMap(cloud, images, 1.0))


if __name__ == "__main__":
    main()
