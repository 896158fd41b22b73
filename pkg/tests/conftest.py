from __future__ import annotations

import json

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from thermopiezo.material import IsoMaterial, default_material

ISO_ATTRS = (
    "alpha4", "gamma", "lam", "mu", "gamma1", "gamma2", "gamma3", "gamma4", "gamma5",
    "lambda_star", "mu_star", "alpha0", "beta0", "lambda_tilde", "mu_tilde",
    "alpha14", "alpha33", "alpha47", "alpha66", "a44",
)


@pytest.fixture
def fixture_material() -> IsoMaterial:
    return default_material()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def material_file(tmp_path):
    def write(data: dict, name: str = "material.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write


def random_iso(rng: np.random.Generator, scale: float = 2.0) -> IsoMaterial:
    values = {a: float(rng.uniform(-scale, scale)) for a in ISO_ATTRS}
    return IsoMaterial(rho=float(rng.uniform(0.5, 2)), T0=float(rng.uniform(0.5, 2)),
                       beta=float(rng.uniform(0.5, 2)), **values)


def random_rotations(n: int, seed: int) -> np.ndarray:
    return Rotation.random(n, random_state=seed).as_matrix()


def rotate(a: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Apply ``R`` to every index of a Cartesian tensor."""
    for axis in range(a.ndim):
        a = np.moveaxis(np.tensordot(R, a, axes=([1], [axis])), 0, axis)
    return a
