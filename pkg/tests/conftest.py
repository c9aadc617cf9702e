import numpy as np
import pytest

from falsikit import ShearBuildingModel


@pytest.fixture(scope="session")
def building():
    """Three-story shear building on a 500 Mg base (desk-scale benchmark)."""
    return ShearBuildingModel(
        story_masses=(300.0, 300.0, 300.0),
        story_stiffnesses=(40.0, 40.0, 40.0),
        base_mass=500.0,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
