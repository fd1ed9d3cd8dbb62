import math

import pytest
from hypothesis import HealthCheck, settings

from indicatorlab.measures import AngularMeasure, Order, uniform_measure

settings.register_profile(
    "suite", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.load_profile("suite")

PI = math.pi


@pytest.fixture(scope="session")
def example3():
    return AngularMeasure(atoms=((0.0, 1.0), (2 * PI / 3, 1.0), (4 * PI / 3, 1.0)))


@pytest.fixture(scope="session")
def example2_rho3():
    rho = 3.0
    return AngularMeasure(atoms=((PI / rho, 1.0), (2 * PI / rho, 1.0),
                                 (4 * PI / rho, 1.0), (5 * PI / rho, 1.0)))


@pytest.fixture(scope="session")
def unit_uniform():
    return uniform_measure(1.0)


def symmetrized_measure(rng, order: Order, n_pairs: int = 3) -> AngularMeasure:
    """Random atoms paired with their half-period translates: the matching
    trigonometric moment cancels pairwise."""
    atoms = []
    hp = PI / order.rho
    for _ in range(n_pairs):
        t = rng.uniform(0.0, 2 * PI)
        m = rng.uniform(0.2, 1.0)
        atoms.append((t, m))
        atoms.append((t + hp, m))
    return AngularMeasure(atoms=tuple(atoms))
