import numpy as np
import pytest

from beztopo import fixtures, geometry


@pytest.fixture
def trefoil_polygon():
    return fixtures.trefoil_polygon()


@pytest.fixture
def trefoil_curve(trefoil_polygon):
    return geometry.BezierCurve.from_polygon(trefoil_polygon)


@pytest.fixture
def equilateral_polygon():
    return fixtures.equilateral_polygon()


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def random_closed_polygon(rng, n_distinct, scale=5.0):
    pts = rng.uniform(-scale, scale, (n_distinct, 3))
    return geometry.ControlPolygon.from_open_vertices(pts)
