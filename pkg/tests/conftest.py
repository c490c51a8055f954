import pytest

from ctdiam import box_body, build_mesh, simplex_body, validate_body


@pytest.fixture(scope="session")
def simplex1():
    return simplex_body(1)


@pytest.fixture(scope="session")
def simplex2():
    return simplex_body(2)


@pytest.fixture(scope="session")
def simplex3():
    return simplex_body(3)


@pytest.fixture(scope="session")
def square():
    return box_body(2)


@pytest.fixture(scope="session")
def skew_body():
    # {x, y >= 0 : x + 2y <= 2, 2x + y <= 2}; gauge((1,1)) = 3/2
    return validate_body([(("1", "2"), "2"), (("2", "1"), "2")], 2)


@pytest.fixture(scope="session")
def wide_simplex():
    # the simplex conv{0, 2e1, e2}, given with one redundant halfspace
    return validate_body([(("1", "0"), "2"), (("1", "2"), "2")], 2)


@pytest.fixture(scope="session")
def mesh5():
    return build_mesh({"kind": "interval", "a": -1, "b": 1, "count": 5, "spacing": "uniform"})


@pytest.fixture(scope="session")
def mesh7():
    return build_mesh({"kind": "interval", "a": -1, "b": 1, "count": 7, "spacing": "uniform"})


@pytest.fixture(scope="session")
def cheb401():
    return build_mesh({"kind": "interval", "a": -1, "b": 1, "count": 401, "spacing": "chebyshev-nodes"})


@pytest.fixture(scope="session")
def circle64():
    return build_mesh({"kind": "circle", "center": 0, "radius": 1, "count": 64})


@pytest.fixture(scope="session")
def circle256():
    return build_mesh({"kind": "circle", "center": 0, "radius": 1, "count": 256})


@pytest.fixture(scope="session")
def torus16():
    return build_mesh({"kind": "torus", "counts": [16, 16]})


@pytest.fixture(scope="session")
def box_mesh():
    return build_mesh({"kind": "box2d", "x": [0, 1], "y": [0, 1], "counts": [5, 5]})
