import os

import pytest

from soscert import problem_io

DATA = os.path.join(os.path.dirname(__file__), "data")


def data_path(name):
    return os.path.join(DATA, name)


def load_problem(name):
    with open(data_path(name), encoding="utf-8") as fh:
        return problem_io.parse_problem(fh.read())


def load_certificate(name, expected_vars=None):
    with open(data_path(name), encoding="utf-8") as fh:
        cert, _ = problem_io.parse_certificate(fh.read(), expected_vars)
    return cert


@pytest.fixture
def four_points():
    return load_problem("four_points.prob")


@pytest.fixture
def cusp_circle():
    return load_problem("cusp_circle.prob")


@pytest.fixture
def cusp_circle_shifted():
    return load_problem("cusp_circle_shifted.prob")


@pytest.fixture
def double_origin():
    return load_problem("double_origin.prob")
