import numpy as np
import pytest

from ordmech.core import MetricInstance
from ordmech.ordinal import induce_preferences

LINE_POINTS = [0, 1, 3, 7]


def line_instance(points):
    return MetricInstance([[abs(a - b) for b in points] for a in points])


@pytest.fixture
def inst_a():
    """Points 0, 1, 3, 7 on a line; total weight 23."""
    return line_instance(LINE_POINTS)


@pytest.fixture
def prof_a(inst_a):
    return induce_preferences(inst_a)


def uniform_instance(n, c=1.0):
    return MetricInstance(c * (np.ones((n, n)) - np.eye(n)))
