from fractions import Fraction

import pytest

from mirror_stokes.pipeline import RunSettings, run_stokes_pipeline

Q = Fraction

# Reference data for f = x + x^-3, alpha = e^{i pi/8}
S_BETA_13 = [[1, -1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]]
S_GRAM_13 = [[1, 1, 1, 2], [0, 1, 1, 1], [0, 0, 1, 1], [0, 0, 0, 1]]
A_BETA1_13 = [[0, 1, 0, 0], [1, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]

T_13 = [
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
    [[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]],
    [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]],
]
B_13 = [
    [[1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
    [[0, 0, 1], [1, 0, 0], [1, 0, 0], [0, 1, 0]],
    [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 0]],
    [[1, 0, 0], [0, 0, 1], [1, 0, 0], [0, 1, 0]],
]
U_13 = [[1, -1, 0, 0], [0, 1, -1, 0], [1, 0, 0, -1], [1, 0, -1, 0]]

# theta * nabla_{d/dtheta} = theta d/dtheta + M, entries as {power: coeff}
GM_13 = [
    [{}, {-1: Q(4, 3)}, {}, {}],
    [{}, {0: Q(1, 3)}, {-1: Q(4, 3)}, {}],
    [{}, {}, {0: Q(2, 3)}, {-1: Q(4, 3)}],
    [{-1: Q(4)}, {}, {}, {0: Q(1)}],
]
C_13 = [[0, Q(4, 3), 0, 0], [0, 0, Q(4, 3), 0], [0, 0, 0, Q(4, 3)], [4, 0, 0, 0]]
MU_13 = [Q(-1, 2), Q(-1, 6), Q(1, 6), Q(1, 2)]


@pytest.fixture(scope="session")
def manifest_13():
    return run_stokes_pipeline(RunSettings("x + x^-3", "pi/8"))


@pytest.fixture(scope="session")
def manifest_11():
    return run_stokes_pipeline(RunSettings("x + x^-1", "pi/8"))
