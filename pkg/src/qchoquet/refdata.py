"""Reference example: d=3, n=4 non-commuting observables and golden values.

The reference table lists ``theta({4})[1][1] = 0.02`` (kept here as
``THETA_4_TABLE_TYPO``).  That value contradicts the reference expectation
value 0.170 and both reference reconstructions; all of them follow from
0.2, which is what ``THETA_4`` uses.
"""

from __future__ import annotations

import numpy as np

from .capacity import MatrixCapacity, build_lattice, power_set
from .hermitian import HermitianMatrix

THETA_1 = HermitianMatrix([[0.15, 0.05, 0.05], [0.05, 0.05, 0], [0.05, 0, 0.1]])
THETA_2 = HermitianMatrix([[0.25, 0.1, 0.05], [0.1, 0.05, 0], [0.05, 0, 0.15]])
THETA_3 = HermitianMatrix([[0.3, 0.05, 0.1], [0.05, 0.05, 0], [0.1, 0, 0.05]])
THETA_4 = HermitianMatrix([[0.2, 0.04j, 0.1j], [-0.04j, 0.2, 0.02], [-0.1j, 0.02, 0.1]])
THETA_4_TABLE_TYPO = HermitianMatrix([[0.2, 0.04j, 0.1j], [-0.04j, 0.02, 0.02], [-0.1j, 0.02, 0.1]])

SINGLETONS = (THETA_1, THETA_2, THETA_3, THETA_4)

R_TRUE = HermitianMatrix(np.array([[3, 3, 0], [3, 4, 1j], [0, -1j, 3]]) / 10)

EV = (0.125, 0.200, 0.155, 0.170)
R_TRUE_EIGENVALUES = (0.030, 0.300, 0.670)
SIGMA = (1, 3, 4, 2)
INCREMENTS = (0.030, 0.015, 0.030)


def _weights(choice: int) -> dict[tuple[int, ...], dict[int, float]]:
    w: dict[tuple[int, ...], dict[int, float]] = {}
    for a in power_set(4):
        s = set(a)
        if len(s) < 2 or len(s) == 4:
            continue
        per = {}
        if {1, 2} <= s:
            per[2] = 1.3
        if {2, 3} <= s:
            per[3] = 1.2
        if choice == 2 and {2, 4} <= s:
            per[4] = 1.2
        if per:
            w[a] = per
    return w


WEIGHTS = {1: _weights(1), 2: _weights(2)}


def lattice(choice: int, singletons=SINGLETONS) -> MatrixCapacity:
    if choice not in (1, 2):
        raise ValueError("choice must be 1 or 2")
    return build_lattice(singletons, WEIGHTS[choice])


# Reference results, three decimals.  Coefficients of theta({2}), theta({3}),
# theta({4}) in the Choquet integral after expanding the chain.
GOLDEN = {
    1: {
        "coefficients": (0.075, 0.036, 0.045),
        "r1": np.array(
            [
                [0.545, 0.131 + 0.025j, 0.104 + 0.063j],
                [0.131 - 0.025j, 0.205, 0.012],
                [0.104 - 0.063j, 0.012, 0.248],
            ]
        ),
        "eigenvalues": (0.147, 0.223, 0.630),
        "reproduced": (0.140, 0.220, 0.220, 0.190),
        "errors": (0.104, 0.080, 0.393, 0.129),
    },
    2: {
        "coefficients": (0.075, 0.036, 0.054),
        "r1": np.array(
            [
                [0.536, 0.123 + 0.028j, 0.097 + 0.071j],
                [0.123 - 0.028j, 0.217, 0.014],
                [0.097 - 0.071j, 0.014, 0.245],
            ]
        ),
        "eigenvalues": (0.158, 0.222, 0.619),
        "reproduced": (0.138, 0.216, 0.216, 0.192),
        "errors": (0.120, 0.100, 0.419, 0.117),
    },
}

VALUE_TOL = 0.001
ERROR_TOL = 0.002

# Orthogonal-projector example defaults.
PROJECTOR_SPECTRUM = (0.1, 0.3, 0.6)
PROJECTOR_LAMBDAS = (0.0, 0.25, 0.5, 0.75)
