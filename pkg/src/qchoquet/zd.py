"""Finite quantum system with positions in Z_d, d odd.

Position states are the standard basis; momentum states are the columns of
the Fourier matrix ``F[r, s] = omega^{rs} / sqrt(d)``.  Displacements
``D(a, b) = Z^a X^b omega^{-a b / 2}`` use the inverse of 2 in ``Z_d``,
``(d + 1) / 2``, which is why even ``d`` is rejected.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EvenDimension, FiducialWarning, NotNormalized
from .hermitian import HermitianMatrix

NORM_TOL = 1e-10


@dataclass(frozen=True, init=False)
class ZdSystem:
    d: int
    omega: complex = field(repr=False)
    fourier: np.ndarray = field(repr=False)

    def __init__(self, d: int):
        if d < 3 or d % 2 == 0:
            raise EvenDimension(
                f"d must be an odd integer >= 3 (2 needs an inverse mod d), got {d}"
            )
        omega = np.exp(2j * np.pi / d)
        r = np.arange(d)
        f = omega ** np.outer(r, r) / np.sqrt(d)
        f.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "omega", complex(omega))
        object.__setattr__(self, "fourier", f)

    @property
    def half(self) -> int:
        """Inverse of 2 modulo d."""
        return (self.d + 1) // 2

    def position_state(self, r: int) -> np.ndarray:
        v = np.zeros(self.d, dtype=np.complex128)
        v[r % self.d] = 1.0
        return v

    def momentum_state(self, r: int) -> np.ndarray:
        return self.fourier[:, r % self.d].copy()

    def z(self, alpha: int = 1) -> np.ndarray:
        m = np.arange(self.d)
        return np.diag(self.omega ** ((alpha * m) % self.d))

    def x(self, beta: int = 1) -> np.ndarray:
        # |m> -> |m + beta>
        return np.roll(np.eye(self.d, dtype=np.complex128), beta % self.d, axis=0)


def position_projectors(sys: ZdSystem) -> list[HermitianMatrix]:
    return [HermitianMatrix.projector(sys.position_state(r)) for r in range(sys.d)]


def momentum_projectors(sys: ZdSystem) -> list[HermitianMatrix]:
    return [HermitianMatrix.projector(sys.momentum_state(r)) for r in range(sys.d)]


def displacement(sys: ZdSystem, alpha: int, beta: int) -> np.ndarray:
    d = sys.d
    alpha, beta = alpha % d, beta % d
    phase = sys.omega ** ((-sys.half * alpha * beta) % d)
    return phase * (sys.z(alpha) @ sys.x(beta))


def default_fiducial(d: int) -> np.ndarray:
    """Normalized ``(1, 1, ..., 1, 0)``."""
    v = np.ones(d, dtype=np.complex128)
    v[-1] = 0.0
    return v / np.linalg.norm(v)


def _check_normalized(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).ravel()
    if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
        raise NotNormalized(f"vector norm is {np.linalg.norm(v):.12g}")
    return v


@dataclass(frozen=True)
class CoherentFamily:
    system: ZdSystem
    fiducial: np.ndarray
    states: dict = field(repr=False)  # (alpha, beta) -> state vector

    def state(self, alpha: int, beta: int) -> np.ndarray:
        d = self.system.d
        return self.states[(alpha % d, beta % d)]

    def projector(self, alpha: int, beta: int) -> HermitianMatrix:
        return HermitianMatrix.projector(self.state(alpha, beta))

    @property
    def projectors(self) -> dict[tuple[int, int], HermitianMatrix]:
        return {k: HermitianMatrix.projector(v) for k, v in self.states.items()}

    def resolution_residual(self) -> float:
        """``||(1/d) sum P(a, b) - 1||_F``."""
        d = self.system.d
        total = sum(np.outer(v, v.conj()) for v in self.states.values())
        return float(np.linalg.norm(total / d - np.eye(d)))


def coherent_family(sys: ZdSystem, fiducial=None) -> CoherentFamily:
    """The ``d^2`` coherent states ``D(a, b)|g>``.

    A fiducial that coincides with a position or momentum state (overlap
    above ``1 - 1e-9``) gives a degenerate family; this is warned about,
    not rejected.
    """
    g = default_fiducial(sys.d) if fiducial is None else _check_normalized(fiducial)
    for basis in (sys.position_state, sys.momentum_state):
        for r in range(sys.d):
            if abs(np.vdot(basis(r), g)) > 1 - 1e-9:
                warnings.warn("fiducial is a position or momentum state", FiducialWarning)
    states = {}
    for a in range(sys.d):
        for b in range(sys.d):
            states[(a, b)] = displacement(sys, a, b) @ g
    return CoherentFamily(sys, g, states)


@dataclass(frozen=True)
class StateExpansion:
    position: np.ndarray  # f_r = <X;r|f>
    coherent: dict  # (alpha, beta) -> <alpha,beta|f>

    def resum(self, family: CoherentFamily) -> np.ndarray:
        d = family.system.d
        return sum(c * family.state(*k) for k, c in self.coherent.items()) / d


def expand_state(family: CoherentFamily, f) -> StateExpansion:
    f = _check_normalized(f)
    pos = f.copy()
    coh = {k: complex(np.vdot(v, f)) for k, v in family.states.items()}
    return StateExpansion(pos, coh)
