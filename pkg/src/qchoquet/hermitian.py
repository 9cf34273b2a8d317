"""Hermitian matrices, a cyclic Jacobi eigensolver and the Loewner order.

Everything downstream (capacities, Choquet integrals, reconstruction) is
built on :class:`HermitianMatrix`.  Instances are immutable: the backing
array is copied on construction and marked read-only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NonConvergence,
    NotADensityMatrix,
    NotHermitian,
)

# Relative thresholds; see docs/formats.md for how they combine with norms.
HERMITIAN_REPAIR_TOL = 1e-9
PSD_TOL = 1e-10
EQUAL_TOL = 1e-10
DEGENERACY_TOL = 1e-9
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
DENSITY_TRACE_TOL = 1e-9


class HermitianMatrix:
    """A d x d complex Hermitian matrix.

    Inputs are accepted when ``||H - H^dagger||_F <= 1e-9 * ||H||_F`` and
    are then symmetrized to ``(H + H^dagger) / 2``; anything less symmetric
    raises :class:`NotHermitian`.
    """

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(entries, dtype=np.complex128)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NotHermitian("matrix has non-finite entries")
        asym = np.linalg.norm(a - a.conj().T)
        if asym > HERMITIAN_REPAIR_TOL * np.linalg.norm(a):
            raise NotHermitian(f"asymmetry ||H - H^+||_F = {asym:.3g} exceeds tolerance")
        a = 0.5 * (a + a.conj().T)
        a.setflags(write=False)
        self._a = a

    @classmethod
    def _wrap(cls, a: np.ndarray) -> "HermitianMatrix":
        # trusted internal path: a is already Hermitian up to round-off
        obj = cls.__new__(cls)
        a = 0.5 * (a + a.conj().T)
        a.setflags(write=False)
        obj._a = a
        return obj

    @classmethod
    def identity(cls, d: int) -> "HermitianMatrix":
        return cls._wrap(np.eye(d, dtype=np.complex128))

    @classmethod
    def zeros(cls, d: int) -> "HermitianMatrix":
        return cls._wrap(np.zeros((d, d), dtype=np.complex128))

    @classmethod
    def diag(cls, values: Sequence[float]) -> "HermitianMatrix":
        return cls._wrap(np.diag(np.asarray(values, dtype=float)).astype(np.complex128))

    @classmethod
    def projector(cls, vector) -> "HermitianMatrix":
        """Rank-1 projector onto ``vector`` (normalized internally)."""
        v = np.asarray(vector, dtype=np.complex128).ravel()
        v = v / np.linalg.norm(v)
        return cls._wrap(np.outer(v, v.conj()))

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    def trace(self) -> float:
        return float(np.trace(self._a).real)

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self._a))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._a
        return self._a.astype(dtype)

    def _check_other(self, other: "HermitianMatrix") -> np.ndarray:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")
        return other._a

    def __add__(self, other):
        b = self._check_other(other)
        if b is NotImplemented:
            return NotImplemented
        return HermitianMatrix._wrap(self._a + b)

    def __sub__(self, other):
        b = self._check_other(other)
        if b is NotImplemented:
            return NotImplemented
        return HermitianMatrix._wrap(self._a - b)

    def __neg__(self):
        return HermitianMatrix._wrap(-self._a)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float, np.integer, np.floating)):
            return HermitianMatrix._wrap(float(scalar) * self._a)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, float, np.integer, np.floating)):
            return HermitianMatrix._wrap(self._a / float(scalar))
        return NotImplemented

    def __matmul__(self, other):
        return self._a @ np.asarray(other)

    def __eq__(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    __hash__ = None

    def allclose(self, other, atol: float = 1e-10) -> bool:
        return bool(np.allclose(self._a, np.asarray(other), rtol=0.0, atol=atol))

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim}, entries={np.array2string(self._a, precision=4)})"


def as_hermitian(x) -> HermitianMatrix:
    if isinstance(x, HermitianMatrix):
        return x
    return HermitianMatrix(x)


def _require_same_dim(a: HermitianMatrix, b: HermitianMatrix) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension {a.dim} vs {b.dim}")


# ---------------------------------------------------------------------------
# Eigendecomposition


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and matching rank-1 eigenprojectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, orthonormal

    @property
    def projectors(self) -> list[HermitianMatrix]:
        return [HermitianMatrix.projector(self.eigenvectors[:, r]) for r in range(len(self.eigenvalues))]

    def reconstruct(self) -> HermitianMatrix:
        v = self.eigenvectors
        return HermitianMatrix._wrap((v * self.eigenvalues) @ v.conj().T)

    def degenerate_groups(self, rel_tol: float = DEGENERACY_TOL) -> list[list[int]]:
        """Indices of eigenvalues equal within ``rel_tol * max(1, max|e|)``."""
        e = self.eigenvalues
        scale = max(1.0, float(np.max(np.abs(e)))) if len(e) else 1.0
        groups: list[list[int]] = []
        for r, val in enumerate(e):
            if groups and abs(val - e[groups[-1][-1]]) <= rel_tol * scale:
                groups[-1].append(r)
            else:
                groups.append([r])
        return groups


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(a: np.ndarray, tol: float | None = None, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic complex Jacobi on a Hermitian array.

    Pairs ``(p, q)`` are visited in row-major order.  Returns unsorted
    eigenvalues and the unitary whose columns are the eigenvectors.
    """
    a = np.array(a, dtype=np.complex128)
    d = a.shape[0]
    v = np.eye(d, dtype=np.complex128)
    if tol is None:
        tol = JACOBI_TOL * np.linalg.norm(a)
    for _ in range(max_sweeps):
        if _off_norm(a) <= tol:
            return np.diag(a).real.copy(), v
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) on (p, q) composed with a real rotation
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    if _off_norm(a) <= tol:
        return np.diag(a).real.copy(), v
    raise NonConvergence(
        f"off-diagonal norm {_off_norm(a):.3g} still above {tol:.3g} after {max_sweeps} sweeps"
    )


def eigendecompose(h, tol: float | None = None) -> EigenDecomposition:
    """Eigendecomposition with eigenvalues in ascending order.

    ``tol`` bounds the off-diagonal Frobenius norm at convergence and
    defaults to ``1e-12 * ||H||_F``.  Sorting is stable, so the result is
    deterministic for a fixed input.
    """
    h = as_hermitian(h)
    if tol is not None and tol <= 0:
        raise ValueError("tol must be positive")
    vals, vecs = jacobi_eigh(h.array, tol)
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return EigenDecomposition(vals, vecs)


def eigenvalues(h, tol: float | None = None) -> np.ndarray:
    return eigendecompose(h, tol).eigenvalues


# ---------------------------------------------------------------------------
# Definiteness and the Loewner order


class Relation(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    INCOMPARABLE = "Incomparable"


class Definiteness(enum.Enum):
    PSD = "PositiveSemiDefinite"
    NSD = "NegativeSemiDefinite"
    ZERO = "Zero"
    INDEFINITE = "Indefinite"


_DEFINITENESS_OF = {
    Relation.GREATER: Definiteness.PSD,
    Relation.LESS: Definiteness.NSD,
    Relation.EQUAL: Definiteness.ZERO,
    Relation.INCOMPARABLE: Definiteness.INDEFINITE,
}


@dataclass(frozen=True)
class OrderClassification:
    relation: Relation
    difference: Definiteness

    @property
    def comparable(self) -> bool:
        return self.relation is not Relation.INCOMPARABLE

    def __eq__(self, other):
        if isinstance(other, Relation):
            return self.relation is other
        if isinstance(other, OrderClassification):
            return self.relation is other.relation and self.difference is other.difference
        return NotImplemented

    def __hash__(self):
        return hash((self.relation, self.difference))


@dataclass(frozen=True)
class SpectralInterval:
    lo: float
    hi: float

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def psd_threshold(h: HermitianMatrix) -> float:
    return PSD_TOL * max(1.0, h.norm())


def is_positive_semidefinite(h, tol: float | None = None) -> bool:
    """``e_1(H) >= -tol``; default ``tol = 1e-10 * max(1, ||H||_F)``."""
    h = as_hermitian(h)
    if tol is None:
        tol = psd_threshold(h)
    return bool(eigenvalues(h)[0] >= -tol)


def is_negative_semidefinite(h, tol: float | None = None) -> bool:
    return is_positive_semidefinite(-as_hermitian(h), tol)


def loewner_compare(a, b, tol: float | None = None) -> OrderClassification:
    """Classify ``a - b`` as PSD (Greater), NSD (Less), zero or indefinite.

    ``tol`` overrides the eigenvalue threshold; equality always uses
    ``||a - b||_F < 1e-10 * max(1, ||a||_F, ||b||_F)``.
    """
    a = as_hermitian(a)
    b = as_hermitian(b)
    _require_same_dim(a, b)
    diff = a - b
    if diff.norm() < EQUAL_TOL * max(1.0, a.norm(), b.norm()):
        rel = Relation.EQUAL
    else:
        e = eigenvalues(diff)
        eps = psd_threshold(diff) if tol is None else tol
        if e[0] >= -eps:
            rel = Relation.GREATER
        elif e[-1] <= eps:
            rel = Relation.LESS
        else:
            rel = Relation.INCOMPARABLE
    return OrderClassification(rel, _DEFINITENESS_OF[rel])


def loewner_geq(a, b, tol: float | None = None) -> bool:
    """``a`` succeeds-or-equals ``b``."""
    return loewner_compare(a, b, tol).relation in (Relation.GREATER, Relation.EQUAL)


def loewner_leq(a, b, tol: float | None = None) -> bool:
    return loewner_compare(a, b, tol).relation in (Relation.LESS, Relation.EQUAL)


def spectral_interval(h) -> SpectralInterval:
    e = eigenvalues(h)
    return SpectralInterval(float(e[0]), float(e[-1]))


def is_density_matrix(r, tol: float = DENSITY_TRACE_TOL) -> bool:
    r = as_hermitian(r)
    return abs(r.trace() - 1.0) <= tol and is_positive_semidefinite(r)


def expectation(r, theta, tol: float = DENSITY_TRACE_TOL) -> float:
    """``Re Tr(R theta)`` for a density matrix ``R``."""
    r = as_hermitian(r)
    theta = as_hermitian(theta)
    _require_same_dim(r, theta)
    if not is_density_matrix(r, tol):
        raise NotADensityMatrix(f"trace {r.trace():.6g}, e_1 {eigenvalues(r)[0]:.3g}")
    val = np.sum(r.array * theta.array.T)
    # Tr of a product of Hermitians is real; large imaginary part means bad input
    assert abs(val.imag) <= 1e-9 * max(1.0, theta.norm()), val
    return float(val.real)


def matrix_abs(h) -> HermitianMatrix:
    """``sum_r |e_r| Pi_r``."""
    dec = eigendecompose(h)
    v = dec.eigenvectors
    return HermitianMatrix._wrap((v * np.abs(dec.eigenvalues)) @ v.conj().T)


# ---------------------------------------------------------------------------
# Seeded generators


def random_unitary(d: int, seed: int) -> np.ndarray:
    """Haar unitary: QR of a complex Ginibre matrix with phase correction."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_density_matrix(d: int, seed: int) -> HermitianMatrix:
    """``G G^dagger / Tr(G G^dagger)`` for a seeded complex Gaussian ``G``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return HermitianMatrix._wrap(m / np.trace(m).real)


def random_hermitian(d: int, seed: int, scale: float = 1.0) -> HermitianMatrix:
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return HermitianMatrix._wrap(scale * (g + g.conj().T) / 2.0)


def random_psd(d: int, seed: int, rank: int | None = None, scale: float = 1.0) -> HermitianMatrix:
    rng = np.random.default_rng(seed)
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    return HermitianMatrix._wrap(scale * (g @ g.conj().T) / max(k, 1))
