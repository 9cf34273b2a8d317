"""Upper and lower sets of Hermitian matrices, kept as generator lists.

An upper set ``U = {g_1, ..., g_k}`` stands for the union of the cones
``O(g_i) = {g_i + rho : rho PSD}``; a lower set is the union of the
downward cones ``C(g_i) = {g_i - rho : rho PSD}``.  The sets themselves are
never materialized, membership is decided generator by generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IndistinguishablePoints,
    InvalidCoefficient,
    NotComparable,
)
from .hermitian import (
    HermitianMatrix,
    Relation,
    as_hermitian,
    loewner_compare,
    matrix_abs,
)


def _generators(gens) -> tuple[HermitianMatrix, ...]:
    if isinstance(gens, HermitianMatrix) or (isinstance(gens, np.ndarray) and gens.ndim == 2):
        gens = [gens]
    out = tuple(as_hermitian(g) for g in gens)
    if not out:
        raise ValueError("a generator list must be non-empty")
    if len({g.dim for g in out}) != 1:
        raise DimensionMismatch("generators of different dimensions")
    return out


@dataclass(frozen=True, init=False)
class UpperSetGenerators:
    generators: tuple[HermitianMatrix, ...]

    def __init__(self, generators):
        object.__setattr__(self, "generators", _generators(generators))

    @property
    def dim(self) -> int:
        return self.generators[0].dim

    def __contains__(self, phi) -> bool:
        return upper_contains(self, phi)


@dataclass(frozen=True, init=False)
class LowerSetGenerators:
    generators: tuple[HermitianMatrix, ...]

    def __init__(self, generators):
        object.__setattr__(self, "generators", _generators(generators))

    @property
    def dim(self) -> int:
        return self.generators[0].dim

    def __contains__(self, phi) -> bool:
        return lower_contains(self, phi)


_UP = (Relation.GREATER, Relation.EQUAL)
_DOWN = (Relation.LESS, Relation.EQUAL)


def upper_contains(u: UpperSetGenerators, phi, tol: float | None = None) -> bool:
    """True iff ``phi`` succeeds-or-equals some generator of ``u``."""
    if not isinstance(u, UpperSetGenerators):
        u = UpperSetGenerators(u)
    phi = as_hermitian(phi)
    if phi.dim != u.dim:
        raise DimensionMismatch(f"dimension {phi.dim} vs {u.dim}")
    return any(loewner_compare(phi, g, tol).relation in _UP for g in u.generators)


def lower_contains(lo: LowerSetGenerators, phi, tol: float | None = None) -> bool:
    """True iff ``phi`` precedes-or-equals some generator of ``lo``."""
    if not isinstance(lo, LowerSetGenerators):
        lo = LowerSetGenerators(lo)
    phi = as_hermitian(phi)
    if phi.dim != lo.dim:
        raise DimensionMismatch(f"dimension {phi.dim} vs {lo.dim}")
    return any(loewner_compare(phi, g, tol).relation in _DOWN for g in lo.generators)


def upward_witness(theta, phi, lam: float = 1.0, mu: float = 1.0) -> HermitianMatrix:
    """A common upper bound ``lam*|theta| + mu*|phi|`` of two matrices.

    ``|x|`` is the matrix absolute value.  Since ``|x| - x`` is PSD the
    result dominates both inputs whenever ``lam, mu >= 1``; this is why two
    upper sets always intersect.
    """
    if lam < 1 or mu < 1:
        raise InvalidCoefficient(f"coefficients must be >= 1, got lam={lam}, mu={mu}")
    theta = as_hermitian(theta)
    phi = as_hermitian(phi)
    if theta.dim != phi.dim:
        raise DimensionMismatch(f"dimension {theta.dim} vs {phi.dim}")
    psi = lam * matrix_abs(theta) + mu * matrix_abs(phi)
    for x in (theta, phi):
        rel = loewner_compare(psi, x).relation
        if rel not in _UP:
            raise ArithmeticError(f"witness failed to dominate an input ({rel.value})")
    return psi


def cumulative_chain(theta, phi, k: int) -> list[HermitianMatrix]:
    """``k`` evenly spaced points on the segment from ``theta`` up to ``phi``."""
    theta = as_hermitian(theta)
    phi = as_hermitian(phi)
    if k < 2:
        raise ValueError("k must be >= 2")
    rel = loewner_compare(theta, phi).relation
    if rel not in _DOWN:
        raise NotComparable(f"expected theta <= phi, got {rel.value}")
    out = []
    for j in range(k):
        lam = j / (k - 1)
        if j == 0:
            out.append(theta)
        elif j == k - 1:
            out.append(phi)
        else:
            out.append((1.0 - lam) * theta + lam * phi)
    return out


def t0_separating_generator(theta, phi) -> tuple[HermitianMatrix, int]:
    """Pick ``g`` so that the cone ``O(g)`` holds exactly one of the two points.

    Returns ``(g, which)`` where ``which`` is 0 if ``O(g)`` contains
    ``theta`` and 1 if it contains ``phi``.
    """
    theta = as_hermitian(theta)
    phi = as_hermitian(phi)
    rel = loewner_compare(theta, phi).relation
    if rel is Relation.EQUAL:
        raise IndistinguishablePoints("the two matrices coincide within tolerance")
    if rel is Relation.GREATER:
        gen, which = theta, 0
    else:
        # theta < phi, or incomparable: O(phi) holds phi but never theta
        gen, which = phi, 1
    u = UpperSetGenerators([gen])
    inside = (upper_contains(u, theta), upper_contains(u, phi))
    assert inside[which] and not inside[1 - which]
    return gen, which
