"""Ranking permutations, classical Choquet integrals and their matrix analogue.

For a matrix capacity ``theta`` and measured expectation values
``v_r = Tr[R theta({r})]`` the quantum Choquet integral walks down the
ranking from the largest value, accumulating the nested sets
``S_k = {sigma(n-k), ..., sigma(n)}``::

    C(R) = sum_{k=0}^{m-1} (v_{sigma(n-k)} - v_{sigma(n-k-1)}) theta(S_k)

with ``m = min(n, d)`` and ``v_{sigma(0)} = 0``.  When ``n > d`` the chain is
cut after ``d`` steps, so the last increment is measured against the
largest value that is left out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .capacity import MatrixCapacity, covering_pairs, mobius_transform, power_set, subset_key
from .errors import (
    ArityMismatch,
    DimensionPolicyViolation,
    IncompleteTable,
    NonPositiveValue,
    NonPSDIncrement,
    NotACapacity,
    UnsupportedArity,
)
from .hermitian import HermitianMatrix, is_positive_semidefinite

SubsetKey = tuple[int, ...]

FLAG_OUTSIDE_REGIME = "outside paper regime"
FLAG_BOUNDARY_TIE = "boundary tie"
FLAG_UNVERIFIED = "unverified equivalence"


class ExpectationVector(tuple):
    """Measured expectation values ``<theta({r})>``, each in ``(0, 1]``."""

    def __new__(cls, values: Sequence[float]):
        vals = tuple(float(v) for v in values)
        if not vals:
            raise ValueError("empty expectation vector")
        for r, v in enumerate(vals, start=1):
            if not np.isfinite(v) or v <= 0:
                raise NonPositiveValue(f"expectation value {r} is {v}; all must be > 0")
            if v > 1 + 1e-9:
                raise ValueError(f"expectation value {r} is {v} > 1")
        return super().__new__(cls, vals)

    @property
    def n(self) -> int:
        return len(self)


@dataclass(frozen=True)
class RankingPermutation:
    """``sigma`` (1-based) sorts the input ascending; ties keep index order."""

    sigma: tuple[int, ...]
    values: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.sigma)


def rank(values: Sequence[float]) -> RankingPermutation:
    vals = np.asarray([float(v) for v in values])
    if vals.size == 0:
        raise ValueError("cannot rank an empty vector")
    if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
        raise NonPositiveValue("ranking needs strictly positive values")
    order = np.argsort(vals, kind="stable")
    return RankingPermutation(tuple(int(i) + 1 for i in order), tuple(float(vals[i]) for i in order))


def comonotonic(ev1: Sequence[float], ev2: Sequence[float]) -> bool:
    """Same ranking permutation."""
    if len(ev1) != len(ev2):
        raise ArityMismatch(f"{len(ev1)} vs {len(ev2)} values")
    return rank(ev1).sigma == rank(ev2).sigma


# ---------------------------------------------------------------------------
# Classical


def _check_scalar_capacity(mu: Mapping, n: int, tol: float = 1e-12) -> dict[SubsetKey, float]:
    m = {subset_key(k, n): float(v) for k, v in mu.items()}
    missing = [k for k in power_set(n) if k not in m]
    if missing:
        raise NotACapacity(f"capacity undefined on {missing[0]}")
    if abs(m[()]) > tol or abs(m[tuple(range(1, n + 1))] - 1.0) > tol:
        raise NotACapacity("need mu(empty) = 0 and mu(Omega) = 1")
    for a, b in covering_pairs(n):
        if m[a] > m[b] + tol:
            raise NotACapacity(f"mu{a} > mu{b}")
    return m


def classical_choquet(f: Sequence[float], mu: Mapping, form: str = "function") -> float:
    """Choquet integral of a nonnegative function on ``{1..n}``.

    ``form="function"`` sums function increments times capacities of the
    upper level sets, ``form="capacity"`` sums function values times
    capacity increments.  Both give the same number.
    """
    f = [float(x) for x in f]
    n = len(f)
    if any(x < 0 for x in f):
        raise ValueError("f must be nonnegative")
    m = _check_scalar_capacity(mu, n)
    order = sorted(range(n), key=lambda i: (f[i], i))
    sigma = [i + 1 for i in order]
    # level[r] = {sigma(r), ..., sigma(n)} (0-based r)
    level = [subset_key(sigma[r:]) for r in range(n)] + [()]
    if form == "function":
        total, prev = 0.0, 0.0
        for r in range(n):
            fr = f[sigma[r] - 1]
            total += (fr - prev) * m[level[r]]
            prev = fr
        return total
    if form == "capacity":
        return sum(f[sigma[r] - 1] * (m[level[r]] - m[level[r + 1]]) for r in range(n))
    raise ValueError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# Quantum


@dataclass(frozen=True)
class ChoquetResult:
    matrix: HermitianMatrix
    increments: tuple[float, ...]
    chain: tuple[SubsetKey, ...]
    sigma: tuple[int, ...]
    form: int
    flags: tuple[str, ...] = ()
    accumulations: int = field(default=0, compare=False)

    def to_dict(self) -> dict:
        from .io import matrix_to_literal

        return {
            "matrix": matrix_to_literal(self.matrix),
            "chain": [list(s) for s in self.chain],
            "increments": list(self.increments),
        }


def in_regime(n: int, d: int) -> bool:
    return d <= n < d * d - 1


@dataclass(frozen=True)
class _Chain:
    sigma: tuple[int, ...]
    values: tuple[float, ...]  # v_k for k = 0..m-1, descending
    baseline: float
    sets: tuple[SubsetKey, ...]
    flags: tuple[str, ...]


def _top_chain(c: MatrixCapacity, ev: Sequence[float], allow_outside_regime: bool) -> _Chain:
    if not isinstance(c, MatrixCapacity):
        raise IncompleteTable("a complete MatrixCapacity is required")
    ev = ExpectationVector(ev)
    n, d = len(ev), c.dim
    if n != c.n:
        raise ArityMismatch(f"{n} expectation values for a capacity on {c.n} elements")
    flags = []
    if not in_regime(n, d):
        if not allow_outside_regime:
            raise DimensionPolicyViolation(f"need d <= n < d^2 - 1, got n={n}, d={d}")
        flags.append(FLAG_OUTSIDE_REGIME)
    rk = rank(ev)
    sigma = rk.sigma
    m = min(n, d)
    values = tuple(rk.values[n - 1 - k] for k in range(m))
    baseline = rk.values[n - m - 1] if n > m else 0.0
    if n > m and values[-1] == baseline:
        flags.append(FLAG_BOUNDARY_TIE)
    sets = tuple(subset_key(sigma[n - 1 - k :]) for k in range(m))
    return _Chain(sigma, values, baseline, sets, tuple(flags))


def quantum_choquet_ev_increments(
    c: MatrixCapacity, ev: Sequence[float], allow_outside_regime: bool = False
) -> ChoquetResult:
    """Expectation-value increments times the nested observables."""
    ch = _top_chain(c, ev, allow_outside_regime)
    m = len(ch.values)
    nxt = ch.values[1:] + (ch.baseline,)
    incs = tuple(v - w for v, w in zip(ch.values, nxt))
    acc = np.zeros((c.dim, c.dim), dtype=np.complex128)
    count = 0
    for k in range(m):
        acc += incs[k] * c.table[ch.sets[k]].array
        count += 1
    return ChoquetResult(HermitianMatrix._wrap(acc), incs, ch.sets, ch.sigma, 1, ch.flags, count)


def quantum_choquet_obs_increments(
    c: MatrixCapacity, ev: Sequence[float], allow_outside_regime: bool = False
) -> ChoquetResult:
    """Expectation values (above the cut-off baseline) times observable increments.

    Each increment ``theta(S_k) - theta(S_{k-1})`` must be PSD; a failure
    means the capacity is not monotone along this chain.
    """
    ch = _top_chain(c, ev, allow_outside_regime)
    m = len(ch.values)
    nxt = ch.values[1:] + (ch.baseline,)
    incs = tuple(v - w for v, w in zip(ch.values, nxt))
    acc = np.zeros((c.dim, c.dim), dtype=np.complex128)
    prev = np.zeros((c.dim, c.dim), dtype=np.complex128)
    for k in range(m):
        cur = c.table[ch.sets[k]].array
        step = HermitianMatrix._wrap(cur - prev)
        if not is_positive_semidefinite(step):
            raise NonPSDIncrement(f"theta{ch.sets[k]} does not dominate theta{ch.sets[k - 1] if k else ()}")
        acc += (ch.values[k] - ch.baseline) * step.array
        prev = cur
    return ChoquetResult(HermitianMatrix._wrap(acc), incs, ch.sets, ch.sigma, 2, ch.flags, m)


def quantum_choquet_mobius(
    c: MatrixCapacity,
    ev: Sequence[float],
    allow_n_gt_d: bool = False,
    allow_outside_regime: bool = False,
) -> ChoquetResult:
    """``sum_{A != {}} M(A) * min_{r in A} <theta({r})>`` from the Moebius table.

    Equal to the other two forms when ``n == d``.  Other arities raise
    :class:`UnsupportedArity` unless ``allow_n_gt_d`` is set, in which case
    the sum runs over all subsets and the result is flagged.
    """
    ch = _top_chain(c, ev, allow_outside_regime)
    n, d = c.n, c.dim
    flags = list(ch.flags)
    if n != d:
        if not allow_n_gt_d:
            raise UnsupportedArity(f"Moebius form is only established for n == d (n={n}, d={d})")
        flags.append(FLAG_UNVERIFIED)
    ev = [float(v) for v in ev]
    mob = mobius_transform(c)
    acc = np.zeros((d, d), dtype=np.complex128)
    count = 0
    for key, mat in mob.table.items():
        if not key:
            continue
        acc += min(ev[r - 1] for r in key) * mat.array
        count += 1
    nxt = ch.values[1:] + (ch.baseline,)
    incs = tuple(v - w for v, w in zip(ch.values, nxt))
    return ChoquetResult(HermitianMatrix._wrap(acc), incs, ch.sets, ch.sigma, 3, tuple(flags), count)


def quantum_choquet(c: MatrixCapacity, ev: Sequence[float], form: int = 1, **policy) -> ChoquetResult:
    if form == 1:
        return quantum_choquet_ev_increments(c, ev, policy.get("allow_outside_regime", False))
    if form == 2:
        return quantum_choquet_obs_increments(c, ev, policy.get("allow_outside_regime", False))
    if form == 3:
        return quantum_choquet_mobius(
            c, ev, policy.get("allow_n_gt_d", False), policy.get("allow_outside_regime", False)
        )
    raise ValueError(f"form must be 1, 2 or 3, got {form}")
