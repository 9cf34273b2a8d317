"""Matrix-valued capacities on the power set of ``{1, ..., n}``.

A capacity assigns a PSD matrix ``theta(A)`` to every subset ``A`` with
``theta({}) = 0``, ``theta(Omega) = 1`` and ``A <= B  =>  theta(A) <= theta(B)``
in the Loewner order.  Subsets are canonical sorted tuples of 1-based
elements, always enumerated by cardinality first and lexicographically
within a cardinality.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IncompleteTable,
    NotMonotone,
    ResultNotCapacityWarning,
    SingletonNotInUnitInterval,
    TopElementViolation,
    WeightBelowOne,
)
from .hermitian import (
    HermitianMatrix,
    Relation,
    as_hermitian,
    expectation,
    is_positive_semidefinite,
    loewner_compare,
)

MAX_N = 20

SubsetKey = tuple[int, ...]


def subset_key(elements: Iterable[int], n: int | None = None) -> SubsetKey:
    key = tuple(sorted(int(e) for e in elements))
    if len(set(key)) != len(key):
        raise ValueError(f"repeated element in subset {key}")
    if n is not None and key and (key[0] < 1 or key[-1] > n):
        raise ValueError(f"subset {key} not inside 1..{n}")
    return key


def power_set(n: int) -> Iterator[SubsetKey]:
    """All subsets of ``{1..n}`` by (cardinality, lexicographic)."""
    for k in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), k)


def covering_pairs(n: int) -> Iterator[tuple[SubsetKey, SubsetKey]]:
    """Pairs ``A < B`` with ``|B| = |A| + 1``."""
    for a in power_set(n):
        for x in range(1, n + 1):
            if x not in a:
                yield a, subset_key(a + (x,))


def _mask(key: SubsetKey) -> int:
    m = 0
    for e in key:
        m |= 1 << (e - 1)
    return m


def _key(mask: int, n: int) -> SubsetKey:
    return tuple(i + 1 for i in range(n) if mask >> i & 1)


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in 1..{MAX_N}, got {n}")


def _complete_table(n: int, table: Mapping, dim: int | None, fill_ends: bool):
    _check_n(n)
    out: dict[SubsetKey, HermitianMatrix] = {}
    for k, v in table.items():
        key = subset_key(k, n)
        if key in out:
            raise ValueError(f"subset {key} given twice")
        out[key] = as_hermitian(v)
    dims = {m.dim for m in out.values()}
    if dim is not None:
        dims.add(dim)
    if len(dims) > 1:
        raise DimensionMismatch(f"table mixes dimensions {sorted(dims)}")
    if not dims:
        raise IncompleteTable("empty table and no dimension given")
    d = dims.pop()
    omega = tuple(range(1, n + 1))
    if fill_ends:
        out.setdefault((), HermitianMatrix.zeros(d))
        out.setdefault(omega, HermitianMatrix.identity(d))
    missing = [k for k in power_set(n) if k not in out]
    if missing:
        raise IncompleteTable(f"{len(missing)} subsets missing, first {missing[0]}")
    return d, {k: out[k] for k in power_set(n)}


@dataclass(frozen=True, init=False)
class MatrixCapacity:
    """A complete table ``subset -> HermitianMatrix`` over all ``2**n`` subsets.

    Entries for the empty set and for ``Omega`` may be omitted and default to
    zero and the identity.  Construction only checks completeness and shape;
    use :func:`validate_capacity` for the order-theoretic conditions.
    """

    n: int
    dim: int
    table: Mapping[SubsetKey, HermitianMatrix] = field(repr=False)

    def __init__(self, n: int, table: Mapping, dim: int | None = None):
        d, t = _complete_table(n, table, dim, fill_ends=True)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "table", t)

    def __getitem__(self, subset) -> HermitianMatrix:
        if isinstance(subset, (int, np.integer)):
            subset = (subset,)
        return self.table[subset_key(subset)]

    def __iter__(self):
        return iter(self.table)

    @property
    def omega(self) -> SubsetKey:
        return tuple(range(1, self.n + 1))

    @property
    def singletons(self) -> list[HermitianMatrix]:
        return [self.table[(r,)] for r in range(1, self.n + 1)]

    def stacked(self) -> np.ndarray:
        """Entries as a ``(2**n, d, d)`` array indexed by bitmask."""
        arr = np.empty((1 << self.n, self.dim, self.dim), dtype=np.complex128)
        for k, m in self.table.items():
            arr[_mask(k)] = m.array
        return arr


@dataclass(frozen=True, init=False)
class MobiusTable:
    """Moebius coefficients ``M(A)``; entries need not be PSD."""

    n: int
    dim: int
    table: Mapping[SubsetKey, HermitianMatrix] = field(repr=False)

    def __init__(self, n: int, table: Mapping, dim: int | None = None):
        d, t = _complete_table(n, table, dim, fill_ends=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "table", t)

    def __getitem__(self, subset) -> HermitianMatrix:
        if isinstance(subset, (int, np.integer)):
            subset = (subset,)
        return self.table[subset_key(subset)]

    def __iter__(self):
        return iter(self.table)


# ---------------------------------------------------------------------------
# Validation


@dataclass
class ValidationReport:
    """Outcome of :func:`validate_capacity`.

    ``violations`` lists covering pairs ``(A, B)`` where ``theta(B)`` fails to
    dominate ``theta(A)``; ``entry_problems`` lists per-subset failures such
    as a non-zero bottom element.  ``warnings`` never make the report fail.
    """

    violations: list[tuple[SubsetKey, SubsetKey]] = field(default_factory=list)
    entry_problems: list[tuple[SubsetKey, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.entry_problems

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [[list(a), list(b)] for a, b in self.violations],
            "entry_problems": [{"subset": list(k), "problem": p} for k, p in self.entry_problems],
            "warnings": list(self.warnings),
        }


def validate_capacity(c: MatrixCapacity, tol: float | None = None) -> ValidationReport:
    """Check bottom, top and monotonicity over covering pairs.

    Monotonicity along covering pairs is enough because the Loewner order
    is transitive; PSD-ness and ``theta(A) <= 1`` of every entry then
    follow from the bottom and top conditions.
    """
    if not isinstance(c, MatrixCapacity):
        raise TypeError("expected a MatrixCapacity")
    rep = ValidationReport()
    d = c.dim
    zero = HermitianMatrix.zeros(d)
    one = HermitianMatrix.identity(d)
    if loewner_compare(c.table[()], zero, tol).relation is not Relation.EQUAL:
        rep.entry_problems.append(((), "theta(empty) is not the zero matrix"))
    if loewner_compare(c.table[c.omega], one, tol).relation is not Relation.EQUAL:
        rep.entry_problems.append((c.omega, "theta(Omega) is not the identity"))
    for a, b in covering_pairs(c.n):
        rel = loewner_compare(c.table[b], c.table[a], tol).relation
        if rel not in (Relation.GREATER, Relation.EQUAL):
            rep.violations.append((a, b))
    return rep


def trace_bound_violations(c: MatrixCapacity, atol: float = 1e-10) -> list[str]:
    """Trace inequalities every capacity satisfies.

    ``0 <= Tr theta(A) <= d``, ``0 <= Tr[theta(A) theta(B)] <=
    min(Tr theta(A), Tr theta(B))`` and trace monotonicity along inclusions.
    """
    d = c.dim
    tr = {k: m.trace() for k, m in c.table.items()}
    out = []
    for k, t in tr.items():
        if not -atol <= t <= d + atol:
            out.append(f"Tr theta{k} = {t:.6g} outside [0, {d}]")
    keys = list(c.table)
    for i, a in enumerate(keys):
        for b in keys[i:]:
            tab = float(np.sum(c.table[a].array * c.table[b].array.T).real)
            if not -atol <= tab <= min(tr[a], tr[b]) + atol:
                out.append(f"Tr[theta{a} theta{b}] = {tab:.6g} outside [0, min traces]")
    for a, b in covering_pairs(c.n):
        if tr[a] > tr[b] + atol:
            out.append(f"Tr theta{a} > Tr theta{b}")
    return out


# ---------------------------------------------------------------------------
# Construction


def build_lattice(
    singletons: Sequence,
    weights: Mapping[Iterable[int], Mapping[int, float]] | None = None,
) -> MatrixCapacity:
    """Build ``theta(A) = sum_{r in A} mu_r(A) theta({r})`` for ``1 < |A| < n``.

    ``weights[A][r]`` is the coefficient of element ``r`` inside subset
    ``A``; missing entries default to 1 and every weight must be >= 1.
    ``theta(Omega)`` is pinned to the identity.  Raises
    :class:`TopElementViolation` if some ``theta(A)`` is not below the
    identity and :class:`NotMonotone` for any other order violation.
    """
    sing = [as_hermitian(s) for s in singletons]
    n = len(sing)
    _check_n(n)
    d = sing[0].dim
    if any(s.dim != d for s in sing):
        raise DimensionMismatch("singletons of different dimensions")
    one = HermitianMatrix.identity(d)
    for r, s in enumerate(sing, start=1):
        if not is_positive_semidefinite(s) or loewner_compare(one, s).relation not in (
            Relation.GREATER,
            Relation.EQUAL,
        ):
            raise SingletonNotInUnitInterval(f"theta({{{r}}}) is not between 0 and the identity")

    mu: dict[SubsetKey, dict[int, float]] = {}
    for k, per in (weights or {}).items():
        key = subset_key(k, n)
        for elem, w in per.items():
            elem = int(elem)
            if elem not in key:
                raise ValueError(f"weight for element {elem} given on subset {key} not containing it")
            if w < 1:
                raise WeightBelowOne(f"weight {w} < 1 for element {elem} in {key}")
            mu.setdefault(key, {})[elem] = float(w)

    omega = tuple(range(1, n + 1))
    table: dict[SubsetKey, HermitianMatrix] = {(): HermitianMatrix.zeros(d)}
    for key in power_set(n):
        if not key:
            continue
        if key == omega:
            table[key] = one
            continue
        w = mu.get(key, {})
        acc = np.zeros((d, d), dtype=np.complex128)
        for r in key:
            acc += w.get(r, 1.0) * sing[r - 1].array
        table[key] = HermitianMatrix._wrap(acc)

    cap = MatrixCapacity(n, table, dim=d)
    rep = validate_capacity(cap)
    top = [(a, b) for a, b in rep.violations if b == omega]
    if top:
        raise TopElementViolation(f"theta{top[0][0]} is not below the identity ({len(top)} subsets)")
    if rep.violations:
        raise NotMonotone(f"monotonicity fails on covering pairs {rep.violations[:3]}")
    return cap


def additive_lattice(singletons: Sequence) -> MatrixCapacity:
    """``theta(A) = sum_{r in A} theta({r})`` for every ``A`` (including Omega)."""
    sing = [as_hermitian(s) for s in singletons]
    n = len(sing)
    d = sing[0].dim
    table = {}
    for key in power_set(n):
        acc = np.zeros((d, d), dtype=np.complex128)
        for r in key:
            acc += sing[r - 1].array
        table[key] = HermitianMatrix._wrap(acc)
    return MatrixCapacity(n, table, dim=d)


def scalar_capacity(c: MatrixCapacity, r) -> dict[SubsetKey, float]:
    """``mu(A) = Tr[R theta(A)]`` for a density matrix ``R``."""
    r = as_hermitian(r)
    return {k: expectation(r, m) for k, m in c.table.items()}


# ---------------------------------------------------------------------------
# Moebius transform


def _subset_sum(arr: np.ndarray, n: int, sign: int) -> np.ndarray:
    # zeta (sign=+1) / Moebius (sign=-1) transform, one bit axis at a time
    d = arr.shape[-1]
    out = arr.reshape((2,) * n + (d, d)).copy()
    for axis in range(n):
        hi = [slice(None)] * n
        lo = [slice(None)] * n
        hi[axis], lo[axis] = 1, 0
        out[tuple(hi)] += sign * out[tuple(lo)]
    return out.reshape(arr.shape)


def mobius_transform(c: MatrixCapacity) -> MobiusTable:
    """``M(A) = sum_{B <= A} (-1)^{|A|-|B|} theta(B)``."""
    if not isinstance(c, MatrixCapacity):
        raise TypeError("expected a MatrixCapacity")
    arr = _subset_sum(c.stacked(), c.n, -1)
    table = {k: HermitianMatrix._wrap(arr[_mask(k)]) for k in power_set(c.n)}
    return MobiusTable(c.n, table, dim=c.dim)


def inverse_mobius(m: MobiusTable) -> MatrixCapacity:
    """``theta(A) = sum_{B <= A} M(B)``.

    Only structure is checked afterwards; when the bottom or top element
    comes out wrong a :class:`ResultNotCapacityWarning` is issued.
    """
    if not isinstance(m, MobiusTable):
        raise TypeError("expected a MobiusTable")
    arr = np.empty((1 << m.n, m.dim, m.dim), dtype=np.complex128)
    for k, v in m.table.items():
        arr[_mask(k)] = v.array
    arr = _subset_sum(arr, m.n, +1)
    table = {k: HermitianMatrix._wrap(arr[_mask(k)]) for k in power_set(m.n)}
    cap = MatrixCapacity(m.n, table, dim=m.dim)
    problems = []
    if cap.table[()].norm() > 1e-10:
        problems.append("theta(empty) != 0")
    if (cap.table[cap.omega] - HermitianMatrix.identity(m.dim)).norm() > 1e-10 * max(1.0, m.dim):
        problems.append("theta(Omega) != identity")
    if problems:
        warnings.warn("inverse Moebius result is not a capacity: " + ", ".join(problems), ResultNotCapacityWarning)
    return cap


def identity_residual(m: MobiusTable) -> float:
    """``||sum_{B != {}} M(B) - 1||_F``; zero for any capacity's table."""
    total = np.zeros((m.dim, m.dim), dtype=np.complex128)
    for k, v in m.table.items():
        if k:
            total += v.array
    return float(np.linalg.norm(total - np.eye(m.dim)))
