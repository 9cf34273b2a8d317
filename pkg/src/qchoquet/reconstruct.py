"""Approximate density matrices from measured expectation values.

Given a capacity ``theta`` and the values ``<theta({r})>``, the normalized
quantum Choquet integral ``R1 = C(R) / Tr C(R)`` is PSD with unit trace
by construction.  How well it reproduces the data is reported per
observable as ``E_r = |Tr[R1 theta({r})] - <theta({r})>| / <theta({r})>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .capacity import MatrixCapacity, validate_capacity
from .choquet import ExpectationVector, quantum_choquet_ev_increments
from .errors import InvalidSpectrum, ZeroTrace
from .hermitian import HermitianMatrix, Relation, as_hermitian, eigenvalues, loewner_compare

SubsetKey = tuple[int, ...]


@dataclass(frozen=True)
class ReconstructionPolicy:
    allow_outside_regime: bool = False
    check_independence: bool = True
    check_trace_inequality: bool = True
    independence_tol: float = 1e-10


@dataclass(frozen=True)
class ReconstructionReport:
    r1: HermitianMatrix
    eigenvalues: tuple[float, ...]
    reproduced: tuple[float, ...]
    errors: tuple[float, ...]
    abs_errors: tuple[float, ...]
    chain: tuple[SubsetKey, ...]
    increments: tuple[float, ...]
    choquet: HermitianMatrix
    flags: tuple[str, ...] = field(default=())

    @property
    def choquet_trace(self) -> float:
        return self.choquet.trace()

    def to_dict(self) -> dict:
        from .io import matrix_to_literal

        return {
            "r1": matrix_to_literal(self.r1),
            "eigenvalues": list(self.eigenvalues),
            "reproduced": list(self.reproduced),
            "errors": list(self.errors),
            "chain": [list(s) for s in self.chain],
            "flags": list(self.flags),
        }


def relative_errors(reproduced: Sequence[float], ev: Sequence[float]) -> tuple[float, ...]:
    return tuple(abs(p - v) / v for p, v in zip(reproduced, ev))


def reproduce(r1: HermitianMatrix, singletons: Sequence[HermitianMatrix]) -> tuple[float, ...]:
    # Tr[R1 theta] without the density-matrix precondition of expectation()
    return tuple(float(np.sum(r1.array * s.array.T).real) for s in singletons)


def reconstruct(
    c: MatrixCapacity, ev: Sequence[float], policy: ReconstructionPolicy | None = None
) -> ReconstructionReport:
    policy = policy or ReconstructionPolicy()
    ev = ExpectationVector(ev)
    res = quantum_choquet_ev_increments(c, ev, policy.allow_outside_regime)
    tr = res.matrix.trace()
    if not tr > 0:
        raise ZeroTrace(
            f"Tr C(R) = {tr:.3g}: increments {res.increments} along chain {res.chain} all vanish"
        )
    r1 = res.matrix / tr
    sing = c.singletons
    rep = reproduce(r1, sing)
    flags = list(res.flags)
    if policy.check_independence:
        independent, rk = check_linear_independence(sing, policy.independence_tol)
        if not independent:
            flags.append(f"singletons linearly dependent (rank {rk} < {len(sing)})")
    if policy.check_trace_inequality:
        flags.extend(check_trace_inequality(sing, ev))
    return ReconstructionReport(
        r1=r1,
        eigenvalues=tuple(float(e) for e in eigenvalues(r1)),
        reproduced=rep,
        errors=relative_errors(rep, ev),
        abs_errors=tuple(abs(p - v) for p, v in zip(rep, ev)),
        chain=res.chain,
        increments=res.increments,
        choquet=res.matrix,
        flags=tuple(flags),
    )


def check_linear_independence(singletons: Sequence, tol: float = 1e-10) -> tuple[bool, int]:
    """Rank of the matrices flattened to real vectors of length ``2 d^2``.

    Modified Gram-Schmidt; a vector whose residual norm falls below
    ``tol * max(1, its original norm)`` is counted as dependent.
    """
    mats = [as_hermitian(s).array.ravel() for s in singletons]
    vecs = [np.concatenate([m.real, m.imag]) for m in mats]
    basis: list[np.ndarray] = []
    for v in vecs:
        w = v.astype(float).copy()
        for b in basis:
            w -= (b @ w) * b
        nrm = np.linalg.norm(w)
        if nrm > tol * max(1.0, np.linalg.norm(v)):
            basis.append(w / nrm)
    return len(basis) == len(vecs), len(basis)


def check_trace_inequality(singletons: Sequence, ev: Sequence[float], atol: float = 1e-12) -> list[str]:
    """Warn where ``theta_r >= theta_s`` but ``<theta_r> - <theta_s> > Tr theta_r - Tr theta_s``.

    Any density matrix satisfies the bound, so a violation points at
    measurement error.  Incomparable pairs are never checked.
    """
    sing = [as_hermitian(s) for s in singletons]
    out = []
    for i, a in enumerate(sing):
        for j, b in enumerate(sing):
            if i == j or loewner_compare(a, b).relation is not Relation.GREATER:
                continue
            lhs = ev[i] - ev[j]
            rhs = a.trace() - b.trace()
            if lhs > rhs + atol:
                out.append(
                    f"trace inequality violated for theta({{{i + 1}}}) > theta({{{j + 1}}}): "
                    f"{lhs:.6g} > {rhs:.6g}"
                )
    return out


# ---------------------------------------------------------------------------
# Orthogonal projectors, d = n = 3


def projector_lattice(lam: float) -> MatrixCapacity:
    """Diagonal lattice with ``theta({2,3}) = diag(lam, 1, 1)``."""
    if not 0 <= lam < 1:
        raise ValueError("lambda must be in [0, 1)")
    diag = HermitianMatrix.diag
    table = {
        (1,): diag([1, 0, 0]),
        (2,): diag([0, 1, 0]),
        (3,): diag([0, 0, 1]),
        (1, 2): diag([1, 1, 0]),
        (1, 3): diag([1, 0, 1]),
        (2, 3): diag([lam, 1, 1]),
    }
    return MatrixCapacity(3, table, dim=3)


def projector_closed_form(e: Sequence[float], lam: float) -> dict:
    """Closed-form Choquet integral, its trace and the three errors.

    The error of the second observable uses ``1 + (e2 - e1) lam`` in the
    denominator, same as the third.
    """
    e1, e2, e3 = e
    t = 1 + lam * (e2 - e1)
    c = np.array([(1 - lam) * e1 + lam * e2, e2, e3])
    errs = (
        lam * (e2 - e1) * (1 - e1) / (e1 * t),
        lam * (e2 - e1) / t,
        lam * (e2 - e1) / t,
    )
    return {"choquet_diag": c, "trace": t, "r1_diag": c / t, "errors": errs}


def projector_example(e: Sequence[float] = (0.1, 0.3, 0.6), lam: float = 0.5) -> ReconstructionReport:
    e = tuple(float(x) for x in e)
    if len(e) != 3 or not 0 < e[0] < e[1] < e[2] or abs(sum(e) - 1) > 1e-12:
        raise InvalidSpectrum(f"need 0 < e1 < e2 < e3 summing to 1, got {e}")
    cap = projector_lattice(lam)
    assert validate_capacity(cap).ok
    rep = reconstruct(cap, e)
    cf = projector_closed_form(e, lam)
    if not (
        np.allclose(np.diag(rep.choquet.array).real, cf["choquet_diag"], atol=1e-12)
        and abs(rep.choquet_trace - cf["trace"]) <= 1e-12
        and np.allclose(rep.errors, cf["errors"], atol=1e-12)
    ):
        raise ArithmeticError("projector example disagrees with its closed form")
    return rep
