import itertools

import numpy as np
import pytest

from qchoquet import refdata
from qchoquet.capacity import MatrixCapacity, build_lattice, power_set
from qchoquet.hermitian import HermitianMatrix

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def _inv_sqrt(s: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(s)
    return (v / np.sqrt(w)) @ v.conj().T


def random_totally_monotone(n: int, d: int, seed: int) -> MatrixCapacity:
    """Capacity with random PSD Moebius masses on every non-empty subset,
    congruence-normalized so that theta(Omega) is the identity."""
    rng = np.random.default_rng(seed)
    masses = {}
    for key in power_set(n):
        if not key:
            continue
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        scale = 1.0 if len(key) == 1 else rng.uniform(0.0, 0.5)
        masses[key] = scale * (g @ g.conj().T)
    total = sum(masses.values())
    t = _inv_sqrt(total)
    masses = {k: t @ m @ t for k, m in masses.items()}
    table = {(): HermitianMatrix.zeros(d)}
    for key in power_set(n):
        if key:
            acc = sum(masses[b] for k in range(1, len(key) + 1) for b in itertools.combinations(key, k))
            table[key] = HermitianMatrix(acc)
    return MatrixCapacity(n, table, dim=d)


def random_weighted_lattice(n: int, d: int, seed: int) -> MatrixCapacity:
    """build_lattice with weights 1 + sum of nonnegative pair bonuses, which
    grow with the subset and so keep the table monotone."""
    rng = np.random.default_rng(seed)
    bonus = rng.uniform(0.0, 0.3, size=(n, n))
    sing = []
    for _ in range(n):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        sing.append(g @ g.conj().T + 0.1 * np.eye(d))
    # scale so the heaviest proper subset stays below the identity
    heavy = sum((1 + bonus[r].sum()) * sing[r] for r in range(n))
    s = 0.9 / np.linalg.eigvalsh(heavy)[-1]
    sing = [HermitianMatrix(s * m) for m in sing]
    weights = {}
    for key in power_set(n):
        if 1 < len(key) < n:
            weights[key] = {r: 1 + sum(bonus[r - 1, q - 1] for q in key if q != r) for r in key}
    return build_lattice(sing, weights)


def random_ev(c: MatrixCapacity, seed: int):
    from qchoquet.hermitian import random_density_matrix

    r = random_density_matrix(c.dim, seed)
    return [float(np.sum(r.array * s.array.T).real) for s in c.singletons], r


@pytest.fixture
def lattice1():
    return refdata.lattice(1)


@pytest.fixture
def lattice2():
    return refdata.lattice(2)


@pytest.fixture
def r_true():
    return refdata.R_TRUE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")
