"""Shared fixtures and deliberately naive reference implementations.

The helpers here rebuild operators from explicit Kronecker products so that
package code is checked against something that does not share its shortcuts.
"""

import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = [I2, X, Y, Z]


def brute_two_sided(rho, p, q):
    """Operator-sum with Kraus operators sqrt(p_i q_j) sigma_i x sigma_j built from scratch."""
    out = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            k = np.sqrt(p[i] * q[j]) * np.kron(PAULI[i], PAULI[j])
            out += k @ rho @ k.conj().T
    return out


def brute_concurrence(rho):
    """Wootters formula with square roots of the eigenvalues of rho rho~ (about 1e-8 accurate)."""
    yy = np.kron(Y, Y)
    lam = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
    r = np.sort(np.sqrt(np.clip(lam.real, 0, None)))[::-1]
    return max(0.0, r[0] - r[1] - r[2] - r[3])


def brute_r_matrix(rho):
    return np.array([[np.trace(rho @ np.kron(PAULI[i], PAULI[j])).real for j in range(4)] for i in range(4)])


def brute_ring(gamma, n):
    """XXZ ring from explicit site operators."""

    def site(op, k):
        mats = [I2] * n
        mats[k] = op
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out

    h = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n):
        j = (i + 1) % n
        h += site(X, i) @ site(X, j) + site(Y, i) @ site(Y, j) + gamma * site(Z, i) @ site(Z, j)
    return h


def random_unitary(rng, d=2):
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_dm(rng, rank=4):
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance reporting ----------------------------------------------------------------

_CRITERIA = {}
_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _CRITERIA:
        return
    if report.when == "call" or report.failed:
        _OUTCOMES.setdefault(report.nodeid, report.outcome)
        if report.failed:
            _OUTCOMES[report.nodeid] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (label, title) in _CRITERIA.items():
        if nodeid not in _OUTCOMES:
            continue
        verdict = {"passed": "PASS", "failed": "FAIL"}.get(_OUTCOMES[nodeid], _OUTCOMES[nodeid].upper())
        terminalreporter.write_line(f"{verdict:4}  [{label:>3}] {title}")
