"""Dense matrix kernels: eigenproblems, tensor products and partial traces.

Everything here is a thin, validated layer over LAPACK (through numpy).  The
matrices in this package are tiny (4x4 for two-qubit states, at most
1024x1024 for spin rings) so dense storage is used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import IndexOutOfRange, NoConvergence, NonHermitian

HERMITIAN_TOL = 1e-9
MAX_SITES = 10

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# Index order (I, x, y, z) is used everywhere in the package.
PAULIS = np.stack([SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z])
for _p in PAULIS:
    _p.setflags(write=False)
PAULIS.setflags(write=False)


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues sorted by descending real part, optional eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.eigenvalues)


def _as_square(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hermiticity_defect(m) -> float:
    a = np.asarray(m)
    return float(np.max(np.abs(a - a.conj().swapaxes(-1, -2)))) if a.size else 0.0


def hermitian_eigs(m, vectors: bool = False, tol: float = HERMITIAN_TOL) -> EigenResult:
    """Real spectrum of a Hermitian matrix in descending order.

    Raises NonHermitian if any entry of ``m - m^dagger`` exceeds ``tol``.
    """
    a = _as_square(m)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NonHermitian(f"max |M - M^dagger| = {defect:.3g} exceeds {tol:g}")
    # symmetrise so LAPACK sees an exactly Hermitian input
    h = 0.5 * (a + a.conj().T)
    try:
        if vectors:
            w, v = np.linalg.eigh(h)
        else:
            w, v = np.linalg.eigvalsh(h), None
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    order = np.argsort(w)[::-1]
    return EigenResult(w[order], None if v is None else v[:, order])


def general_eigs(m, vectors: bool = False) -> EigenResult:
    """All eigenvalues (with multiplicity) of a square matrix, descending real part."""
    a = _as_square(m)
    try:
        if vectors:
            w, v = np.linalg.eig(a)
        else:
            w, v = np.linalg.eigvals(a), None
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergence(str(exc)) from exc
    w = w.astype(complex)
    order = np.lexsort((-w.imag, -w.real))
    return EigenResult(w[order], None if v is None else v[:, order])


def kron(*mats) -> np.ndarray:
    """Tensor product of any number of matrices, left factor most significant."""
    if not mats:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(m) for m in mats))


def n_sites_of(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def partial_trace(m, keep=(0, 1)) -> np.ndarray:
    """Reduce a 2^N x 2^N density matrix to the qubits in ``keep``.

    Sites are numbered from the most significant tensor factor.  The kept
    sites appear in the order given, so ``keep=(1, 0)`` swaps the factors.
    """
    a = _as_square(m)
    n = n_sites_of(a.shape[0])
    keep = tuple(int(k) for k in keep)
    if len(set(keep)) != len(keep):
        raise IndexOutOfRange(f"kept sites must be distinct, got {keep}")
    for k in keep:
        if not 0 <= k < n:
            raise IndexOutOfRange(f"site {k} outside 0..{n - 1}")
    rest = [k for k in range(n) if k not in keep]
    t = a.reshape((2,) * (2 * n))
    perm = list(keep) + rest
    t = t.transpose(perm + [n + k for k in perm])
    dk, dr = 2 ** len(keep), 2 ** len(rest)
    t = t.reshape(dk, dr, dk, dr)
    return np.einsum("arbr->ab", t)


def reduced_from_vector(psi, keep=(0, 1)) -> np.ndarray:
    """Same as ``partial_trace(|psi><psi|, keep)`` without forming the full matrix."""
    v = np.asarray(psi, dtype=complex).ravel()
    n = n_sites_of(v.size)
    for k in keep:
        if not 0 <= k < n:
            raise IndexOutOfRange(f"site {k} outside 0..{n - 1}")
    if len(set(keep)) != len(keep):
        raise IndexOutOfRange(f"kept sites must be distinct, got {keep}")
    rest = [k for k in range(n) if k not in keep]
    t = v.reshape((2,) * n).transpose(list(keep) + rest).reshape(2 ** len(keep), -1)
    return t @ t.conj().T
