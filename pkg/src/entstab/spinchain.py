"""XXZ rings by exact diagonalization and the decoherence of their pair states.

Site 0 is the most significant tensor factor.  A spin-up site (sigma_z = +1)
is bit 0, so the Sz = 0 sector consists of basis states with N/2 set bits.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .channels import PauliChannel
from .entanglement import x_concurrence
from .errors import DomainError, SizeTooLarge
from .numerics import MAX_SITES, hermitian_eigs, reduced_from_vector
from .qstate import TwoQubitState, XFormState

DEGENERACY_TOL = 1e-10
PATTERN_TOL = 1e-10


@dataclass(frozen=True)
class XXZParams:
    gamma: float = 1.0
    n_sites: int = 4

    def __post_init__(self) -> None:
        if not math.isfinite(self.gamma):
            raise DomainError("gamma must be finite")
        n = self.n_sites
        if n > MAX_SITES:
            raise SizeTooLarge(f"{n} sites exceeds the dense limit of {MAX_SITES}")
        if n < 4 or n % 2:
            raise DomainError(f"n_sites must be even and at least 4, got {n}")


@dataclass(frozen=True)
class SpinReducedState(XFormState):
    """Nearest-neighbour pair state of a ring, same layout as :class:`XFormState`."""

    tol = 1e-10

    @property
    def c0(self) -> float:
        """Pair concurrence 2(|z| - u), valid when u = v and |z| > u."""
        return 2 * (abs(self.z) - self.u)

    @property
    def is_heisenberg_like(self) -> bool:
        return abs(self.u - self.v) < self.tol and abs(self.x - self.y) < self.tol

    @classmethod
    def from_matrix(cls, m) -> SpinReducedState:
        m = np.asarray(m)
        d = m.diagonal().real
        # absorb round-off so the positivity checks see a consistent matrix
        d = np.clip(d, 0.0, None)
        d = d / d.sum()
        return cls(float(d[0]), float(d[1]), float(d[2]), float(d[3]), complex(m[1, 2]))


@dataclass(frozen=True)
class EvolvedSpinCoefficients:
    A: float
    B: float
    C: float
    D: float
    E: complex
    F: complex
    eta: tuple[float, float, float, float]

    def matrix(self) -> np.ndarray:
        m = np.diag([self.A, self.B, self.C, self.D]).astype(complex)
        m[0, 3], m[3, 0] = self.E, np.conj(self.E)
        m[1, 2], m[2, 1] = self.F, np.conj(self.F)
        return m

    def concurrence(self) -> float:
        """2 max(0, |F| - sqrt(AD)); the corner branch never wins for these states."""
        return float(2 * max(0.0, abs(self.F) - math.sqrt(max(self.A * self.D, 0.0))))


# -- Hamiltonian -------------------------------------------------------------------


def _spins(n: int) -> np.ndarray:
    """(2^n, n) array of sigma_z eigenvalues, column i for site i."""
    idx = np.arange(2**n)
    bits = (idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    return 1 - 2 * bits


def xxz_hamiltonian(p: XXZParams) -> np.ndarray:
    """Periodic ring ``sum_i sx_i sx_i+1 + sy_i sy_i+1 + gamma sz_i sz_i+1``."""
    n = p.n_sites
    dim = 2**n
    spins = _spins(n)
    h = np.zeros((dim, dim))
    idx = np.arange(dim)
    for i in range(n):
        j = (i + 1) % n
        h[idx, idx] += p.gamma * spins[:, i] * spins[:, j]
        # sx sx + sy sy = 2 (s+ s- + s- s+): flips antiparallel pairs with weight 2
        anti = spins[:, i] != spins[:, j]
        mask = (1 << (n - 1 - i)) | (1 << (n - 1 - j))
        h[idx[anti], idx[anti] ^ mask] += 2.0
    return h


def sz_sector(n: int, magnetization: int = 0) -> np.ndarray:
    """Basis indices with sum of sigma_z equal to ``magnetization``."""
    return np.nonzero(_spins(n).sum(axis=1) == magnetization)[0]


def translate(vec: np.ndarray, n: int, shift: int = 1) -> np.ndarray:
    """Apply the cyclic site shift i -> i + shift to a state vector."""
    return vec.reshape((2,) * n).transpose(np.roll(np.arange(n), shift)).reshape(-1)


@dataclass(frozen=True)
class GroundState:
    params: XXZParams
    energy: float
    vector: np.ndarray
    degenerate: bool
    global_energy: float

    def pair(self, i: int = 0) -> np.ndarray:
        n = self.params.n_sites
        return reduced_from_vector(self.vector, (i % n, (i + 1) % n))

    def reduced(self, i: int = 0) -> SpinReducedState:
        m = self.pair(i)
        off = m.copy()
        for a, b in [(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)]:
            off[a, b] = 0
        if np.max(np.abs(off)) > PATTERN_TOL:
            raise RuntimeError(f"pair state breaks the X pattern by {np.max(np.abs(off)):.3g}")
        return SpinReducedState.from_matrix(m)


def ground_state(p: XXZParams) -> GroundState:
    """Lowest state of the Sz = 0 sector.

    Degenerate ground levels are resolved by taking the combination with the
    largest weight in the translation-invariant subspace.
    """
    n = p.n_sites
    h = xxz_hamiltonian(p)
    sector = sz_sector(n, 0)
    res = hermitian_eigs(h[np.ix_(sector, sector)], vectors=True)
    vals, vecs = res.eigenvalues[::-1], res.eigenvectors[:, ::-1]  # ascending
    e0 = float(vals[0])
    block = vecs[:, vals - e0 < DEGENERACY_TOL]
    degenerate = block.shape[1] > 1

    def embed(col):
        full = np.zeros(2**n, dtype=complex)
        full[sector] = col
        return full

    if degenerate:
        full = np.column_stack([embed(c) for c in block.T])
        sym = sum(np.column_stack([translate(c, n, k) for c in full.T]) for k in range(n)) / n
        proj = full.conj().T @ sym
        w = hermitian_eigs(0.5 * (proj + proj.conj().T), vectors=True, tol=1e-8)
        vec = full @ w.eigenvectors[:, 0]
    else:
        vec = embed(block[:, 0])
    vec = vec / np.linalg.norm(vec)

    global_e = e0
    for m in range(-n, n + 1, 2):
        if m == 0:
            continue
        idx = sz_sector(n, m)
        global_e = min(global_e, float(np.linalg.eigvalsh(h[np.ix_(idx, idx)])[0]))
    if global_e < e0 - DEGENERACY_TOL:
        warnings.warn(
            f"ring ground energy {global_e:.6g} lies outside the Sz=0 sector (Sz=0 minimum {e0:.6g})",
            RuntimeWarning,
            stacklevel=2,
        )
    if degenerate:
        warnings.warn(f"Sz=0 ground level is {block.shape[1]}-fold degenerate", RuntimeWarning, stacklevel=2)
    return GroundState(p, e0, vec, degenerate, global_e)


def ground_reduced(p: XXZParams) -> SpinReducedState:
    return ground_state(p).reduced(0)


# -- decoherence of the pair state --------------------------------------------------


def evolve_reduced(s: XFormState, ch: PauliChannel, ch2: PauliChannel | None = None) -> EvolvedSpinCoefficients:
    """Pair state after the same Pauli channel on both sites.

    A different second channel is rejected rather than silently handled.
    """
    if ch2 is not None and ch2.p != ch.p:
        raise DomainError("evolve_reduced needs the same channel on both sites")
    e1, e2, e3, e4 = ch.eta
    u, x, y, v, z = s.u, s.x, s.y, s.v, complex(s.z)
    return EvolvedSpinCoefficients(
        A=u * e1**2 + v * e2**2 + (x + y) * e1 * e2,
        B=x * e1**2 + y * e2**2 + (u + v) * e1 * e2,
        C=y * e1**2 + x * e2**2 + (u + v) * e1 * e2,
        D=v * e1**2 + u * e2**2 + (x + y) * e1 * e2,
        E=(z + z.conjugate()) * e3 * e4,
        F=z * e3**2 + z.conjugate() * e4**2,
        eta=(e1, e2, e3, e4),
    )


def heisenberg_depolarizing_closed_form(c0: float, kappa: float, t):
    """``max(0, eta3^2 C0 - 2 eta1 eta2)`` with the depolarizing weights at time t."""
    if not 0 <= c0 <= 1:
        raise DomainError(f"initial concurrence {c0} outside [0, 1]")
    q = np.exp(-kappa * np.asarray(t, dtype=float))
    eta1, eta2, eta3 = (1 + q) / 2, (1 - q) / 2, q
    out = np.maximum(0.0, eta3**2 * c0 - 2 * eta1 * eta2)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SpinPipelineResult:
    params: XXZParams
    reduced: SpinReducedState
    c0: float
    c0_wootters: float
    times: np.ndarray
    c_pipeline: np.ndarray
    c_closed_form: np.ndarray

    @property
    def gap(self) -> np.ndarray:
        return self.c_pipeline - self.c_closed_form


def spin_pipeline(p: XXZParams, kappa: float, grid) -> SpinPipelineResult:
    """Diagonalize, reduce to a pair, depolarize it and compare with the closed form."""
    from .channels import depolarizing_at
    from .entanglement import concurrence_wootters

    red = ground_reduced(p)
    c0 = red.c0
    times = np.asarray(grid, dtype=float)
    cp = np.array([evolve_reduced(red, depolarizing_at(kappa, t)).concurrence() for t in times])
    return SpinPipelineResult(
        p,
        red,
        c0,
        concurrence_wootters(TwoQubitState(red.matrix())),
        times,
        cp,
        heisenberg_depolarizing_closed_form(max(0.0, min(1.0, c0)), kappa, times),
    )


def pair_concurrence(s: XFormState) -> float:
    return x_concurrence(s.matrix())
