"""Concurrence and entanglement of formation.

Two independent routes to the concurrence are provided:

* :func:`concurrence_wootters` works with the spin-flipped matrix
  ``rho~ = (sy x sy) rho* (sy x sy)`` and the square roots of the eigenvalues of
  ``rho rho~``;
* :func:`concurrence_lorentz` works only with the real R-matrix and its
  Lorentz singular values, obtained from the spectrum of ``g R^T g R``.

They share no code beyond numpy, so agreement between them is a meaningful check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PositivityViolation
from .numerics import general_eigs
from .qstate import SPIN_FLIP, TwoQubitState, as_state, spin_flip, to_r_matrix

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])
DEGENERATE_COND = 1e6
DET_TIE = 1e-12
CLAMP_IMAG = 1e-8
CLAMP_NEG = 1e-8


def _dm_of(s) -> np.ndarray:
    if isinstance(s, TwoQubitState):
        return s.dm
    return as_state(s).dm


# -- Wootters route -------------------------------------------------------------


def wootters_eigenvalues(s) -> np.ndarray:
    """Eigenvalues of ``rho rho~`` in decreasing order, clamped to be real and nonnegative.

    Imaginary parts below 1e-8 and negative values above -1e-8 are round-off;
    anything larger is reported as a positivity problem.
    """
    dm = _dm_of(s)
    lam = general_eigs(dm @ spin_flip(dm)).eigenvalues
    if np.max(np.abs(lam.imag)) > CLAMP_IMAG or np.min(lam.real) < -CLAMP_NEG:
        raise PositivityViolation(f"rho rho~ has spectrum {lam} outside the physical domain")
    return np.sort(np.clip(lam.real, 0.0, None))[::-1]


def concurrence_batch(dms) -> np.ndarray:
    """Concurrence of a stack of density matrices (no validation).

    Uses ``rho = W W^dagger`` and ``tau = W^T (sy x sy) W``: the singular values
    of ``tau`` are the square roots of the eigenvalues of ``rho rho~``, and the
    SVD delivers them with absolute rather than square-root accuracy.
    """
    dms = np.asarray(dms, dtype=complex)
    herm = 0.5 * (dms + dms.conj().swapaxes(-1, -2))
    d, v = np.linalg.eigh(herm)
    w = v * np.sqrt(np.clip(d, 0.0, None))[..., None, :]
    tau = w.swapaxes(-1, -2) @ SPIN_FLIP @ w
    sv = np.linalg.svd(tau, compute_uv=False)
    return np.maximum(0.0, sv[..., 0] - sv[..., 1] - sv[..., 2] - sv[..., 3])


def concurrence_wootters(s, method: str = "svd") -> float:
    """Wootters concurrence ``max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4))``.

    ``method="svd"`` (default) gets the square roots from a singular value
    decomposition; ``method="eigs"`` takes square roots of the clamped
    eigenvalues of ``rho rho~`` directly, which loses about half the digits
    when some eigenvalues vanish.
    """
    dm = _dm_of(s)
    if method == "svd":
        return float(min(1.0, concurrence_batch(dm)))
    if method == "eigs":
        r = np.sqrt(wootters_eigenvalues(dm))
        return float(min(1.0, max(0.0, r[0] - r[1:].sum())))
    raise ValueError(f"unknown method {method!r}")


def binary_entropy(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -x * np.log2(x) - (1 - x) * np.log2(1 - x)
    return np.where((x <= 0) | (x >= 1), 0.0, h)


def eof(c) -> float:
    """Entanglement of formation from the concurrence."""
    c = float(c)
    if not -1e-12 <= c <= 1 + 1e-12:
        raise DomainError(f"concurrence {c} outside [0, 1]")
    c = min(1.0, max(0.0, c))
    return float(binary_entropy((1 + np.sqrt(1 - c * c)) / 2))


# -- Lorentz route --------------------------------------------------------------


@dataclass(frozen=True)
class LorentzSingularValues:
    s0: float
    s1: float
    s2: float
    s3: float
    degenerate: bool = False

    def as_array(self) -> np.ndarray:
        return np.array([self.s0, self.s1, self.s2, self.s3])

    @property
    def concurrence(self) -> float:
        return max(0.0, (-self.s0 + self.s1 + self.s2 - self.s3) / 2)


def _r_of(r) -> np.ndarray:
    if isinstance(r, TwoQubitState):
        return to_r_matrix(r)
    r = np.asarray(r)
    if r.shape != (4, 4):
        raise ValueError(f"R-matrix must be 4x4, got {r.shape}")
    return r.real.astype(float)


def lorentz_singular_values(r) -> LorentzSingularValues:
    """Lorentz singular values of an R-matrix from the spectrum of ``g R^T g R``.

    In the diagonal normal form the spectrum is ``s_i^2``; the sign of ``s3``
    follows ``det R`` since the Lorentz factors have unit determinant.  When
    the eigenvector matrix is numerically singular the product is defective
    (the non-diagonal normal form): the defective pair gives ``s0 = s1`` and the
    remaining pair gives ``(d, -d)``.
    """
    r = _r_of(r)
    m = MINKOWSKI @ r.T @ MINKOWSKI @ r
    res = general_eigs(m, vectors=True)
    lam, vec = res.eigenvalues, res.eigenvectors
    try:
        cond = np.linalg.cond(vec)
    except np.linalg.LinAlgError:  # pragma: no cover
        cond = np.inf
    if not np.isfinite(cond) or cond > DEGENERATE_COND:
        unit = vec / np.linalg.norm(vec, axis=0)
        overlap = np.abs(unit.conj().T @ unit)
        np.fill_diagonal(overlap, -1.0)
        i, j = np.unravel_index(np.argmax(overlap), overlap.shape)
        rest = [k for k in range(4) if k not in (i, j)]
        top = np.sqrt(max(0.0, float(np.mean(lam[[i, j]].real))))
        d = np.sqrt(max(0.0, float(np.mean(lam[rest].real))))
        return LorentzSingularValues(float(top), float(top), float(d), float(-d), degenerate=True)
    s = np.sqrt(np.sort(np.clip(lam.real, 0.0, None))[::-1])
    det = np.linalg.det(r)
    s3 = -s[3] if det < -DET_TIE else s[3]
    return LorentzSingularValues(float(s[0]), float(s[1]), float(s[2]), float(s3))


def concurrence_lorentz(r) -> float:
    return min(1.0, lorentz_singular_values(r).concurrence)


# -- X-shaped matrices ----------------------------------------------------------


def x_concurrence(m) -> float:
    """Concurrence of any X-shaped density matrix from its entries."""
    m = np.asarray(m)
    a, b, c, d = (m[k, k].real for k in range(4))
    if min(a, b, c, d) < -1e-12:
        raise PositivityViolation("negative diagonal entry")
    corner, centre = abs(m[0, 3]), abs(m[1, 2])
    c1 = corner - np.sqrt(max(b, 0) * max(c, 0))
    c2 = centre - np.sqrt(max(a, 0) * max(d, 0))
    return float(2 * max(0.0, c1, c2))


def concurrence_x_form(A, B, C, D, E) -> float:
    """Concurrence of the matrix

        [[A, 0, 0, B],
         [0, D, C, 0],
         [0, C, E, 0],
         [B, 0, 0, A]]

    i.e. ``max(0, 2(|B| - sqrt(DE)), 2(|C| - A))``.
    """
    if A < -1e-12 or D < -1e-12 or E < -1e-12 or abs(B) > A + 1e-12 or abs(C) ** 2 > D * E + 1e-12:
        raise PositivityViolation("coefficients do not describe a positive matrix")
    c1 = 2 * (abs(B) - np.sqrt(max(D * E, 0.0)))
    c2 = 2 * (abs(C) - A)
    return float(max(0.0, c1, c2))
