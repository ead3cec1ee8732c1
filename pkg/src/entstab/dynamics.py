"""Entanglement evolution under Pauli channels: closed forms and numerical checks.

The closed forms describe a Schmidt-form state ``lambda1 |01> + lambda2 |10>``
(concurrence ``C0 = 2 lambda1 lambda2``) sent through Pauli channels with shrink
coefficients (Q1, Q2, Q3).  Every closed form has an oracle counterpart that
applies the Kraus operators to the full density matrix and measures the Wootters
concurrence.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .channels import (
    IDENTITY,
    ChannelSchedule,
    PauliChannel,
    ShrinkCoefficients,
    apply_one_sided,
    apply_two_sided,
    kraus_two_sided,
)
from .entanglement import concurrence_batch, concurrence_wootters
from .errors import DomainError
from .qstate import (
    PureState,
    TwoQubitState,
    as_state,
    from_pure,
    haar_unitary,
    lorentz_of_unitary,
    r_to_dm,
    schmidt_vector,
    to_r_matrix,
)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# rotation by pi/2 about x: carries the z axis onto the y axis
RX_HALF_PI = np.array([[1, -1j], [-1j, 1]], dtype=complex) / np.sqrt(2)


def _clip(value, clip: bool):
    return np.maximum(0.0, value) if clip else value


def _as_q(q) -> ShrinkCoefficients:
    if isinstance(q, PauliChannel):
        return q.q
    return ShrinkCoefficients(*q)


def _check_c0(c0: float) -> None:
    if not -1e-12 <= c0 <= 1 + 1e-12:
        raise DomainError(f"initial concurrence {c0} outside [0, 1]")


# -- closed forms ------------------------------------------------------------------


def residual_schmidt(c0: float, q, clip: bool = True) -> float:
    """Concurrence of a Schmidt-form state after the same channel on both qubits.

    ``(C0 (Q1^2 + Q2^2) + Q3^2 - 1) / 2``, clipped at zero unless ``clip=False``.
    """
    _check_c0(c0)
    q1, q2, q3 = _as_q(q)
    return float(_clip((c0 * (q1**2 + q2**2) + q3**2 - 1) / 2, clip))


def residual_max(c0: float, q, clip: bool = True) -> float:
    """Best residual concurrence over all pure states of concurrence ``C0``.

    Same expression as :func:`residual_schmidt` after relabelling the axes so
    that the largest squared coefficient plays the role of Q3.
    """
    _check_c0(c0)
    n1, n2, n3 = sorted(x * x for x in _as_q(q))
    return float(_clip((c0 * (n1 + n2) + n3 - 1) / 2, clip))


def residual_one_sided(c0: float, q, verbatim: bool = False, clip: bool = True) -> float:
    """Concurrence of a Schmidt-form state after a channel on the first qubit only.

    ``max(0, C0/2 (|Q1 - Q2| - Q3 - 1), C0/2 (|Q1 + Q2| + Q3 - 1))``.

    ``verbatim=True`` keeps an extra overall factor 2 found in the printed
    version of this law; that variant returns 2 C0 for the identity channel and
    is kept only to document the discrepancy.
    """
    _check_c0(c0)
    q1, q2, q3 = _as_q(q)
    value = max(c0 / 2 * (abs(q1 - q2) - q3 - 1), c0 / 2 * (abs(q1 + q2) + q3 - 1))
    if verbatim:
        return float(2 * max(0.0, value))
    return float(_clip(value, clip))


def depolarizing_residual(c0: float, kappa: float, t, clip: bool = True):
    """``max(0, (C0 + 1/2) exp(-2 kappa t) - 1/2)``; ``t`` may be an array."""
    _check_c0(c0)
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("time must be nonnegative")
    out = _clip((c0 + 0.5) * np.exp(-2 * kappa * t_arr) - 0.5, clip)
    return float(out) if out.ndim == 0 else out


def critical_time(c0: float, kappa: float = 1.0) -> float:
    """Time at which the depolarizing residual first reaches zero: ln(2 C0 + 1) / (2 kappa)."""
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    if c0 == 0:
        return 0.0
    if not 0 < c0 <= 1:
        raise DomainError(f"initial concurrence {c0} outside (0, 1]")
    return math.log1p(2 * c0) / (2 * kappa)


def optimal_family_unitary(q) -> np.ndarray:
    """Qubit unitary U such that (U x U)|Omega0> is the most robust orientation.

    The induced rotation carries the axis with the largest |Q| onto z, so that
    ``L_U^T diag(1, Q) L_U`` holds max Q_k^2 in its (3, 3) slot.
    """
    sq = np.array(_as_q(q)) ** 2
    k = 3 if sq[2] >= sq.max() else int(np.argmax(sq)) + 1
    return {1: HADAMARD, 2: RX_HALF_PI, 3: np.eye(2, dtype=complex)}[k].copy()


def conjugated_contraction(u, q) -> np.ndarray:
    """``L_U^T diag(1, Q1, Q2, Q3) L_U``."""
    lu = lorentz_of_unitary(u)
    return lu.T @ _as_q(q).contraction() @ lu


# -- oracles on Schmidt-form states -------------------------------------------------


def schmidt_state(lambda1: float) -> TwoQubitState:
    return from_pure(PureState(schmidt_vector(lambda1)))


def oracle_two_sided(lambda1: float, ch: PauliChannel, ch2: PauliChannel | None = None) -> float:
    return concurrence_wootters(apply_two_sided(schmidt_state(lambda1), ch, ch if ch2 is None else ch2))


def oracle_one_sided(lambda1: float, ch: PauliChannel) -> float:
    return concurrence_wootters(apply_one_sided(schmidt_state(lambda1), ch, 0))


@dataclass(frozen=True)
class StabilityReport:
    c0: float
    c_formula: float
    c_numeric: float
    gap: float

    def to_json(self) -> dict:
        return asdict(self)


def stability_report(lambda1: float, ch: PauliChannel, law: str = "two_sided") -> StabilityReport:
    """Closed form versus full simulation for a Schmidt-form state."""
    lambda2 = math.sqrt(max(0.0, 1 - lambda1**2))
    c0 = 2 * lambda1 * lambda2
    if law == "two_sided":
        formula, numeric = residual_schmidt(c0, ch.q), oracle_two_sided(lambda1, ch)
    elif law == "one_sided":
        formula, numeric = residual_one_sided(c0, ch.q), oracle_one_sided(lambda1, ch)
    elif law == "max":
        u = optimal_family_unitary(ch.q)
        psi = PureState(np.kron(u, u) @ schmidt_vector(lambda1))
        formula = residual_max(c0, ch.q)
        numeric = concurrence_wootters(apply_two_sided(from_pure(psi), ch, ch))
    else:
        raise ValueError(f"unknown law {law!r}")
    return StabilityReport(c0, formula, numeric, formula - numeric)


# -- trajectories ---------------------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    concurrences: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        c = np.asarray(self.concurrences, dtype=float)
        if t.shape != c.shape:
            raise ValueError("times and concurrences must have equal length")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite concurrence")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "concurrences", c)

    def rows(self):
        for t, c in zip(self.times, self.concurrences):
            yield float(t), float(c), self.label


def _check_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("time grid must be a non-empty 1-d sequence")
    if np.any(np.diff(g) <= 0):
        raise ValueError("time grid must be strictly ascending")
    if g[0] < 0:
        raise ValueError("times must be nonnegative")
    return g


def evolve_dms(s0, schedule: ChannelSchedule, grid, sides: str = "both") -> np.ndarray:
    dm = as_state(s0).dm
    g = _check_grid(grid)
    out = np.empty((g.size, 4, 4), dtype=complex)
    for k, t in enumerate(g):
        ch = schedule(t)
        if sides == "both":
            out[k] = kraus_two_sided(dm, ch, ch)
        elif sides == "first":
            out[k] = kraus_two_sided(dm, ch, IDENTITY)
        elif sides == "second":
            out[k] = kraus_two_sided(dm, IDENTITY, ch)
        else:
            raise ValueError(f"unknown sides {sides!r}")
    return out


def evolve_trajectory(s0, schedule: ChannelSchedule, grid, label: str = "", sides: str = "both") -> Trajectory:
    """Wootters concurrence of the fully evolved state at every grid time."""
    g = _check_grid(grid)
    return Trajectory(g, concurrence_batch(evolve_dms(s0, schedule, g, sides)), label)


def bound_excess(s, schedule: ChannelSchedule, grid) -> np.ndarray:
    """Evolved concurrence minus the best pure-state residual for the same C0."""
    s = as_state(s)
    c0 = concurrence_wootters(s)
    g = _check_grid(grid)
    traj = evolve_trajectory(s, schedule, g)
    bound = np.array([residual_max(c0, schedule(t).q) for t in g])
    return traj.concurrences - bound


def mixed_upper_bound_check(s, schedule: ChannelSchedule, grid, tol: float = 1e-7) -> bool:
    return bool(np.all(bound_excess(s, schedule, grid) <= tol))


# -- decoherence path states ------------------------------------------------------------


@dataclass(frozen=True)
class DPSVerdict:
    is_dps: bool
    t0: float | None = None
    preimage: PureState | None = None
    q: float | None = None

    def to_json(self) -> dict:
        pre = None
        if self.preimage is not None:
            pre = {"re": self.preimage.amp.real.tolist(), "im": self.preimage.amp.imag.tolist()}
        return {"is_dps": self.is_dps, "t0": self.t0, "preimage": pre}


def _undo_depolarizing(r: np.ndarray, q: float) -> np.ndarray:
    scale = np.array([1.0, 1 / q, 1 / q, 1 / q])
    return scale[:, None] * r * scale[None, :]


def _purity_defect(r: np.ndarray, q: float) -> float:
    return float(np.sum(_undo_depolarizing(r, q) ** 2) / 4 - 1)


def is_dps(s, kappa: float = 1.0, tol: float = 1e-8, n_grid: int = 10_000, q_min: float = 1e-8) -> DPSVerdict:
    """Is ``s`` the two-sided depolarizing image of some pure state?

    The depolarizing contraction q = exp(-kappa t0) is undone on the R-matrix;
    the purity of the restored matrix grows monotonically as q shrinks, so the
    candidate q is the root of the purity defect (log-spaced scan, then
    bisection).  The restored matrix must then be a positive rank-one state.
    """
    s = as_state(s)
    r = to_r_matrix(s)
    if _purity_defect(r, 1.0) > -tol:
        q_star = 1.0
    else:
        qs = np.logspace(np.log10(q_min), 0.0, n_grid)
        defects = np.array([_purity_defect(r, q) for q in qs])
        above = np.nonzero(defects >= 0)[0]
        if above.size == 0:
            return DPSVerdict(False)
        i = above[-1]
        lo, hi = qs[i], qs[i + 1]  # defect(lo) >= 0 > defect(hi)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if _purity_defect(r, mid) >= 0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-16 * hi:
                break
        q_star = lo if abs(_purity_defect(r, lo)) < abs(_purity_defect(r, hi)) else hi
    dm = r_to_dm(_undo_depolarizing(r, q_star))
    dm = 0.5 * (dm + dm.conj().T)
    w, v = np.linalg.eigh(dm)
    purity = float(np.sum(w**2))
    if w[0] < -tol or abs(purity - 1) > tol:
        return DPSVerdict(False)
    t0 = -math.log(q_star) / kappa
    return DPSVerdict(True, t0, PureState.normalized(v[:, -1]), q_star)


# -- local-unitary search ---------------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    best: float
    worst: float
    argbest: tuple[np.ndarray, np.ndarray]
    residual_max: float
    c0: float

    def to_json(self) -> dict:
        u, v = self.argbest
        return {
            "c0": self.c0,
            "residual_max": self.residual_max,
            "best": self.best,
            "worst": self.worst,
            "gap": self.residual_max - self.best,
            "argbest": {
                "U": {"re": u.real.tolist(), "im": u.imag.tolist()},
                "V": {"re": v.real.tolist(), "im": v.imag.tolist()},
            },
        }


def local_unitary_search(
    lambda1: float,
    ch: PauliChannel,
    n_samples: int,
    seed,
    include_optimal: bool = True,
    chunk: int = 4096,
) -> SearchResult:
    """Sample Haar-random (U, V), evolve (U x V)|Omega0> under ``ch`` on both qubits
    and record the best and worst residual concurrence.

    With ``include_optimal`` the constructed optimal orientation is evaluated as
    an extra candidate.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    psi0 = schmidt_vector(lambda1)
    lambda2 = math.sqrt(max(0.0, 1 - lambda1**2))
    c0 = 2 * lambda1 * lambda2

    best, worst, arg = -np.inf, np.inf, None
    done = 0
    while done < n_samples:
        n = min(chunk, n_samples - done)
        us, vs = haar_unitary(rng, n), haar_unitary(rng, n)
        c = _evolve_oriented(us, vs, psi0, ch)
        k = int(np.argmax(c))
        if c[k] > best:
            best, arg = float(c[k]), (us[k], vs[k])
        worst = min(worst, float(c.min()))
        done += n
    if include_optimal:
        u = optimal_family_unitary(ch.q)
        c = float(_evolve_oriented(u[None], u[None], psi0, ch)[0])
        if c > best:
            best, arg = c, (u, u.copy())
        worst = min(worst, c)
    return SearchResult(best, worst, arg, residual_max(c0, ch.q), c0)


def _evolve_oriented(us, vs, psi0, ch: PauliChannel) -> np.ndarray:
    n = us.shape[0]
    uv = np.einsum("nab,ncd->nacbd", us, vs).reshape(n, 4, 4)
    psi = uv @ psi0
    dms = psi[:, :, None] * psi[:, None, :].conj()
    return concurrence_batch(kraus_two_sided(dms, ch, ch))


def zero_crossing(f, t_max: float, resolution: float = 1e-4, n_scan: int = 2001) -> float | None:
    """First time in [0, t_max] where ``f`` drops to <= 0, located to ``resolution``."""
    ts = np.linspace(0.0, t_max, n_scan)
    prev = ts[0]
    if f(prev) <= 0:
        return 0.0
    for t in ts[1:]:
        if f(t) <= 0:
            lo, hi = prev, t
            while hi - lo > resolution / 4:
                mid = 0.5 * (lo + hi)
                if f(mid) <= 0:
                    hi = mid
                else:
                    lo = mid
            return 0.5 * (lo + hi)
        prev = t
    return None


def sample_channels(rng: np.random.Generator, n: int, concentration: Sequence[float] = (6, 1, 1, 1)) -> list[PauliChannel]:
    """Random Pauli channels, by default weighted toward the identity."""
    return [PauliChannel(tuple(p)) for p in rng.dirichlet(concentration, size=n)]
