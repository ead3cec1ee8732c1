"""Single-qubit Pauli channels acting on two-qubit states.

A Pauli channel ``rho -> p0 rho + sum_k p_k sigma_k rho sigma_k`` contracts the
Pauli components of a qubit by the shrink coefficients (Q1, Q2, Q3).  On a
two-qubit R-matrix a channel on the first qubit scales rows, a channel on the
second qubit scales columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, IndexOutOfRange
from .numerics import PAULIS
from .qstate import PAULI_PAIRS, TwoQubitState, as_state

PROB_TOL = 1e-12


class ShrinkCoefficients(NamedTuple):
    Q1: float
    Q2: float
    Q3: float

    @classmethod
    def from_probabilities(cls, p) -> ShrinkCoefficients:
        p0, p1, p2, p3 = p
        return cls(p0 + p1 - p2 - p3, p0 - p1 + p2 - p3, p0 - p1 - p2 + p3)

    def probabilities(self) -> tuple[float, float, float, float]:
        q1, q2, q3 = self
        return (
            (1 + q1 + q2 + q3) / 4,
            (1 + q1 - q2 - q3) / 4,
            (1 - q1 + q2 - q3) / 4,
            (1 - q1 - q2 + q3) / 4,
        )

    def contraction(self) -> np.ndarray:
        """The diagonal R-picture factor diag(1, Q1, Q2, Q3)."""
        return np.diag([1.0, *self])


@dataclass(frozen=True)
class PauliChannel:
    """Probabilities (p0, p1, p2, p3) of applying I, sigma_x, sigma_y, sigma_z."""

    p: tuple[float, float, float, float]
    q: ShrinkCoefficients = field(init=False, compare=False)

    def __post_init__(self) -> None:
        p = tuple(float(x) for x in self.p)
        if len(p) != 4:
            raise DomainError(f"a Pauli channel needs 4 probabilities, got {len(p)}")
        if any(not math.isfinite(x) or x < -PROB_TOL for x in p):
            raise DomainError(f"probabilities must be nonnegative, got {p}")
        if abs(sum(p) - 1) > PROB_TOL:
            raise DomainError(f"probabilities must sum to 1, got {sum(p)!r}")
        p = tuple(max(0.0, x) for x in p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", ShrinkCoefficients.from_probabilities(p))

    @classmethod
    def from_shrink(cls, q) -> PauliChannel:
        q = ShrinkCoefficients(*q)
        return cls(q.probabilities())

    @property
    def eta(self) -> tuple[float, float, float, float]:
        """(p0 + p3, p1 + p2, p0 - p3, p1 - p2): the X-state transfer weights."""
        p0, p1, p2, p3 = self.p
        return (p0 + p3, p1 + p2, p0 - p3, p1 - p2)

    def kraus(self) -> list[np.ndarray]:
        return [math.sqrt(pk) * s for pk, s in zip(self.p, PAULIS)]

    def apply_qubit(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return sum(pk * s @ rho @ s for pk, s in zip(self.p, PAULIS))

    def to_json(self) -> dict:
        return {"p": list(self.p)}


IDENTITY = PauliChannel((1.0, 0.0, 0.0, 0.0))


def make_depolarizing(p: float) -> PauliChannel:
    """p1 = p2 = p3 = p/4, p0 = 1 - 3p/4, so that Q1 = Q2 = Q3 = 1 - p."""
    if not 0 <= p <= 1:
        raise DomainError(f"depolarizing strength {p} outside [0, 1]")
    return PauliChannel((1 - 3 * p / 4, p / 4, p / 4, p / 4))


def make_dephasing(p3: float) -> PauliChannel:
    if not 0 <= p3 <= 1:
        raise DomainError(f"dephasing probability {p3} outside [0, 1]")
    return PauliChannel((1 - p3, 0.0, 0.0, p3))


def depolarizing_at(kappa: float, t: float) -> PauliChannel:
    """Depolarizing channel after time t at coupling kappa: 1 - p(t) = exp(-kappa t)."""
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    if t < 0:
        raise DomainError("time must be nonnegative")
    return make_depolarizing(-math.expm1(-kappa * t))


@dataclass(frozen=True)
class ChannelSchedule:
    """Time-dependent Pauli channel: ``probs(t)`` returns (p0, p1, p2, p3)."""

    probs: Callable[[float], Sequence[float]]
    name: str = "custom"

    def __call__(self, t: float) -> PauliChannel:
        return PauliChannel(tuple(self.probs(float(t))))


def depolarizing_schedule(kappa: float = 1.0) -> ChannelSchedule:
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    return ChannelSchedule(lambda t: depolarizing_at(kappa, t).p, "depolarizing")


def dephasing_schedule(kappa: float = 1.0) -> ChannelSchedule:
    """Q1 = Q2 = exp(-kappa t), Q3 = 1."""
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    return ChannelSchedule(lambda t: make_dephasing(-math.expm1(-kappa * t) / 2).p, "dephasing")


def toward_schedule(target: PauliChannel, kappa: float = 1.0) -> ChannelSchedule:
    """Blend from the identity toward ``target``: p(t) = e^{-kt} id + (1 - e^{-kt}) target."""
    if kappa <= 0:
        raise DomainError("kappa must be positive")

    def probs(t):
        s = -math.expm1(-kappa * t)
        return tuple((1 - s) * (k == 0) + s * pk for k, pk in enumerate(target.p))

    return ChannelSchedule(probs, f"toward{list(target.p)}")


# -- state picture -----------------------------------------------------------------


def kraus_two_sided(dms, ch1: PauliChannel, ch2: PauliChannel) -> np.ndarray:
    """sum_ij (M_i x N_j) rho (M_i x N_j)^dagger on a stack of 4x4 matrices."""
    dms = np.asarray(dms, dtype=complex)
    out = np.zeros_like(dms)
    for i, pi in enumerate(ch1.p):
        if pi == 0:
            continue
        for j, pj in enumerate(ch2.p):
            if pj == 0:
                continue
            k = PAULI_PAIRS[i, j]
            out += (pi * pj) * (k @ dms @ k)
    return out


def apply_two_sided(s, ch1: PauliChannel, ch2: PauliChannel) -> TwoQubitState:
    """Channel ``ch1`` on the first qubit and ``ch2`` on the second."""
    return TwoQubitState(kraus_two_sided(as_state(s).dm, ch1, ch2))


def apply_one_sided(s, ch: PauliChannel, which: int = 0) -> TwoQubitState:
    if which == 0:
        return apply_two_sided(s, ch, IDENTITY)
    if which == 1:
        return apply_two_sided(s, IDENTITY, ch)
    raise IndexOutOfRange(f"qubit index must be 0 or 1, got {which}")


# -- R picture -----------------------------------------------------------------------


def apply_r_picture(r, ch1: PauliChannel | None, ch2: PauliChannel | None = None) -> np.ndarray:
    """diag(1, Q(ch1)) R diag(1, Q(ch2)); ``None`` stands for the identity channel."""
    r = np.asarray(r, dtype=float)
    left = np.array([1.0, *(ch1.q if ch1 is not None else (1, 1, 1))])
    right = np.array([1.0, *(ch2.q if ch2 is not None else (1, 1, 1))])
    return left[:, None] * r * right[None, :]


# -- JSON ------------------------------------------------------------------------------


def channel_from_json(obj: dict) -> PauliChannel:
    """Accepts {"p": [...]}, {"kind": "depolarizing", "kappa": k, "t": t} (or "p": strength)
    and {"kind": "dephasing", "p3": p3}."""
    if not isinstance(obj, dict):
        raise DomainError("channel JSON must be an object")
    kind = obj.get("kind")
    if kind is None:
        if "p" not in obj:
            raise DomainError("channel JSON needs 'p' or 'kind'")
        return PauliChannel(tuple(obj["p"]))
    if kind == "depolarizing":
        if "kappa" in obj or "t" in obj:
            return depolarizing_at(float(obj.get("kappa", 1.0)), float(obj["t"]))
        return make_depolarizing(float(obj["p"]))
    if kind == "dephasing":
        return make_dephasing(float(obj["p3"]))
    if kind == "identity":
        return IDENTITY
    raise DomainError(f"unknown channel kind {kind!r}")
