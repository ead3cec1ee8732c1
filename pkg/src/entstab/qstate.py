"""Two-qubit states and their real R-picture.

Conventions (fixed for the whole package):

* computational basis |00>, |01>, |10>, |11>, with |0> the +1 eigenstate of
  sigma_z;
* Pauli index order (I, sigma_x, sigma_y, sigma_z);
* the R-matrix of a state is ``R[i, j] = Tr(rho sigma_i (x) sigma_j)`` and
  ``rho = 1/4 sum_ij R[i, j] sigma_i (x) sigma_j``.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field

import numpy as np

from .errors import InvalidState, NotNormalized, PositivityViolation, TargetUnreachable
from .numerics import PAULIS, SIGMA_Y, hermiticity_defect

STATE_TOL = 1e-9
NORM_TOL = 1e-12

# PAULI_PAIRS[i, j] = sigma_i (x) sigma_j
PAULI_PAIRS = np.einsum("iab,jcd->ijacbd", PAULIS, PAULIS).reshape(4, 4, 4, 4)
PAULI_PAIRS.setflags(write=False)

# sigma_y (x) sigma_y is real
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y).real
SPIN_FLIP.setflags(write=False)

# Maps row-major vec(A) of a 2x2 matrix to (Tr(sigma_k A) / sqrt 2)_k.
T_MATRIX = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1j, -1j, 0],
        [1, 0, 0, -1],
    ],
    dtype=complex,
) / np.sqrt(2)
T_MATRIX.setflags(write=False)


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """4x4 density matrix in the computational basis.

    Hermiticity and unit trace are always enforced.  Positivity is enforced
    unless ``check_positive=False``; the ``positive`` attribute records the
    outcome either way.
    """

    dm: np.ndarray
    check_positive: InitVar[bool] = True
    positive: bool = field(init=False)
    min_eigenvalue: float = field(init=False)

    def __post_init__(self, check_positive: bool) -> None:
        dm = np.array(self.dm, dtype=complex)
        if dm.shape != (4, 4):
            raise InvalidState(f"two-qubit density matrix must be 4x4, got {dm.shape}")
        if not np.all(np.isfinite(dm)):
            raise InvalidState("density matrix has non-finite entries")
        if hermiticity_defect(dm) > STATE_TOL:
            raise InvalidState("density matrix is not Hermitian")
        tr = np.trace(dm)
        if abs(tr - 1) > STATE_TOL:
            raise InvalidState(f"trace is {tr.real:.12g}, expected 1")
        dm = 0.5 * (dm + dm.conj().T)
        dm.setflags(write=False)
        lo = float(np.linalg.eigvalsh(dm)[0])
        object.__setattr__(self, "dm", dm)
        object.__setattr__(self, "min_eigenvalue", lo)
        object.__setattr__(self, "positive", lo >= -STATE_TOL)
        if check_positive and not self.positive:
            raise PositivityViolation(f"smallest eigenvalue {lo:.3g} < -{STATE_TOL:g}")

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.dm @ self.dm)))

    def __repr__(self) -> str:
        return f"TwoQubitState(purity={self.purity:.6f}, min_eig={self.min_eigenvalue:.3g})"


def as_state(obj) -> TwoQubitState:
    if isinstance(obj, TwoQubitState):
        return obj
    if isinstance(obj, PureState):
        return from_pure(obj)
    return TwoQubitState(obj)


@dataclass(frozen=True, eq=False)
class PureState:
    amp: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.amp, dtype=complex).ravel()
        if a.shape != (4,):
            raise InvalidState(f"two-qubit pure state needs 4 amplitudes, got {a.size}")
        norm = np.linalg.norm(a)
        if abs(norm - 1) > NORM_TOL:
            raise NotNormalized(f"norm is {norm:.15g}")
        a.setflags(write=False)
        object.__setattr__(self, "amp", a)

    @classmethod
    def normalized(cls, vec) -> PureState:
        v = np.asarray(vec, dtype=complex).ravel()
        return cls(v / np.linalg.norm(v))


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """``(U (x) V)(lambda1 |01> + lambda2 |10>)`` with lambda1 >= lambda2 >= 0."""

    lambda1: float
    lambda2: float
    U: np.ndarray
    V: np.ndarray

    @property
    def concurrence(self) -> float:
        return 2 * self.lambda1 * self.lambda2

    def state(self) -> PureState:
        return PureState(np.kron(self.U, self.V) @ schmidt_vector(self.lambda1, self.lambda2))


@dataclass(frozen=True)
class XFormState:
    """Parameters of the X-shaped matrix with diagonal (u, x, y, v) and coherence z at (1, 2)."""

    u: float
    x: float
    y: float
    v: float
    z: complex = 0.0

    tol = 1e-12

    def __post_init__(self) -> None:
        if min(self.u, self.x, self.y, self.v) < -self.tol:
            raise PositivityViolation("diagonal entries must be nonnegative")
        if abs(self.u + self.x + self.y + self.v - 1) > self.tol:
            raise InvalidState("u + x + y + v must equal 1")
        if self.x * self.y < abs(self.z) ** 2 - self.tol:
            raise PositivityViolation(f"x*y = {self.x * self.y:.6g} < |z|^2 = {abs(self.z) ** 2:.6g}")

    def matrix(self) -> np.ndarray:
        m = np.diag([self.u, self.x, self.y, self.v]).astype(complex)
        m[1, 2] = self.z
        m[2, 1] = np.conj(self.z)
        return m


def schmidt_vector(lambda1: float, lambda2: float | None = None) -> np.ndarray:
    """Amplitudes of lambda1 |01> + lambda2 |10> (lambda2 defaults to the normalising value)."""
    if lambda2 is None:
        lambda2 = np.sqrt(max(0.0, 1 - lambda1**2))
    return np.array([0, lambda1, lambda2, 0], dtype=complex)


def schmidt_lambdas(c0: float) -> tuple[float, float]:
    """Schmidt weights (lambda1 >= lambda2) giving concurrence 2 lambda1 lambda2 = c0."""
    if not 0 <= c0 <= 1:
        raise ValueError("concurrence must lie in [0, 1]")
    root = np.sqrt(max(0.0, 1 - c0**2))
    return float(np.sqrt((1 + root) / 2)), float(np.sqrt((1 - root) / 2))


def from_pure(p) -> TwoQubitState:
    p = p if isinstance(p, PureState) else PureState(p)
    return TwoQubitState(np.outer(p.amp, p.amp.conj()))


def schmidt_decompose(p) -> SchmidtForm:
    p = p if isinstance(p, PureState) else PureState(p)
    w, s, vh = np.linalg.svd(p.amp.reshape(2, 2))
    # psi = s0 |w0>|vh0> + s1 |w1>|vh1>; put the weights on |01> and |10>
    U = w
    V = np.column_stack([vh[1], vh[0]])
    return SchmidtForm(float(s[0]), float(s[1]), U, V)


def to_r_matrix(s) -> np.ndarray:
    """Real Pauli-correlation matrix of a state (accepts stacks of 4x4 matrices)."""
    dm = s.dm if isinstance(s, TwoQubitState) else np.asarray(s)
    return np.einsum("...ab,ijba->...ij", dm, PAULI_PAIRS).real


def r_to_dm(r) -> np.ndarray:
    return 0.25 * np.einsum("...ij,ijab->...ab", np.asarray(r, dtype=float), PAULI_PAIRS)


def from_r_matrix(r) -> TwoQubitState:
    """Inverse of :func:`to_r_matrix`.  Non-positive results are flagged, not rejected."""
    r = np.asarray(r, dtype=float)
    if r.shape != (4, 4):
        raise ValueError(f"R-matrix must be 4x4, got {r.shape}")
    if abs(r[0, 0] - 1) > STATE_TOL:
        raise InvalidState(f"R[0, 0] must be 1, got {r[0, 0]:.12g}")
    return TwoQubitState(r_to_dm(r), check_positive=False)


def spin_flip(s) -> np.ndarray:
    dm = s.dm if isinstance(s, TwoQubitState) else np.asarray(s)
    return SPIN_FLIP @ dm.conj() @ SPIN_FLIP


def lorentz_of_unitary(u) -> np.ndarray:
    """Real 4x4 action ``T (U (x) U*) T^dagger`` of a qubit unitary on one R index."""
    u = np.asarray(u, dtype=complex)
    return (T_MATRIX @ np.kron(u, u.conj()) @ T_MATRIX.conj().T).real


def x_form_state(x: XFormState) -> TwoQubitState:
    return TwoQubitState(x.matrix())


def maximally_mixed() -> TwoQubitState:
    return TwoQubitState(np.eye(4) / 4)


def bell_state(kind: str = "psi-") -> PureState:
    s = 1 / np.sqrt(2)
    amps = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    return PureState(amps[kind])


def werner_state(w: float) -> TwoQubitState:
    """w |psi-><psi-| + (1 - w) I/4."""
    if not -1 / 3 - 1e-12 <= w <= 1 + 1e-12:
        raise ValueError("Werner weight must lie in [-1/3, 1]")
    singlet = from_pure(bell_state("psi-")).dm
    return TwoQubitState(w * singlet + (1 - w) * np.eye(4) / 4)


# -- random sampling ---------------------------------------------------------


def haar_unitary(rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-random SU(2) matrices from Euler angles Rz(a) Ry(b) Rz(c).

    ``b`` carries the sin(b) density required by the Haar measure.
    """
    shape = () if size is None else (size,)
    a = rng.uniform(0, 4 * np.pi, shape)  # 4 pi: SU(2) double-covers the rotations
    c = rng.uniform(0, 2 * np.pi, shape)
    b = np.arccos(1 - 2 * rng.uniform(0, 1, shape))
    ea, ec = np.exp(-0.5j * a), np.exp(-0.5j * c)
    cb, sb = np.cos(b / 2), np.sin(b / 2)
    out = np.empty(shape + (2, 2), dtype=complex)
    out[..., 0, 0] = ea * ec * cb
    out[..., 0, 1] = -ea * np.conj(ec) * sb
    out[..., 1, 0] = np.conj(ea) * ec * sb
    out[..., 1, 1] = np.conj(ea) * np.conj(ec) * cb
    return out


def _random_pure_amp(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return v / np.linalg.norm(v)


def _random_mixed_dm(rng: np.random.Generator, rank: int = 4) -> np.ndarray:
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def _random_qubit_dm(rng: np.random.Generator) -> np.ndarray:
    r = rng.normal(size=3)
    r *= rng.uniform() ** (1 / 3) / np.linalg.norm(r)
    return 0.5 * (np.eye(2) + np.einsum("k,kab->ab", r, PAULIS[1:]))


def _random_separable_dm(rng: np.random.Generator, terms: int = 2) -> np.ndarray:
    w = rng.dirichlet(np.ones(terms))
    return sum(wk * np.kron(_random_qubit_dm(rng), _random_qubit_dm(rng)) for wk in w)


def random_state(seed, kind: str = "pure", c0: float | None = None, max_attempts: int = 50) -> TwoQubitState:
    """Seeded random two-qubit state.

    kind="pure"   Haar-random pure state.
    kind="mixed"  Hilbert-Schmidt random mixed state of random rank.
    kind="fixed"  mixed state with concurrence ``c0``: a random pure state of
                  larger concurrence blended with a random separable state,
                  blending weight found by bisection.
    """
    from .entanglement import concurrence_wootters

    rng = np.random.default_rng(seed)
    if kind == "pure":
        return from_pure(PureState(_random_pure_amp(rng)))
    if kind == "mixed":
        return TwoQubitState(_random_mixed_dm(rng, rank=int(rng.integers(1, 5))))
    if kind != "fixed":
        raise ValueError(f"unknown kind {kind!r}")
    if c0 is None or not 0 <= c0 <= 1:
        raise ValueError("fixed-concurrence states need c0 in [0, 1]")

    for _ in range(max_attempts):
        c_top = rng.uniform(c0, 1)
        l1, l2 = schmidt_lambdas(c_top)
        u, v = haar_unitary(rng, 2)
        top = from_pure(PureState(np.kron(u, v) @ schmidt_vector(l1, l2))).dm
        sep = _random_separable_dm(rng)

        def excess(w):
            return concurrence_wootters(w * top + (1 - w) * sep) - c0

        if excess(1.0) < 0:
            continue
        lo, hi = 0.0, 1.0
        if excess(lo) >= 0:  # only possible for c0 == 0
            return TwoQubitState(sep)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if excess(mid) < 0:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-15:
                break
        if abs(excess(hi)) <= 1e-9:
            return TwoQubitState(hi * top + (1 - hi) * sep)
    raise TargetUnreachable(f"no state with concurrence {c0} after {max_attempts} attempts")


# -- serialisation -------------------------------------------------------------


def state_to_json(s) -> dict:
    dm = as_state(s).dm
    return {"re": dm.real.tolist(), "im": dm.imag.tolist()}


def state_from_json(obj: dict) -> TwoQubitState:
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros((4, 4))), dtype=float)
    except (KeyError, TypeError) as exc:
        raise InvalidState(f"state JSON needs 're' (and optionally 'im') 4x4 arrays: {exc}") from exc
    return TwoQubitState(re + 1j * im)
