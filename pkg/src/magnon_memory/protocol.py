"""Write/read protocol: swap the electron qubit into the memory magnon mode.

Basis conventions (fixed package-wide, mind the cross-alignment):

* ``QubitState`` matrices are ordered (|+>, |->) = (up, down), so
  rho[0, 0] is the spin-up population.
* ``StoredState`` matrices are ordered over memory-mode Fock levels
  (|0_N>, |1_N>).
* The resonant swap maps |-> -> |0_N> and |+> -> -i |1_N> (the dark state
  stays put, the excited branch completes half a Rabi cycle).  After the
  relabelling - <-> 0, + <-> 1 the map is the fixed diagonal phase
  diag(1, e^{-i pi/2}), independent of the stored state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boson import (
    BosonModel,
    FockBasis,
    JointState,
    SingleExcitationBasis,
    evolve_constant,
)
from .errors import DomainError, RegimeError
from .model import swap_time

__all__ = [
    "QubitState",
    "StoredState",
    "StoreOutcome",
    "ideal_store_map",
    "storage_phase_unitary",
    "store",
    "store_outcome",
    "retrieve",
    "round_trip",
    "roundtrip_unitary",
    "process_fidelity_roundtrip",
    "map_fidelity",
    "uhlmann_fidelity",
    "trace_distance",
]

_VALIDATION_ATOL = 1e-10


def _check_density_matrix(mat: np.ndarray, what: str, atol: float) -> np.ndarray:
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (2, 2):
        raise DomainError(f"{what} must be a 2x2 matrix")
    if np.max(np.abs(mat - mat.conj().T)) > atol:
        raise DomainError(f"{what} must be Hermitian")
    if abs(np.trace(mat).real - 1.0) > atol or abs(np.trace(mat).imag) > atol:
        raise DomainError(f"{what} must have unit trace")
    if np.min(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))) < -atol:
        raise DomainError(f"{what} must be positive semidefinite")
    return mat


@dataclass(frozen=True, eq=False)
class QubitState:
    """Electron density matrix in the (|+>, |->) ordering."""

    rho: np.ndarray
    atol: float = _VALIDATION_ATOL

    def __post_init__(self):
        object.__setattr__(self, "rho", _check_density_matrix(self.rho, "qubit state", self.atol))

    @classmethod
    def pure(cls, plus_amp: complex, minus_amp: complex) -> "QubitState":
        v = np.array([plus_amp, minus_amp], dtype=complex)
        v /= np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def up(cls) -> "QubitState":
        return cls.pure(1.0, 0.0)

    @classmethod
    def down(cls) -> "QubitState":
        return cls.pure(0.0, 1.0)

    @classmethod
    def mixed_diagonal(cls, p_plus: float, p_minus: float) -> "QubitState":
        return cls(np.diag([p_plus, p_minus]).astype(complex))

    @staticmethod
    def pauli_inputs() -> list["QubitState"]:
        """The four tomography inputs: |+z>, |-z>, |+x>, |+y>."""
        s = 1.0 / np.sqrt(2.0)
        return [
            QubitState.up(),
            QubitState.down(),
            QubitState.pure(s, s),
            QubitState.pure(s, 1j * s),
        ]

    def purity(self) -> float:
        return float(np.trace(self.rho @ self.rho).real)


@dataclass(frozen=True, eq=False)
class StoredState:
    """Memory-mode density matrix over Fock levels (|0_N>, |1_N>)."""

    w: np.ndarray
    atol: float = _VALIDATION_ATOL

    def __post_init__(self):
        object.__setattr__(self, "w", _check_density_matrix(self.w, "stored state", self.atol))

    def purity(self) -> float:
        return float(np.trace(self.w @ self.w).real)


# Basis map of the ideal swap: columns are the images of |+> and |->.
_SWAP_MAP = np.array([[0.0, 1.0], [-1.0j, 0.0]], dtype=complex)


def storage_phase_unitary() -> np.ndarray:
    """diag(1, e^{-i pi/2}): the residual phase after relabelling - <-> 0."""
    return np.diag([1.0, np.exp(-0.5j * np.pi)])


def ideal_store_map(rho: QubitState) -> StoredState:
    """Analytic image of the swap: w = A rho A^dag with A = [[0,1],[-i,0]].

    Entrywise, w_nm = rho~_nm e^{i (m - n) pi / 2} where rho~ is rho in the
    relabelled ordering (- <-> 0, + <-> 1), i.e. populations swap blocks and
    coherences pick up the fixed -i / +i phases.
    """
    return StoredState(_SWAP_MAP @ rho.rho @ _SWAP_MAP.conj().T)


def _require_resonant(model: BosonModel, what: str):
    if model.params.B0 != 0.0:
        raise RegimeError(f"{what} requires B0 = 0 (resonant storage)")


def _initial_occupations(model: BosonModel, spectator_occupations):
    """Active-mode occupation vector with the memory mode forced to vacuum."""
    modes = model.active_modes
    occs = np.zeros(len(modes), dtype=int)
    if spectator_occupations:
        for k, n in dict(spectator_occupations).items():
            if k == model.params.N:
                if n != 0:
                    raise DomainError("memory mode must start in the vacuum state")
                continue
            occs[modes.index(k)] = int(n)
    return occs


@dataclass(frozen=True, eq=False)
class StoreOutcome:
    """Stored state plus the evolved joint branches needed for retrieval."""

    stored: StoredState
    leakage: float
    branches: list  # [(probability, JointState), ...]
    model: BosonModel


def store_outcome(rho: QubitState, model: BosonModel,
                  spectator_occupations=None) -> StoreOutcome:
    """Run the write step: evolve rho (x) vacuum for t0 under the model.

    Mixed inputs are handled by purification: each eigenbranch of rho is
    evolved as a pure state and the branches are mixed with their weights,
    which is equivalent to evolving a purification with a virtual reference
    and tracing it out.
    """
    _require_resonant(model, "store")
    occs = _initial_occupations(model, spectator_occupations)
    use_fock = bool(np.any(occs))
    if use_fock:
        basis = FockBasis(model.active_modes, max(model.fock_cutoff, int(occs.max())))
    else:
        basis = SingleExcitationBasis(model.active_modes)

    probs, vecs = np.linalg.eigh(rho.rho)
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    t0 = swap_time(model.params)
    n_pos = basis.mode_position(model.params.N)

    w = np.zeros((2, 2), dtype=complex)
    leakage = 0.0
    branches = []
    for p, amp in zip(probs, vecs.T):
        if p == 0.0:
            continue
        init = np.zeros(basis.dim, dtype=complex)
        if use_fock:
            init[basis.index(0, occs)] = amp[0]
            init[basis.index(1, occs)] = amp[1]
        else:
            init[0], init[1] = amp[0], amp[1]
        final = evolve_constant(model, JointState(init, basis), t0)
        w += p * basis.reduce_mode(final.vector, model.params.N)[:2, :2]
        leakage += p * _branch_leakage(final.vector, basis, occs, n_pos)
        branches.append((float(p), final))
    return StoreOutcome(StoredState(w), float(leakage), branches, model)


def _branch_leakage(vec: np.ndarray, basis, initial_occs, n_pos: int) -> float:
    """Population outside {electron -} (x) {spectators as prepared} (x) {n_N <= 1}."""
    if isinstance(basis, SingleExcitationBasis):
        good = abs(vec[1]) ** 2 + abs(vec[2 + n_pos]) ** 2
        return max(0.0, 1.0 - good)
    occ = basis.occupations
    spect = [p for p in range(len(basis.modes)) if p != n_pos]
    sel = occ[:, n_pos] <= 1
    for p in spect:
        sel &= occ[:, p] == initial_occs[p]
    block = vec[basis.mode_dim:]  # electron |-> block
    good = float(np.sum(np.abs(block[sel]) ** 2))
    return max(0.0, 1.0 - good)


def store(rho: QubitState, model: BosonModel,
          spectator_occupations=None) -> tuple[StoredState, float]:
    """Write step; returns (memory-mode state, leaked population)."""
    out = store_outcome(rho, model, spectator_occupations)
    return out.stored, out.leakage


def retrieve(stored, model: BosonModel | None = None) -> QubitState:
    """Read step: evolve a stored joint state for another t0, reduce the electron.

    Accepts the StoreOutcome from :func:`store_outcome` (mixing all branches)
    or a single JointState.
    """
    if isinstance(stored, StoreOutcome):
        model = model or stored.model
        rho = np.zeros((2, 2), dtype=complex)
        t0 = swap_time(model.params)
        for p, joint in stored.branches:
            final = evolve_constant(model, joint, t0)
            rho += p * final.basis.reduce_electron(final.vector)
        return QubitState(rho)
    if model is None:
        raise DomainError("retrieve needs the model when given a bare joint state")
    _require_resonant(model, "retrieve")
    final = evolve_constant(model, stored, swap_time(model.params))
    return QubitState(final.basis.reduce_electron(final.vector))


def round_trip(rho: QubitState, model: BosonModel) -> QubitState:
    """store followed by retrieve."""
    return retrieve(store_outcome(rho, model), model)


def roundtrip_unitary() -> np.ndarray:
    """Fixed electron unitary of the ideal write+read cycle: diag(-1, 1).

    Two half Rabi cycles flip the sign of the excited branch; the dark
    branch is untouched.
    """
    return np.diag([-1.0 + 0.0j, 1.0 + 0.0j])


def process_fidelity_roundtrip(model: BosonModel) -> float:
    """Process fidelity of the actual round trip against the ideal unitary.

    Reconstructs the qubit channel from the joint evolution of the two
    electron basis states over 2 t0 and compares Choi states with the
    diag(-1, 1) target.
    """
    _require_resonant(model, "round trip")
    basis = SingleExcitationBasis(model.active_modes)
    t_total = 2.0 * swap_time(model.params)
    finals = []
    for electron in (0, 1):
        init = np.zeros(basis.dim, dtype=complex)
        init[electron] = 1.0
        finals.append(evolve_constant(model, JointState(init, basis), t_total).vector)

    # E(|i><j|) from cross terms of the evolved purification branches.
    def channel_block(i: int, j: int) -> np.ndarray:
        psi_i = finals[i].reshape(-1)
        psi_j = finals[j].reshape(-1)
        rho = np.zeros((2, 2), dtype=complex)
        rho[0, 0] = psi_i[0] * np.conj(psi_j[0])
        rho[0, 1] = psi_i[0] * np.conj(psi_j[1])
        rho[1, 0] = psi_i[1] * np.conj(psi_j[0])
        rho[1, 1] = psi_i[1] * np.conj(psi_j[1]) + psi_i[2:] @ psi_j[2:].conj()
        return rho

    choi = np.zeros((4, 4), dtype=complex)
    for i in (0, 1):
        for j in (0, 1):
            choi[i * 2:(i + 1) * 2, j * 2:(j + 1) * 2] = channel_block(i, j)
    choi /= 2.0
    u = roundtrip_unitary()
    bell = np.zeros(4, dtype=complex)
    for i in (0, 1):
        bell[i * 2:(i + 1) * 2] += u[:, i] / np.sqrt(2.0)
    return float(np.real(bell.conj() @ choi @ bell))


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    evals, vecs = np.linalg.eigh(mat)
    return (vecs * np.sqrt(np.clip(evals, 0.0, None))) @ vecs.conj().T


def uhlmann_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Root-convention fidelity F = Tr sqrt(sqrt(a) b sqrt(a)), in [0, 1]."""
    ra = _psd_sqrt(np.asarray(a, dtype=complex))
    inner = ra @ np.asarray(b, dtype=complex) @ ra
    evals = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    f = float(np.sum(np.sqrt(np.clip(evals, 0.0, None))))
    return min(max(f, 0.0), 1.0)


def map_fidelity(rho_in: QubitState, w_out: StoredState) -> float:
    """Fidelity of an actual stored state against the ideal image of rho_in."""
    return uhlmann_fidelity(ideal_store_map(rho_in).w, w_out.w)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """(1/2) Tr |a - b|."""
    diff = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))
