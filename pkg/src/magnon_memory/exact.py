"""Brute-force ground truth on the full spin Hilbert space.

Builds H = H_e + H_n + H_en with genuine spin-s operators for small rings
and evolves states by dense eigendecomposition.  This module is the oracle
the bosonized simulator is validated against; it makes no low-excitation
approximation.

Basis layout: joint index = electron * (2s+1)^N + nuclear index, electron
0 = |+> (up), 1 = |-> (down).  A nuclear configuration is the tuple of
per-site flip numbers m_l in {0..2s} away from the fully polarised ground
state |G> (all m_l = 0); site l has digit weight (2s+1)^(l-1).
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ResourceLimitError
from .model import CouplingProfile, PhysicalParams
from .protocol import QubitState

__all__ = [
    "SpinRingBasis",
    "ExactHamiltonian",
    "build_exact",
    "evolve_exact",
    "reduce_electron",
    "excitation_numbers",
    "product_state",
]

DEFAULT_DIM_CAP = 8192  # 2 * 2^12: N = 12 at s = 1/2


class SpinRingBasis:
    """Enumeration of the electron (x) nuclear-ring product basis."""

    def __init__(self, N: int, s: float):
        self.N = int(N)
        self.two_s = int(round(2 * s))
        self.s = s
        self.d = self.two_s + 1
        self.nuc_dim = self.d**self.N
        self.dim = 2 * self.nuc_dim
        idx = np.arange(self.nuc_dim)
        weights = self.d ** np.arange(self.N)
        # occupations[i, l] = flips on site l+1 in nuclear configuration i
        self.occupations = (idx[:, None] // weights[None, :]) % self.d
        self._weights = weights

    def nuclear_index(self, flips) -> int:
        flips = np.asarray(flips, dtype=int)
        if flips.size != self.N or np.any(flips < 0) or np.any(flips > self.two_s):
            raise DomainError("invalid nuclear configuration")
        return int(flips @ self._weights)

    def index(self, electron: int, flips) -> int:
        if electron not in (0, 1):
            raise DomainError("electron index must be 0 (up) or 1 (down)")
        return electron * self.nuc_dim + self.nuclear_index(flips)

    def label(self, i: int) -> str:
        e, nuc = divmod(i, self.nuc_dim)
        sign = "+" if e == 0 else "-"
        return f"{sign}|" + ",".join(str(m) for m in self.occupations[nuc])


class ExactHamiltonian:
    """Dense Hermitian H on the exact spin space, with cached eigensystem."""

    def __init__(self, matrix: np.ndarray, params: PhysicalParams,
                 profile: CouplingProfile, basis: SpinRingBasis):
        self.matrix = matrix
        self.params = params
        self.profile = profile
        self.basis = basis
        self._eig = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigensystem(self):
        if self._eig is None:
            self._eig = np.linalg.eigh(self.matrix)
        return self._eig


def build_exact(params: PhysicalParams, profile: CouplingProfile,
                max_dim: int = DEFAULT_DIM_CAP) -> ExactHamiltonian:
    """Assemble H_e + H_n + H_en on the full 2(2s+1)^N space.

    H_e  = -g_e mu_B B0 sigma_z
    H_n  = -g_n mu_n B0 sum_l S_z^l - J sum_l S^l . S^(l+1)   (periodic)
    H_en = (1/2N) sum_l lambda_l (sigma_+ S_-^l + h.c.)

    Spin operators act in the (2s+1)-dimensional representation with
    S_z |m> = (m - s)|m> and S_- |m> = sqrt(m (2s - m + 1)) |m-1>.
    """
    if profile.N != params.N:
        raise DomainError("profile length must equal params.N")
    basis = SpinRingBasis(params.N, params.s)
    if basis.dim > max_dim:
        raise ResourceLimitError(
            f"exact Hilbert space dimension {basis.dim} exceeds the cap "
            f"{max_dim}; reduce N or s, or raise max_dim explicitly"
        )
    N, s, two_s, d = params.N, params.s, basis.two_s, basis.d
    nuc = basis.nuc_dim
    occ = basis.occupations
    m = occ.astype(float)
    idx = np.arange(nuc)

    H = np.zeros((basis.dim, basis.dim), dtype=complex)

    # Diagonal: nuclear Zeeman, S_z S_z exchange, electron Zeeman.
    sz = m - s
    diag_nuc = -params.nuclear_zeeman * sz.sum(axis=1)
    for l in range(N):
        diag_nuc -= params.J * sz[:, l] * sz[:, (l + 1) % N]
    e_zeeman = -params.g_e * params.mu_B * params.B0  # energy of |+>; |-> gets the opposite
    di = np.arange(nuc)
    H[di, di] += diag_nuc + e_zeeman
    H[nuc + di, nuc + di] += diag_nuc - e_zeeman

    # Transverse exchange: -(J/2) (S_+^l S_-^(l+1) + S_-^l S_+^(l+1)).
    if params.J != 0.0:
        for l in range(N):
            l2 = (l + 1) % N
            ml, ml2 = occ[:, l], occ[:, l2]
            mask = (ml < two_s) & (ml2 > 0)
            if not mask.any():
                continue
            src = idx[mask]
            tgt = src + d**l - d**l2
            amp = -0.5 * params.J * np.sqrt(
                (ml[mask] + 1.0) * (two_s - ml[mask])
            ) * np.sqrt(ml2[mask] * (two_s - ml2[mask] + 1.0))
            for e in (0, 1):
                H[e * nuc + tgt, e * nuc + src] += amp
                H[e * nuc + src, e * nuc + tgt] += amp

    # Hyperfine: (lambda_l / 2N) (sigma_+ S_-^l + sigma_- S_+^l).
    for l in range(N):
        ml = occ[:, l]
        mask = ml > 0
        if not mask.any():
            continue
        src = idx[mask]            # nuclear part of |-, m>
        tgt = src - d**l           # nuclear part of |+, m - e_l>
        amp = (profile.lambdas[l] / (2.0 * N)) * np.sqrt(
            ml[mask] * (two_s - ml[mask] + 1.0)
        )
        H[tgt, nuc + src] += amp
        H[nuc + src, tgt] += amp

    return ExactHamiltonian(H, params, profile, basis)


def evolve_exact(ham: ExactHamiltonian, state: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) |state> via the (cached) eigendecomposition."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (ham.dim,):
        raise DomainError(
            f"state dimension {state.shape} does not match H dimension {ham.dim}"
        )
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-10:
        raise DomainError(f"state must be normalised, |norm - 1| = {abs(norm - 1.0):.3e}")
    evals, vecs = ham.eigensystem()
    return vecs @ (np.exp(-1j * evals * t) * (vecs.conj().T @ state))


def reduce_electron(state: np.ndarray) -> QubitState:
    """Partial trace over the nuclei: 2x2 electron density matrix.

    The joint state must be laid out electron-major ((+) block first), as
    produced by SpinRingBasis.
    """
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1 or state.size % 2 != 0:
        raise DomainError("joint state must be a 1-d vector of even length")
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-10:
        raise DomainError("joint state must be normalised")
    psi = state.reshape(2, -1)
    return QubitState(psi @ psi.conj().T)


def excitation_numbers(basis: SpinRingBasis) -> np.ndarray:
    """Diagonal of C = (sigma_z + 1)/2 + sum_l (s + S_z^l) in this basis.

    H_en trades one electron flip for one nuclear flip, so [H, C] = 0.
    """
    flips = basis.occupations.sum(axis=1)
    return np.concatenate([flips + 1.0, flips.astype(float)])


def product_state(basis: SpinRingBasis, electron: int, flips=None) -> np.ndarray:
    """|electron> (x) |m_1..m_N>; defaults to the polarised ground state |G>."""
    if flips is None:
        flips = np.zeros(basis.N, dtype=int)
    vec = np.zeros(basis.dim, dtype=complex)
    vec[basis.index(electron, flips)] = 1.0
    return vec
