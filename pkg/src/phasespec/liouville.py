"""Exact two-atom master equation as a 16 x 16 superoperator.

The generator acts on row-major vectorized density matrices in the bare
product basis ``(|e1e2>, |e1g2>, |g1e2>, |g1g2>)`` and is built in the frame
rotating at the squeezing carrier (set equal to the atomic frequency), which
makes it time independent.  This module is the ground truth against which the
reduced collective-basis equations in :mod:`phasespec.dynamics` and
:mod:`phasespec.correlation` are checked.

Public functions take and return density matrices in the collective basis
``(e, s, a, g)``; :data:`COLLECTIVE_TO_BARE` is the single source of truth for
the change of basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm, null_space

from .params import SystemParams, validate_params

_SQ2 = np.sqrt(2.0)

#: Columns are |e>, |s>, |a>, |g> expressed in the bare product basis.
COLLECTIVE_TO_BARE = np.array(
    [
        [1, 0, 0, 0],
        [0, 1 / _SQ2, 1 / _SQ2, 0],
        [0, 1 / _SQ2, -1 / _SQ2, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)

_SP = np.array([[0, 1], [0, 0]], dtype=complex)  # |e><g| in (e, g)
_I2 = np.eye(2, dtype=complex)

#: Raising operators of atom 1 and atom 2 in the bare basis.
RAISING = (np.kron(_SP, _I2), np.kron(_I2, _SP))
LOWERING = tuple(op.conj().T for op in RAISING)


def to_bare(rho_collective) -> np.ndarray:
    U = COLLECTIVE_TO_BARE
    return U @ np.asarray(rho_collective) @ U.conj().T


def to_collective(rho_bare) -> np.ndarray:
    U = COLLECTIVE_TO_BARE
    return U.conj().T @ np.asarray(rho_bare) @ U


def _left(op):
    return np.kron(op, np.eye(4))


def _right(op):
    return np.kron(np.eye(4), op.T)


def _sandwich(a, b):
    # vec(a X b) for row-major vec
    return np.kron(a, b.T)


def damping_matrix(params: SystemParams) -> np.ndarray:
    """``Gamma_ij`` with equal diagonal rates and symmetric cross term."""
    return np.array([[params.gamma, params.gamma12], [params.gamma12, params.gamma]])


@dataclass(frozen=True)
class Superoperator:
    """Time-independent generator ``d vec(rho) / dt = matrix @ vec(rho)``."""

    matrix: np.ndarray = field(repr=False)
    params: SystemParams

    def apply(self, rho_bare) -> np.ndarray:
        return (self.matrix @ np.asarray(rho_bare, dtype=complex).reshape(16)).reshape(4, 4)

    def propagator(self, t: float, method: str = "expm") -> np.ndarray:
        """``exp(L t)`` by scaling-and-squaring (default) or eigendecomposition."""
        if method == "expm":
            return expm(self.matrix * t)
        if method == "eig":
            w, V = np.linalg.eig(self.matrix)
            return (V * np.exp(w * t)) @ np.linalg.inv(V)
        raise ValueError(f"unknown propagation method {method!r}")

    def collective_matrix(self) -> np.ndarray:
        """Generator expressed on vectorized collective-basis matrices."""
        U = COLLECTIVE_TO_BARE
        T = np.kron(U, U.conj())  # vec(U X U^dag) = T vec(X)
        return T.conj().T @ self.matrix @ T


def build_liouvillian(params: SystemParams) -> Superoperator:
    """Assemble the rotating-frame generator of the squeezed-vacuum master equation.

    The coherent part is the dipole-dipole exchange ``Omega12 (S1+ S2- + S2+ S1-)``;
    the dissipator combines the anti-Hermitian part of the effective
    Hamiltonian with the jump terms, weighted by ``Gamma_ij`` and carrying
    ``N`` and ``M = |M| exp(i phi_s)``.
    """
    validate_params(params)
    N = params.n_photons
    M = params.m
    gam = damping_matrix(params)
    sp, sm = RAISING, LOWERING

    H = params.omega12 * (sp[0] @ sm[1] + sp[1] @ sm[0])
    K = np.zeros((4, 4), dtype=complex)
    L = -1j * (_left(H) - _right(H))
    for i in range(2):
        for j in range(2):
            g = gam[i, j]
            K += g * (
                (1 + N) * sp[i] @ sm[j]
                + N * sm[i] @ sp[j]
                - M * sp[i] @ sp[j]
                - np.conj(M) * sm[i] @ sm[j]
            )
            L += g * (
                (1 + N) * _sandwich(sm[i], sp[j])
                + N * _sandwich(sp[i], sm[j])
                - M * _sandwich(sp[i], sp[j])
                - np.conj(M) * _sandwich(sm[i], sm[j])
            )
    L += -0.5 * (_left(K) + _right(K))
    return Superoperator(L, params)


def evolve_oracle(L: Superoperator, rho0, t) -> np.ndarray:
    """Propagate a collective-basis density matrix by ``exp(L t)``.

    ``t`` may be a scalar (returns ``(4, 4)``) or a 1-D array of times
    (returns ``(len(t), 4, 4)``).
    """
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(times < 0):
        raise ValueError("evolution time must be non-negative")
    v0 = to_bare(rho0).reshape(16)
    out = np.empty((times.size, 4, 4), dtype=complex)
    for k, tk in enumerate(times):
        if tk == 0:
            out[k] = np.asarray(rho0, dtype=complex)
            continue
        out[k] = to_collective((L.propagator(tk) @ v0).reshape(4, 4))
    return out[0] if np.ndim(t) == 0 else out


def two_time_correlation_oracle(L: Superoperator, rho_t, i: int, j: int, tau: float) -> complex:
    """``<S_i^+(t) S_j^-(t + tau)>`` by the quantum regression theorem.

    ``rho_t`` is the collective-basis state at time ``t``; ``i``, ``j`` are
    atom indices (0 or 1).  The seed ``rho(t) S_i^+`` is propagated by the
    same generator and contracted with ``S_j^-``.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    seed = to_bare(rho_t) @ RAISING[i]
    x = (L.propagator(tau) @ seed.reshape(16)).reshape(4, 4)
    return complex(np.trace(LOWERING[j] @ x))


def weighted_correlation_oracle(L: Superoperator, rho_t, tau: float) -> complex:
    """``sum_ij Gamma_ij <S_i^+(t) S_j^-(t + tau)>``."""
    gam = damping_matrix(L.params)
    P = L.propagator(tau)
    rho_b = to_bare(rho_t)
    total = 0j
    for i in range(2):
        x = (P @ (rho_b @ RAISING[i]).reshape(16)).reshape(4, 4)
        for j in range(2):
            total += gam[i, j] * np.trace(LOWERING[j] @ x)
    return complex(total)


def correlation_oracle(L: Superoperator, rho0, t1: float, t2: float) -> complex:
    """Weighted two-time correlation ``C(t1, t2)`` for either time ordering.

    For ``t2 < t1`` the regression is run with the operators reversed,
    ``<S_i^+(t1) S_j^-(t2)> = Tr[S_i^+ exp(L (t1 - t2)) (S_j^- rho(t2))]``,
    so the Hermitian symmetry of the kernel is not assumed.
    """
    gam = damping_matrix(L.params)
    if t2 >= t1:
        return weighted_correlation_oracle(L, evolve_oracle(L, rho0, t1), t2 - t1)
    rho_b = to_bare(evolve_oracle(L, rho0, t2))
    P = L.propagator(t1 - t2)
    total = 0j
    for j in range(2):
        x = (P @ (LOWERING[j] @ rho_b).reshape(16)).reshape(4, 4)
        for i in range(2):
            total += gam[i, j] * np.trace(RAISING[i] @ x)
    return complex(total)


def steady_state_oracle(L: Superoperator) -> np.ndarray:
    """Unique stationary state (collective basis); raises if degenerate."""
    ns = null_space(L.matrix)
    if ns.shape[1] != 1:
        raise np.linalg.LinAlgError(f"stationary subspace has dimension {ns.shape[1]}")
    rho = ns[:, 0].reshape(4, 4)
    rho = rho / np.trace(rho)
    return to_collective(0.5 * (rho + rho.conj().T))
