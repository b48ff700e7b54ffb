"""Reduced equations of motion in the collective basis.

One-time quantities form a real affine system in
``x = (rho_ee, rho_ss, rho_aa, rho_u, rho_v)``, where
``rho_u + i rho_v = rho_eg exp(-i phi_s)`` in the rotating frame.  The
coherences that carry the emission spectrum split into two uncoupled
channels, each a 4-component complex linear system:

* symmetric:      ``(rho_es, rho_sg, rho_se, rho_gs)``
* antisymmetric:  ``(rho_ea, rho_ag, rho_ae, rho_ga)``

The squeezing correlation ``M`` couples each pair to its conjugate partners,
which is why all four components are propagated together.  Every coefficient
here is checked against the full generator in :mod:`phasespec.liouville`.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .params import Channel, CollectiveState, SystemParams

EE, SS, AA, U, V = range(5)


class SingularSystem(np.linalg.LinAlgError):
    """The stationary equations have no unique solution."""


def population_system(params: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient matrix ``A`` and drive ``b`` with ``dx/dt = A x + b``."""
    g, n, a, m = params.gamma, params.n, params.a, params.m_abs
    ap, am = 1.0 + a, 1.0 - a
    A = g * np.array(
        [
            [-(n + 1), 0.5 * (n - 1) * ap, 0.5 * (n - 1) * am, 2 * a * m, 0],
            [ap, -0.5 * ap * (3 * n - 1), -0.5 * ap * (n - 1), -2 * ap * m, 0],
            [am, -0.5 * am * (n - 1), -0.5 * am * (3 * n - 1), 2 * am * m, 0],
            [0, -(1 + 2 * a) * m, (1 - 2 * a) * m, -n, 0],
            [0, 0, 0, 0, -n],
        ]
    )
    b = g * np.array([0.0, 0.5 * ap * (n - 1), 0.5 * am * (n - 1), a * m, 0.0])
    return A, b


def _augmented(params):
    A, b = population_system(params)
    B = np.zeros((6, 6))
    B[:5, :5] = A
    B[:5, 5] = b
    return B


def population_trajectory(params: SystemParams, state0: CollectiveState, times) -> np.ndarray:
    """Exact solution sampled at ``times``; shape ``(len(times), 5)``."""
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise ValueError("times must be non-negative")
    B = _augmented(params)
    y0 = np.append(state0.as_array(), 1.0)
    out = np.empty((times.size, 5))
    for k, t in enumerate(times.ravel()):
        out[k] = (expm(B * t) @ y0)[:5]
    return out


def evolve_populations(params: SystemParams, state0: CollectiveState, t: float) -> CollectiveState:
    """Propagate the populations and two-photon coherence to time ``t``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return CollectiveState.from_array(population_trajectory(params, state0, [t])[0])


def channel_matrix(params: SystemParams, channel: Channel | str) -> np.ndarray:
    """Generator of one channel's coherence vector."""
    channel = Channel(channel)
    g, n, a, w = params.gamma, params.n, params.a, params.omega12
    M = params.m
    if channel is Channel.SYMMETRIC:
        k = 1.0 + a
        top = np.array(
            [
                [-(0.5 * g * (n * (2 + a) + 1) - 1j * w), 0.5 * g * (n - 1) * k, -M * g * k, M * g * a],
                [0.5 * g * (n + 1) * k, -(0.5 * g * (n * (2 + a) - 1) + 1j * w), M * g * a, -M * g * k],
            ]
        )
    else:
        k = 1.0 - a
        top = np.array(
            [
                [-(0.5 * g * (n * (2 - a) + 1) + 1j * w), -0.5 * g * (n - 1) * k, -M * g * k, M * g * a],
                [-0.5 * g * (n + 1) * k, -(0.5 * g * (n * (2 - a) - 1) - 1j * w), M * g * a, -M * g * k],
            ]
        )
    P, Q = top[:, :2], top[:, 2:]
    return np.block([[P, Q], [Q.conj(), P.conj()]])


def evolve_channel(params: SystemParams, channel: Channel | str, v0, tau: float) -> np.ndarray:
    """Propagate a channel coherence vector by ``tau``."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    v0 = np.asarray(v0, dtype=complex)
    return expm(channel_matrix(params, channel) * tau) @ v0


def dark_channel(params: SystemParams) -> int | None:
    """Index of a population that never relaxes (``a = +1`` or ``a = -1``)."""
    if params.a == 1.0:
        return AA
    if params.a == -1.0:
        return SS
    return None


def steady_state(params: SystemParams, dark_population: float = 0.0) -> tuple[CollectiveState, complex]:
    """Fixed point of the population equations and the stationary ``rho_eg``.

    When one of the single-excitation states is decoupled (``|a| = 1``) its
    population is conserved; it is held at ``dark_population`` and eliminated
    before solving.

    Raises
    ------
    SingularSystem
        If the remaining linear system is not invertible.
    """
    A, b = population_system(params)
    keep = list(range(5))
    x = np.zeros(5)
    dark = dark_channel(params)
    if dark is not None:
        keep.remove(dark)
        x[dark] = dark_population
        b = b + A[:, dark] * dark_population
    A_r = A[np.ix_(keep, keep)]
    if np.linalg.cond(A_r) > 1e12:
        raise SingularSystem("stationary population equations are singular")
    x[keep] = np.linalg.solve(A_r, -b[keep])
    state = CollectiveState.from_array(x)
    rho_eg = state.rho_eg(params.phi_s)
    _check_phase_lock(params, state)
    return state, rho_eg


def _check_phase_lock(params, state, tol=1e-9):
    # stationary coherence is real in the squeezing frame, sign set by gamma12
    if abs(state.rho_v) > tol:
        raise AssertionError(f"stationary rho_v = {state.rho_v:.3g} should vanish")
    if params.gamma12 != 0 and abs(state.rho_u) > tol:
        if np.sign(state.rho_u) != np.sign(params.gamma12):
            raise AssertionError("stationary coherence phase is neither phi_s nor phi_s + pi")


def steady_coherence_closed_form(params: SystemParams) -> complex:
    """Closed-form stationary ``rho_eg`` for the non-degenerate case.

    ``|rho_eg| = n |a| |M| / (n**4 + 4 |M|**2 (a**2 - n**2))`` with phase
    ``phi_s`` for positive and ``phi_s + pi`` for negative collective damping.
    """
    n, a, m = params.n, params.a, params.m_abs
    mag = n**3 * abs(a) * m / (n**2 * (n**4 + 4 * m**2 * (a**2 - n**2)))
    phase = params.phi_s + (np.pi if params.gamma12 < 0 else 0.0)
    return mag * np.exp(1j * phase)
