"""Concurrence and entanglement sudden death."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import _as_state
from .dynamics import population_trajectory
from .liouville import to_bare
from .params import A, E, G, S

SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))

X_TOL = 1e-10


class NotXState(ValueError):
    pass


def _psd_sqrt(rho):
    rho = 0.5 * (rho + rho.conj().T)
    w, V = np.linalg.eigh(rho)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


def concurrence_general(rho) -> float:
    """Wootters concurrence of a collective-basis density matrix.

    The square roots of the eigenvalues of ``rho (Y x Y) rho* (Y x Y)`` are
    obtained as singular values of ``sqrt(rho) (Y x Y) sqrt(rho)*``, which
    avoids a non-Hermitian eigenproblem.
    """
    rho_b = to_bare(rho)
    r = _psd_sqrt(rho_b)
    s = np.linalg.svd(r @ SIGMA_YY @ r.conj(), compute_uv=False)
    s = np.sort(s)[::-1]
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def _x_mask():
    mask = np.ones((4, 4), dtype=bool)
    mask[np.diag_indices(4)] = False
    mask[E, G] = mask[G, E] = False
    return mask


def concurrence_terms(rho) -> tuple[float, float]:
    """Signed contributions ``(C1, C2)`` of an X-form state.

    ``C1 = 2 |rho_eg| - (rho_ss + rho_aa)`` measures entanglement carried by
    the two-photon coherence, ``C2 = |rho_ss - rho_aa| - 2 sqrt(rho_gg rho_ee)``
    that carried by the single-excitation populations.
    """
    rho = np.asarray(rho)
    off = np.abs(rho[_x_mask()]).max()
    if off > X_TOL:
        raise NotXState(f"off-X element of magnitude {off:.2e}")
    ree, rss, raa, rgg = (rho[k, k].real for k in (E, S, A, G))
    c1 = 2 * abs(rho[E, G]) - (rss + raa)
    c2 = abs(rss - raa) - 2 * np.sqrt(max(rgg * ree, 0.0))
    return float(c1), float(c2)


def concurrence_xstate(rho) -> float:
    c1, c2 = concurrence_terms(rho)
    return max(0.0, c1, c2)


def _terms_from_trajectory(x):
    ree, rss, raa, ru, rv = x.T
    rgg = 1 - ree - rss - raa
    c1 = 2 * np.hypot(ru, rv) - (rss + raa)
    c2 = np.abs(rss - raa) - 2 * np.sqrt(np.clip(rgg * ree, 0, None))
    return c1, c2


@dataclass(frozen=True)
class ConcurrenceTrajectory:
    time: np.ndarray
    c1: np.ndarray
    c2: np.ndarray

    @property
    def concurrence(self) -> np.ndarray:
        return np.maximum(0.0, np.maximum(self.c1, self.c2))


def concurrence_trajectory(params, rho0, times) -> ConcurrenceTrajectory:
    times = np.asarray(times, dtype=float)
    x = population_trajectory(params, _as_state(rho0, params.phi_s), times)
    c1, c2 = _terms_from_trajectory(x)
    return ConcurrenceTrajectory(times, c1, c2)


@dataclass(frozen=True)
class ESDResult:
    """Sudden-death and revival instants of the concurrence."""

    death_times: tuple
    revival_times: tuple
    steady_value: float
    t_max: float

    def zero_intervals(self) -> list[tuple[float, float]]:
        """Intervals of vanishing concurrence; open-ended ones stop at ``t_max``."""
        out = []
        revivals = list(self.revival_times)
        for td in self.death_times:
            later = [tr for tr in revivals if tr > td]
            out.append((td, later[0] if later else self.t_max))
        return out


def esd_times(params, rho0, t_max: float, step: float = 0.01, tol: float = 1e-4) -> ESDResult:
    """Locate zero crossings of ``max(C1, C2)`` on ``[0, t_max]``.

    Crossings are bracketed on a grid of spacing ``step`` and refined by
    bisection to ``tol``.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    state0 = _as_state(rho0, params.phi_s)
    n = int(np.ceil(t_max / step))
    times = np.linspace(0.0, t_max, n + 1)

    def f(ts):
        c1, c2 = _terms_from_trajectory(population_trajectory(params, state0, np.atleast_1d(ts)))
        return np.maximum(c1, c2)

    vals = f(times)
    positive = vals > 0
    deaths, revivals = [], []
    for k in np.flatnonzero(positive[1:] != positive[:-1]):
        lo, hi = times[k], times[k + 1]
        lo_pos = positive[k]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if (f(mid)[0] > 0) == lo_pos:
                lo = mid
            else:
                hi = mid
        t_cross = 0.5 * (lo + hi)
        (deaths if lo_pos else revivals).append(float(t_cross))
    steady = float(max(0.0, vals[-1]))
    return ESDResult(tuple(deaths), tuple(revivals), steady, float(t_max))
