"""Time-dependent fluorescence spectra.

Frequencies are given as ``omega_tilde = (omega - omega0) / gamma``.  Both the
filtered and the broadband spectra transform the rotating-frame correlation
with ``exp(-i delta tau)``, ``delta = omega - omega0``, so that emission out of
the doubly excited state appears at ``omega_tilde = +omega12 / gamma`` and
emission out of the symmetric state at ``-omega12 / gamma``.

The filtered (physical) spectrum is the detector-weighted double integral::

    S(w, t) = 2 Gd  int_0^t int_0^t dt1 dt2
              exp(-(Gd + i delta)(t - t1)) exp(-(Gd - i delta)(t - t2)) C(t1, t2)

Two evaluators are provided.  ``method="exact"`` treats the exponential
detector as an extra linear state: the running filter integral obeys a linear
ODE driven by the regression seeds, so the whole double integral is
propagated with matrix exponentials and carries no quadrature error.
``method="trapezoid"`` samples ``C`` on a uniform grid and applies the
two-dimensional trapezoidal rule, checking itself by step halving.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .correlation import (
    READOUT,
    CorrelationKernel,
    _as_state,
    channel_weights,
    seed_operator,
)
from .dynamics import _augmented, channel_matrix, population_trajectory
from .params import Channel, CollectiveState, SystemParams

QUADRATURE_RTOL = 5e-3
_CHANNELS = (Channel.SYMMETRIC, Channel.ANTISYMMETRIC)


class QuadratureNotConverged(RuntimeError):
    pass


class WellSeparationViolated(UserWarning):
    """Line splitting too small for the four-Lorentzian formula."""


@dataclass(frozen=True)
class SpectrumGrid:
    """Spectrum sampled on a frequency-time grid.

    ``values[i, k]`` is the spectrum at ``omega_tilde[i]`` and ``time[k]``.
    """

    omega_tilde: np.ndarray
    time: np.ndarray
    values: np.ndarray = field(repr=False)
    params: SystemParams

    def __post_init__(self):
        for name in ("omega_tilde", "time"):
            axis = np.asarray(getattr(self, name), dtype=float)
            if axis.size > 1 and np.any(np.diff(axis) <= 0):
                raise ValueError(f"{name} axis must be strictly increasing")
            object.__setattr__(self, name, axis)
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.omega_tilde.size, self.time.size):
            raise ValueError("values shape does not match the axes")
        object.__setattr__(self, "values", values)

    def line(self, omega_tilde: float) -> np.ndarray:
        """Time trace at one frequency (linear interpolation in frequency)."""
        return np.array([np.interp(omega_tilde, self.omega_tilde, col) for col in self.values.T])


def _state0(params, rho0):
    return _as_state(rho0, params.phi_s)


def _filter_generator(params: SystemParams, delta: float) -> np.ndarray:
    """Generator of ``(y, Z_sym, Z_anti, U)`` for the exact filtered spectrum.

    ``y`` is the augmented one-time state, ``Z_c`` the detector-weighted
    regression vector of channel ``c`` and ``U`` the upper-triangle half of
    the double integral.
    """
    gd = params.gamma_d
    G = np.zeros((15, 15), dtype=complex)
    G[:6, :6] = _augmented(params)
    weights = channel_weights(params)
    for k, ch in enumerate(_CHANNELS):
        sl = slice(6 + 4 * k, 10 + 4 * k)
        G[sl, :6] = seed_operator(ch, params.phi_s)
        G[sl, sl] = channel_matrix(params, ch) - (gd + 1j * delta) * np.eye(4)
        G[14, sl] = weights[ch] * READOUT[ch]
    G[14, 14] = -2 * gd
    return G


def physical_spectrum_grid(params: SystemParams, rho0, omega_tilde, times) -> SpectrumGrid:
    """Exact filtered spectrum on a grid of frequencies and times."""
    omega_tilde = np.atleast_1d(np.asarray(omega_tilde, dtype=float))
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be non-negative and non-decreasing")
    y0 = np.zeros(15, dtype=complex)
    y0[:6] = np.append(_state0(params, rho0).as_array(), 1.0)
    deltas = omega_tilde * params.gamma
    gens = np.stack([_filter_generator(params, d) for d in deltas])
    values = np.empty((deltas.size, times.size))
    state = np.repeat(y0[None, :], deltas.size, axis=0)
    t_prev = 0.0
    steps = {}
    for k, t in enumerate(times):
        dt = t - t_prev
        if dt > 0:
            key = round(dt, 12)
            if key not in steps:
                steps[key] = expm(gens * dt)
            state = np.einsum("wij,wj->wi", steps[key], state)
        values[:, k] = 4 * params.gamma_d * state[:, 14].real
        t_prev = t
    return SpectrumGrid(omega_tilde, times, values, params)


def default_quadrature_step(params: SystemParams, omega_tilde=0.0) -> float:
    """Step resolving decay, detector and oscillation time scales."""
    w_max = np.max(np.abs(np.atleast_1d(omega_tilde))) * params.gamma
    return min(
        0.02 / params.gamma,
        0.2 / params.gamma_d,
        0.2 / (abs(params.omega12) + w_max + params.gamma),
    )


def _trapezoid(params, kernel_matrix, times_grid, deltas, t_index):
    m = t_index + 1
    if m == 1:
        return np.zeros(deltas.size)
    h = times_grid[1] - times_grid[0]
    w = np.full(m, h)
    w[[0, -1]] = 0.5 * h
    t = times_grid[t_index]
    lag = t - times_grid[:m]
    x = w[:, None] * np.exp(-(params.gamma_d + 1j * deltas[None, :]) * lag[:, None])
    C = kernel_matrix[:m, :m]
    return 2 * params.gamma_d * np.sum(x * (C @ x.conj()), axis=0).real


def _trapezoid_spectrum(params, rho0, omega_tilde, t, step):
    n_steps = max(int(np.ceil(t / step)), 1)
    h = t / n_steps
    kernel = CorrelationKernel(params, rho0, t, h)
    return _trapezoid(params, kernel.matrix(), kernel.times, omega_tilde * params.gamma, n_steps)


def physical_spectrum(params: SystemParams, rho0, omega_tilde, t: float, method: str = "exact",
                      step: float | None = None, rtol: float = QUADRATURE_RTOL):
    """Filtered spectrum at time ``t`` for one or more frequencies.

    With ``method="trapezoid"`` the double integral is evaluated at ``step``
    and ``step / 2``; the finer value is returned.

    Raises
    ------
    QuadratureNotConverged
        Trapezoid only: the two step sizes disagree by more than ``rtol``
        relative to the largest returned value.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    scalar = np.ndim(omega_tilde) == 0
    omega_tilde = np.atleast_1d(np.asarray(omega_tilde, dtype=float))
    if t == 0:
        out = np.zeros(omega_tilde.size)
    elif method == "exact":
        out = physical_spectrum_grid(params, rho0, omega_tilde, [t]).values[:, 0]
    elif method == "trapezoid":
        h = step or default_quadrature_step(params, omega_tilde)
        coarse = _trapezoid_spectrum(params, rho0, omega_tilde, t, h)
        out = _trapezoid_spectrum(params, rho0, omega_tilde, t, h / 2)
        scale = np.abs(out).max()
        if np.abs(out - coarse).max() > rtol * scale:
            raise QuadratureNotConverged(
                f"step halving changed the spectrum by {np.abs(out - coarse).max() / scale:.2%}"
            )
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out[0]) if scalar else out


def broadband_spectrum(params: SystemParams, rho0, omega_tilde, t: float, horizon: str = "infinite"):
    """Infinite-detector-bandwidth spectrum ``Re int dtau exp(-i delta tau) C(t, t + tau)``.

    ``horizon="infinite"`` integrates the lag over ``[0, inf)`` (the emission
    rate of the state at time ``t``, which is what the four-Lorentzian
    formula describes); ``horizon="elapsed"`` truncates the lag at ``t``.
    Both are evaluated in closed form from the channel generators.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if horizon not in ("infinite", "elapsed"):
        raise ValueError(f"unknown horizon {horizon!r}")
    scalar = np.ndim(omega_tilde) == 0
    deltas = np.atleast_1d(np.asarray(omega_tilde, dtype=float)) * params.gamma
    if horizon == "elapsed" and t == 0:
        return 0.0 if scalar else np.zeros(deltas.size)
    state = population_trajectory(params, _state0(params, rho0), [t])[0]
    y = np.append(state, 1.0)
    out = np.zeros(deltas.size)
    for ch, w in channel_weights(params).items():
        if w == 0:
            continue
        A = channel_matrix(params, ch)
        seed = seed_operator(ch, params.phi_s) @ y
        for k, d in enumerate(deltas):
            Ad = A - 1j * d * np.eye(4)
            if horizon == "infinite":
                integral = np.linalg.solve(-Ad, seed)
            else:
                block = np.zeros((8, 8), dtype=complex)
                block[:4, :4] = Ad
                block[:4, 4:] = np.eye(4)
                integral = expm(block * t)[:4, 4:] @ seed
            out[k] += (w * (READOUT[ch] @ integral)).real
    return float(out[0]) if scalar else out


def analytic_dicke_spectrum(params: SystemParams, pops: CollectiveState, omega_tilde,
                            m_convention: str = "rescaled"):
    """Four-Lorentzian spectrum of the small-sample model with well separated lines.

    ``m_convention`` selects how the two-photon correlation enters the line
    weights: ``"rescaled"`` uses ``sqrt(n**2 - 1) = 2 |M|`` (the symbol in the
    closed form denotes this rescaled magnitude), ``"bare"`` uses ``|M|``.
    """
    if not params.dicke:
        raise ValueError("analytic spectrum applies to the small-sample (dicke) model only")
    n = params.n
    if abs(params.omega12) < 10 * params.gamma * n:
        warnings.warn(
            f"omega12 = {params.omega12} is not >> n gamma = {n * params.gamma}",
            WellSeparationViolated,
            stacklevel=2,
        )
    if m_convention == "rescaled":
        m = 2 * params.m_abs
    elif m_convention == "bare":
        m = params.m_abs
    else:
        raise ValueError(f"unknown m_convention {m_convention!r}")
    w = np.asarray(omega_tilde, dtype=float)
    w12 = params.omega12 / params.gamma
    up, lo = (w - w12) ** 2, (w + w12) ** 2
    ree, rss, ru = pops.rho_ee, pops.rho_ss, pops.rho_u
    value = 2 * params.gamma * (
        (2 * (n + 1) * ree - 2 * m * ru) / (4 * n**2 + up)
        + ((n - 1) * ree + m * ru) / (n**2 + up)
        + rss * (2 * (n - 1) / (4 * n**2 + lo) + (n + 1) / (n**2 + lo))
    )
    return float(value) if np.ndim(value) == 0 else value


def detect_hole(grid: SpectrumGrid, line_center: float, offset: float = 1.0,
                contrast: float = 0.02) -> list[tuple[float, float]]:
    """Time intervals during which a hole is burned at ``line_center``.

    A hole is present at time ``t`` when the spectrum at both
    ``line_center - offset`` and ``line_center + offset`` exceeds the value
    at the centre by at least ``contrast`` (relative).  Returns maximal runs
    of consecutive grid times as ``(t_start, t_end)``.
    """
    w = grid.omega_tilde
    if w[0] > line_center - 3 or w[-1] < line_center + 3:
        raise ValueError("grid must cover line_center +/- 3")
    local = (w >= line_center - 3) & (w <= line_center + 3)
    if np.diff(w[local]).max() > 0.2 + 1e-12:
        raise ValueError("frequency step near the line must be <= 0.2")
    centre = grid.line(line_center)
    left = grid.line(line_center - offset)
    right = grid.line(line_center + offset)
    thresh = (1 + contrast) * centre
    hole = (left >= thresh) & (right >= thresh) & (left > centre) & (right > centre)
    intervals = []
    start = None
    for k, flag in enumerate(hole):
        if flag and start is None:
            start = k
        if not flag and start is not None:
            intervals.append((float(grid.time[start]), float(grid.time[k - 1])))
            start = None
    if start is not None:
        intervals.append((float(grid.time[start]), float(grid.time[-1])))
    return intervals
