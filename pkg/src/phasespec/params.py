"""Parameter and state types shared across the package.

All rates and times are expressed in units of the single-atom decay rate
``gamma`` (conventionally 1).  Density matrices are plain ``(4, 4)`` complex
arrays in the collective basis ordered ``(e, s, a, g)``::

    |e> = |e1 e2>
    |s> = (|e1 g2> + |g1 e2>) / sqrt(2)
    |a> = (|e1 g2> - |g1 e2>) / sqrt(2)
    |g> = |g1 g2>

The squeezed-field carrier is taken equal to the atomic frequency, so every
coherence is reported in the frame rotating at that frequency.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass

import numpy as np

E, S, A, G = 0, 1, 2, 3
LABELS = ("e", "s", "a", "g")

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-8


class PhysicalityViolation(ValueError):
    """Two-photon correlation exceeds the bound sqrt(N (N + 1))."""


class RangeViolation(ValueError):
    """A parameter lies outside its admissible range."""


class InvalidDensityMatrix(ValueError):
    pass


class Channel(str, enum.Enum):
    """Decay cascade through the symmetric or antisymmetric state."""

    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of one simulation.

    Parameters
    ----------
    gamma : float
        Single-atom decay rate.
    gamma12 : float
        Collective damping rate (signed, ``|gamma12| <= gamma``).  Ignored
        and replaced by ``gamma`` when ``dicke`` is set.
    omega12 : float
        Dipole-dipole level shift.
    n_photons : float
        Mean photon number ``N`` of the squeezed reservoir.
    m_abs : float
        Magnitude of the two-photon correlation ``|M|``.
    phi_s : float
        Squeezing phase.
    phi_b : float
        Phase of the initial Bell superposition.
    gamma_d : float
        Detector half-bandwidth.
    dicke : bool
        Small-sample limit, ``gamma12 = gamma``.
    """

    gamma: float = 1.0
    gamma12: float = 0.0
    omega12: float = 0.0
    n_photons: float = 0.0
    m_abs: float = 0.0
    phi_s: float = 0.0
    phi_b: float = 0.0
    gamma_d: float = 1.0
    dicke: bool = False

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if f.name != "dicke":
                object.__setattr__(self, f.name, float(getattr(self, f.name)))
        object.__setattr__(self, "dicke", bool(self.dicke))
        if self.dicke:
            object.__setattr__(self, "gamma12", self.gamma)

    @property
    def n(self) -> float:
        """Squeezing-enhanced noise factor ``2N + 1``."""
        return 2.0 * self.n_photons + 1.0

    @property
    def a(self) -> float:
        """Dimensionless collective damping ``gamma12 / gamma``."""
        return self.gamma12 / self.gamma

    @property
    def m(self) -> complex:
        """Complex two-photon correlation ``|M| exp(i phi_s)``."""
        return self.m_abs * np.exp(1j * self.phi_s)

    @property
    def delta_phi(self) -> float:
        """Relative phase between the Bell state and the squeezed field."""
        return self.phi_b - self.phi_s

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def max_correlation(n_photons: float) -> float:
    """Largest physical ``|M|`` for a reservoir with ``n_photons``."""
    return float(np.sqrt(n_photons * (n_photons + 1.0)))


def validate_params(params: SystemParams) -> SystemParams:
    """Check physicality and ranges, returning ``params`` unchanged.

    Raises
    ------
    RangeViolation
        Negative ``n_photons`` or ``m_abs``, ``|gamma12| > gamma``,
        non-positive ``gamma`` or ``gamma_d``, or non-finite values.
    PhysicalityViolation
        ``m_abs > sqrt(N (N + 1))``.
    """
    values = dataclasses.asdict(params)
    for name, value in values.items():
        if name != "dicke" and not np.isfinite(value):
            raise RangeViolation(f"{name} must be finite, got {value!r}")
    if params.gamma <= 0:
        raise RangeViolation(f"gamma must be positive, got {params.gamma}")
    if params.gamma_d <= 0:
        raise RangeViolation(f"gamma_d must be positive, got {params.gamma_d}")
    if params.n_photons < 0:
        raise RangeViolation(f"n_photons must be >= 0, got {params.n_photons}")
    if params.m_abs < 0:
        raise RangeViolation(f"m_abs must be >= 0, got {params.m_abs}")
    if abs(params.gamma12) > params.gamma * (1 + 1e-12):
        raise RangeViolation(
            f"|gamma12| = {abs(params.gamma12)} exceeds gamma = {params.gamma}"
        )
    bound = max_correlation(params.n_photons)
    if params.m_abs > bound * (1 + 1e-12) + 1e-15:
        raise PhysicalityViolation(
            f"|M| = {params.m_abs} exceeds sqrt(N(N+1)) = {bound:.6g}"
        )
    return params


@dataclass(frozen=True)
class CollectiveState:
    """Populations and rotating-frame two-photon coherence.

    ``rho_u + 1j * rho_v = rho_eg * exp(-1j * phi_s)``; the ground-state
    population is whatever remains of the unit trace.
    """

    rho_ee: float
    rho_ss: float
    rho_aa: float
    rho_u: float
    rho_v: float = 0.0

    @property
    def rho_gg(self) -> float:
        return 1.0 - self.rho_ee - self.rho_ss - self.rho_aa

    def as_array(self) -> np.ndarray:
        return np.array([self.rho_ee, self.rho_ss, self.rho_aa, self.rho_u, self.rho_v])

    @classmethod
    def from_array(cls, x) -> "CollectiveState":
        x = np.asarray(x, dtype=float)
        return cls(*(float(v) for v in x[:5]))

    def rho_eg(self, phi_s: float) -> complex:
        return (self.rho_u + 1j * self.rho_v) * np.exp(1j * phi_s)

    def check(self, tol: float = 1e-8) -> None:
        pops = np.array([self.rho_ee, self.rho_ss, self.rho_aa, self.rho_gg])
        if np.any(pops < -tol) or np.any(pops > 1 + tol):
            raise InvalidDensityMatrix(f"populations out of [0, 1]: {pops}")
        bound = np.sqrt(max(self.rho_ee, 0.0) * max(self.rho_gg, 0.0))
        if abs(self.rho_u) > bound + tol:
            raise InvalidDensityMatrix(
                f"|rho_u| = {abs(self.rho_u):.3g} exceeds sqrt(rho_ee rho_gg) = {bound:.3g}"
            )

    def to_density_matrix(self, phi_s: float) -> np.ndarray:
        """X-form density matrix carrying these populations and coherence."""
        rho = np.diag([self.rho_ee, self.rho_ss, self.rho_aa, self.rho_gg]).astype(complex)
        rho[E, G] = self.rho_eg(phi_s)
        rho[G, E] = np.conj(rho[E, G])
        return rho

    @classmethod
    def from_density_matrix(cls, rho, phi_s: float) -> "CollectiveState":
        rho = np.asarray(rho)
        z = rho[E, G] * np.exp(-1j * phi_s)
        return cls(
            float(rho[E, E].real),
            float(rho[S, S].real),
            float(rho[A, A].real),
            float(z.real),
            float(z.imag),
        )


def check_density_matrix(rho, hermitian_tol=HERMITIAN_TOL, trace_tol=TRACE_TOL,
                         positivity_tol=POSITIVITY_TOL) -> np.ndarray:
    """Raise :class:`InvalidDensityMatrix` unless ``rho`` is a valid state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidDensityMatrix(f"expected shape (4, 4), got {rho.shape}")
    herm_err = np.abs(rho - rho.conj().T).max()
    if herm_err > hermitian_tol:
        raise InvalidDensityMatrix(f"not Hermitian (max deviation {herm_err:.2e})")
    trace = np.trace(rho).real
    if abs(trace - 1.0) > trace_tol:
        raise InvalidDensityMatrix(f"trace is {trace!r}")
    lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if lam_min < -positivity_tol:
        raise InvalidDensityMatrix(f"negative eigenvalue {lam_min:.2e}")
    return rho


def bell_initial_state(phi_b: float) -> np.ndarray:
    """Density matrix of ``(|g> + exp(i phi_b) |e>) / sqrt(2)``."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[E, E] = rho[G, G] = 0.5
    rho[E, G] = 0.5 * np.exp(1j * phi_b)
    rho[G, E] = 0.5 * np.exp(-1j * phi_b)
    return rho


def bell_collective_state(params: SystemParams) -> CollectiveState:
    dphi = params.delta_phi
    return CollectiveState(0.5, 0.0, 0.0, 0.5 * np.cos(dphi), 0.5 * np.sin(dphi))
