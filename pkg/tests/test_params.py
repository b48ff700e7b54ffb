import math

import numpy as np
import pytest

from phasespec.params import (
    CollectiveState,
    InvalidDensityMatrix,
    PhysicalityViolation,
    RangeViolation,
    SystemParams,
    bell_collective_state,
    bell_initial_state,
    check_density_matrix,
    max_correlation,
    validate_params,
)


def test_maximal_squeezing_is_physical():
    p = SystemParams(n_photons=0.5, m_abs=max_correlation(0.5))
    assert validate_params(p) is p
    assert p.m_abs == pytest.approx(math.sqrt(0.75))


def test_ordinary_vacuum_is_valid():
    validate_params(SystemParams(n_photons=0.0, m_abs=0.0))


def test_excess_correlation_rejected():
    with pytest.raises(PhysicalityViolation):
        validate_params(SystemParams(n_photons=0.5, m_abs=0.90))


@pytest.mark.parametrize(
    "changes",
    [{"gamma12": 1.5}, {"gamma12": -1.01}, {"gamma_d": 0.0}, {"n_photons": -0.1}, {"omega12": math.nan}],
)
def test_range_violations(changes):
    with pytest.raises(RangeViolation):
        validate_params(SystemParams(**changes))


def test_dicke_flag_forces_collective_damping():
    p = SystemParams(gamma=1.0, gamma12=0.3, dicke=True)
    assert p.gamma12 == 1.0 and p.a == 1.0


def test_derived_quantities():
    p = SystemParams(gamma=2.0, gamma12=-1.0, n_photons=0.5, m_abs=0.5, phi_s=0.3, phi_b=1.0)
    assert p.n == 2.0
    assert p.a == -0.5
    assert p.delta_phi == pytest.approx(0.7)
    assert p.m == pytest.approx(0.5 * np.exp(0.3j))


@pytest.mark.parametrize("phi_b", [0.0, 1.0, math.pi])
def test_bell_state_is_pure(phi_b):
    rho = check_density_matrix(bell_initial_state(phi_b))
    assert np.trace(rho @ rho).real == pytest.approx(1.0)
    assert rho[0, 3] == pytest.approx(0.5 * np.exp(1j * phi_b))


def test_bell_collective_state_matches_matrix():
    p = SystemParams(phi_s=0.4, phi_b=1.3)
    state = CollectiveState.from_density_matrix(bell_initial_state(p.phi_b), p.phi_s)
    np.testing.assert_allclose(state.as_array(), bell_collective_state(p).as_array(), atol=1e-15)


def test_collective_state_round_trip():
    s = CollectiveState(0.2, 0.1, 0.3, 0.1, -0.05)
    back = CollectiveState.from_density_matrix(s.to_density_matrix(0.7), 0.7)
    np.testing.assert_allclose(back.as_array(), s.as_array(), atol=1e-15)
    assert s.rho_gg == pytest.approx(0.4)


def test_cauchy_schwarz_check():
    CollectiveState(0.25, 0, 0, 0.43).check()
    with pytest.raises(InvalidDensityMatrix):
        CollectiveState(0.25, 0, 0, 0.45).check()


def test_density_matrix_checks():
    rho = bell_initial_state(0.0)
    bad = rho.copy()
    bad[0, 1] = 1e-6
    with pytest.raises(InvalidDensityMatrix, match="Hermitian"):
        check_density_matrix(bad)
    with pytest.raises(InvalidDensityMatrix, match="trace"):
        check_density_matrix(2 * rho)
    with pytest.raises(InvalidDensityMatrix, match="eigenvalue"):
        check_density_matrix(np.diag([1.1, -0.1, 0, 0]))
