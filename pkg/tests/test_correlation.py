
import numpy as np
import pytest

from phasespec.correlation import CorrelationKernel, channel_seeds, correlation
from phasespec.dynamics import evolve_populations
from phasespec.liouville import build_liouvillian, correlation_oracle
from phasespec.params import CollectiveState, SystemParams, bell_collective_state, bell_initial_state

from conftest import FIGURE_SETS
from phasespec.figures import figure_params


def test_bell_state_equal_time_value():
    p = figure_params(*FIGURE_SETS["fig5"])
    assert correlation(p, bell_initial_state(p.phi_b), 0.0, 0.0) == pytest.approx(p.gamma)


def test_equal_time_formula(figure_set):
    _, p = figure_set
    rho0 = bell_initial_state(p.phi_b)
    s = evolve_populations(p, bell_collective_state(p), 0.8)
    expected = (p.gamma + p.gamma12) * (s.rho_ee + s.rho_ss) + (p.gamma - p.gamma12) * (s.rho_ee + s.rho_aa)
    assert correlation(p, rho0, 0.8, 0.8) == pytest.approx(expected, abs=1e-13)


@pytest.mark.parametrize("name", ["fig3", "fig6", "fig7"])
def test_matches_oracle(name):
    p = figure_params(*FIGURE_SETS[name])
    L = build_liouvillian(p)
    rho0 = bell_initial_state(p.phi_b)
    for t1, t2 in [(0.0, 0.4), (0.7, 2.9), (2.2, 0.3), (1.0, 1.0)]:
        assert correlation(p, rho0, t1, t2) == pytest.approx(correlation_oracle(L, rho0, t1, t2), abs=1e-12)


def test_general_squeezing_phase():
    p = SystemParams(gamma12=0.3, omega12=3.0, n_photons=0.7, m_abs=0.6, phi_s=1.1, phi_b=-0.4)
    L = build_liouvillian(p)
    rho0 = bell_initial_state(p.phi_b)
    assert correlation(p, rho0, 0.5, 1.7) == pytest.approx(correlation_oracle(L, rho0, 0.5, 1.7), abs=1e-12)


def test_seed_conjugate_slots_vanish():
    # the regression seed is rho(t) S^+; for an X state it has no |s><e| or |a><e| part
    p = SystemParams(phi_s=0.6)
    state = CollectiveState(0.3, 0.2, 0.1, 0.15, -0.05)
    rho = state.to_density_matrix(p.phi_s)
    s_plus = np.zeros((4, 4))
    s_plus[0, 1] = s_plus[1, 3] = 1.0  # |e><s| + |s><g|
    seed = rho @ s_plus
    sym = channel_seeds(state, p.phi_s)["symmetric"]
    np.testing.assert_allclose(sym, [seed[0, 1], seed[1, 3], seed[1, 0], seed[3, 1]], atol=1e-15)


def test_hermitian_kernel():
    p = figure_params(*FIGURE_SETS["fig8"])
    rho0 = bell_initial_state(p.phi_b)
    assert correlation(p, rho0, 2.0, 0.5) == np.conj(correlation(p, rho0, 0.5, 2.0))


def test_kernel_matrix_matches_pointwise():
    p = figure_params(*FIGURE_SETS["fig6"])
    rho0 = bell_initial_state(p.phi_b)
    kernel = CorrelationKernel(p, rho0, 1.0, 0.25)
    C = kernel.matrix()
    for k, l in [(0, 3), (2, 2), (4, 1)]:
        assert C[k, l] == pytest.approx(correlation(p, rho0, kernel.times[k], kernel.times[l]), abs=1e-12)


def test_kernel_is_positive_semidefinite(figure_set):
    _, p = figure_set
    C = CorrelationKernel(p, bell_initial_state(p.phi_b), 3.0, 0.1).matrix()
    np.testing.assert_allclose(C, C.conj().T)
    assert np.linalg.eigvalsh(C).min() >= -1e-8 * np.abs(C).max()


def test_vacuum_envelopes():
    # without squeezing the coherences decay exponentially at the channel rates
    p = SystemParams(gamma=1.0, gamma12=0.4, omega12=0.0)
    rho0 = bell_initial_state(0.0)
    taus = np.array([0.0, 0.5, 1.0, 2.0])
    got = np.array([correlation(p, rho0, 0.0, t) for t in taus])
    a = p.a
    es_rate = 0.5 * (2 + a + 1)
    sg_rate = 0.5 * (2 + a - 1)
    ea_rate = 0.5 * (2 - a + 1)
    ag_rate = 0.5 * (2 - a - 1)
    # X_es(0) = 1/2 feeds X_sg at rate (1 + a); X_ea(0) = -1/2 drains X_ag at rate (1 - a)
    xes = 0.5 * np.exp(-es_rate * taus)
    xsg = 0.5 * (1 + a) * (np.exp(-sg_rate * taus) - np.exp(-es_rate * taus)) / (es_rate - sg_rate)
    xea = -0.5 * np.exp(-ea_rate * taus)
    xag = 0.5 * (1 - a) * (np.exp(-ag_rate * taus) - np.exp(-ea_rate * taus)) / (ea_rate - ag_rate)
    analytic = (1 + a) * (xes + xsg) + (1 - a) * (xag - xea)
    np.testing.assert_allclose(got, analytic, atol=1e-10)


def test_rejects_non_x_state():
    rho = bell_initial_state(0.0)
    rho[0, 1] = rho[1, 0] = 0.1
    with pytest.raises(ValueError, match="X-form"):
        correlation(SystemParams(), rho, 0.0, 1.0)


def test_negative_times_rejected():
    with pytest.raises(ValueError):
        correlation(SystemParams(), bell_initial_state(0.0), -1.0, 0.0)
