import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qif_mzi import (
    AliasingError,
    BALANCED_R,
    DarkPortError,
    GaussianPacket,
    GridError,
    GridSpanError,
    InterferometerParams,
    analytic,
    numeric,
)
from qif_mzi.numeric import (
    Distribution1D,
    MomentumGrid,
    default_grid,
    default_joint_grid,
    free_spread_width,
    joint_marginal_oracle,
    kernel_purity,
    momentum_kick_oracle,
    sample_packet,
)

HEADLINE = InterferometerParams(BALANCED_R, 0.75 * math.pi, 0.0, 0.3, 1.0)


# ---------------------------------------------------------------------------
# grids and quadrature
# ---------------------------------------------------------------------------

def test_grid_validation():
    with pytest.raises(GridError):
        MomentumGrid(-1.0, 1.0, 4)  # even
    with pytest.raises(GridError):
        MomentumGrid(-1.0, 1.0, 1)  # too few
    with pytest.raises(GridError):
        MomentumGrid(1.0, -1.0, 11)  # unordered
    grid = MomentumGrid(-8.0, 8.0, 2001)
    assert grid.spacing == pytest.approx(16.0 / 2000.0)
    assert grid.points[0] == -8.0 and grid.points[-1] == 8.0


def test_simpson_weights_structure():
    grid = MomentumGrid(0.0, 4.0, 5)
    w = grid.simpson_weights()
    h = 1.0
    assert np.allclose(w, np.array([1.0, 4.0, 2.0, 4.0, 1.0]) * h / 3.0)
    assert grid.integrate(np.ones(5)) == pytest.approx(4.0, rel=1e-14)


def test_simpson_norm_of_unit_packet():
    grid = default_grid()
    assert sample_packet(GaussianPacket(1.0), grid).norm_squared() == pytest.approx(1.0, abs=1e-12)


def test_simpson_mean_of_displaced_packet():
    grid = default_grid()
    packet = GaussianPacket(1.0).shifted(-0.3)
    assert grid.density_mean(packet.density(grid.points)) == pytest.approx(-0.3, abs=1e-10)
    assert sample_packet(packet, grid).mean_momentum() == pytest.approx(-0.3, abs=1e-10)


def test_sampled_overlap_matches_closed_form():
    grid = default_grid()
    base = sample_packet(GaussianPacket(1.0), grid)
    shifted = sample_packet(GaussianPacket(1.0).shifted(-0.3), grid)
    assert base.overlap(shifted) == pytest.approx(0.9777512371933363, abs=1e-10)


def test_overlap_requires_shared_grid():
    a = sample_packet(GaussianPacket(1.0), default_grid())
    b = sample_packet(GaussianPacket(1.0), MomentumGrid(-8.0, 8.0, 1001))
    with pytest.raises(GridError):
        a.overlap(b)


def test_simpson_convergence_is_superpolynomial_until_floor():
    # Gaussian moments: each halving of the spacing should gain at least two
    # orders of magnitude until round-off, far better than the h^4 guarantee.
    packet = GaussianPacket(1.0)
    errors = []
    for n in (17, 33, 65, 129):
        grid = MomentumGrid(-8.0, 8.0, n)
        errors.append(abs(grid.integrate(packet.density(grid.points)) - 1.0))
    assert errors[0] < 0.1
    for coarse, fine in zip(errors, errors[1:]):
        assert fine <= max(coarse / 100.0, 1e-12)
    assert errors[-1] <= 1e-12


def test_distribution_validation():
    grid = MomentumGrid(-1.0, 1.0, 5)
    with pytest.raises(ValueError):
        Distribution1D(grid, np.array([1.0, -0.5, 1.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        Distribution1D(grid, np.ones(5), normalized=True)  # integrates to 2
    dist = Distribution1D(grid, np.ones(5) * 0.5, normalized=True)
    assert dist.mean() == pytest.approx(0.0, abs=1e-14)


# ---------------------------------------------------------------------------
# two-particle marginal oracle
# ---------------------------------------------------------------------------

def test_oracle_reduces_to_bare_packet_at_phi_half_pi():
    params = InterferometerParams(BALANCED_R, math.pi / 2, 0.0, 0.7, 1.0)
    oracle = joint_marginal_oracle(params, 1)
    expected = params.packet().density(oracle.grid.points)
    assert np.max(np.abs(oracle.values - expected)) < 1e-12


def test_oracle_matches_closed_form_at_headline():
    for electron in (1, 2):
        oracle = joint_marginal_oracle(HEADLINE, electron)
        closed = analytic.marginal_density(HEADLINE, electron, oracle.grid.points, normalized=True)
        assert np.max(np.abs(oracle.values - closed)) < 1e-10


def test_oracle_mean_reproduces_anomalous_value():
    oracle = joint_marginal_oracle(HEADLINE, 1)
    assert oracle.mean() == pytest.approx(0.35670404722052823, abs=1e-6)
    assert oracle.mean() > 0.0


@settings(max_examples=15, deadline=None)
@given(
    st.floats(0.0, 3.0),
    st.floats(0.0, 2.0 * math.pi),
    st.floats(0.0, 2.0 * math.pi),
    st.integers(1, 2),
)
def test_oracle_matches_closed_form_random_draws(delta, phi, alpha, electron):
    params = InterferometerParams(BALANCED_R, phi, alpha, delta, 1.0)
    if analytic.postselect_norm(params) < 1e-3:
        return
    grid = default_joint_grid()
    oracle = joint_marginal_oracle(params, electron, grid)
    closed = analytic.marginal_density(params, electron, grid.points, normalized=True)
    assert np.max(np.abs(oracle.values - closed)) < 1e-9


def test_oracle_rejects_narrow_grid():
    params = InterferometerParams(BALANCED_R, 0.75 * math.pi, 0.0, 3.0, 1.0)
    with pytest.raises(GridSpanError):
        joint_marginal_oracle(params, 1, MomentumGrid(-4.0, 4.0, 257))


def test_oracle_dark_port_raises():
    dark = InterferometerParams(BALANCED_R, math.pi, 0.0, 0.0, 1.0)
    with pytest.raises(DarkPortError):
        joint_marginal_oracle(dark, 1)


def test_port_norm_oracle_matches_closed_probability():
    # 2D Simpson norm of a port's two-branch joint state vs the Gram form
    grid = default_joint_grid()
    p = grid.points
    base = HEADLINE.packet()
    f1 = np.outer(base(p), base(p))
    f2 = np.outer(HEADLINE.kicked_packet(1)(p), HEADLINE.kicked_packet(2)(p))
    w = grid.simpson_weights()
    probs = analytic.port_probabilities(HEADLINE)
    for port, amp in analytic.port_amplitudes(HEADLINE).items():
        field = amp.free * f1 + amp.kicked * f2
        norm2d = w @ (field.real**2 + field.imag**2) @ w
        assert norm2d == pytest.approx(probs[port], abs=1e-12)


# ---------------------------------------------------------------------------
# momentum-kick oracle
# ---------------------------------------------------------------------------

def test_kick_identity_at_zero_delta():
    result = momentum_kick_oracle(GaussianPacket(1.0), 0.0)
    assert result.max_density_deviation < 1e-12
    assert abs(result.mean_shift) < 1e-12
    assert abs(result.width_change) < 1e-12


def test_kick_displaces_density_rigidly():
    result = momentum_kick_oracle(GaussianPacket(1.0), 0.3)
    assert result.max_density_deviation < 1e-8
    assert result.mean_shift == pytest.approx(-0.3, abs=1e-8)
    assert abs(result.width_change) < 1e-10


def test_kick_oracle_handles_off_centre_packets():
    result = momentum_kick_oracle(GaussianPacket(2.0, 1.5), 0.8)
    assert result.max_density_deviation < 1e-8
    assert result.mean_shift == pytest.approx(-0.8, abs=1e-8)


def test_kick_oracle_parseval():
    for delta in (0.0, 0.3, 2.0):
        result = momentum_kick_oracle(GaussianPacket(1.0), delta)
        assert abs(result.momentum_norm - result.position_norm) < 1e-12
        assert result.momentum_norm == pytest.approx(1.0, abs=1e-10)


def test_kick_oracle_aliasing_guard():
    # with the automatic band the phase advance saturates at pi; delta = 10 W
    # pushes it past the pi/2 guard for any point count
    with pytest.raises(AliasingError):
        momentum_kick_oracle(GaussianPacket(1.0), 10.0)


def test_kick_oracle_band_guard():
    with pytest.raises(GridSpanError):
        momentum_kick_oracle(GaussianPacket(1.0), 0.0, halfspan=4.0)


# ---------------------------------------------------------------------------
# kernel purity and free spreading
# ---------------------------------------------------------------------------

def test_kernel_purity_agrees_with_gram_route():
    state = analytic.reduced_state(HEADLINE, 1)
    assert kernel_purity(state.coeff, state.basis) == pytest.approx(state.purity(), abs=1e-6)


def test_kernel_purity_with_complex_phase():
    params = InterferometerParams(0.6, 1.1, 0.7, 0.8, 1.0)
    state = analytic.reduced_state(params, 1)
    assert kernel_purity(state.coeff, state.basis) == pytest.approx(state.purity(), abs=1e-9)


def test_free_spread_identity_at_zero_time():
    assert free_spread_width(1e-6, 0.0, 9.1093837015e-31) == 1e-6


def test_free_spread_reference_values():
    m_e = 9.1093837015e-31
    assert free_spread_width(200e-9, 2e-8, m_e) == pytest.approx(5.791835969002182e-06, rel=1e-12)
    relative = free_spread_width(10e-6, 2e-8, m_e) / 10e-6 - 1.0
    assert relative == pytest.approx(6.700848271523618e-05, rel=1e-9)


@given(st.floats(1e-8, 1e-4), st.floats(1e-10, 1e-5))
def test_free_spread_monotone_and_asymptotic(width0, t):
    m_e = 9.1093837015e-31
    hbar = 1.054571817e-34
    now = free_spread_width(width0, t, m_e)
    later = free_spread_width(width0, 2.0 * t, m_e)
    assert later >= now >= width0
    t_long = 1e9 * (2.0 * m_e * width0 * width0 / hbar)
    asymptote = hbar * t_long / (2.0 * m_e * width0)
    assert free_spread_width(width0, t_long, m_e) == pytest.approx(asymptote, rel=1e-9)


def test_free_spread_validation():
    with pytest.raises(ValueError):
        free_spread_width(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        free_spread_width(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        free_spread_width(1.0, 1.0, 0.0)
