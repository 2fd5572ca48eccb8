import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from petzloss.errors import DomainError, FormatError, InternalConsistencyError, UnphysicalStateError
from petzloss.gaussian import (
    IDENTITY,
    OMEGA,
    GaussianChannel,
    apply_channel,
    coherent_state,
    compose,
    identity_channel,
    is_completely_positive,
    state_from_cov,
    thermal_state,
    vacuum,
)
from petzloss.petz import LossySpec, lossy_channel, petz_map

from .strategies import channels, states


@pytest.mark.parametrize("n, diag", [(0, 1.0), (2, 5.0), (10, 21.0)])
def test_thermal_state_covariance(n, diag):
    s = thermal_state(n)
    assert np.array_equal(s.mean, [0.0, 0.0])
    assert np.allclose(s.cov, diag * IDENTITY, rtol=0, atol=0)
    assert s.thermal_occupation() == pytest.approx(n, abs=1e-15)


def test_thermal_state_rejects_negative():
    with pytest.raises(DomainError):
        thermal_state(-0.1)


def test_coherent_state_convention():
    assert coherent_state(0.0, 0.0).allclose(vacuum())
    s = coherent_state(0.5 / math.sqrt(2), 0.5 / math.sqrt(2))
    assert np.allclose(s.mean, [0.5, 0.5], atol=1e-15)
    assert np.array_equal(s.cov, IDENTITY)
    assert np.allclose(coherent_state(1.0, 0.0).mean, [math.sqrt(2), 0.0], atol=1e-15)
    # <a^dag a> = |alpha|^2
    assert coherent_state(0.6, -0.8).mean_photon_number == pytest.approx(1.0, abs=1e-14)


def test_state_from_cov_examples():
    s = state_from_cov([0, 0], np.diag([2.5, 10.0]))
    assert s.det == pytest.approx(25.0)
    with pytest.raises(UnphysicalStateError):
        state_from_cov([0, 0], 0.5 * IDENTITY)
    assert state_from_cov([3.0, -7.0], IDENTITY).det == pytest.approx(1.0)


def test_state_from_cov_format_errors():
    with pytest.raises(FormatError):
        state_from_cov([0, 0], [[2.0, 0.1], [0.0, 2.0]])
    with pytest.raises(FormatError):
        state_from_cov([0, 0, 0], IDENTITY)
    with pytest.raises(FormatError):
        state_from_cov([0, 0], np.eye(3))


def test_small_asymmetry_is_symmetrised():
    s = state_from_cov([0, 0], [[2.0, 1e-11], [0.0, 2.0]])
    assert s.cov[0, 1] == s.cov[1, 0]


def test_state_arrays_are_read_only():
    s = thermal_state(1.0)
    with pytest.raises(ValueError):
        s.cov[0, 0] = 7.0


def test_apply_channel_examples():
    s = thermal_state(2.0)
    assert apply_channel(identity_channel(), s).allclose(s)
    lossy = lossy_channel(LossySpec(0.5, vacuum()))
    assert apply_channel(lossy, s).allclose(thermal_state(1.0), atol=1e-14)
    sigma = state_from_cov([0.3, -1.0], [[3.0, 0.5], [0.5, 2.0]])
    erasure = GaussianChannel(np.zeros((2, 2)), sigma.cov, sigma.mean)
    for rho in (vacuum(), coherent_state(1.0, 2.0), s):
        assert apply_channel(erasure, rho).allclose(sigma)


def test_apply_non_cp_channel_is_internal_error():
    with pytest.raises(InternalConsistencyError):
        apply_channel(GaussianChannel.scalar(0.25, 0.0), thermal_state(0.0))


def test_compose_examples():
    ch = lossy_channel(LossySpec(0.3, thermal_state(1.5)))
    assert compose(identity_channel(), ch).allclose(ch)
    a = lossy_channel(LossySpec(0.7, vacuum()))
    b = lossy_channel(LossySpec(0.4, vacuum()))
    assert compose(b, a).allclose(lossy_channel(LossySpec(0.28, vacuum())), atol=1e-15)

    spec = LossySpec(0.5, thermal_state(10.0))
    sigma = thermal_state(4.0)
    round_trip = compose(petz_map(spec, sigma).channel, lossy_channel(spec))
    assert apply_channel(round_trip, sigma).allclose(sigma, atol=1e-12)


def test_cp_examples():
    assert is_completely_positive(GaussianChannel.scalar(0.5, 0.5)).feasible
    bad = is_completely_positive(GaussianChannel.scalar(2.0, 0.0))
    assert not bad.feasible
    assert bad.min_eigenvalue == pytest.approx(-1.0, abs=1e-14)
    limit = is_completely_positive(GaussianChannel.scalar(2.0, 1.0))
    assert limit.feasible
    assert limit.min_eigenvalue == pytest.approx(0.0, abs=1e-14)


def test_cp_report_threshold():
    # y = |1 - tau| - 5e-11 sits inside the tolerance, -5e-10 outside
    assert is_completely_positive(GaussianChannel.scalar(2.0, 1.0 - 5e-11)).feasible
    assert not is_completely_positive(GaussianChannel.scalar(2.0, 1.0 - 5e-10)).feasible


# --- properties ------------------------------------------------------------


@given(states())
def test_valid_states_satisfy_uncertainty_bound(s):
    assert s.det >= 1.0 - 1e-9
    assert np.all(np.linalg.eigvalsh(s.cov) > 0)
    assert np.array_equal(s.cov, s.cov.T)


@given(channels(), states())
def test_cp_channels_preserve_validity(ch, s):
    out = apply_channel(ch, s)
    assert out.det >= 1.0 - 1e-9


@given(channels(), channels(), channels())
def test_compose_associative(a, b, c):
    lhs = compose(a, compose(b, c))
    rhs = compose(compose(a, b), c)
    scale = 1.0 + np.max(np.abs(lhs.y_mat)) + np.max(np.abs(lhs.x_mat))
    assert np.max(np.abs(lhs.x_mat - rhs.x_mat)) <= 1e-12 * scale
    assert np.max(np.abs(lhs.y_mat - rhs.y_mat)) <= 1e-12 * scale
    assert np.max(np.abs(lhs.disp - rhs.disp)) <= 1e-12 * (scale + np.max(np.abs(lhs.disp)))


@given(channels(), channels(), states())
def test_compose_matches_sequential_application(a, b, s):
    one = apply_channel(compose(b, a), s)
    two = apply_channel(b, apply_channel(a, s))
    scale = 1.0 + np.max(np.abs(one.cov)) + np.max(np.abs(one.mean))
    assert np.max(np.abs(one.cov - two.cov)) <= 1e-12 * scale
    assert np.max(np.abs(one.mean - two.mean)) <= 1e-12 * scale


@given(states())
def test_cayley_hamilton_single_mode(s):
    m = s.cov @ OMEGA
    assert np.max(np.abs(m @ m + s.det * IDENTITY)) <= 1e-12 * s.det


@settings(max_examples=300)
@given(st.floats(0.0, 4.0), st.floats(0.0, 4.0))
def test_cp_matches_scalar_criterion(tau, y):
    margin = y - abs(1.0 - tau)
    if abs(margin) < 1e-9:
        return
    assert is_completely_positive(GaussianChannel.scalar(tau, y)).feasible == (margin > 0)
