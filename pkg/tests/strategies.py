"""Hypothesis strategies for valid states, CP channels and thermal parameter sets."""

import math

import numpy as np
from hypothesis import strategies as st

from petzloss.gaussian import GaussianChannel, GaussianState


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)


@st.composite
def states(draw, max_nu=20.0, max_r=1.0):
    nu = draw(st.floats(1.0, max_nu))
    r = draw(st.floats(-max_r, max_r))
    theta = draw(st.floats(0.0, math.pi))
    rot = _rotation(theta)
    cov = rot @ np.diag([nu * math.exp(2 * r), nu * math.exp(-2 * r)]) @ rot.T
    return GaussianState(np.array([draw(finite), draw(finite)]), cov)


@st.composite
def channels(draw):
    x = np.array([[draw(finite), draw(finite)], [draw(finite), draw(finite)]])
    e = np.array([[draw(finite), draw(finite)], [draw(finite), draw(finite)]])
    y = abs(np.linalg.det(x) - 1.0) * np.eye(2) + e @ e.T
    return GaussianChannel(x, y, np.array([draw(finite), draw(finite)]))


occupation = st.floats(0.0, 10.0)
transmissivity = st.floats(0.01, 0.99)


@st.composite
def thermal_params(draw):
    """(eta, n_sigma, n_xi) with N(sigma) mixed."""
    eta = draw(transmissivity)
    n_s = draw(occupation)
    n_x = draw(occupation)
    if eta * n_s + (1 - eta) * n_x < 1e-3:
        n_s += 0.5
    return eta, n_s, n_x
