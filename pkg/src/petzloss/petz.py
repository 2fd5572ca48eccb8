"""Lossy beam-splitter channel and its Gaussian Petz recovery map."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import (
    DomainError,
    NoBeamSplitterRealizationError,
    NotScalarError,
    PureOutputError,
)
from .gaussian import (
    IDENTITY,
    OMEGA,
    GaussianChannel,
    GaussianState,
    apply_channel,
    validate_state,
)

PURE_TOL = 1e-9
PROPORTIONAL_TOL = 1e-9
TIE_TOL = 1e-12


class Realization(str, enum.Enum):
    BEAM_SPLITTER = "BeamSplitter"
    ADDITIVE_NOISE = "AdditiveNoise"
    AMPLIFIER = "Amplifier"


@dataclass(frozen=True)
class LossySpec:
    """Beam splitter of transmissivity ``eta`` mixing the mode with ``environment``."""

    eta: float
    environment: GaussianState

    def __post_init__(self):
        if not (0.0 < self.eta < 1.0):
            raise DomainError(f"transmissivity must satisfy 0 < eta < 1, got {self.eta}")
        validate_state(self.environment)


@dataclass(frozen=True)
class PetzResult:
    channel: GaussianChannel
    eta_prime: Optional[float]
    realization: Optional[Realization]
    ancilla: Optional[GaussianState] = None


def lossy_channel(spec: LossySpec) -> GaussianChannel:
    eta = spec.eta
    env = spec.environment
    return GaussianChannel(
        np.sqrt(eta) * IDENTITY,
        (1.0 - eta) * env.cov,
        np.sqrt(1.0 - eta) * env.mean,
    )


def classify(eta_prime: float) -> Realization:
    if abs(eta_prime - 1.0) <= TIE_TOL:
        return Realization.ADDITIVE_NOISE
    if eta_prime < 1.0:
        return Realization.BEAM_SPLITTER
    return Realization.AMPLIFIER


def proportional(a: np.ndarray, b: np.ndarray, tol: float = PROPORTIONAL_TOL) -> bool:
    """True if the 2x2 matrices a and b are positive multiples of each other."""
    na = a / np.trace(a)
    nb = b / np.trace(b)
    return bool(np.max(np.abs(na - nb)) <= tol)


def _forward_output(spec: LossySpec, sigma: GaussianState) -> GaussianState:
    out = apply_channel(lossy_channel(spec), sigma)
    if out.det <= 1.0 + PURE_TOL:
        raise PureOutputError(
            f"N(sigma) is pure (det={out.det:.12g}); Petz map needs a pseudo-inverse"
        )
    return out


def petz_recovery(channel: GaussianChannel, sigma: GaussianState) -> GaussianChannel:
    """Petz map of an arbitrary single-mode Gaussian channel, by matrix functions.

    Evaluates X_P = (I + (V_s Omega)^-2)^(1/2) V_s X^T (I + (Omega V_n)^-2)^(-1/2) V_n^-1
    directly, without the single-mode determinant identity used by :func:`petz_map`.
    """
    out = apply_channel(channel, sigma)
    if out.det <= 1.0 + PURE_TOL:
        raise PureOutputError(f"N(sigma) is pure (det={out.det:.12g})")
    vs, vn = sigma.cov, out.cov
    a = np.linalg.matrix_power(np.linalg.inv(vs @ OMEGA), 2)
    b = np.linalg.matrix_power(np.linalg.inv(OMEGA @ vn), 2)
    left = np.real(scipy.linalg.sqrtm(IDENTITY + a))
    right = np.real(scipy.linalg.inv(scipy.linalg.sqrtm(IDENTITY + b)))
    x_p = left @ vs @ channel.x_mat.T @ right @ np.linalg.inv(vn)
    y_p = vs - x_p @ vn @ x_p.T
    d_p = sigma.mean - x_p @ out.mean
    return GaussianChannel(x_p, y_p, d_p)


def _eta_prime_from_dets(eta: float, det_sigma: float, det_out: float) -> float:
    return eta * (det_sigma - 1.0) / (det_out - 1.0)


def generalized_transmissivity(spec: LossySpec, sigma: GaussianState) -> float:
    """eta' = eta (det V_sigma - 1) / (det V_N(sigma) - 1), defined when V_sigma ~ V_xi."""
    if not proportional(sigma.cov, spec.environment.cov):
        raise NotScalarError("V_sigma is not proportional to V_xi; eta' is not a scalar")
    out = _forward_output(spec, sigma)
    return _eta_prime_from_dets(spec.eta, sigma.det, out.det)


def thermal_eta_prime(eta: float, n_sigma: float, n_xi: float) -> float:
    x = 2.0 * n_sigma + 1.0
    b = 2.0 * n_xi + 1.0
    y = eta * x + (1.0 - eta) * b
    if y * y - 1.0 <= PURE_TOL:
        raise PureOutputError("N(sigma) is the vacuum")
    return eta * (x * x - 1.0) / (y * y - 1.0)


def petz_map(spec: LossySpec, sigma: GaussianState) -> PetzResult:
    validate_state(sigma)
    out = _forward_output(spec, sigma)
    vs, vn = sigma.cov, out.cov
    eta = spec.eta
    # a pure prior can round to det slightly below 1
    scale = max(eta * (1.0 - 1.0 / sigma.det) / (1.0 - 1.0 / out.det), 0.0)
    x_p = np.sqrt(scale) * vs @ np.linalg.inv(vn)
    y_p = vs - x_p @ vn @ x_p.T
    d_p = sigma.mean - x_p @ out.mean
    channel = GaussianChannel(x_p, y_p, d_p)

    if not proportional(vs, spec.environment.cov):
        return PetzResult(channel, None, None, None)

    eta_prime = max(_eta_prime_from_dets(eta, sigma.det, out.det), 0.0)
    # X_P is exactly sqrt(eta') I here; drop the rounding in V_s V_n^-1
    channel = GaussianChannel(np.sqrt(eta_prime) * IDENTITY, vs - eta_prime * vn, d_p)
    realization = classify(eta_prime)
    ancilla = None
    if realization is Realization.BEAM_SPLITTER:
        ancilla = _ancilla(channel, eta_prime)
    return PetzResult(channel, eta_prime, realization, ancilla)


def _ancilla(channel: GaussianChannel, eta_prime: float) -> GaussianState:
    cov = channel.y_mat / (1.0 - eta_prime)
    mean = channel.disp / np.sqrt(1.0 - eta_prime)
    return validate_state(GaussianState(mean, cov))


def beam_splitter_condition(spec: LossySpec, sigma: GaussianState) -> bool:
    """Whether the Petz map is a beam splitter with eta' < 1 (boundary excluded)."""
    if not proportional(sigma.cov, spec.environment.cov):
        raise NotScalarError("V_sigma is not proportional to V_xi")
    _forward_output(spec, sigma)
    det_xi = spec.environment.det
    reach = np.sqrt(max(det_xi - 1.0, 0.0) / spec.eta)
    root_xi = np.sqrt(det_xi)
    root_sigma = np.sqrt(sigma.det)
    return bool(max(1.0, root_xi - reach) - TIE_TOL <= root_sigma < root_xi + reach)


def thermal_beam_splitter_condition(eta: float, n_sigma: float, n_xi: float) -> bool:
    return bool(0.0 <= n_sigma < n_xi + np.sqrt(n_xi * (n_xi + 1.0) / eta))


def petz_ancilla(spec: LossySpec, sigma: GaussianState) -> GaussianState:
    """Ancilla xi' such that lossy_channel(LossySpec(eta', xi')) is the Petz map."""
    result = petz_map(spec, sigma)
    if result.eta_prime is None or result.eta_prime >= 1.0 - TIE_TOL:
        raise NoBeamSplitterRealizationError(
            f"Petz map is not a beam splitter (eta'={result.eta_prime})"
        )
    return result.ancilla
