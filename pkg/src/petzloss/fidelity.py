"""Closed-form Uhlmann fidelity between single-mode Gaussian states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InternalConsistencyError
from .gaussian import GaussianState


@dataclass(frozen=True)
class FidelityBreakdown:
    value: float
    gamma: float
    delta: float
    lambda_: float
    exponent: float


def fidelity(s1: GaussianState, s2: GaussianState) -> FidelityBreakdown:
    """F = exp(-d^T (V1 + V2)^-1 d) / Gamma, Gamma = sqrt(Delta + Lambda) - sqrt(Lambda).

    Delta = det(V1 + V2) / 4 and Lambda = (det V1 - 1)(det V2 - 1) / 4.
    With the vacuum normalised to V = I this reproduces |<a|b>|^2 = exp(-|a - b|^2)
    for coherent states.
    """
    vsum = s1.cov + s2.cov
    det_sum = float(np.linalg.det(vsum))
    if det_sum <= 0:
        raise InternalConsistencyError("V1 + V2 is singular")
    delta = 0.25 * det_sum
    lam = max(0.25 * (s1.det - 1.0) * (s2.det - 1.0), 0.0)
    gamma = math.sqrt(max(delta + lam, 0.0)) - math.sqrt(lam)
    d = s2.mean - s1.mean
    exponent = -float(d @ np.linalg.solve(vsum, d))
    return FidelityBreakdown(math.exp(exponent) / gamma, gamma, delta, lam, exponent)


def fidelity_value(s1: GaussianState, s2: GaussianState) -> float:
    return fidelity(s1, s2).value


def fidelity_f(z: float, a: float) -> float:
    """Gamma between covariances a I and z I: (a z + 1 - sqrt((a^2 - 1)(z^2 - 1))) / 2."""
    if z < 1.0 or a < 1.0:
        raise DomainError(f"fidelity_f needs z >= 1 and a >= 1, got z={z}, a={a}")
    return 0.5 * (a * z + 1.0 - math.sqrt((a * a - 1.0) * (z * z - 1.0)))


def scalar_fidelity_batch(mean1, cov1, means2, covs2) -> np.ndarray:
    """Vectorised fidelity of one state against a stack of states.

    ``means2`` has shape (k, 2), ``covs2`` shape (k, 2, 2).
    """
    mean1 = np.asarray(mean1, float)
    cov1 = np.asarray(cov1, float)
    vsum = cov1[None] + covs2
    det_sum = np.linalg.det(vsum)
    det1 = np.linalg.det(cov1)
    det2 = np.linalg.det(covs2)
    delta = 0.25 * det_sum
    lam = np.clip(0.25 * (det1 - 1.0) * (det2 - 1.0), 0.0, None)
    gamma = np.sqrt(np.clip(delta + lam, 0.0, None)) - np.sqrt(lam)
    d = means2 - mean1[None]
    sol = np.linalg.solve(vsum, d[..., None])[..., 0]
    exponent = -np.einsum("ki,ki->k", d, sol)
    return np.exp(exponent) / gamma
