"""Benchmark recoveries, the scalar recovery family and Petz-vs-benchmark predicates.

Everything here assumes a thermal environment and a thermal prior, so the
forward channel and every family member are phase insensitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, PureOutputError
from .fidelity import fidelity_f, fidelity_value, scalar_fidelity_batch
from .gaussian import (
    IDENTITY,
    GaussianChannel,
    GaussianState,
    apply_channel,
    identity_channel,
    is_completely_positive,
)
from .petz import LossySpec, lossy_channel, petz_map, thermal_eta_prime

BISECTION_TOL = 1e-12
REFINE_TOL = 1e-10


def protocol_r0() -> GaussianChannel:
    """Keep the noisy state."""
    return identity_channel()


def protocol_r1(sigma: GaussianState) -> GaussianChannel:
    """Discard the noisy state and prepare the prior."""
    return GaussianChannel(np.zeros((2, 2)), sigma.cov, sigma.mean)


def _thermal_params(spec: LossySpec, sigma: GaussianState) -> tuple[float, float, float]:
    """(x, b, y): sqrt-determinants of sigma, the environment and N(sigma)."""
    if not (sigma.is_thermal(1e-9) and spec.environment.is_thermal(1e-9)):
        raise DomainError("recovery family requires thermal prior and thermal environment")
    x = sigma.cov[0, 0]
    b = spec.environment.cov[0, 0]
    y = spec.eta * x + (1.0 - spec.eta) * b
    if y <= 1.0 + 1e-12:
        raise PureOutputError("N(sigma) is the vacuum; the recovery family is degenerate")
    return x, b, y


@dataclass(frozen=True)
class RecoveryMember:
    eta_r: float
    channel: GaussianChannel
    feasible: bool

    def apply(self, state: GaussianState) -> GaussianState:
        if not self.feasible:
            raise DomainError(f"recovery member eta_R={self.eta_r} is not completely positive")
        return apply_channel(self.channel, state)


def family_member(eta_r: float, spec: LossySpec, sigma: GaussianState) -> RecoveryMember:
    if eta_r < 0:
        raise DomainError("eta_R must be >= 0")
    x, _, y = _thermal_params(spec, sigma)
    ch = GaussianChannel.scalar(eta_r, x - eta_r * y)
    return RecoveryMember(eta_r, ch, is_completely_positive(ch).feasible)


def eta_max(spec: LossySpec, sigma: GaussianState) -> float:
    """Largest completely positive eta_R in the recovery family."""
    _thermal_params(spec, sigma)
    eta = spec.eta
    n_s = sigma.thermal_occupation()
    n_x = spec.environment.thermal_occupation()
    mixed = eta * n_s + (1.0 - eta) * n_x
    below = min(1.0, n_s / mixed)
    above = max(1.0, (n_s + 1.0) / (mixed + 1.0))
    if family_member(above, spec, sigma).feasible:
        return above
    return below


def eta_max_bisection(spec: LossySpec, sigma: GaussianState, tol: float = BISECTION_TOL) -> float:
    """eta_max by bisecting the CP test; independent of the closed-form branches."""

    def ok(t):
        return family_member(t, spec, sigma).feasible

    lo, hi = 0.0, 1.0
    while ok(hi):
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _member_outputs(etas: np.ndarray, spec: LossySpec, sigma: GaussianState, rho: GaussianState):
    x, _, y = _thermal_params(spec, sigma)
    noisy = apply_channel(lossy_channel(spec), rho)
    etas = np.asarray(etas, float)
    means = np.sqrt(etas)[:, None] * noisy.mean[None, :]
    covs = etas[:, None, None] * noisy.cov[None] + (x - etas * y)[:, None, None] * IDENTITY[None]
    return means, covs


def family_fidelities(etas, rho: GaussianState, spec: LossySpec, sigma: GaussianState) -> np.ndarray:
    """F(rho, R_eta o N(rho)) for each eta_R in ``etas`` (feasibility not checked)."""
    means, covs = _member_outputs(np.atleast_1d(etas), spec, sigma, rho)
    return scalar_fidelity_batch(rho.mean, rho.cov, means, covs)


def optimal_recovery(
    rho: GaussianState, spec: LossySpec, sigma: GaussianState, resolution: float | None = None
) -> tuple[float, float]:
    """Maximise F(rho, R o N(rho)) over the feasible family: grid scan, then bounded refinement."""
    top = eta_max(spec, sigma)
    if top <= 0.0:
        return 0.0, float(family_fidelities([0.0], rho, spec, sigma)[0])
    if resolution is None:
        resolution = 1e-4 * top
    steps = max(int(math.ceil(top / resolution)), 2)
    grid = np.linspace(0.0, top, steps + 1)
    values = family_fidelities(grid, rho, spec, sigma)
    i = int(np.argmax(values))
    best_eta, best_f = float(grid[i]), float(values[i])

    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, steps)]
    res = minimize_scalar(
        lambda t: -family_fidelities([t], rho, spec, sigma)[0],
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": REFINE_TOL},
    )
    if res.success and -res.fun > best_f:
        best_eta, best_f = float(res.x), float(-res.fun)
    return best_eta, best_f


@dataclass(frozen=True)
class RelativeDiffs:
    eta_rel: float
    f_rel: float
    eta_max: float
    f_max: float
    eta_petz: float
    f_petz: float


def petz_fidelity(rho: GaussianState, spec: LossySpec, sigma: GaussianState) -> float:
    petz = petz_map(spec, sigma).channel
    return fidelity_value(rho, apply_channel(petz, apply_channel(lossy_channel(spec), rho)))


def relative_diffs(rho: GaussianState, spec: LossySpec, sigma: GaussianState) -> RelativeDiffs:
    top = eta_max(spec, sigma)
    result = petz_map(spec, sigma)
    eta_p = result.eta_prime
    f_p = petz_fidelity(rho, spec, sigma)
    _, f_max = optimal_recovery(rho, spec, sigma)
    # Petz is then a family member too; never report it above the optimum
    f_max = max(f_max, f_p)
    # eta_max = 0 leaves only the erasure member, which is the Petz map itself
    eta_rel = (top - eta_p) / top if top > 0 else 0.0
    return RelativeDiffs(eta_rel, (f_max - f_p) / f_max, top, f_max, eta_p, f_p)


@dataclass(frozen=True)
class Result2Band:
    z0: float
    z1: float
    lower: float
    upper: float

    def contains(self, g: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= g <= self.upper + tol


def _thermal_sqrt_det(state: GaussianState) -> float:
    if not state.is_thermal(1e-9):
        raise DomainError("expected a thermal state")
    return float(state.cov[0, 0])


def result2_band(spec: LossySpec, rho: GaussianState) -> Result2Band:
    """Band of g(sigma) values for which the Petz map is guaranteed to beat doing nothing."""
    a = _thermal_sqrt_det(rho)
    b = _thermal_sqrt_det(spec.environment)
    z0 = spec.eta * a + (1.0 - spec.eta) * b
    z1 = 2.0 * (2.0 * fidelity_f(z0, a) - 1.0) * a - z0
    return Result2Band(z0, z1, max(1.0, min(z0, z1)), max(z0, z1))


def g_of_sigma(spec: LossySpec, rho: GaussianState, sigma: GaussianState) -> float:
    """sqrt(det) of the Petz-recovered rho: eta eta' a + (1 - eta eta') x."""
    a = _thermal_sqrt_det(rho)
    x = _thermal_sqrt_det(sigma)
    n_s = (x - 1.0) / 2.0
    n_x = (_thermal_sqrt_det(spec.environment) - 1.0) / 2.0
    k = spec.eta * thermal_eta_prime(spec.eta, n_s, n_x)
    return k * a + (1.0 - k) * x
