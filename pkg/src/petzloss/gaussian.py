"""Single-mode Gaussian states and channels.

Conventions: hbar = 1, quadratures r = (q, p) with q = (a + a^dag)/sqrt(2),
covariance V_ij = <r_i r_j + r_j r_i> - 2<r_i><r_j>, so the vacuum has V = I.
A channel (X, Y, d) acts as  mean -> X mean + d,  V -> X V X^T + Y.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormatError, InternalConsistencyError, UnphysicalStateError

OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])
IDENTITY = np.eye(2)

DET_TOL = 1e-9
SYMMETRY_TOL = 1e-9
CP_TOL = 1e-10


def _as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (2,):
        raise FormatError(f"expected a 2-vector, got shape {np.shape(v)}")
    return arr


def _as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=float)
    if arr.shape != (2, 2):
        raise FormatError(f"expected a 2x2 matrix, got shape {arr.shape}")
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Quadrature mean vector and covariance matrix of a single bosonic mode.

    Construct through :func:`state_from_cov`, :func:`thermal_state` or
    :func:`coherent_state`; those validate the uncertainty bound.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", _readonly(_as_vector(self.mean)))
        cov = _as_matrix(self.cov)
        object.__setattr__(self, "cov", _readonly(0.5 * (cov + cov.T)))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.cov))

    @property
    def symplectic_eigenvalue(self) -> float:
        return float(np.sqrt(max(self.det, 0.0)))

    @property
    def mean_photon_number(self) -> float:
        """<a^dag a> = (tr V + 2 |mean|^2 - 2) / 4."""
        return float((np.trace(self.cov) + 2.0 * self.mean @ self.mean - 2.0) / 4.0)

    def is_thermal(self, tol: float = 1e-12) -> bool:
        c = self.cov
        return (
            np.allclose(self.mean, 0.0, atol=tol)
            and abs(c[0, 1]) <= tol
            and abs(c[0, 0] - c[1, 1]) <= tol
        )

    def thermal_occupation(self) -> float:
        """n such that V = (2n + 1) I; only meaningful for thermal states."""
        if not self.is_thermal(1e-9):
            raise DomainError("state is not thermal")
        return float((self.cov[0, 0] - 1.0) / 2.0)

    def allclose(self, other: "GaussianState", atol: float = 1e-12) -> bool:
        return bool(
            np.allclose(self.mean, other.mean, rtol=0, atol=atol)
            and np.allclose(self.cov, other.cov, rtol=0, atol=atol)
        )

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "cov": self.cov.tolist()}


def validate_state(state: GaussianState) -> GaussianState:
    eig = np.linalg.eigvalsh(state.cov)
    if eig[0] <= 0 or state.det < 1.0 - DET_TOL:
        raise UnphysicalStateError(
            f"covariance violates det V >= 1 (det={state.det:.6g}, eigenvalues={eig})"
        )
    return state


def state_from_cov(mean, cov) -> GaussianState:
    cov = _as_matrix(cov)
    if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL:
        raise FormatError("covariance matrix is not symmetric")
    return validate_state(GaussianState(mean, cov))


def thermal_state(n: float) -> GaussianState:
    if n < 0 or not np.isfinite(n):
        raise DomainError(f"mean photon number must be >= 0, got {n}")
    return GaussianState(np.zeros(2), (2.0 * n + 1.0) * IDENTITY)


def vacuum() -> GaussianState:
    return thermal_state(0.0)


def coherent_state(alpha_re: float, alpha_im: float = 0.0) -> GaussianState:
    return GaussianState(np.sqrt(2.0) * np.array([alpha_re, alpha_im]), IDENTITY)


def squeezed_state(cov, mean=(0.0, 0.0)) -> GaussianState:
    return state_from_cov(mean, cov)


@dataclass(frozen=True)
class CpReport:
    feasible: bool
    min_eigenvalue: float


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    x_mat: np.ndarray
    y_mat: np.ndarray
    disp: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x_mat", _readonly(_as_matrix(self.x_mat)))
        y = _as_matrix(self.y_mat)
        if np.max(np.abs(y - y.T)) > SYMMETRY_TOL:
            raise FormatError("noise matrix Y is not symmetric")
        object.__setattr__(self, "y_mat", _readonly(0.5 * (y + y.T)))
        object.__setattr__(self, "disp", _readonly(_as_vector(self.disp)))

    @classmethod
    def scalar(cls, tau: float, y: float, disp=(0.0, 0.0)) -> "GaussianChannel":
        """Phase-insensitive channel X = sqrt(tau) I, Y = y I."""
        if tau < 0:
            raise DomainError("tau must be >= 0")
        return cls(np.sqrt(tau) * IDENTITY, y * IDENTITY, disp)

    def allclose(self, other: "GaussianChannel", atol: float = 1e-12) -> bool:
        return bool(
            np.allclose(self.x_mat, other.x_mat, rtol=0, atol=atol)
            and np.allclose(self.y_mat, other.y_mat, rtol=0, atol=atol)
            and np.allclose(self.disp, other.disp, rtol=0, atol=atol)
        )

    def to_dict(self) -> dict:
        return {
            "x_mat": self.x_mat.tolist(),
            "y_mat": self.y_mat.tolist(),
            "disp": self.disp.tolist(),
        }


def identity_channel() -> GaussianChannel:
    return GaussianChannel(IDENTITY, np.zeros((2, 2)), np.zeros(2))


def is_completely_positive(ch: GaussianChannel) -> CpReport:
    """Smallest eigenvalue of the Hermitian matrix Y + i Omega - i X Omega X^T."""
    m = ch.y_mat + 1j * OMEGA - 1j * ch.x_mat @ OMEGA @ ch.x_mat.T
    m = 0.5 * (m + m.conj().T)
    lam = float(np.linalg.eigvalsh(m)[0])
    return CpReport(feasible=lam >= -CP_TOL, min_eigenvalue=lam)


def apply_channel(ch: GaussianChannel, s: GaussianState) -> GaussianState:
    mean = ch.x_mat @ s.mean + ch.disp
    cov = ch.x_mat @ s.cov @ ch.x_mat.T + ch.y_mat
    out = GaussianState(mean, cov)
    try:
        return validate_state(out)
    except UnphysicalStateError as exc:
        raise InternalConsistencyError(
            f"channel output is unphysical; was a non-CP channel applied? ({exc})"
        ) from exc


def compose(outer: GaussianChannel, inner: GaussianChannel) -> GaussianChannel:
    """Channel equal to applying ``inner`` first, then ``outer``."""
    x2 = outer.x_mat
    return GaussianChannel(
        x2 @ inner.x_mat,
        x2 @ inner.y_mat @ x2.T + outer.y_mat,
        x2 @ inner.disp + outer.disp,
    )
