"""Truncated Fock-space oracle.

Brute-force density matrices, Kraus-operator channels and matrix-function
fidelity. Nothing here uses the Gaussian closed forms, so it can be used to
check them.

Operators are built in a padded working space and only the final density
matrix is cut down to ``cutoff + 1`` levels. The probability lost in that
cut (``trace_deficit``) certifies whether the truncation was adequate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .errors import CutoffTooSmallError, DomainError
from .gaussian import GaussianState

MIN_CUTOFF = 8
DEFICIT_TOL = 1e-6
HERMITIAN_TOL = 1e-10
DEFAULT_CUTOFF = 80
FAST_CUTOFF = 40


@dataclass(frozen=True, eq=False)
class FockDensity:
    matrix: np.ndarray
    cutoff: int
    trace_deficit: float

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def photon_distribution(self) -> np.ndarray:
        return np.real(np.diag(self.matrix)).copy()


def _pad(cutoff: int) -> int:
    return max(40, cutoff // 2)


@lru_cache(maxsize=32)
def annihilation(dim: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    a.setflags(write=False)
    return a


def _finish(rho: np.ndarray, cutoff: int, *, check: bool = True) -> FockDensity:
    """Cut a working-space density matrix to the cutoff, renormalise, gate on deficit."""
    d = cutoff + 1
    cut = rho[:d, :d]
    cut = 0.5 * (cut + cut.conj().T)
    trace = float(np.real(np.trace(cut)))
    deficit = 1.0 - trace
    if check and deficit > DEFICIT_TOL:
        raise CutoffTooSmallError(deficit, cutoff)
    return FockDensity(cut / trace, cutoff, deficit)


def fock_state(n: int, cutoff: int) -> FockDensity:
    m = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    m[n, n] = 1.0
    return FockDensity(m, cutoff, 0.0)


def thermal_distribution(nu: float, dim: int) -> np.ndarray:
    """Photon-number distribution of a thermal state with symplectic eigenvalue nu."""
    n = np.arange(dim)
    if nu <= 1.0 + 1e-15:
        p = np.zeros(dim)
        p[0] = 1.0
        return p
    ratio = (nu - 1.0) / (nu + 1.0)
    return (2.0 / (nu + 1.0)) * ratio**n


def williamson_single_mode(cov) -> tuple[float, float, float]:
    """Return (nu, r, theta) with cov = R(theta) diag(nu e^{2r}, nu e^{-2r}) R(theta)^T."""
    lam, vecs = np.linalg.eigh(np.asarray(cov, float))
    lam_big, lam_small = lam[1], lam[0]
    nu = math.sqrt(lam_big * lam_small)
    r = 0.25 * math.log(lam_big / lam_small)
    v = vecs[:, 1]
    theta = math.atan2(v[1], v[0])
    return nu, r, theta


def fock_from_gaussian(s: GaussianState, cutoff: int) -> FockDensity:
    """Density matrix D(alpha) R(theta) S(r) rho_th(nu) S^dag R^dag D^dag."""
    if cutoff < MIN_CUTOFF:
        raise DomainError(f"cutoff must be >= {MIN_CUTOFF}")
    dim = cutoff + 1 + _pad(cutoff)
    a = annihilation(dim)
    ad = a.T
    nu, r, theta = williamson_single_mode(s.cov)
    rho = np.diag(thermal_distribution(nu, dim)).astype(complex)

    if abs(r) > 0:
        # anti-squeezes q: exp(r/2 (a^dag^2 - a^2))
        sq = scipy.linalg.expm(0.5 * r * (ad @ ad - a @ a))
        rho = sq @ rho @ sq.T
    if abs(theta) > 0:
        rot = np.exp(1j * theta * np.arange(dim))
        rho = rot[:, None] * rho * rot.conj()[None, :]
    alpha = (s.mean[0] + 1j * s.mean[1]) / math.sqrt(2.0)
    if abs(alpha) > 0:
        disp = scipy.linalg.expm(alpha * ad - np.conj(alpha) * a)
        rho = disp @ rho @ disp.conj().T
    return _finish(rho, cutoff)


def quadrature_moments(rho: FockDensity) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature mean vector and covariance matrix from operator expectation values."""
    d = rho.dim
    a = annihilation(d + 1)
    q_big = (a + a.T) / math.sqrt(2.0)
    p_big = (a - a.T) / (1j * math.sqrt(2.0))
    q = q_big[:d, :d]
    p = p_big[:d, :d]
    qq = (q_big @ q_big)[:d, :d]
    pp = (p_big @ p_big)[:d, :d]
    qp_sym = (q_big @ p_big + p_big @ q_big)[:d, :d]
    m = rho.matrix

    def ev(op):
        return float(np.real(np.trace(m @ op)))

    mq, mp = ev(q), ev(p)
    mean = np.array([mq, mp])
    cov = np.array(
        [
            [2.0 * ev(qq) - 2.0 * mq * mq, ev(qp_sym) - 2.0 * mq * mp],
            [ev(qp_sym) - 2.0 * mq * mp, 2.0 * ev(pp) - 2.0 * mp * mp],
        ]
    )
    return mean, cov


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    lam, u = np.linalg.eigh(0.5 * (m + m.conj().T))
    lam = np.clip(lam, 0.0, None)
    return (u * np.sqrt(lam)) @ u.conj().T


def fock_fidelity(r1: FockDensity, r2: FockDensity) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(r2) r1 sqrt(r2)))^2."""
    if r1.cutoff != r2.cutoff:
        raise DomainError(f"cutoff mismatch: {r1.cutoff} vs {r2.cutoff}")
    s2 = _psd_sqrt(r2.matrix)
    inner = s2 @ r1.matrix @ s2
    lam = np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0.0, None)
    return float(np.sum(np.sqrt(lam)) ** 2)


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def pure_loss_kraus(eta: float, dim: int) -> list[np.ndarray]:
    """A_k |n> = sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k>, for 0 < eta <= 1."""
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"loss transmissivity must lie in (0, 1], got {eta}")
    if eta == 1.0:
        return [np.eye(dim)]
    ops = []
    n = np.arange(dim)
    for k in range(dim):
        nn = n[k:]
        log_c = 0.5 * (_log_binom(nn, k) + (nn - k) * math.log(eta) + k * math.log1p(-eta))
        op = np.zeros((dim, dim))
        op[nn - k, nn] = np.exp(log_c)
        ops.append(op)
    return ops


def amplifier_kraus(gain: float, dim: int) -> list[np.ndarray]:
    """Quantum-limited amplifier: B_k |n> = sqrt(C(n+k,k) G^-(n+1) ((G-1)/G)^k) |n+k>."""
    ops = []
    n = np.arange(dim)
    for k in range(dim):
        nn = n[: dim - k]
        log_c = 0.5 * (_log_binom(nn + k, k) - (nn + 1) * math.log(gain))
        if k:
            log_c = log_c + 0.5 * k * (math.log(gain - 1.0) - math.log(gain))
        op = np.zeros((dim, dim))
        op[nn + k, nn] = np.exp(log_c)
        ops.append(op)
    return ops


def _embed(m: np.ndarray, dim: int) -> np.ndarray:
    out = np.zeros((dim, dim), dtype=complex)
    d = m.shape[0]
    out[:d, :d] = m
    return out


def _apply_kraus(ops, rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rho)
    for k in ops:
        out += k @ rho @ k.T
    return out


def fock_pure_loss(eta: float, rho: FockDensity) -> FockDensity:
    ops = pure_loss_kraus(eta, rho.dim)
    return _finish(_apply_kraus(ops, rho.matrix), rho.cutoff)


def fock_amplifier(gain: float, rho: FockDensity) -> FockDensity:
    if gain < 1.0:
        raise DomainError("amplifier gain must be >= 1")
    if gain == 1.0:
        return rho
    dim = rho.dim + _pad(rho.cutoff)
    ops = amplifier_kraus(gain, dim)
    return _finish(_apply_kraus(ops, _embed(rho.matrix, dim)), rho.cutoff)


def _beam_splitter_block(total: int, theta: float) -> np.ndarray:
    """exp(theta (a^dag b - a b^dag)) on span{|n, total-n>}, indexed by n."""
    n = np.arange(total)
    # <n+1, m-1| a^dag b |n, m> = sqrt((n+1) m), m = total - n
    off = np.sqrt((n + 1.0) * (total - n))
    gen = np.zeros((total + 1, total + 1))
    gen[n + 1, n] = off
    gen[n, n + 1] = -off
    return scipy.linalg.expm(theta * gen)


def fock_thermal_loss(eta: float, n_env: float, rho: FockDensity) -> FockDensity:
    """Beam splitter with a thermal environment, by explicit two-mode dilation.

    The environment photon distribution is cut where its tail drops below
    the deficit gate; the beam splitter conserves total photon number, so
    each total-number block is exponentiated exactly.
    """
    d = rho.dim
    nu_env = 2.0 * n_env + 1.0
    if n_env > 0:
        ratio = n_env / (n_env + 1.0)
        m_max = int(math.ceil(math.log(DEFICIT_TOL * 1e-3) / math.log(ratio)))
    else:
        m_max = 0
    p_env = thermal_distribution(nu_env, m_max + 1)
    env_tail = 1.0 - float(np.sum(p_env))
    theta = math.acos(math.sqrt(eta))
    blocks = [_beam_splitter_block(total, theta) for total in range(d + m_max)]

    out = np.zeros((d, d), dtype=complex)
    src = np.arange(d)
    for m, pm in enumerate(p_env):
        # amp[n_out, n_in]: environment keeps k = n_in + m - n_out photons
        amp = np.zeros((d + m, d))
        for n_in in range(d):
            amp[: n_in + m + 1, n_in] = blocks[n_in + m][:, n_in]
        for shift in range(-m, d):
            rows = src - shift
            ok = (rows >= 0) & (rows < d)
            if not ok.any():
                continue
            kop = np.zeros((d, d))
            kop[rows[ok], src[ok]] = amp[rows[ok], src[ok]]
            out += pm * (kop @ rho.matrix @ kop.T)
    result = _finish(out, rho.cutoff, check=False)
    deficit = result.trace_deficit + env_tail
    if deficit > DEFICIT_TOL:
        raise CutoffTooSmallError(deficit, rho.cutoff)
    return FockDensity(result.matrix, result.cutoff, deficit)


def fock_apply_scalar_channel(tau: float, y: float, rho: FockDensity) -> FockDensity:
    """Phase-insensitive channel X = sqrt(tau) I, Y = y I by physical decomposition.

    tau < 1: thermal-environment beam splitter (two-mode dilation).
    tau >= 1: vacuum loss eta_L followed by a quantum-limited amplifier of gain G,
    with G = (y + tau + 1) / 2 and eta_L = tau / G.
    """
    if tau < 0 or y < abs(1.0 - tau) - 1e-10:
        raise DomainError(f"channel (tau={tau}, y={y}) is not completely positive")
    if tau < 1.0 - 1e-12:
        n_env = max(y / (1.0 - tau) - 1.0, 0.0) / 2.0
        return fock_thermal_loss(tau, n_env, rho)
    gain = max((y + tau + 1.0) / 2.0, 1.0)
    eta_loss = min(tau / gain, 1.0)
    if eta_loss < 1.0:
        rho = fock_pure_loss(eta_loss, rho)
    return fock_amplifier(gain, rho)
