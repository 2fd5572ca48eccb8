"""Acceptance criteria and invariant suites, runnable from the CLI or pytest.

Each check returns a :class:`CheckResult`. Oracle checks whose states do not
fit the Fock cutoff report ``DIAGNOSTIC`` instead of failing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CutoffTooSmallError
from .fidelity import fidelity_f, fidelity_value
from .fock import (
    fock_apply_scalar_channel,
    fock_fidelity,
    fock_from_gaussian,
    quadrature_moments,
)
from .gaussian import (
    OMEGA,
    GaussianChannel,
    GaussianState,
    apply_channel,
    coherent_state,
    compose,
    is_completely_positive,
    state_from_cov,
    thermal_state,
)
from .petz import LossySpec, Realization, lossy_channel, petz_map, petz_recovery
from .recovery import (
    eta_max,
    eta_max_bisection,
    family_member,
    g_of_sigma,
    result2_band,
)
from . import experiments

PASS, FAIL, DIAGNOSTIC = "PASS", "FAIL", "DIAGNOSTIC"

ETAS = tuple(round(0.1 * k, 1) for k in range(1, 10))
OCCUPATIONS = tuple(range(11))


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    worst: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def line(self) -> str:
        return f"{self.status:<10} {self.name}: worst={self.worst:.3e} {self.detail}".rstrip()


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def thermal_grid():
    """(eta, n_sigma, n_xi) with N(sigma) mixed."""
    for eta, n_s, n_x in itertools.product(ETAS, OCCUPATIONS, OCCUPATIONS):
        if n_s == 0 and n_x == 0:
            continue
        yield eta, float(n_s), float(n_x)


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


# --- acceptance criteria -------------------------------------------------


def check_fixed_point() -> CheckResult:
    worst = 0.0
    for eta, n_s, n_x in thermal_grid():
        spec = LossySpec(eta, thermal_state(n_x))
        sigma = thermal_state(n_s)
        rec = apply_channel(petz_map(spec, sigma).channel, apply_channel(lossy_channel(spec), sigma))
        worst = max(worst, 1.0 - fidelity_value(sigma, rec))
    return CheckResult("1 Petz fixed point F(sigma, P.N(sigma)) >= 1-1e-10", _status(worst <= 1e-10), worst)


def check_closed_form_eta_prime() -> CheckResult:
    worst = 0.0
    notes = []
    for n_x, expected in ((0.0, 5.0 / 3.0), (10.0, 5.0 / 28.0)):
        spec = LossySpec(0.5, thermal_state(n_x))
        sigma = thermal_state(4.0)
        ep = petz_map(spec, sigma).eta_prime
        general = petz_recovery(lossy_channel(spec), sigma)
        x = general.x_mat
        off_scalar = max(abs(x[0, 1]), abs(x[1, 0]), abs(x[0, 0] - x[1, 1]))
        worst = max(worst, abs(ep - expected), abs(x[0, 0] ** 2 - expected), off_scalar)
        notes.append(f"n_xi={n_x:g}: eta'={ep:.15g}")
    return CheckResult("2 closed-form eta' (5/3, 5/28) vs general Petz construction",
                       _status(worst <= 1e-12), worst, "; ".join(notes))


def check_cp_saturation() -> CheckResult:
    worst = 0.0
    for eta in ETAS:
        spec = LossySpec(eta, thermal_state(0.0))
        for n_s in range(1, 11):
            sigma = thermal_state(float(n_s))
            worst = max(worst, abs(petz_map(spec, sigma).eta_prime - eta_max(spec, sigma)))
    return CheckResult("3 vacuum environment: eta_P = eta_max", _status(worst <= 1e-12), worst)


def _thermal_fidelities(eta, n_s, n_x, n_r):
    spec = LossySpec(eta, thermal_state(n_x))
    sigma = thermal_state(n_s)
    rho = thermal_state(n_r)
    noisy = apply_channel(lossy_channel(spec), rho)
    f_petz = fidelity_value(rho, apply_channel(petz_map(spec, sigma).channel, noisy))
    return spec, sigma, rho, f_petz, fidelity_value(rho, noisy), fidelity_value(rho, sigma)


def check_result3() -> CheckResult:
    worst = -math.inf
    for (eta, n_s, n_x), n_r in itertools.product(thermal_grid(), OCCUPATIONS):
        *_, f_petz, _, f_r1 = _thermal_fidelities(eta, n_s, n_x, float(n_r))
        worst = max(worst, f_r1 - f_petz)
    return CheckResult("4 reprepare never beats Petz: F(rho, R1.N) <= F(rho, P.N) on thermal grid",
                       _status(worst <= 1e-12), worst, "worst = max F_R1 - F_P")


def check_result2() -> CheckResult:
    """Band spot values, plus: Petz beats R0 exactly when g(sigma) lies in the band."""
    band = result2_band(LossySpec(0.5, thermal_state(0.0)), thermal_state(2.0))
    spot = max(abs(band.z0 - 3.0), abs(band.z1 - 8.4356))

    inside_worse = 0
    outside_better = 0
    worst = 0.0
    n_rho0 = 0
    for (eta, n_s, n_x), n_r in itertools.product(thermal_grid(), OCCUPATIONS):
        spec, sigma, rho, f_petz, f_r0, _ = _thermal_fidelities(eta, n_s, n_x, float(n_r))
        band_here = result2_band(spec, rho)
        g = g_of_sigma(spec, rho, sigma)
        gap = f_petz - f_r0
        if band_here.contains(g, 1e-12):
            if gap < -1e-12:
                inside_worse += 1
                worst = max(worst, -gap)
        elif gap > 1e-9:
            outside_better += 1
            worst = max(worst, gap)
            n_rho0 += n_r == 0
    ok = spot <= 1e-3 and inside_worse == 0 and outside_better == 0
    detail = (f"z0={band.z0:.6f} z1={band.z1:.6f}; in-band but Petz worse: {inside_worse}; "
              f"out-of-band but Petz better: {outside_better} ({n_rho0} with n_rho=0)")
    return CheckResult("5 advantage band: sign of F_P - F_R0 flips at band edges", _status(ok),
                       max(worst, spot if spot > 1e-3 else 0.0), detail)


def oracle_states() -> list[tuple[str, GaussianState]]:
    states = [(f"thermal{n:g}", thermal_state(n)) for n in (0, 0.5, 1, 2, 3, 4, 5, 6)]
    for alpha in (0.5, (1 + 1j) / (2 * math.sqrt(2)), 1.0, 1j, -0.8 + 0.6j, 1 + 1j, 0.3 - 1.2j):
        alpha = complex(alpha)
        states.append((f"coherent{alpha:.3g}", coherent_state(alpha.real, alpha.imag)))
    squeezed = [
        ("sq(2.5,10)", [0, 0], np.diag([2.5, 10.0])),
        ("sq(0.2,5)", [0, 0], np.diag([0.2, 5.0])),
        ("sq(5,0.2)", [0, 0], np.diag([5.0, 0.2])),
        ("sq-rot(0.5,2)", [0, 0], rotation(math.pi / 6) @ np.diag([0.5, 2.0]) @ rotation(math.pi / 6).T),
        ("sq-disp(0.5,2)", [0.5, -0.3], np.diag([0.5, 2.0])),
        ("sq(2,8)", [0, 0], np.diag([2.0, 8.0])),
        ("sq-rot(1.5,6)", [0.2, 0.4], rotation(1.1) @ np.diag([1.5, 6.0]) @ rotation(1.1).T),
        ("sq(1,25)", [0, 0], np.diag([1.0, 25.0])),
    ]
    for name, mean, cov in squeezed:
        states.append((name, state_from_cov(mean, cov)))
    return states


def check_fidelity_oracle(cutoff: int = 80) -> CheckResult:
    fock = {}
    skipped_states = []
    for name, s in oracle_states():
        try:
            fock[name] = (s, fock_from_gaussian(s, cutoff))
        except CutoffTooSmallError:
            skipped_states.append(name)
    names = list(fock)
    worst = 0.0
    counted = 0
    for i, j in itertools.combinations_with_replacement(range(len(names)), 2):
        s1, r1 = fock[names[i]]
        s2, r2 = fock[names[j]]
        worst = max(worst, abs(fidelity_value(s1, s2) - fock_fidelity(r1, r2)))
        counted += 1
    detail = f"{counted} pairs at cutoff {cutoff}"
    if skipped_states:
        detail += f"; cutoff too small for {', '.join(skipped_states)}"
    if counted < 200 and skipped_states:
        return CheckResult("6 fidelity closed form vs Fock oracle", DIAGNOSTIC, worst, detail)
    return CheckResult("6 fidelity closed form vs Fock oracle", _status(worst <= 1e-6 and counted >= 200),
                       worst, detail)


def oracle_channels() -> list[tuple[str, float, float]]:
    """(label, tau, y) scalar channels: Petz maps, losses, benchmarks."""
    out = [("identity R0", 1.0, 0.0), ("pure loss 0.5", 0.5, 0.5), ("erasure to thermal1", 0.0, 3.0)]
    for eta, n_x, n_s in ((0.5, 0.0, 4.0), (0.5, 10.0, 4.0), (0.5, 2.0, 6.0), (0.3, 1.0, 1.0), (0.7, 2.0, 1.0)):
        spec = LossySpec(eta, thermal_state(n_x))
        res = petz_map(spec, thermal_state(n_s))
        out.append((f"Petz eta={eta:g} n_xi={n_x:g} n_sigma={n_s:g}", res.eta_prime, res.channel.y_mat[0, 0]))
    out.append(("thermal loss 0.5 n_xi=2", 0.5, 0.5 * 5.0))
    out.append(("additive noise", 1.0, 0.4))
    return out


CONVERGENCE_STEP = 20
CONVERGENCE_TOL = 1e-6


def _fock_channel_moments(tau: float, y: float, s: GaussianState, cutoff: int):
    return quadrature_moments(fock_apply_scalar_channel(tau, y, fock_from_gaussian(s, cutoff)))


def check_channel_oracle(cutoff: int = 80) -> CheckResult:
    """Compare Gaussian and Fock channel outputs on pairs the oracle resolves at ``cutoff``.

    A pair counts only when it clears the trace-deficit gate and its Fock
    moments move by less than CONVERGENCE_TOL when the cutoff grows by
    CONVERGENCE_STEP; a small trace deficit alone does not bound the
    second-moment error of heavy-tailed outputs.
    """
    inputs = [(k, experiments.preset(k)) for k in experiments.PRESETS] + [("vacuum", thermal_state(0.0))]
    worst = worst_unresolved = 0.0
    counted = 0
    skipped = []
    amplifier_seen = False
    for (label, tau, y), (iname, s) in itertools.product(oracle_channels(), inputs):
        try:
            mean, cov = _fock_channel_moments(tau, y, s, cutoff)
            mean_hi, cov_hi = _fock_channel_moments(tau, y, s, cutoff + CONVERGENCE_STEP)
        except CutoffTooSmallError:
            skipped.append(f"{label}/{iname}")
            continue
        expected = apply_channel(GaussianChannel.scalar(tau, y), s)
        err = max(np.max(np.abs(mean - expected.mean)), np.max(np.abs(cov - expected.cov)))
        drift = max(np.max(np.abs(mean - mean_hi)), np.max(np.abs(cov - cov_hi)))
        if drift > CONVERGENCE_TOL:
            skipped.append(f"{label}/{iname}")
            worst_unresolved = max(worst_unresolved, err)
            continue
        worst = max(worst, err)
        counted += 1
        amplifier_seen |= abs(tau - 5.0 / 3.0) < 1e-12
    detail = f"{counted} pairs at cutoff {cutoff}, amplifier Petz included: {amplifier_seen}"
    if skipped:
        detail += (f"; unresolved at this cutoff (worst {worst_unresolved:.3e}, not counted): "
                   f"{', '.join(skipped)}")
    if counted < 20 and skipped:
        return CheckResult("7 Gaussian vs Fock channel application", DIAGNOSTIC, worst, detail)
    ok = worst <= 1e-5 and counted >= 20 and amplifier_seen
    return CheckResult("7 Gaussian vs Fock channel application", _status(ok), worst, detail)


def sample_beam_splitter_cases(rng: np.random.Generator, count: int):
    """Random (spec, sigma) with V_sigma ~ V_xi inside the beam-splitter region."""
    cases = []
    while len(cases) < count:
        eta = rng.uniform(0.01, 0.99)
        b = 1.0 + rng.exponential(5.0)
        r = rng.uniform(-1.0, 1.0)
        theta = rng.uniform(0, math.pi)
        shape = rotation(theta) @ np.diag([math.exp(2 * r), math.exp(-2 * r)]) @ rotation(theta).T
        reach = math.sqrt((b * b - 1.0) / eta)
        lo = max(1.0, b - reach)
        x = rng.uniform(lo, b + reach)
        env = state_from_cov(rng.normal(size=2), b * shape)
        sigma = state_from_cov(rng.normal(size=2), x * shape)
        spec = LossySpec(eta, env)
        if apply_channel(lossy_channel(spec), sigma).det <= 1.0 + 1e-9:
            continue
        cases.append((spec, sigma))
    return cases


def check_ancilla_determinant(seed: int = 0, count: int = 10_000) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = -math.inf
    skipped = 0
    for spec, sigma in sample_beam_splitter_cases(rng, count):
        res = petz_map(spec, sigma)
        if res.realization is not Realization.BEAM_SPLITTER:
            skipped += 1
            continue
        worst = max(worst, 1.0 - res.ancilla.det)
    return CheckResult("8 ancilla det V_xi' >= 1 on random beam-splitter cases",
                       _status(worst <= 1e-9), max(worst, 0.0),
                       f"{count - skipped} samples, {skipped} at eta' ~ 1")


def check_fig4_claims(dataset=None) -> CheckResult:
    ds = dataset if dataset is not None else experiments.run_fig4(experiments.ExperimentConfig("fig4"))
    rows = ds.records()
    worst_all = max(r["f_rel"] for r in rows)
    worst_zero = max(r["f_rel"] for r in rows if r["input"] in experiments.ZERO_MEAN_PRESETS)
    over = [(r["set"], r["input"], r["eta"]) for r in rows if r["f_rel"] >= 0.25]
    ok_all = worst_all < 0.25
    ok_zero = worst_zero < 0.15
    detail = (f"max F_rel all inputs={worst_all:.4f} (<0.25: {ok_all}); "
              f"zero-mean={worst_zero:.4f} (<0.15: {ok_zero}); rows >= 0.25: {len(over)}")
    return CheckResult("9 relative fidelity difference bounds", _status(ok_all and ok_zero),
                       worst_all, detail)


def check_figure_orderings(fig2=None, fig3=None) -> CheckResult:
    fig2 = fig2 if fig2 is not None else experiments.run_fig2(experiments.ExperimentConfig("fig2"))
    fig3 = fig3 if fig3 is not None else experiments.run_fig3(experiments.ExperimentConfig("fig3"))
    problems = []
    worst = 0.0
    for r in fig2.records():
        worst = max(worst, r["f_r1"] - r["f_petz"])
        if r["f_petz"] < r["f_r1"] - 1e-12:
            problems.append(f"fig2 {r['panel']} n_sigma={r['n_sigma']}: Petz < R1")
        if r["n_xi"] == 10 and r["realization"] != Realization.BEAM_SPLITTER.value:
            problems.append(f"fig2 {r['panel']} n_sigma={r['n_sigma']}: not a beam splitter")
        if r["n_xi"] == 0 and r["n_sigma"] > 0 and r["realization"] != Realization.AMPLIFIER.value:
            problems.append(f"fig2 {r['panel']} n_sigma={r['n_sigma']}: not an amplifier")
        if r["input"] == "thermal2":
            spec = LossySpec(0.5, thermal_state(r["n_xi"]))
            rho = thermal_state(2.0)
            g = g_of_sigma(spec, rho, thermal_state(r["n_sigma"]))
            if result2_band(spec, rho).contains(g, 1e-12) and r["f_petz"] < r["f_r0"] - 1e-12:
                problems.append(f"fig2 {r['panel']} n_sigma={r['n_sigma']}: in band but Petz < R0")
    markers = {(r["set"], r["input"], r["kind"]): r for r in fig3.records() if r["kind"] != "curve"}
    for name in experiments.PRESETS:
        petz_a, opt_a = markers[("a", name, "petz")], markers[("a", name, "optimum")]
        gap = abs(opt_a["eta_r"] - petz_a["eta_r"])
        worst = max(worst, gap)
        if gap > 1e-8:
            problems.append(f"fig3(a) {name}: optimum {opt_a['eta_r']} away from Petz {petz_a['eta_r']}")
        petz_c, opt_c = markers[("c", name, "petz")], markers[("c", name, "optimum")]
        if not opt_c["eta_r"] > petz_c["eta_r"]:
            problems.append(f"fig3(c) {name}: optimum not right of Petz")
    detail = "; ".join(problems[:5]) + (f" (+{len(problems) - 5} more)" if len(problems) > 5 else "")
    return CheckResult("10 figure orderings and markers", _status(not problems), worst, detail)


ACCEPTANCE: dict[str, Callable[..., CheckResult]] = {
    "fixed_point": check_fixed_point,
    "closed_form_eta_prime": check_closed_form_eta_prime,
    "cp_saturation": check_cp_saturation,
    "result3": check_result3,
    "result2": check_result2,
    "fidelity_oracle": check_fidelity_oracle,
    "channel_oracle": check_channel_oracle,
    "ancilla_determinant": check_ancilla_determinant,
    "fig4_claims": check_fig4_claims,
    "figure_orderings": check_figure_orderings,
}


# --- module invariants ---------------------------------------------------


def random_state(rng: np.random.Generator) -> GaussianState:
    nu = 1.0 + rng.exponential(2.0)
    r = rng.uniform(-1.0, 1.0)
    rot = rotation(rng.uniform(0, math.pi))
    cov = rot @ np.diag([nu * math.exp(2 * r), nu * math.exp(-2 * r)]) @ rot.T
    return state_from_cov(rng.normal(size=2), cov)


def random_channel(rng: np.random.Generator) -> GaussianChannel:
    """Random CP channel: random X, Y = |det X - 1| I + PSD extra."""
    x = rng.normal(size=(2, 2))
    extra = rng.normal(size=(2, 2))
    y = abs(np.linalg.det(x) - 1.0) * np.eye(2) + extra @ extra.T
    return GaussianChannel(x, y, rng.normal(size=2))


def invariant_checks(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []

    worst = 0.0
    for _ in range(200):
        a, b, c = (random_channel(rng) for _ in range(3))
        s = random_state(rng)
        lhs, rhs = compose(a, compose(b, c)), compose(compose(a, b), c)
        scale = 1.0 + max(np.max(np.abs(lhs.x_mat)), np.max(np.abs(lhs.y_mat)))
        worst = max(worst, np.max(np.abs(lhs.x_mat - rhs.x_mat)) / scale,
                    np.max(np.abs(lhs.y_mat - rhs.y_mat)) / scale)
        one = apply_channel(compose(b, c), s)
        two = apply_channel(b, apply_channel(c, s))
        worst = max(worst, np.max(np.abs(one.cov - two.cov)) / (1.0 + np.max(np.abs(one.cov))))
    results.append(CheckResult("compose associative and consistent with apply", _status(worst <= 1e-12), worst))

    worst = 0.0
    for _ in range(200):
        v = random_state(rng).cov
        m = v @ OMEGA
        worst = max(worst, np.max(np.abs(m @ m + np.linalg.det(v) * np.eye(2))) / np.linalg.det(v))
    results.append(CheckResult("(V Omega)^2 = -det V I", _status(worst <= 1e-12), worst))

    mismatches = 0
    for tau, y in itertools.product(np.linspace(0, 3, 31), np.linspace(0, 3, 31)):
        if abs(y - abs(1 - tau)) < 1e-9:
            continue
        if is_completely_positive(GaussianChannel.scalar(tau, y)).feasible != (y >= abs(1 - tau)):
            mismatches += 1
    results.append(CheckResult("CP test matches y >= |1 - tau|", _status(mismatches == 0), float(mismatches)))

    worst = 0.0
    for eta, n_s, n_x in thermal_grid():
        spec = LossySpec(eta, thermal_state(n_x))
        sigma = thermal_state(n_s)
        worst = max(worst, abs(eta_max(spec, sigma) - eta_max_bisection(spec, sigma)))
    results.append(CheckResult("eta_max closed form = CP bisection", _status(worst <= 1e-9), worst))

    worst = 0.0
    for eta, n_s, n_x in thermal_grid():
        spec = LossySpec(eta, thermal_state(n_x))
        sigma = thermal_state(n_s)
        noisy = apply_channel(lossy_channel(spec), sigma)
        for t in np.linspace(0, eta_max(spec, sigma), 7):
            member = family_member(t, spec, sigma)
            if member.feasible:
                worst = max(worst, np.max(np.abs(member.apply(noisy).cov - sigma.cov)))
    results.append(CheckResult("feasible family members map N(sigma) to sigma", _status(worst <= 1e-12), worst))

    worst = 0.0
    for eta, n_s, n_x in thermal_grid():
        spec = LossySpec(eta, thermal_state(n_x))
        sigma = thermal_state(n_s)
        res = petz_map(spec, sigma)
        general = petz_recovery(lossy_channel(spec), sigma)
        worst = max(worst, abs(general.x_mat[0, 0] ** 2 - res.eta_prime),
                    abs(general.x_mat[0, 1]), abs(general.x_mat[1, 0]))
        if not is_completely_positive(res.channel).feasible:
            worst = max(worst, 1.0)
    results.append(CheckResult("Petz closed form = general construction, CP", _status(worst <= 1e-12), worst))

    n_r = 2.0
    worst = 0.0
    for n_s in np.linspace(0, 10, 11):
        a = 2 * n_r + 1
        z = 2 * n_s + 1
        occupation_form = 0.5 * (z * a + 1 - 2 * math.sqrt(n_r * (n_r + 1) * (z * z - 1)))
        worst = max(worst, abs(occupation_form - fidelity_f(z, a)))
    results.append(CheckResult("f(z) occupation form = covariance form", _status(worst <= 1e-14), worst))
    return results


def run_all(cutoff: int = 80, seed: int = 0) -> list[CheckResult]:
    results = []
    for key, fn in ACCEPTANCE.items():
        if key in ("fidelity_oracle", "channel_oracle"):
            results.append(fn(cutoff=cutoff))
        elif key == "ancilla_determinant":
            results.append(fn(seed=seed))
        else:
            results.append(fn())
    results.extend(invariant_checks(seed))
    return results


def report(results: list[CheckResult]) -> str:
    lines = [r.line() for r in results]
    n_fail = sum(r.status == FAIL for r in results)
    n_diag = sum(r.status == DIAGNOSTIC for r in results)
    lines.append(f"{len(results)} checks: {len(results) - n_fail - n_diag} passed, "
                 f"{n_fail} failed, {n_diag} diagnostics")
    return "\n".join(lines) + "\n"


def exit_code(results: list[CheckResult]) -> int:
    if any(r.status == FAIL for r in results):
        return 1
    if any(r.status == DIAGNOSTIC for r in results):
        return 2
    return 0
