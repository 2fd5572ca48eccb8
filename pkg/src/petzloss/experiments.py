"""Deterministic datasets for the fidelity-vs-prior, recovery-family and
relative-difference sweeps, plus CSV/JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, FormatError, PureOutputError
from .fidelity import fidelity_value
from .gaussian import GaussianState, apply_channel, coherent_state, state_from_cov, thermal_state
from .petz import LossySpec, lossy_channel, petz_map
from .recovery import (
    eta_max,
    family_fidelities,
    family_member,
    optimal_recovery,
    petz_fidelity,
    relative_diffs,
)

log = logging.getLogger(__name__)

PRESETS = {
    "thermal2": lambda: thermal_state(2.0),
    "squeezed": lambda: state_from_cov([0.0, 0.0], np.diag([2.5, 10.0])),
    "coherent": lambda: coherent_state(0.5 / math.sqrt(2.0), 0.5 / math.sqrt(2.0)),
}
ZERO_MEAN_PRESETS = ("thermal2", "squeezed")

FIG2_PANELS = {10.0: "abc", 0.0: "def"}
FIG3_SETS = {"a": (0.0, 4.0), "b": (2.0, 6.0), "c": (10.0, 4.0)}
FIG4_SETS = {"xi10_s4": (10.0, 4.0), "xi2_s6": (2.0, 6.0)}

SIG_DIGITS = 12


def preset(name: str) -> GaussianState:
    try:
        return PRESETS[name]()
    except KeyError:
        raise DomainError(f"unknown input preset {name!r}; choose from {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class Sweep:
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise DomainError("a sweep needs at least 2 steps")

    @classmethod
    def parse(cls, text: str) -> "Sweep":
        try:
            start, stop, steps = text.split(":")
            return cls(float(start), float(stop), int(steps))
        except ValueError:
            raise FormatError(f"sweep must look like start:stop:steps, got {text!r}") from None

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass
class ExperimentConfig:
    experiment: str
    eta: Optional[float] = None
    n_xi: Optional[float] = None
    n_sigma: Optional[float] = None
    inputs: Sequence[str] = tuple(PRESETS)
    sweep: Optional[Sweep] = None
    output_path: Optional[str] = None
    format: str = "csv"
    cutoff: int = 80
    seed: int = 0
    emit_plot_script: bool = False


@dataclass
class Dataset:
    columns: tuple
    rows: list = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise FormatError(f"row has {len(values)} values, expected {len(self.columns)}")
        self.rows.append(tuple(_clean(v) for v in values))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, r)) for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"columns": list(self.columns), "rows": [list(r) for r in self.rows]}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Dataset":
        doc = json.loads(text)
        return cls(tuple(doc["columns"]), [tuple(r) for r in doc["rows"]])

    @classmethod
    def from_csv(cls, text: str) -> "Dataset":
        reader = csv.reader(io.StringIO(text))
        columns = tuple(next(reader))
        return cls(columns, [tuple(_parse(v) for v in row) for row in reader])

    def dumps(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise FormatError(f"unknown format {fmt!r}")


def _clean(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.{SIG_DIGITS}g}")
    if v is None:
        return ""
    return str(v)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    return str(v)


def _parse(text: str):
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _noisy(spec: LossySpec, rho: GaussianState) -> GaussianState:
    return apply_channel(lossy_channel(spec), rho)


FIG2_COLUMNS = ("panel", "input", "n_xi", "n_sigma", "f_petz", "f_r0", "f_r1", "eta_prime", "realization")


def run_fig2(cfg: ExperimentConfig) -> Dataset:
    """Fidelity of Petz, keep-noisy and re-prepare recoveries versus the prior's photon number."""
    eta = 0.5 if cfg.eta is None else cfg.eta
    sweep = cfg.sweep or Sweep(0.0, 10.0, 201)
    n_xis = [cfg.n_xi] if cfg.n_xi is not None else list(FIG2_PANELS)
    ds = Dataset(FIG2_COLUMNS)
    for n_xi in n_xis:
        spec = LossySpec(eta, thermal_state(n_xi))
        letters = FIG2_PANELS.get(n_xi)
        for k, name in enumerate(cfg.inputs):
            panel = letters[k] if letters and k < len(letters) else f"xi{n_xi:g}"
            rho = preset(name)
            noisy = _noisy(spec, rho)
            f_r0 = fidelity_value(rho, noisy)
            for n_sigma in sweep.values():
                sigma = thermal_state(n_sigma)
                try:
                    result = petz_map(spec, sigma)
                except PureOutputError:
                    log.info("skipping n_sigma=%g, n_xi=%g: N(sigma) is pure", n_sigma, n_xi)
                    continue
                f_petz = fidelity_value(rho, apply_channel(result.channel, noisy))
                f_r1 = fidelity_value(rho, sigma)
                ds.add(panel, name, n_xi, n_sigma, f_petz, f_r0, f_r1,
                       result.eta_prime, result.realization.value)
    return ds


FIG3_COLUMNS = ("set", "input", "kind", "n_xi", "n_sigma", "eta_r", "fidelity", "feasible")


def run_fig3(cfg: ExperimentConfig) -> Dataset:
    """Fidelity across the scalar recovery family, with Petz and optimum markers."""
    eta = 0.5 if cfg.eta is None else cfg.eta
    if cfg.n_xi is not None or cfg.n_sigma is not None:
        sets = {"custom": (cfg.n_xi if cfg.n_xi is not None else 0.0,
                           cfg.n_sigma if cfg.n_sigma is not None else 4.0)}
    else:
        sets = FIG3_SETS
    steps = cfg.sweep.steps if cfg.sweep else 401
    ds = Dataset(FIG3_COLUMNS)
    for label, (n_xi, n_sigma) in sets.items():
        spec = LossySpec(eta, thermal_state(n_xi))
        sigma = thermal_state(n_sigma)
        top = eta_max(spec, sigma)
        etas = np.linspace(0.0, top, steps)
        petz = petz_map(spec, sigma)
        for name in cfg.inputs:
            rho = preset(name)
            values = family_fidelities(etas, rho, spec, sigma)
            for t, f in zip(etas, values):
                ds.add(label, name, "curve", n_xi, n_sigma, t, f, family_member(t, spec, sigma).feasible)
            ds.add(label, name, "petz", n_xi, n_sigma, petz.eta_prime,
                   petz_fidelity(rho, spec, sigma), True)
            t_opt, f_opt = optimal_recovery(rho, spec, sigma)
            ds.add(label, name, "optimum", n_xi, n_sigma, t_opt, f_opt, True)
    return ds


FIG4_COLUMNS = ("set", "input", "n_xi", "n_sigma", "eta", "eta_rel", "f_rel",
                "eta_petz", "eta_max", "f_petz", "f_max", "realization")


def run_fig4(cfg: ExperimentConfig) -> Dataset:
    """Relative transmissivity and fidelity gaps between Petz and the best family member."""
    sweep = cfg.sweep or Sweep(0.05, 0.95, 19)
    if cfg.n_xi is not None or cfg.n_sigma is not None:
        sets = {"custom": (cfg.n_xi if cfg.n_xi is not None else 10.0,
                           cfg.n_sigma if cfg.n_sigma is not None else 4.0)}
    else:
        sets = FIG4_SETS
    ds = Dataset(FIG4_COLUMNS)
    for label, (n_xi, n_sigma) in sets.items():
        sigma = thermal_state(n_sigma)
        for name in cfg.inputs:
            rho = preset(name)
            for eta in sweep.values():
                spec = LossySpec(float(eta), thermal_state(n_xi))
                rd = relative_diffs(rho, spec, sigma)
                realization = petz_map(spec, sigma).realization.value
                ds.add(label, name, n_xi, n_sigma, eta, rd.eta_rel, rd.f_rel,
                       rd.eta_petz, rd.eta_max, rd.f_petz, rd.f_max, realization)
    return ds


PLOT_TEMPLATES = {
    "fig2": """set datafile separator ','
set key autotitle columnhead
set xlabel 'n_sigma'
set ylabel 'fidelity'
# columns: {cols}
plot '{data}' using 4:5 with lines title 'Petz', '' using 4:6 with lines dt 2 title 'R0', '' using 4:7 with lines title 'R1'
""",
    "fig3": """set datafile separator ','
set key autotitle columnhead
set xlabel 'eta_R'
set ylabel 'fidelity'
# columns: {cols}
plot '{data}' using 6:7 with points pt 7 ps 0.3 title 'family'
""",
    "fig4": """set datafile separator ','
set key autotitle columnhead
set xlabel 'eta'
# columns: {cols}
plot '{data}' using 5:6 with points title 'eta_rel', '' using 5:7 with points title 'F_rel'
""",
}


def plot_script(experiment: str, data_path: str, ds: Dataset) -> str:
    return PLOT_TEMPLATES[experiment].format(data=data_path, cols=", ".join(ds.columns))


RUNNERS = {"fig2": run_fig2, "fig3": run_fig3, "fig4": run_fig4}
