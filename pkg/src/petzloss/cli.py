"""Command-line driver: ``petzloss {fig2,fig3,fig4,checks}``.

Every flag may also be set through an environment variable named
PETZLOSS_<FLAG> (upper case, dashes as underscores); an explicit flag wins.
Exit status: 0 success, 1 failed check, 2 oracle diagnostics only (or usage
error), 3 invalid parameters.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import checks
from .errors import PetzLossError
from .experiments import PRESETS, RUNNERS, ExperimentConfig, Sweep, plot_script

ENV_PREFIX = "PETZLOSS_"

log = logging.getLogger("petzloss")


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _env_flag(name: str) -> bool:
    return str(_env(name, "")).strip().lower() in ("1", "true", "yes", "on")


def _inputs(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    unknown = [n for n in names if n not in PRESETS]
    if unknown or not names:
        raise argparse.ArgumentTypeError(f"unknown inputs {unknown}; choose from {', '.join(PRESETS)}")
    return names


def _sweep(text: str) -> Sweep:
    try:
        return Sweep.parse(text)
    except PetzLossError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="petzloss", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", default=_env_flag("verbose"))
    sub = parser.add_subparsers(dest="experiment", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eta", type=float, default=_env("eta"))
    common.add_argument("--n-xi", type=float, default=_env("n-xi"))
    common.add_argument("--n-sigma", type=float, default=_env("n-sigma"))
    common.add_argument("--sweep", type=_sweep, default=_env("sweep"), help="start:stop:steps")
    common.add_argument("--inputs", type=_inputs, default=_env("inputs", ",".join(PRESETS)))
    common.add_argument("--out", default=_env("out"), help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=_env("format", "csv"))
    common.add_argument("--cutoff", type=int, default=_env("cutoff", 80))
    common.add_argument("--seed", type=int, default=_env("seed", 0))
    common.add_argument("--emit-plot-script", action="store_true", default=_env_flag("emit-plot-script"))

    for name, help_text in (
        ("fig2", "fidelity of Petz and benchmark recoveries vs prior photon number"),
        ("fig3", "fidelity across the scalar recovery family"),
        ("fig4", "relative transmissivity and fidelity gaps vs eta"),
        ("checks", "run the acceptance and invariant suite"),
    ):
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    # env defaults arrive as strings; argparse only converts defaults for some types
    def num(v, kind):
        return None if v is None else kind(v)

    sweep = args.sweep
    if isinstance(sweep, str):
        sweep = Sweep.parse(sweep)
    inputs = args.inputs
    if isinstance(inputs, str):
        inputs = _inputs(inputs)
    return ExperimentConfig(
        experiment=args.experiment,
        eta=num(args.eta, float),
        n_xi=num(args.n_xi, float),
        n_sigma=num(args.n_sigma, float),
        inputs=inputs,
        sweep=sweep,
        output_path=args.out,
        format=args.format,
        cutoff=int(args.cutoff),
        seed=int(args.seed),
        emit_plot_script=args.emit_plot_script,
    )


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def run(cfg: ExperimentConfig) -> int:
    if cfg.experiment == "checks":
        results = checks.run_all(cutoff=cfg.cutoff, seed=cfg.seed)
        _write(checks.report(results), cfg.output_path)
        return checks.exit_code(results)

    ds = RUNNERS[cfg.experiment](cfg)
    _write(ds.dumps(cfg.format), cfg.output_path)
    if cfg.emit_plot_script:
        if cfg.format != "csv":
            log.warning("plot script expects CSV data; written anyway")
        data = cfg.output_path or f"{cfg.experiment}.csv"
        script_path = Path(data).with_suffix(".gp")
        script_path.write_text(plot_script(cfg.experiment, data, ds), encoding="utf-8")
        log.info("plot script written to %s", script_path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        return run(cfg)
    except PetzLossError as exc:
        print(f"petzloss: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
