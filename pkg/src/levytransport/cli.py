"""Command-line interface: ``levytransport {distance,table,fit,simulate,couple}``.

Settings come from built-in defaults, then a JSON ``--config`` file, then
explicit flags (flags win).  The effective settings are written to
``<out>/config.json`` next to the results.

Exit codes: 0 success, 2 invalid input, 3 numerical divergence, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys
import warnings

from . import __version__, jumpsde, measures, study, timeseries
from .distance import distance
from .errors import DivergenceError, LevyTransportError, ValidationError
from .sampling import RngStream

DEFAULTS = {
    "seed": 0,
    "threads": 1,
    "out": "levytransport-out",
    "distance": {"p": 1.0, "oracle": False, "normalized": False, "tol": 1e-10},
    "table": {
        "alphas": study._default_alphas(),
        "epsilons": study._default_epsilons(),
        "n": 100,
        "reps": 100,
    },
    "fit": {
        "header": None,
        "columns": None,
        "s_star": -0.8,
        "delta": 0.1,
        "eps_plus": 0.36,
        "eps_minus": 0.34,
        "alpha_lo": 2.0,
        "alpha_hi": 6.0,
        "alpha_step": 0.1,
        "exclude_band": False,
    },
    "simulate": {"T": 1.0, "dt": None},
    "couple": {"T": 1.0, "dt": None, "replicates": 1000, "bound": False},
}


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _globals(default):
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=default, help="master seed")
    g.add_argument("--threads", type=int, default=default, help="worker thread cap")
    g.add_argument("--out", default=default, help="output directory")
    g.add_argument("--config", default=default, help="JSON config; flags take precedence")
    return g


def build_parser():
    # global flags are accepted before or after the subcommand; the copies on
    # the subcommands must not reset a value given before it
    common = _globals(argparse.SUPPRESS)
    parser = argparse.ArgumentParser(
        prog="levytransport",
        description="Transportation distances between Levy measures, jump-exponent fits and jump-diffusion coupling.",
        parents=[_globals(None)],
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[common], help="T_p between two measure JSON files")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.add_argument("--p", type=float, default=None, help="order (default 1)")
    p.add_argument("--oracle", action="store_true", default=None, help="force quadrature")
    p.add_argument("--normalized", action="store_true", default=None, help="report eps * T_1")
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("table", parents=[common], help="Monte-Carlo table of eps * T_1")
    p.add_argument("--alphas", type=_floats, default=None)
    p.add_argument("--epsilons", type=_floats, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--reps", type=int, default=None)

    p = sub.add_parser("fit", parents=[common], help="fit regime-wise jump exponents to a series")
    p.add_argument("csv")
    p.add_argument("--header", dest="header", action="store_true", default=None)
    p.add_argument("--no-header", dest="header", action="store_false")
    p.add_argument("--columns", type=int, choices=(1, 2), default=None)
    p.add_argument("--s-star", dest="s_star", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--eps-plus", dest="eps_plus", type=float, default=None)
    p.add_argument("--eps-minus", dest="eps_minus", type=float, default=None)
    p.add_argument("--alpha-lo", dest="alpha_lo", type=float, default=None)
    p.add_argument("--alpha-hi", dest="alpha_hi", type=float, default=None)
    p.add_argument("--alpha-step", dest="alpha_step", type=float, default=None)
    p.add_argument("--exclude-band", dest="exclude_band", action="store_true", default=None)

    p = sub.add_parser("simulate", parents=[common], help="simulate one jump diffusion path")
    p.add_argument("spec")
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)

    p = sub.add_parser("couple", parents=[common], help="coupled Monte-Carlo study of two jump diffusions")
    p.add_argument("specs", help='JSON with "spec1" and "spec2"')
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--bound", action="store_true", default=None, help="attach delta and G(delta)")
    return parser


def _read_json(path):
    path = pathlib.Path(path)
    with path.open() as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def effective_config(args):
    """Defaults, overlaid by the config file, overlaid by explicit flags."""
    cmd = args.command
    cfg = {"seed": DEFAULTS["seed"], "threads": DEFAULTS["threads"], "out": DEFAULTS["out"]}
    cfg[cmd] = dict(DEFAULTS[cmd])
    if args.config:
        data = _read_json(args.config)
        if not isinstance(data, dict):
            raise ValidationError("config file must hold a JSON object")
        for key in ("seed", "threads", "out"):
            if key in data:
                cfg[key] = data[key]
        section = data.get(cmd, {})
        unknown = set(section) - set(DEFAULTS[cmd])
        if unknown:
            raise ValidationError(f"unknown {cmd} config keys {sorted(unknown)}")
        cfg[cmd].update(section)
    flags = vars(args)
    for key in ("seed", "threads", "out"):
        if flags.get(key) is not None:
            cfg[key] = flags[key]
    for key in DEFAULTS[cmd]:
        if flags.get(key) is not None:
            cfg[cmd][key] = flags[key]
    return cfg


def _prepare_out(cfg):
    out = pathlib.Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    with (out / "config.json").open("w") as fh:
        json.dump(cfg, fh, indent=2, sort_keys=True)
    return out


def _dump(path, data):
    with path.open("w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)


def cmd_distance(args, cfg):
    c = cfg["distance"]
    a = measures.load_spec(args.spec_a)
    b = measures.load_spec(args.spec_b)
    res = distance(a, b, p=c["p"], oracle=c["oracle"], normalized=c["normalized"], tol=c["tol"])
    cfg["inputs"] = {"spec_a": args.spec_a, "spec_b": args.spec_b}
    out = _prepare_out(cfg)
    _dump(out / "distance.json", res.to_dict())
    print(json.dumps(res.to_dict(), sort_keys=True))


def cmd_table(args, cfg):
    c = cfg["table"]
    grid = study.StudyGrid(c["alphas"], c["epsilons"], c["n"], c["reps"], cfg["seed"])
    matrix = study.run_study(grid, threads=cfg["threads"])
    out = _prepare_out(cfg)
    study.write_study(out, grid, matrix)
    width = max(len(f"{e:g}") for e in grid.epsilons)
    print("alpha\\eps " + " ".join(f"{e:>{max(width, 7)}g}" for e in grid.epsilons))
    for a, row in zip(grid.alphas, matrix):
        print(f"{a:>9g} " + " ".join(f"{cell.mean:>{max(width, 7)}.4f}" for cell in row))


def cmd_fit(args, cfg):
    c = cfg["fit"]
    rc = timeseries.RegimeConfig(
        s_star=c["s_star"],
        delta=c["delta"],
        eps_plus=c["eps_plus"],
        eps_minus=c["eps_minus"],
        grid=timeseries.AlphaGrid(c["alpha_lo"], c["alpha_hi"], c["alpha_step"]),
        exclude_band=bool(c["exclude_band"]),
    )
    series = timeseries.read_series_csv(args.csv, header=c["header"], columns=c["columns"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        jumps = timeseries.extract_jumps(series, rc)
    reports = timeseries.fit_all(jumps, rc)
    cfg["inputs"] = {"csv": args.csv}
    out = _prepare_out(cfg)
    summary = timeseries.write_reports(out, reports, jumps, rc)
    for note in jumps.warnings:
        print(f"warning: {note}", file=sys.stderr)
    for (r, t), rep in reports.items():
        print(f"{r:>4} {t:>8}  n={rep.n:<5d} alpha_min={rep.alpha_min:.1f}  t_min={rep.t_min:.4f}")
    for tail, w in summary["weighted_exponent"].items():
        if w is not None:
            print(f"weighted {tail} exponent: {w:.4f}")


def _load_pair(path):
    data = _read_json(path)
    if isinstance(data, list) and len(data) == 2:
        d1, d2 = data
    elif isinstance(data, dict) and "spec1" in data and "spec2" in data:
        d1, d2 = data["spec1"], data["spec2"]
    else:
        raise ValidationError(f'{path}: expected {{"spec1": ..., "spec2": ...}} or a list of two specs')
    return jumpsde.spec_from_dict(d1), jumpsde.spec_from_dict(d2)


def cmd_simulate(args, cfg):
    c = cfg["simulate"]
    spec = jumpsde.load_spec(args.spec)
    path = jumpsde.simulate(spec, c["T"], c["dt"], RngStream.for_context(cfg["seed"], "simulate"))
    cfg["inputs"] = {"spec": args.spec}
    out = _prepare_out(cfg)
    path.to_csv(out / "path.csv")
    print(f"{len(path.jumps)} jumps, X(T) = {path.final!r}")


def cmd_couple(args, cfg):
    c = cfg["couple"]
    s1, s2 = _load_pair(args.specs)
    summary = jumpsde.coupled_study(
        s1, s2, c["T"], c["replicates"], cfg["seed"], dt=c["dt"], threads=cfg["threads"], bound=c["bound"]
    )
    cfg["inputs"] = {"specs": args.specs}
    out = _prepare_out(cfg)
    _dump(out / "coupling.json", summary)
    print(json.dumps(summary, sort_keys=True))


COMMANDS = {
    "distance": cmd_distance,
    "table": cmd_table,
    "fit": cmd_fit,
    "simulate": cmd_simulate,
    "couple": cmd_couple,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = effective_config(args)
        COMMANDS[args.command](args, cfg)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (LevyTransportError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 2)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
