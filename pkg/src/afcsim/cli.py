"""Command-line front end.

Subcommands::

    afcsim run <scenario.json | bundled-name> [--out DIR]
    afcsim kk <input.csv> <output.csv> [--n-bg N] [--wavelength M]
    afcsim design <constraints.json | bundled-name> [--out DIR]
    afcsim sweep <scenario> --param PATH --values V1,V2,... [--workers N]

Exit codes: 0 success, 1 invalid config (message names the field), 2 violated
physics precondition (message names the operation), 3 I/O failure. The
pipeline is fully deterministic, so there is no seed flag.
"""
from __future__ import annotations

import argparse
import copy
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from .errors import ConfigError, PreconditionError
from .io import profile_from_samples, read_absorption_csv, write_index_csv
from .dispersion import kramers_kronig
from .scenario import load_config, run_scenario, set_by_path

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PHYSICS = 2
EXIT_IO = 3


def bundled_scenarios():
    root = resources.files("afcsim.scenarios")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_scenario(ref):
    """A filesystem path, or the name of a bundled scenario."""
    p = Path(ref)
    if p.exists():
        return p
    candidate = resources.files("afcsim.scenarios") / f"{ref}.json"
    if candidate.is_file():
        return candidate
    raise ConfigError(f"config: no such scenario file or bundled name '{ref}'")


def _cmd_run(args):
    if args.list:
        for name in bundled_scenarios():
            print(name)
        return EXIT_OK
    if args.scenario is None:
        raise ConfigError("config: a scenario path or bundled name is required")
    cfg = load_config(resolve_scenario(args.scenario))
    manifest = run_scenario(cfg, args.out)
    print(f"{manifest['scenario']}: wrote {len(manifest['outputs']) + 1} files to {args.out}")
    return EXIT_OK


def _cmd_kk(args):
    freqs, alpha = read_absorption_csv(args.input)
    profile = profile_from_samples(freqs, alpha, length=args.length, count=args.count)
    index = kramers_kronig(profile, args.n_bg, args.wavelength)
    write_index_csv(profile, index, args.output)
    if index.edge_leakage:
        print("warning: absorption does not decay towards the grid edges; "
              "index values near the edges are unreliable", file=sys.stderr)
    print(f"wrote {args.output}")
    return EXIT_OK


def _cmd_design(args):
    cfg = load_config(resolve_scenario(args.constraints))
    if "design" not in cfg:
        cfg = {"name": "design", "design": cfg}
    if args.verify:
        cfg["design"]["verify"] = True
    manifest = run_scenario(cfg, args.out)
    print(json.dumps(manifest["summary"], indent=2, sort_keys=True))
    return EXIT_OK


def _sweep_one(task):
    cfg, out_dir = task
    return run_scenario(cfg, out_dir)


def _cmd_sweep(args):
    base = load_config(resolve_scenario(args.scenario))
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError("config: --values must be a comma-separated list of numbers")
    if not values:
        raise ConfigError("config: --values is empty")
    tasks = []
    for v in values:
        cfg = copy.deepcopy(base)
        set_by_path(cfg, args.param, v)
        sub = Path(args.out) / f"{args.param.replace('.', '_')}={v:g}"
        tasks.append((cfg, str(sub)))
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            manifests = list(pool.map(_sweep_one, tasks))
    else:
        manifests = [_sweep_one(t) for t in tasks]
    index = {t[1]: m["summary"] for t, m in zip(tasks, manifests)}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep.json", "w") as fh:
        json.dump({"parameter": args.param, "runs": index}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"swept {args.param} over {len(values)} values into {args.out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="afcsim",
                                     description="Cavity-enhanced AFC memory simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config")
    p_run.add_argument("scenario", nargs="?", help="path or bundled scenario name")
    p_run.add_argument("--out", default="afcsim_out", help="output directory")
    p_run.add_argument("--list", action="store_true", help="list bundled scenarios")
    p_run.set_defaults(func=_cmd_run)

    p_kk = sub.add_parser("kk", help="refractive/group index from a measured absorption CSV")
    p_kk.add_argument("input")
    p_kk.add_argument("output")
    p_kk.add_argument("--n-bg", type=float, default=1.8, dest="n_bg")
    p_kk.add_argument("--wavelength", type=float, default=605.977e-9)
    p_kk.add_argument("--length", type=float, default=2e-3,
                      help="propagation length used for optical depths (m)")
    p_kk.add_argument("--count", type=int, default=None,
                      help="resampled grid size (power of two)")
    p_kk.set_defaults(func=_cmd_kk)

    p_design = sub.add_parser("design", help="optimize an impedance-matched comb design")
    p_design.add_argument("constraints", help="constraints JSON (bare or scenario form)")
    p_design.add_argument("--out", default="afcsim_out")
    p_design.add_argument("--verify", action="store_true",
                          help="re-simulate the winning design end to end")
    p_design.set_defaults(func=_cmd_design)

    p_sweep = sub.add_parser("sweep", help="run a scenario over a parameter grid")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--param", required=True, help="dotted config path, e.g. afc.delta_hz")
    p_sweep.add_argument("--values", required=True, help="comma-separated numbers")
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("--out", default="afcsim_out")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        if isinstance(exc, PreconditionError):
            print(f"error: physics precondition violated: {exc}", file=sys.stderr)
            return EXIT_PHYSICS
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
