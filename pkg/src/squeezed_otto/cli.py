"""``otto`` command line: point, optimize, sweep, mc-verify.

Exit codes: 0 success, 2 invalid input, 3 infeasible configuration,
4 Monte Carlo verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from . import __version__
from .config import DEFAULTS, resolve
from .cycle import (
    CycleConfig,
    HeatConvention,
    Mode,
    SqueezedReservoir,
    cycle_state_energies,
    engine_metrics,
    fridge_metrics,
    operating_window,
)
from .exceptions import DomainError, InfeasibleError
from .optimum import INFEASIBLE_MESSAGE, MaximizerSettings, optimum
from .phase_space import MIN_SAMPLES, analytic_energy, mc_internal_energy
from .sweep import DEFAULT_TAU_RANGE, FIGURE_MODE, TEXT_DIGITS, Figure, SweepSpec, format_number, render, run_sweep

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_MC_FAIL = 4

Z_THRESHOLD = 4.0

MC_HEADER = ("t", "r", "omega", "n", "seed", "mean", "std_error", "target", "zscore", "verdict")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _shared() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("cycle")
    for name, text in (("tc", "cold-bath temperature"), ("th", "hot-bath temperature"),
                       ("rc", "cold-bath squeezing"), ("rh", "hot-bath squeezing"),
                       ("wc", "cold frequency omega_c"), ("wh", "hot frequency omega_h")):
        g.add_argument(f"--{name}", type=float, help=f"{text} (default {DEFAULTS[name]})")
    p.add_argument("--format", choices=("csv", "json", "text"))
    p.add_argument("--config", metavar="PATH", help="JSON config; explicit flags override it")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed (fallback: $OTTO_SEED, then 42)")
    p.add_argument("--jobs", type=int, help="worker threads for sweeps and sampling")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared()
    parser = _Parser(prog="otto", description="Quantum Otto cycles between squeezed thermal reservoirs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("point", parents=[shared], help="evaluate every cycle quantity at one configuration")
    p.add_argument("--heat-convention", choices=("absorbed", "printed", "both"), default="absorbed",
                   help="sign of the refrigerator cooling heat (default: absorbed, U_A - U_D)")

    p = sub.add_parser("optimize", parents=[shared], help="optimal compression ratio for a mode")
    p.add_argument("mode", nargs="?", choices=("engine", "fridge"))
    p.add_argument("--numeric", action="store_true", help="also run golden-section search and compare")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("sweep", parents=[shared], help="figure data: merit vs tau or over an (r_c, r_h) grid")
    p.add_argument("--figure", choices=[f.value for f in Figure])
    p.add_argument("--mode", choices=("engine", "fridge"), help="mode for --figure custom")
    p.add_argument("--tau-lo", dest="tau_lo", type=float)
    p.add_argument("--tau-hi", dest="tau_hi", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--fixed-tau", dest="fixed_tau", type=float, help="temperature ratio for grid sweeps")
    p.add_argument("--r-max", dest="r_max", type=float)
    p.add_argument("--grid-steps", dest="grid_steps", type=int)
    p.add_argument("--pairs", help='squeeze pairs for tau sweeps, e.g. "0,0;0.5,1"')

    p = sub.add_parser("mc-verify", parents=[shared], help="Monte Carlo check of U = T cosh(2r)")
    p.add_argument("--t", type=float, default=1.0, help="effective temperature")
    p.add_argument("--r", type=float, default=0.0, help="squeezing parameter")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--samples", type=int)
    return parser


def _config_from(opts) -> CycleConfig:
    return CycleConfig.from_values(opts["tc"], opts["th"], opts["rc"], opts["rh"], opts["wc"], opts["wh"])


def _flatten(record: dict, prefix="") -> dict:
    flat = {}
    for k, v in record.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        else:
            flat[key] = v
    return flat


def _cell(v, digits=None) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_number(v, digits)
    return str(v)


def _render_record(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    flat = _flatten(record)
    if fmt == "csv":
        return ",".join(flat) + "\n" + ",".join(_cell(v) for v in flat.values()) + "\n"
    width = max(len(k) for k in flat)
    return "".join(f"{k.ljust(width)}  {_cell(v, TEXT_DIGITS)}\n" for k, v in flat.items())


def _render_table(rows: list[dict], header, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{k: r[k] for k in header} for r in rows], indent=2) + "\n"
    return render([{k: r[k] for k in header} for r in rows], header, fmt)


def _window(w) -> dict:
    return {"lo": w.lo, "hi": w.hi, "feasible": w.feasible}


def _plain(obj) -> dict:
    return {k: (v.value if hasattr(v, "value") else v) for k, v in asdict(obj).items()}


def cmd_point(opts) -> tuple[str, int]:
    cfg = _config_from(opts)
    record = {
        "config": {"tc": cfg.cold.temperature, "th": cfg.hot.temperature, "rc": cfg.cold.squeeze,
                   "rh": cfg.hot.squeeze, "wc": cfg.omega_c, "wh": cfg.omega_h,
                   "ratio": cfg.ratio, "feasibility_ratio": cfg.feasibility_ratio},
        "states": asdict(cycle_state_energies(cfg)),
        "engine": asdict(engine_metrics(cfg)),
    }
    convention = opts["heat_convention"]
    if convention in ("absorbed", "both"):
        record["fridge"] = _plain(fridge_metrics(cfg, HeatConvention.ABSORBED))
    if convention in ("printed", "both"):
        key = "fridge" if convention == "printed" else "fridge_printed"
        record[key] = _plain(fridge_metrics(cfg, HeatConvention.PRINTED))
    record["window"] = {m.value: _window(operating_window(cfg, m)) for m in Mode}
    return _render_record(record, opts["format"] or "text"), EXIT_OK


def cmd_optimize(opts) -> tuple[str, int]:
    cfg = _config_from(opts)
    mode = Mode(opts["mode"])
    settings = MaximizerSettings(tol=opts["tol"])
    results = [optimum(cfg, mode)]
    if opts["numeric"]:
        results.append(optimum(cfg, mode, numeric=True, settings=settings))
    merit_name = "eta_mp" if mode is Mode.ENGINE else "eps_mchi"
    rows = [{"mode": r.mode.value, "method": r.method.value, "ratio_star": r.ratio_star,
             "objective": r.objective, merit_name: r.merit, "iterations": r.iterations} for r in results]
    fmt = opts["format"] or "text"
    if fmt == "csv":
        return _render_table(rows, tuple(rows[0]), "csv"), EXIT_OK
    record = {"closed_form": rows[0]}
    if len(rows) == 2:
        record["numeric"] = rows[1]
        record["discrepancy"] = {"ratio_star": abs(results[1].ratio_star - results[0].ratio_star),
                                 merit_name: abs(results[1].merit - results[0].merit)}
    return _render_record(record, fmt), EXIT_OK


def _parse_pairs(text: str):
    pairs = []
    for chunk in text.split(";"):
        try:
            rc, rh = (float(v) for v in chunk.split(","))
        except ValueError:
            raise DomainError(f"--pairs: cannot parse {chunk!r}; expected 'rc,rh'") from None
        pairs.append((rc, rh))
    return tuple(pairs)


def sweep_spec_from(opts) -> SweepSpec:
    figure = Figure(str(opts["figure"]))
    kwargs = {"figure": figure}
    if figure is Figure.CUSTOM:
        kwargs["mode"] = opts["mode"]
        kwargs["squeeze_pairs"] = ((opts["rc"], opts["rh"]),)
    if figure.is_grid:
        kwargs["fixed_tau"] = opts.get("fixed_tau")
        kwargs["grid"] = (opts["r_max"], opts["grid_steps"])
    else:
        lo, hi, steps = opts["tau_lo"], opts["tau_hi"], opts["steps"]
        if (lo, hi, steps) != (None, None, None):
            dlo, dhi, dsteps = DEFAULT_TAU_RANGE[Mode(kwargs.get("mode") or FIGURE_MODE[figure])]
            kwargs["tau_range"] = (dlo if lo is None else lo, dhi if hi is None else hi,
                                   dsteps if steps is None else steps)
        if opts.get("pairs"):
            kwargs["squeeze_pairs"] = _parse_pairs(opts["pairs"])
    return SweepSpec(**kwargs)


def cmd_sweep(opts) -> tuple[str, int]:
    spec = sweep_spec_from(opts)
    rows = run_sweep(spec, jobs=_jobs(opts))
    return render(rows, spec.header, opts["format"] or "csv"), EXIT_OK


def cmd_mc_verify(opts) -> tuple[str, int]:
    n = opts["samples"]
    if n < MIN_SAMPLES:
        raise DomainError(f"--samples must be >= {MIN_SAMPLES}, got {n}")
    res = SqueezedReservoir(opts["t"], opts["r"])
    est = mc_internal_energy(res, opts["omega"], n, opts["seed"], jobs=_jobs(opts))
    target = analytic_energy(res)
    z = abs(est.mean - target) / est.std_error
    verdict = "PASS" if z <= Z_THRESHOLD else "FAIL"
    row = {"t": res.temperature, "r": res.squeeze, "omega": opts["omega"], "n": est.n, "seed": est.seed,
           "mean": est.mean, "std_error": est.std_error, "target": target, "zscore": z, "verdict": verdict}
    fmt = opts["format"] or "csv"
    out = _render_table([row], MC_HEADER, fmt) if fmt != "text" else _render_record(row, "text")
    return out, EXIT_OK if verdict == "PASS" else EXIT_MC_FAIL


def _jobs(opts) -> int:
    jobs = opts["jobs"]
    if jobs < 1:
        raise DomainError(f"--jobs must be >= 1, got {jobs}")
    return jobs


COMMANDS = {"point": cmd_point, "optimize": cmd_optimize, "sweep": cmd_sweep, "mc-verify": cmd_mc_verify}


def run(argv=None, environ=None) -> tuple[str, int, str | None]:
    """Parse ``argv`` and execute; returns (output text, exit code, --out path). Errors propagate."""
    args = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "out")}
    opts = resolve(flags, args.config, environ)
    text, code = COMMANDS[args.command](opts)
    return text, code, args.out


def main(argv=None) -> int:
    try:
        text, code, out = run(argv)
    except SystemExit as exc:  # argparse usage errors and --help/--version
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    except InfeasibleError:
        print(f"otto: {INFEASIBLE_MESSAGE}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DomainError as exc:
        print(f"otto: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
