"""Command-line entry point: ``stsc {sweep,cnvd,lift-check,selftest,plot}``.

Exit codes: 0 success, 1 validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import jsonschema

from . import __version__

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2

SWEEP_SCHEMES = ["ssm", "dsm", "mac-golden", "mac-golden-notwist"]
CNVD_SCHEMES = {"mac-golden-twist": "mac-golden", "mac-golden-notwist": "mac-golden-notwist"}

DEFAULTS = {
    "schemes": ["ssm", "dsm", "mac-golden"],
    "fadings": ["slow"],
    "snr_start": 0.0,
    "snr_stop": 30.0,
    "snr_step": 5.0,
    "trials": 10_000,
    "seed": 42,
    "nr": 2,
    "out": "sweep.csv",
    "noiseless": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "schemes": {"type": "array", "minItems": 1, "items": {"enum": SWEEP_SCHEMES}},
        "fadings": {"type": "array", "minItems": 1, "items": {"enum": ["slow", "fast"]}},
        "snr_start": {"type": "number"},
        "snr_stop": {"type": "number"},
        "snr_step": {"type": "number", "exclusiveMinimum": 0},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2 ** 64 - 1},
        "nr": {"type": "integer", "minimum": 1},
        "out": {"type": "string", "minLength": 1},
        "noiseless": {"type": "boolean"},
    },
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def validate_config(cfg: dict) -> dict:
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageError(f"config error at {where}: {exc.message}") from None
    if cfg["snr_stop"] < cfg["snr_start"]:
        raise UsageError("config error: snr_stop must be >= snr_start")
    return cfg


def load_config_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    # a sweep sidecar carries the effective config under "config"
    if isinstance(data, dict) and "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must be a JSON object")
    return data


def effective_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(load_config_file(args.config))
    overrides = {
        "schemes": args.scheme, "fadings": args.fading, "snr_start": args.snr_start,
        "snr_stop": args.snr_stop, "snr_step": args.snr_step, "trials": args.trials,
        "seed": args.seed, "nr": args.nr, "out": args.out,
        "noiseless": True if args.noiseless else None,
    }
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    return validate_config(cfg)


def snr_grid(start: float, stop: float, step: float) -> list[float]:
    n = int(round((stop - start) / step)) + 1
    grid = [round(start + i * step, 10) for i in range(n)]
    return [s for s in grid if s <= stop + 1e-9]


def cmd_sweep(args) -> int:
    from .sim import SimConfig, SweepResult, run_sweep

    cfg = effective_config(args)
    out = Path(cfg["out"])
    sidecar = out.with_suffix(".meta.json")
    grid = snr_grid(cfg["snr_start"], cfg["snr_stop"], cfg["snr_step"])
    result = SweepResult()
    t0 = time.perf_counter()
    for fading in cfg["fadings"]:
        for scheme in cfg["schemes"]:
            sim_cfg = SimConfig(scheme=scheme, fading=fading, snr_db=tuple(grid),
                                trials=cfg["trials"], n_r=cfg["nr"], master_seed=cfg["seed"],
                                noiseless=cfg["noiseless"])
            part = run_sweep(sim_cfg)
            for row in part.rows:
                print(f"{scheme:>18} {fading:>4} {row.snr_db:6.1f} dB  ber={row.ber:.3e}",
                      file=sys.stderr)
            result = result + part
    wall = time.perf_counter() - t0
    meta = {
        "tool": "stsc",
        "version": __version__,
        "command": "sweep",
        "config": cfg,
        "snr_db": grid,
        "rows": len(result.rows),
        "wall_time_s": wall,
    }
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(result.to_csv())
        sidecar.write_text(json.dumps(meta, indent=2) + "\n")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {out} ({len(result.rows)} rows) and {sidecar}", file=sys.stderr)
    return EXIT_OK


def cmd_cnvd(args) -> int:
    from .stcode import cnvd_check, enumerate_codebook

    book = enumerate_codebook(CNVD_SCHEMES[args.scheme])
    report = cnvd_check(book, mode=args.mode, normalized=args.normalized)
    payload = report.to_dict()
    payload["config"] = {"scheme": args.scheme, "mode": args.mode, "normalized": args.normalized}
    payload["kappa"] = report.kappa
    print(json.dumps(payload, indent=2))
    return EXIT_OK if report.kappa is not None and report.kappa > 0 else EXIT_RUNTIME


def cmd_lift_check(args) -> int:
    from .checks import lift_check

    if not 1 <= args.t_max <= 8:
        print("error: --t-max must lie in [1, 8]", file=sys.stderr)
        return EXIT_INVALID
    results = lift_check(args.t_max)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_RUNTIME


def cmd_selftest(args) -> int:
    from .algebra import GoldenElem
    from .checks import selftest

    kwargs = {}
    if args.inject == "tau-sign":
        kwargs["tau_fn"] = lambda x: GoldenElem(x.a + x.b, x.b)
    elif args.inject == "normalization":
        kwargs["energy_scale"] = 1.1
    results = selftest(**kwargs)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_RUNTIME


def cmd_plot(args) -> int:
    from .plotting import CsvFormatError, plot_sweeps

    try:
        n = plot_sweeps(args.csv, args.out, title=args.title,
                        metadata=json.dumps({"inputs": [str(p) for p in args.csv]}))
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {args.out} ({n} curves)", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stsc", description="Space-time storage code repair simulator.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="Monte Carlo BER sweep to CSV")
    s.add_argument("--config", help="JSON config (flat keys, or a previous sweep sidecar)")
    s.add_argument("--scheme", action="append", choices=SWEEP_SCHEMES,
                   help="scheme to simulate (repeatable)")
    s.add_argument("--fading", action="append", choices=["slow", "fast"],
                   help="fading model (repeatable)")
    s.add_argument("--snr-start", type=float)
    s.add_argument("--snr-stop", type=float)
    s.add_argument("--snr-step", type=float)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--nr", type=int, help="receive antennas")
    s.add_argument("--out", help="output CSV path")
    s.add_argument("--noiseless", action="store_true", help="force zero noise")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("cnvd", help="determinant scan of the MAC golden code")
    c.add_argument("--scheme", choices=sorted(CNVD_SCHEMES), default="mac-golden-notwist")
    c.add_argument("--mode", choices=["over-codewords", "over-differences"],
                   default="over-codewords")
    c.add_argument("--normalized", action="store_true",
                   help="report magnitudes for the power-normalized codebook")
    c.set_defaults(func=cmd_cnvd)

    lc = sub.add_parser("lift-check", help="exhaustive lift round trips")
    lc.add_argument("--t-max", type=int, default=4)
    lc.set_defaults(func=cmd_lift_check)

    st = sub.add_parser("selftest", help="built-in health checks")
    st.add_argument("--inject", choices=["tau-sign", "normalization"], help=argparse.SUPPRESS)
    st.set_defaults(func=cmd_selftest)

    pl = sub.add_parser("plot", help="BER-vs-SNR SVG from sweep CSVs")
    pl.add_argument("csv", nargs="+", type=Path)
    pl.add_argument("--out", required=True, type=Path)
    pl.add_argument("--title", default="Repair BER vs SNR")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
