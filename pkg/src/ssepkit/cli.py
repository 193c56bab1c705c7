"""Command-line driver.

Subcommands: cutoff, entropy, lemmas, heat, tv, mc.  Every run is fully
reproducible from its config file and master seed.  Config files use INI
"key = value" sections; command-line flags override file values.

Exit codes: 0 success, 1 a declared acceptance predicate failed,
2 configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

import numpy as np

from . import experiments as xp
from .profiles import ProfileError, ProfileSpec


class ConfigError(ValueError):
    pass


_DEFAULT_GRIDS = {
    "cutoff": dict(n=(256, 1024, 4096), b=(-2.0, -1.0, 0.0, 1.0, 2.0), t=()),
    "entropy": dict(n=(8,), b=(), t=tuple(np.linspace(0.1, 1.5, 15))),
    "lemmas": dict(n=(), b=(), t=()),
    "heat": dict(n=(64, 256), b=(), t=(0.02, 0.05, 0.1, 0.2, 0.5)),
    "tv": dict(n=(8, 64, 256), b=(), t=(0.05, 0.1, 0.2, 0.4)),
    "mc": dict(n=(64,), b=(), t=(0.05, 0.1, 0.2)),
}

_RUNNERS = {
    "cutoff": xp.run_cutoff_curve,
    "entropy": xp.run_entropy_decay,
    "heat": xp.run_heat,
    "tv": xp.run_tv,
    "mc": xp.run_mc,
}


def _parse_floats(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    if ":" in text and "," not in text:
        start, stop, count = text.split(":")
        return tuple(np.linspace(float(start), float(stop), int(count)))
    return tuple(float(v) for v in text.split(","))


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _profile_from_section(sec) -> ProfileSpec:
    kind = sec.get("kind", "sine")
    rho = sec.getfloat("rho", 0.5)
    eps0 = sec.getfloat("eps0", fallback=None)
    kappa = sec.getfloat("kappa", fallback=None)
    if kind == "constant":
        return ProfileSpec.constant(rho, eps0, kappa)
    if kind == "sine":
        if "modes" in sec:
            modes = []
            for part in sec["modes"].split(","):
                k, a = part.split(":")
                modes.append((int(k), float(a)))
            return ProfileSpec.sine_mixture(rho, modes, eps0, kappa)
        return ProfileSpec.sine(rho, sec.getfloat("amplitude", 0.2),
                                sec.getint("mode", 1), eps0, kappa)
    if kind == "tabulated":
        xs = _parse_floats(sec["xs"])
        ys = _parse_floats(sec["ys"])
        return ProfileSpec.tabulated(xs, ys, eps0, kappa)
    raise ConfigError(f"unknown profile kind {kind!r}")


def load_config(command: str, args) -> xp.ExperimentConfig:
    parser = configparser.ConfigParser()
    if args.config is not None:
        if not Path(args.config).exists():
            raise ConfigError(f"config file not found: {args.config}")
        parser.read(args.config)

    exp_sec = parser["experiment"] if parser.has_section("experiment") else {}
    grids_sec = parser["grids"] if parser.has_section("grids") else {}
    methods_sec = parser["methods"] if parser.has_section("methods") else {}

    try:
        profile = (_profile_from_section(parser["profile"])
                   if parser.has_section("profile")
                   else ProfileSpec.sine(0.5, 0.2))
    except (ProfileError, KeyError, ValueError) as exc:
        raise ConfigError(f"invalid profile: {exc}") from exc

    defaults = _DEFAULT_GRIDS[command]
    try:
        n_values = _parse_ints(grids_sec["n"]) if "n" in grids_sec else defaults["n"]
        b_grid = _parse_floats(grids_sec["b"]) if "b" in grids_sec else defaults["b"]
        time_grid = _parse_floats(grids_sec["t"]) if "t" in grids_sec else defaults["t"]
    except ValueError as exc:
        raise ConfigError(f"invalid grid: {exc}") from exc

    thresholds = xp.MethodThresholds(
        enum_max_sites=int(methods_sec.get("enum_max_sites", 22)),
        chain_max_sites=int(methods_sec.get("chain_max_sites", 14)),
        griddp_max_n=int(methods_sec.get("griddp_max_n", 8192)),
        mc_samples=int(methods_sec.get("mc_samples", 200_000)),
        mc_replicas=int(methods_sec.get("mc_replicas", 2000)),
    )

    seed = args.seed if args.seed is not None else int(exp_sec.get("seed", 0))
    out = args.out if args.out is not None else Path(exp_sec.get("out", "results"))
    workers = args.workers if args.workers is not None else int(exp_sec.get("workers", 1))
    fmt = args.format if args.format is not None else exp_sec.get("format", "csv")
    if fmt not in ("csv", "plot"):
        raise ConfigError(f"format must be csv or plot, got {fmt!r}")
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    name = exp_sec.get("id", command)

    return xp.ExperimentConfig(
        experiment=name, profile=profile, n_values=tuple(n_values),
        b_grid=tuple(b_grid), time_grid=tuple(time_grid), seed=seed,
        out_dir=Path(out), fmt=fmt, workers=workers, thresholds=thresholds,
        timing=bool(getattr(args, "timing", False)),
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ssepkit",
        description="Reservoir exclusion chain experiments: distances to "
                    "equilibrium, entropy decay, and estimate suites.")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "cutoff": "distance to equilibrium across the cutoff window vs its limit",
        "entropy": "exact entropy/distance decay over a time grid",
        "lemmas": "run the numerical estimate suite (nonzero exit on failure)",
        "heat": "density-field gradient decay diagnostics",
        "tv": "product-measure distance to stationarity over time",
        "mc": "replica Monte Carlo against the spectral field",
    }
    for name, desc in descriptions.items():
        p = sub.add_parser(name, help=desc)
        p.add_argument("--config", type=Path, default=None,
                       help="INI config file (flags override file values)")
        p.add_argument("--seed", type=int, default=None, help="master seed")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--workers", type=int, default=None,
                       help="independent experiment cells run in parallel")
        p.add_argument("--format", choices=("csv", "plot"), default=None)
        p.add_argument("--timing", action="store_true",
                       help="record wall times in rows (breaks byte-stability)")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.command, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    failed = False
    if args.command == "lemmas":
        rows, ok = xp.run_lemma_suite(cfg)
        failed = not ok
    else:
        rows = _RUNNERS[args.command](cfg)
    paths = xp.emit(rows, cfg.out_dir, cfg.fmt)
    for p in paths:
        print(f"wrote {p}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
