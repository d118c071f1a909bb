"""Command-line front end: ``spinxfer {evolve,optimize,scaling,wigner}``.

Parameters come from an optional ``--config`` file with one section per
command, then from repeated ``--set key=value`` flags (flags win).  Every
run writes its result files plus ``manifest.txt`` into ``--out``.

Exit codes: 0 success, 2 configuration error, 3 resource cap, 4 grid
resolution error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from . import __version__
from ._validation import DomainError, ResolutionError, ResourceCapError
from .evolution import (
    DEFAULT_MAX_AMPLITUDES,
    ChainSpec,
    TimeGrid,
    full_statevector,
    reduced_from_statevector,
    reduced_rho_one,
    reduced_rho_pair,
)
from .measures import measure_values
from .optimizer import FIT_NAMES, OBJECTIVES, SqueezingOptimizer, resolve_target, scaling_study
from .phase_space import (
    DEFAULT_MAX_PAIR_NODES,
    DRIFTS,
    SphereGrid,
    semiclassical_concurrence,
    semiclassical_negativity,
    wigner_initial_approx_field,
    wigner_initial_exact_field,
)
from .spin_algebra import SpinSize
from .states import PreparationParams

EXIT_OK, EXIT_CONFIG, EXIT_CAP, EXIT_RESOLUTION = 0, 2, 3, 4


class ConfigError(Exception):
    pass


# -- value parsers ---------------------------------------------------------------

_PI = re.compile(r"^\s*([-+]?[0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_float(text):
    """Float, also accepting multiples of pi such as ``2pi``, ``pi/2``, ``0.5*pi``."""
    text = str(text).strip()
    m = _PI.match(text)
    if m:
        coef = m.group(1)
        coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        den = float(m.group(2)) if m.group(2) else 1.0
        return coef * np.pi / den
    return float(text)


def parse_spin(text):
    value = Fraction(str(text).strip())
    return SpinSize.of(value).S if value.denominator in (1, 2) else SpinSize.of(float(value)).S


def parse_int(text):
    f = float(text)
    if f != int(f):
        raise ValueError(f"{text!r} is not an integer")
    return int(f)


def parse_bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"{text!r} is not a boolean")


def parse_sites(text):
    return tuple(parse_int(x) for x in str(text).split(",") if x.strip())


def parse_pairs(text):
    pairs = []
    for item in str(text).split(","):
        if item.strip():
            a, b = item.split("-")
            pairs.append((parse_int(a), parse_int(b)))
    return tuple(pairs)


def parse_target(text):
    text = str(text).strip()
    if text.lower() in ("", "none", "default"):
        return None
    if "-" in text:
        return parse_pairs(text)[0]
    return parse_int(text)


def parse_range(text):
    """``"1..7"`` (unit steps) or a comma list; values may be half-integers."""
    text = str(text).strip()
    if ".." in text:
        lo, hi = (Fraction(x.strip()) for x in text.split(".."))
        out, v = [], lo
        while v <= hi:
            out.append(v)
            v += 1
        return tuple(float(x) for x in out)
    return tuple(float(Fraction(x.strip())) for x in text.split(",") if x.strip())


def choice(*options):
    def parse(text):
        t = str(text).strip()
        if t not in options:
            raise ValueError(f"{t!r} not in {options}")
        return t
    return parse


def parse_list(*options):
    def parse(text):
        items = tuple(x.strip() for x in str(text).split(",") if x.strip())
        bad = [x for x in items if x not in options]
        if bad or not items:
            raise ValueError(f"{bad or text!r} not in {options}")
        return items
    return parse


EVOLVE_MEASURES = ("i_concurrence", "purity", "negativity", "negativity_raw")

SCHEMAS = {
    "evolve": {
        "spin": (parse_spin, "5"),
        "n_sites": (parse_int, "6"),
        "mu": (parse_float, "0"),
        "theta": (parse_float, "0"),
        "t_start": (parse_float, "0"),
        "t_end": (parse_float, "2pi"),
        "n_points": (parse_int, "201"),
        "measures": (parse_list(*EVOLVE_MEASURES), "i_concurrence"),
        "sites": (parse_sites, "2"),
        "pairs": (parse_pairs, "2-3"),
        "engine": (choice("exact", "semiclassical", "both"), "exact"),
        "negativity_method": (choice("full", "approx", "both"), "full"),
        "drift": (choice(*DRIFTS), "leading"),
        "oracle": (parse_bool, "false"),
        "max_amplitudes": (parse_int, str(DEFAULT_MAX_AMPLITUDES)),
        "max_pair_nodes": (parse_int, str(DEFAULT_MAX_PAIR_NODES)),
    },
    "optimize": {
        "spin": (parse_spin, "5"),
        "n_sites": (parse_int, "6"),
        "objective": (choice(*OBJECTIVES), "i_concurrence"),
        "target": (parse_target, "default"),
        "t_end": (parse_float, "2pi"),
        "n_times": (parse_int, "201"),
        "mu_max": (parse_float, "pi/2"),
        "theta_max": (parse_float, "pi/2"),
        "scan_resolution": (parse_int, "24"),
        "xatol": (parse_float, "1e-4"),
    },
    "scaling": {
        "objective": (choice(*OBJECTIVES), "i_concurrence"),
        "s_values": (parse_range, "1..3"),
        "n_values": (parse_range, "3..5"),
        "target": (parse_target, "default"),
        "t_end": (parse_float, "2pi"),
        "n_times": (parse_int, "201"),
        "scan_resolution": (parse_int, "24"),
        "xatol": (parse_float, "1e-4"),
        "max_spin": (parse_spin, "20"),
        "max_cells": (parse_int, "200"),
    },
    "wigner": {
        "spin": (parse_spin, "5"),
        "mu": (parse_float, "0"),
        "theta": (parse_float, "0"),
        "n_theta": (parse_int, "0"),
        "n_phi": (parse_int, "0"),
    },
}


def load_config(command, config_path=None, overrides=()):
    """Merge defaults, the file section and ``key=value`` overrides.

    Returns ``(values, raw)``: parsed values and their source strings.
    """
    schema = SCHEMAS[command]
    raw = {k: default for k, (_, default) in schema.items()}
    if config_path is not None:
        path = Path(config_path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from None
        if parser.has_section(command):
            for key, value in parser.items(command):
                if key not in schema:
                    raise ConfigError(f"unknown config key {key!r} in [{command}]")
                raw[key] = value
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = (x.strip() for x in item.split("=", 1))
        if key not in schema:
            raise ConfigError(f"unknown config key {key!r} for {command}")
        raw[key] = value
    values = {}
    for key, (parse, _) in schema.items():
        try:
            values[key] = parse(raw[key])
        except (ValueError, ArithmeticError, DomainError) as exc:
            raise ConfigError(f"invalid value for {key!r}: {raw[key]!r} ({exc})") from None
    return values, raw


# -- output helpers --------------------------------------------------------------

def _fmt(x):
    return format(float(x), ".17g")


def _target_str(target):
    return f"{target[0]}-{target[1]}" if isinstance(target, tuple) else str(target)


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_manifest(path, entries):
    lines = [f"{k}={entries[k]}" for k in sorted(entries)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _chunks(times, n):
    return [c for c in np.array_split(times, max(1, n)) if c.size]


# -- commands --------------------------------------------------------------------

def cmd_evolve(cfg, out, workers):
    try:
        chain = ChainSpec.uniform(cfg["n_sites"], cfg["spin"], mu=cfg["mu"], theta_rot=cfg["theta"])
        grid = TimeGrid(cfg["t_start"], cfg["t_end"], cfg["n_points"])
        sites = [resolve_target("i_concurrence", j, chain.n_sites) for j in cfg["sites"]]
        pairs = [resolve_target("negativity", p, chain.n_sites) for p in cfg["pairs"]]
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    engines = ["exact", "semiclassical"] if cfg["engine"] == "both" else [cfg["engine"]]
    methods = ["full", "approx"] if cfg["negativity_method"] == "both" else [cfg["negativity_method"]]
    if "semiclassical" in engines:
        for p in pairs:
            if any(m.startswith("negativity") for m in cfg["measures"]) and p[1] != p[0] + 1:
                raise ConfigError(f"semiclassical negativity needs an adjacent pair, got {p}")
    t = grid.times
    s = chain.spin
    pref = s.dim / s.two_s
    extra = {}

    if cfg["oracle"]:
        dev = 0.0
        for tk in t:
            psi = full_statevector(chain, float(tk), cfg["max_amplitudes"])
            for j in sites:
                dev = max(dev, np.abs(reduced_from_statevector(psi, [j], s.dim) - reduced_rho_one(chain, j, tk)).max())
            for p in pairs:
                dev = max(dev, np.abs(reduced_from_statevector(psi, p, s.dim) - reduced_rho_pair(chain, *p, tk)).max())
        extra["oracle_max_abs_deviation"] = _fmt(dev)

    files = []
    pool = Parallel(n_jobs=workers)
    for measure in cfg["measures"]:
        pair_measure = measure.startswith("negativity")
        for target in (pairs if pair_measure else sites):
            curves = []
            if "exact" in engines:
                if pair_measure:
                    y = measure_values(chain, t, "negativity", target, raw=measure == "negativity_raw")
                else:
                    y = measure_values(chain, t, measure, target)
                curves.append(("exact", y))
            if "semiclassical" in engines:
                if pair_measure:
                    for method in methods:
                        parts = pool(delayed(semiclassical_negativity)(
                            chain, target[0], c, method, cfg["drift"], cfg["max_pair_nodes"]) for c in _chunks(t, workers))
                        y = np.concatenate(parts)
                        if measure == "negativity":
                            y = pref * y
                        curves.append(("semiclassical" if method == "full" else "semiclassical_approx", y))
                else:
                    parts = pool(delayed(semiclassical_concurrence)(
                        chain, target, c, None, cfg["drift"]) for c in _chunks(t, workers))
                    y = np.concatenate(parts)
                    if measure == "purity":
                        y = 1 - y / pref
                    curves.append(("semiclassical", y))
            rows = [(_fmt(tk), measure, engine, _target_str(target), _fmt(v))
                    for engine, y in curves for tk, v in zip(t, y)]
            name = f"evolve_{measure}_{_target_str(target)}.csv"
            write_csv(out / name, ["t", "measure", "engine", "target", "value"], rows)
            files.append(name)
    extra["files"] = ",".join(files)
    return extra


def cmd_optimize(cfg, out, workers):
    try:
        est = SqueezingOptimizer(
            spin=cfg["spin"], n_sites=cfg["n_sites"], objective=cfg["objective"], target=cfg["target"],
            t_end=cfg["t_end"], n_times=cfg["n_times"], mu_max=cfg["mu_max"], theta_max=cfg["theta_max"],
            scan_resolution=cfg["scan_resolution"], xatol=cfg["xatol"], n_jobs=workers,
        )
        problem = est._problem()
        if est.scan_resolution < 2:
            raise DomainError("scan_resolution must be >= 2")
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    est.fit()
    write_csv(out / "optimum.csv",
              ["objective", "target", "mu_star", "theta_star", "value", "t_star", "flat_in_mu", "n_iter"],
              [(problem.objective, _target_str(problem.target), _fmt(est.mu_), _fmt(est.theta_),
                _fmt(est.value_), _fmt(est.t_star_), str(est.flat_in_mu_).lower(), est.n_iter_)])
    write_csv(out / "landscape.csv", ["mu", "theta", "value"],
              [tuple(_fmt(v) for v in row) for row in est.landscape_])
    return {"files": "optimum.csv,landscape.csv"}


def cmd_scaling(cfg, out, workers):
    try:
        spins = [SpinSize.of(s) for s in cfg["s_values"]]
        ns = [int(n) for n in cfg["n_values"]]
        if not spins or not ns:
            raise DomainError("empty S or N range")
        if max(s.S for s in spins) > cfg["max_spin"]:
            raise DomainError(f"s_values exceed max_spin={cfg['max_spin']}")
        if min(s.S for s in spins) <= 0:
            raise DomainError("s_values must be positive")
        if min(ns) < 2:
            raise DomainError("n_values must be >= 2")
        if len(spins) * len(ns) > cfg["max_cells"]:
            raise DomainError(f"{len(spins) * len(ns)} cells exceed max_cells={cfg['max_cells']}")
        for n in ns:
            resolve_target(cfg["objective"], cfg["target"], n)
        TimeGrid(0.0, cfg["t_end"], cfg["n_times"])
        if cfg["scan_resolution"] < 2:
            raise DomainError("scan_resolution must be >= 2")
    except DomainError as exc:
        raise ConfigError(f"infeasible scaling range: {exc}") from None
    rows, fits = scaling_study(cfg["objective"], [s.S for s in spins], ns, cfg["target"], cfg["t_end"],
                               cfg["n_times"], cfg["scan_resolution"], cfg["xatol"], n_jobs=workers)
    doc = {
        "objective": cfg["objective"],
        "rows": rows,
        "fits": {name: (None if fits[name] is None else
                        {"amplitude": fits[name].amplitude, "exponent": fits[name].exponent,
                         "residual": fits[name].residual}) for name in FIT_NAMES},
    }
    (out / "scaling.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return {"files": "scaling.json"}


def cmd_wigner(cfg, out, workers):
    s = SpinSize.of(cfg["spin"])
    grid = SphereGrid(cfg["n_theta"] or 4 * s.dim, cfg["n_phi"] or 8 * s.dim)
    grid.check_exact(s)
    params = PreparationParams(cfg["mu"], cfg["theta"])
    exact = wigner_initial_exact_field(s, params, grid).values
    approx = wigner_initial_approx_field(s, params, grid).values
    th, ph = grid.mesh()
    dev = exact - approx
    rows = [tuple(_fmt(v) for v in r) for r in zip(th.ravel(), ph.ravel(), exact.ravel(), approx.ravel(), dev.ravel())]
    write_csv(out / "wigner.csv", ["theta", "phi", "exact", "approx", "deviation"], rows)
    peak = np.abs(exact).max()
    return {
        "files": "wigner.csv",
        "max_abs_deviation": _fmt(np.abs(dev).max()),
        "relative_deviation": _fmt(np.abs(dev).max() / peak),
    }


COMMANDS = {"evolve": cmd_evolve, "optimize": cmd_optimize, "scaling": cmd_scaling, "wigner": cmd_wigner}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key=value file with a [command] section")
    common.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                        help="override one parameter (repeatable)")
    common.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--deterministic", action="store_true",
                        help="single worker, fixed reduction order")
    common.add_argument("--out", metavar="DIR", default=".", help="output directory")
    parser = argparse.ArgumentParser(prog="spinxfer", description="Correlation transfer in large-spin Ising chains.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "evolve": "time series of I-concurrence, purity and negativity",
        "optimize": "optimal squeezing and rotation for one chain",
        "scaling": "optimize a grid of (S, N) and fit power laws",
        "wigner": "exact and approximate initial Wigner fields",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        cfg, raw = load_config(args.command, args.config, args.set)
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        workers = 1 if args.deterministic else args.workers
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        extra = COMMANDS[args.command](cfg, out, workers)
    except ConfigError as exc:
        print(f"spinxfer: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceCapError as exc:
        print(f"spinxfer: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ResolutionError as exc:
        print(f"spinxfer: resolution error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except DomainError as exc:
        print(f"spinxfer: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    entries = {f"config.{k}": v.strip() for k, v in raw.items()}
    entries.update({
        "command": args.command,
        "version": __version__,
        "deterministic": str(workers == 1).lower(),
        "workers": workers,
        "wall_time_s": f"{time.perf_counter() - started:.3f}",
    })
    entries.update(extra)
    write_manifest(out / "manifest.txt", entries)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
