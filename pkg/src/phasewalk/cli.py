"""
Command-line front end: parameter sweeps that write CSV tables.

Subcommands: ``evolve``, ``bound-states``, ``localisation``, ``blp``, ``rhp``
and ``spectrum``. Angles accept raw radians (``0.785``) or multiples of pi
(``0.25pi``, ``pi/4``, ``3pi/2``). Settings may also come from a
``key = value`` config file given with ``--config``; flags override it.

Exit codes: 0 success, 2 bad configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

import numpy as np

from . import bound_states as bs
from . import localisation as loc
from . import open_system as osys
from . import spectral
from .errors import NumericalError, DiagonalizationError
from .walk import WalkConfig, evolve, localized_state, position_distribution

EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_ANGLE_RE = re.compile(r"^([+-]?)((?:\d+\.?\d*|\.\d+)(?:e[+-]?\d+)?)?\*?pi(?:/(\d+(?:\.\d*)?))?$")


class ConfigError(ValueError):
    pass


def parse_angle(text: str | float) -> float:
    """``"0.25pi"``, ``"pi/4"``, ``"-pi"``, ``"1.5"`` -> radians."""
    if isinstance(text, (int, float)):
        val = float(text)
    else:
        s = re.sub(r"\s+", "", text.lower()).replace("π", "pi")
        m = _ANGLE_RE.match(s)
        if m:
            sign = -1.0 if m.group(1) == "-" else 1.0
            coef = float(m.group(2)) if m.group(2) else 1.0
            den = float(m.group(3)) if m.group(3) else 1.0
            val = sign * coef * math.pi / den
        else:
            try:
                val = float(s)
            except ValueError:
                raise ConfigError(f"cannot parse angle {text!r}") from None
    if not math.isfinite(val):
        raise ConfigError(f"angle {text!r} is not finite")
    return val


def parse_phi_grid(text: str) -> np.ndarray:
    """``"N"`` -> N uniform points on [0, 2pi); ``"a:b:N"`` -> linspace(a, b, N);
    ``"a,b,c"`` or a single angle such as ``"pi"`` -> explicit list."""
    text = str(text).strip()
    try:
        if ":" in text:
            a, b, n = text.split(":")
            n = int(n)
            if n < 1:
                raise ConfigError("phi grid must be nonempty")
            return np.linspace(parse_angle(a), parse_angle(b), n)
        if "," in text or not text.isdigit():
            return np.array([parse_angle(x) for x in text.split(",") if x.strip()])
        n = int(text)
    except ValueError as exc:
        raise ConfigError(f"bad phi grid {text!r}: {exc}") from None
    if n < 1:
        raise ConfigError("phi grid must be nonempty")
    return loc.default_phi_grid(n)


def parse_steps(text) -> list[int]:
    try:
        steps = [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"bad steps {text!r}") from None
    if not steps or any(s < 0 for s in steps):
        raise ConfigError(f"steps must be non-negative integers, got {text!r}")
    return steps


# --------------------------------------------------------------------------
# config files

_CONFIG_KEYS = ("theta", "phi", "phi_grid", "steps", "gamma", "eta", "grid",
                "jobs", "out", "ring", "series_dir", "basis", "json")


def parse_config_text(text: str) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment. Keys use ``_`` or ``-``."""
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        cfg[key] = value
    return cfg


def format_config(cfg: dict[str, str]) -> str:
    return "".join(f"{k} = {cfg[k]}\n" for k in _CONFIG_KEYS if k in cfg)


# --------------------------------------------------------------------------
# output

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".12g")


def write_csv(path: str | None, header: list[str], rows, meta: dict | None = None,
              as_json: bool = False) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    text = buf.getvalue()
    if as_json:
        text = json.dumps({"config": meta or {}, "columns": header, "csv": text},
                          sort_keys=True, indent=1) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _map(fn, items, jobs: int):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# --------------------------------------------------------------------------
# commands

def cmd_evolve(a) -> None:
    cfg = WalkConfig.for_steps(a.theta, a.phi, a.steps[0])
    coin = osys.coin_state(a.gamma, a.eta)
    st = evolve(localized_state(coin, cfg), cfg, a.steps[0])
    p = position_distribution(st)
    rows = [(int(n), pn) for n, pn in zip(cfg.sites, p) if pn > 0]
    write_csv(a.out, ["n", "P_n"], rows, _meta(a), a.json)


def _bound_rows(phi, theta):
    return [(phi, b.parity, b.energy, b.lam, b.inverse_length)
            for b in bs.solve_bound_states(theta, phi)]


def cmd_bound_states(a) -> None:
    chunks = _map(partial(_bound_rows, theta=a.theta), a.phi_grid, a.jobs)
    rows = [r for chunk in chunks for r in chunk]
    write_csv(a.out, ["phi", "parity", "E", "lambda", "inv_loc_length"], rows, _meta(a), a.json)


def _loc_row(phi, theta, t):
    r = loc.localisation_row(theta, phi, t)
    return (r.phi, r.pr_numeric, r.pr_analytic, r.p0_numeric, r.p0_analytic)


def cmd_localisation(a) -> None:
    rows = _map(partial(_loc_row, theta=a.theta, t=a.steps[0]), a.phi_grid, a.jobs)
    write_csv(a.out, ["phi", "PR_numeric", "PR_analytic", "P0_numeric", "P0_analytic"],
              rows, _meta(a), a.json)


def _blp_point(phi, theta, steps, grid):
    res = osys.blp_measure(theta, phi, tuple(steps), grid=grid)
    return [(r.measure, r.gamma, r.eta) for r in res], res[-1].series.values


def _rhp_point(phi, theta, steps, basis):
    s = osys.rhp_measure(theta, phi, max(steps), basis)
    acc = s.accumulated
    return [acc[t] for t in steps], s.values


def cmd_blp(a) -> None:
    out = _map(partial(_blp_point, theta=a.theta, steps=a.steps, grid=a.grid), a.phi_grid, a.jobs)
    header = ["phi"] + [c for t in a.steps for c in (f"N_t{t}", f"gamma_t{t}", f"eta_t{t}")]
    rows = [[phi] + [x for trip in vals for x in trip] for phi, (vals, _) in zip(a.phi_grid, out)]
    write_csv(a.out, header, rows, _meta(a), a.json)
    _write_series(a, [s for _, s in out], "trace_distance")


def cmd_rhp(a) -> None:
    out = _map(partial(_rhp_point, theta=a.theta, steps=a.steps, basis=a.basis),
               a.phi_grid, a.jobs)
    header = ["phi"] + [f"I_t{t}" for t in a.steps]
    rows = [[phi] + vals for phi, (vals, _) in zip(a.phi_grid, out)]
    write_csv(a.out, header, rows, _meta(a), a.json)
    _write_series(a, [s for _, s in out], "concurrence")


def _write_series(a, series, column) -> None:
    if not a.series_dir:
        return
    d = Path(a.series_dir)
    d.mkdir(parents=True, exist_ok=True)
    for i, (phi, s) in enumerate(zip(a.phi_grid, series)):
        write_csv(str(d / f"{column}_{i:04d}.csv"), ["t", column, "phi"],
                  [(t, v, phi) for t, v in enumerate(s)])


def cmd_spectrum(a) -> None:
    sp = spectral.diagonalize_ring(a.theta, a.phi, a.ring)
    rows = [(j, e, ipr, int(f)) for j, (e, ipr, f)
            in enumerate(zip(sp.energies, sp.ipr, sp.bound_mask))]
    write_csv(a.out, ["index", "E", "ipr", "bound"], rows, _meta(a), a.json)


COMMANDS = {
    "evolve": cmd_evolve,
    "bound-states": cmd_bound_states,
    "localisation": cmd_localisation,
    "blp": cmd_blp,
    "rhp": cmd_rhp,
    "spectrum": cmd_spectrum,
}

_DEFAULT_STEPS = {"evolve": "150", "localisation": "150", "blp": "150,300,500",
                  "rhp": "150,300,500"}


def _meta(a) -> dict:
    return {k: (v.tolist() if isinstance(v, np.ndarray) else v)
            for k, v in sorted(vars(a).items()) if k not in ("func", "config")}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file (flags override)")
    common.add_argument("--theta", help="coin angle (default pi/4)")
    common.add_argument("--phi", help="impurity phase for single-point commands (default 0)")
    common.add_argument("--phi-grid", dest="phi_grid",
                        help="N | a:b:N | comma list (default 256 points on [0, 2pi))")
    common.add_argument("--steps", help="step count, or comma list of horizons for blp/rhp")
    common.add_argument("--gamma", help="initial coin polar angle for evolve (default 0)")
    common.add_argument("--eta", help="initial coin phase for evolve (default 0)")
    common.add_argument("--grid", help="BLP pair grid resolution (default 64)")
    common.add_argument("--ring", help="ring size for spectrum (default 201)")
    common.add_argument("--basis", help="Bell-state coin basis for rhp: x or z (default x)")
    common.add_argument("--jobs", help="worker processes for sweeps (default 1)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--series-dir", dest="series_dir",
                        help="also write per-phi time series here (blp, rhp)")
    common.add_argument("--json", action="store_const", const="1",
                        help="wrap the CSV in a JSON envelope with the config echoed")
    p = argparse.ArgumentParser(prog="phasewalk", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def resolve(ns: argparse.Namespace) -> argparse.Namespace:
    """Merge config file and flags, then convert to typed values."""
    raw = {}
    if ns.config:
        try:
            raw.update(parse_config_text(Path(ns.config).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    for k in _CONFIG_KEYS:
        v = getattr(ns, k, None)
        if v is not None:
            raw[k] = v
    cmd = ns.command
    out = argparse.Namespace(command=cmd)
    out.theta = parse_angle(raw.get("theta", "0.25pi"))
    out.phi = parse_angle(raw.get("phi", "0"))
    out.phi_grid = parse_phi_grid(raw.get("phi_grid", str(loc.DEFAULT_GRID)))
    out.steps = parse_steps(raw.get("steps", _DEFAULT_STEPS.get(cmd, "150")))
    out.gamma = parse_angle(raw.get("gamma", "0"))
    out.eta = parse_angle(raw.get("eta", "0"))
    try:
        out.grid = int(raw.get("grid", osys.BLP_GRID))
        out.ring = int(raw.get("ring", spectral.DEFAULT_RING_SIZE))
        out.jobs = int(raw.get("jobs", 1))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if out.grid < 1 or out.ring < 3 or out.jobs < 1:
        raise ConfigError("grid >= 1, ring >= 3 and jobs >= 1 required")
    out.basis = raw.get("basis", "x")
    if out.basis not in ("x", "z"):
        raise ConfigError("basis must be x or z")
    out.out = raw.get("out")
    out.series_dir = raw.get("series_dir")
    out.json = str(raw.get("json", "0")).lower() in ("1", "true", "yes")
    if cmd in ("bound-states", "localisation", "blp", "rhp") and not 0 < out.theta < math.pi / 2:
        raise ConfigError("theta must lie in (0, pi/2) for sweeps")
    if out.out not in (None, "-"):
        parent = Path(out.out).resolve().parent
        if not parent.is_dir():
            raise ConfigError(f"output directory {parent} does not exist")
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        args = resolve(ns)
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"phasewalk: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, DiagonalizationError, FloatingPointError) as exc:
        print(f"phasewalk: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"phasewalk: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
