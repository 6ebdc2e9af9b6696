"""Batch front-end: parameter sweeps, tables and reports as CSV/JSON.

Subcommands
-----------
fig3           conditional xi^2 over a grid of measurement outcomes
fig4           xi'^2 vs scattering probability for both noise models
table1         planner presets at optimal eta
oracle-report  oracle vs closed-form comparison sweep
sample         Monte Carlo outcome sampling with conditional xi^2
plan           planning chain for one material

Options: --config PATH (INI file, one section per subcommand), --out PATH,
--seed U64, --threads N, --format {csv,json}.  Environment variables
SPINSQ_SEED, SPINSQ_THREADS, SPINSQ_FORMAT, SPINSQ_OUT, SPINSQ_CONFIG
override built-in defaults (command-line flags win over the environment).

Exit codes: 0 success; 2 configuration error; 3 numeric-domain error;
4 acceptance-gate failure (oracle-report).

Output is data only (no plotting).  Every default that participated in a
run is echoed into the output metadata, along with any warnings (such as
auto-nudged singular phases) and the RNG algorithm for sampling runs.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .backaction import (
    MeasurementOutcome,
    SeriesOverflow,
    SingularPhase,
    most_probable_outcome,
)
from .dicke import EnsembleSpec
from .oracle import (
    RNG_ALGORITHM,
    compare_report,
    conditional_xi_distribution,
)
from .planner import GeometrySpec, MaterialSpec, load_materials, plan, table1
from .probe import EPS_SING, ProbeConfig, intensity_moments_approx
from .squeezing import (
    ALKALI,
    REIDC,
    eta_optimal,
    phi_from_eta_d,
    xi_closed_form,
    xi_noisy,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_GATE = 4


class ConfigError(Exception):
    """Invalid or unparsable configuration."""


# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------

def _load_config(path: str | None) -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    if path:
        try:
            read = parser.read(path)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config {path}: {exc}") from exc
        if not read:
            raise ConfigError(f"config file not found: {path}")
    return parser


class Section:
    """One subcommand's configuration with default tracking."""

    def __init__(self, parser: configparser.ConfigParser, name: str):
        self._sec = parser[name] if parser.has_section(name) else {}
        self._name = name
        self.used: dict = {}

    def get(self, key: str, default, cast=float):
        raw = self._sec.get(key) if self._sec else None
        if raw is None:
            self.used[key] = default
            return default
        try:
            if cast is bool:
                value = str(raw).strip().lower() in ("1", "true", "yes", "on")
            else:
                value = cast(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(
                f"config [{self._name}] {key} = {raw!r}: {exc}"
            ) from exc
        self.used[key] = value
        return value

    def get_floats(self, key: str, default: tuple) -> tuple:
        raw = self._sec.get(key) if self._sec else None
        if raw is None:
            self.used[key] = list(default)
            return tuple(default)
        try:
            values = tuple(float(tok) for tok in str(raw).replace(",", " ").split())
        except ValueError as exc:
            raise ConfigError(f"config [{self._name}] {key} = {raw!r}: {exc}") from exc
        self.used[key] = list(values)
        return values


def _env_default(name: str, fallback, cast):
    raw = os.environ.get(f"SPINSQ_{name}")
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"environment SPINSQ_{name} = {raw!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# output rendering
# ---------------------------------------------------------------------------

def _render(columns, rows, metadata, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(
            {"metadata": metadata, "columns": list(columns), "rows": rows},
            indent=2,
            default=float,
        )
    buf = io.StringIO()
    for key in sorted(metadata):
        buf.write(f"# {key} = {metadata[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _nudge_singular(x_t: float, warnings: list) -> float:
    """Push x_t off the singular set {k pi/2} by 2 * EPS_SING if needed."""
    if min(abs(math.cos(x_t)), abs(math.sin(x_t))) >= EPS_SING:
        return x_t
    quadrant = round(x_t / (math.pi / 2.0))
    nudged = quadrant * (math.pi / 2.0) + 2.0 * EPS_SING
    warnings.append(
        f"x_t = {x_t!r} is within {EPS_SING:g} of a singular phase; "
        f"nudged to {nudged!r}"
    )
    return nudged


def cmd_fig3(section: Section, threads: int) -> tuple:
    """Grid of conditional xi^2 over outcomes, mean +/- 1 std per axis."""
    i0 = section.get("i0", 1e11)
    d = section.get("d", 40.0)
    eta = section.get("eta", 0.32)
    n_atoms = int(section.get("n_atoms", 6e10))
    x_t_list = section.get_floats(
        "x_t", (0.0, math.pi / 8, math.pi / 4, math.pi / 2)
    )
    grid_points = int(section.get("grid_points", 21))
    jx_mode = section.get("jx_mode", "shortcut", cast=str)

    phi = phi_from_eta_d(eta, d, n_atoms, i0)
    ens = EnsembleSpec(n_atoms=n_atoms, phi=phi)
    warnings: list = []

    tasks = []
    for x_t_raw in x_t_list:
        x_t = _nudge_singular(x_t_raw, warnings)
        probe = ProbeConfig(i0=i0, x_t=x_t)
        mean = most_probable_outcome(probe)
        mom = intensity_moments_approx(ens, probe)
        sa = math.sqrt(max(mom.var_alpha, 0.0))
        sb = math.sqrt(max(mom.var_beta, 0.0))
        for fa in _linspace(-1.0, 1.0, grid_points):
            for fb in _linspace(-1.0, 1.0, grid_points):
                out = MeasurementOutcome(
                    i_alpha=max(mean.i_alpha + fa * sa, 0.0),
                    i_beta=max(mean.i_beta + fb * sb, 0.0),
                )
                tasks.append((x_t, probe, out))

    def evaluate(task):
        x_t, probe, out = task
        xi = xi_closed_form(ens, probe, out, jx_mode=jx_mode).xi_sq
        return (x_t, out.i_alpha, out.i_beta, xi)

    rows = _parallel_map(evaluate, tasks, threads)
    meta = dict(section.used)
    meta["phi"] = phi
    if warnings:
        meta["warnings"] = "; ".join(warnings)
    return ("x_t", "i_alpha", "i_beta", "xi_sq"), rows, meta, EXIT_OK


def cmd_fig4(section: Section, threads: int) -> tuple:
    """xi'^2 vs eta curves for both noise models, plus a 2-D (d, eta) grid."""
    eta_points = int(section.get("eta_points", 200))
    eta_max = section.get("eta_max", 0.8)
    reidc_d = section.get_floats("reidc_d", (10.0, 40.0))
    alkali_d = section.get_floats("alkali_d", (16.0, 51.0, 75.0))
    grid_d = section.get_floats("grid_d", tuple(float(x) for x in range(4, 101, 4)))
    etas = [e for e in _linspace(eta_max / eta_points, eta_max, eta_points)]

    rows = []
    for d in reidc_d:
        for eta in etas:
            rows.append(("reidc", d, eta, xi_noisy(eta, d, REIDC)))
    for d in alkali_d:
        for eta in etas:
            rows.append(("alkali", d, eta, xi_noisy(eta, d, ALKALI)))
    for d in grid_d:
        for eta in etas:
            rows.append(("reidc2d", d, eta, xi_noisy(eta, d, REIDC)))
    meta = dict(section.used)
    return ("model", "d", "eta", "xi_prime_sq"), rows, meta, EXIT_OK


def cmd_table1(section: Section) -> tuple:
    materials = section.get("materials", "", cast=str)
    results = table1(materials or None)
    rows = [
        (
            r.name,
            r.optical_depth,
            r.eta,
            r.sigma,
            r.n_atoms,
            r.i0,
            r.detuning_over_gamma,
            r.xi_prime_sq,
            r.xi_prime_db,
        )
        for r in results
    ]
    columns = (
        "material",
        "d",
        "eta_opt",
        "sigma_cm2",
        "n_atoms",
        "i0",
        "detuning_over_gamma",
        "xi_prime_sq",
        "xi_prime_db",
    )
    return columns, rows, dict(section.used), EXIT_OK


def cmd_oracle_report(section: Section) -> tuple:
    """Oracle vs closed-form sweep; exit 4 when the gate fails."""
    gate = section.get("gate", 0.05)
    offsets_std = section.get_floats("offsets", (0.0,))
    n_list = section.get_floats("n_atoms", (100, 400, 1000))
    i0_list = section.get_floats("i0", (50.0, 100.0))
    prod_list = section.get_floats("product", (0.5, 1.0, 4.0))
    x_t_list = section.get_floats("x_t", (math.pi / 8, math.pi / 4, 3 * math.pi / 8))
    jx_mode = section.get("jx_mode", "exact", cast=str)

    offset_pairs = sorted({(0, 0)} | {
        (o, 0) for o in offsets_std if o
    } | {(0, o) for o in offsets_std if o})
    report = compare_report(
        grid={
            "n_atoms": tuple(int(n) for n in n_list),
            "i0": i0_list,
            "product": prod_list,
            "x_t": x_t_list,
        },
        offsets=offset_pairs,
        gate=gate,
        jx_mode=jx_mode,
    )
    rows = [
        (
            r["n_atoms"],
            r["i0"],
            r["product"],
            r["x_t"],
            r["offset_alpha"],
            r["offset_beta"],
            r["i_alpha"],
            r["i_beta"],
            r["xi_oracle"],
            r["xi_closed"],
            r["rel_err"],
        )
        for r in report["rows"]
    ]
    columns = (
        "n_atoms",
        "i0",
        "product",
        "x_t",
        "offset_alpha",
        "offset_beta",
        "i_alpha",
        "i_beta",
        "xi_oracle",
        "xi_closed",
        "rel_err",
    )
    meta = dict(section.used)
    meta["max_rel_err"] = report["max_rel_err"]
    meta["pass_flat_gate"] = report["pass_flat_gate"]
    meta["pass_adaptive_gate"] = report["pass_adaptive_gate"]
    code = EXIT_OK if report["pass_flat_gate"] else EXIT_GATE
    return columns, rows, meta, code


def cmd_sample(section: Section, seed: int) -> tuple:
    n_atoms = int(section.get("n_atoms", 400))
    i0 = section.get("i0", 100.0)
    x_t = section.get("x_t", math.pi / 4)
    phi = section.get("phi", 7.07e-3)
    n_samples = int(section.get("n_samples", 1000))
    method = section.get("method", "second_order", cast=str)

    ens = EnsembleSpec(n_atoms=n_atoms, phi=phi)
    probe = ProbeConfig(i0=i0, x_t=x_t)
    table = conditional_xi_distribution(
        ens, probe, n_samples, seed=seed, method=method
    )
    rows = [tuple(float(v) for v in row) for row in table.rows]
    meta = dict(section.used)
    meta["seed"] = seed
    meta["rng_algorithm"] = RNG_ALGORITHM
    for q, v in table.quantiles.items():
        meta[f"xi_sq_q{int(q * 100)}"] = v
    return ("i_alpha", "i_beta", "xi_sq"), rows, meta, EXIT_OK


def cmd_plan(section: Section) -> tuple:
    material = section.get("material", "eu", cast=str)
    materials = section.get("materials", "", cast=str)
    presets = load_materials(materials or None)
    if material not in presets:
        raise ConfigError(
            f"unknown material {material!r}; available: {sorted(presets)}"
        )
    mat, geom_default = presets[material]
    d = section.get("d", geom_default.optical_depth)
    mode_area = section.get("mode_area", geom_default.mode_area)
    geom = GeometrySpec(mode_area=mode_area, optical_depth=d)
    eta = section.get("eta", eta_optimal(d, REIDC))
    result = plan(mat, geom, eta)
    columns = (
        "material",
        "d",
        "eta",
        "sigma_cm2",
        "length_cm",
        "n_atoms",
        "i0",
        "detuning_over_gamma",
        "xi_prime_sq",
        "xi_prime_db",
        "flagged",
    )
    rows = [
        (
            result.name,
            result.optical_depth,
            result.eta,
            result.sigma,
            result.length,
            result.n_atoms,
            result.i0,
            result.detuning_over_gamma,
            result.xi_prime_sq,
            result.xi_prime_db,
            result.flagged,
        )
    ]
    return columns, rows, dict(section.used), EXIT_OK


# ---------------------------------------------------------------------------
# helpers and entry point
# ---------------------------------------------------------------------------

def _linspace(lo: float, hi: float, n: int):
    if n == 1:
        return [0.5 * (lo + hi)]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _parallel_map(fn, tasks, threads: int) -> list:
    """Map preserving input order; rows come back in deterministic grid order."""
    if threads <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinsq",
        description="Four-color QND spin-squeezing sweeps and reports.",
    )
    parser.add_argument("--config", default=_env_default("CONFIG", None, str))
    parser.add_argument("--out", default=_env_default("OUT", None, str))
    parser.add_argument(
        "--seed", type=int, default=_env_default("SEED", 0, int)
    )
    parser.add_argument(
        "--threads", type=int, default=_env_default("THREADS", 1, int)
    )
    parser.add_argument(
        "--format",
        choices=("csv", "json"),
        default=_env_default("FORMAT", "csv", str),
    )
    parser.add_argument(
        "command",
        choices=("fig3", "fig4", "table1", "oracle-report", "sample", "plan"),
    )
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {args.format!r}")
        if args.seed < 0 or args.seed >= 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        config = _load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    section = Section(config, args.command)
    try:
        if args.command == "fig3":
            columns, rows, meta, code = cmd_fig3(section, args.threads)
        elif args.command == "fig4":
            columns, rows, meta, code = cmd_fig4(section, args.threads)
        elif args.command == "table1":
            columns, rows, meta, code = cmd_table1(section)
        elif args.command == "oracle-report":
            columns, rows, meta, code = cmd_oracle_report(section)
        elif args.command == "sample":
            columns, rows, meta, code = cmd_sample(section, args.seed)
        else:
            columns, rows, meta, code = cmd_plan(section)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularPhase, SeriesOverflow, ValueError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    meta.setdefault("command", args.command)
    meta.setdefault("format", args.format)
    meta.setdefault("threads", args.threads)
    _emit(_render(columns, rows, meta, args.format), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
