"""Command-line driver: config parsing, simulation runs, verification suites.

Config files use a simple sectioned key=value format::

    [model]
    id = two_layer            # two_layer | sgn_canonical | deepwater | cc_four
    [physics]
    rho1 = 1.0
    rho2 = 2.0
    h1 = 1.5
    h2 = 1.0
    g = 1.0                   # optional, default 1.0
    L = 10.0                  # optional, default 10.0
    [scaling]                 # optional section
    vertical_scale = lower    # lower | upper (deepwater requires upper)
    a_exponent = 1.0
    [grid]
    n = 128
    length = 40.0
    [initial]
    family = gaussian         # gaussian | cosine | file
    amplitude = 0.01
    width = 1.5               # gaussian only
    center = 20.0             # gaussian only, default length/2
    wavenumber = 1            # cosine only (integer mode index)
    path = state.csv          # file only
    [integrator]              # optional section, defaults shown in the spec
    method = implicit_midpoint
    dt = 1e-3
    t_end = 10.0
    fp_tol = 1e-12
    fp_max_iters = 100
    diag_every = 100
    snapshot_every = 0
    [equivalence]             # optional: which checks cmd_check_equivalence runs
    checks = appendix_a, boussinesq, dirac, restricted, propagation
    # available: conservation, appendix_a, boussinesq, dirac, restricted,
    #            propagation, roundtrips
    [gradients]               # optional: functionals for cmd_check_gradients
    functionals = all         # or a comma list; default: the configured model

    # '#' starts a comment; numbers in decimal or scientific notation.

Unknown sections or keys are errors (no silent defaults); every physical
constraint is enforced at parse time with the offending key named.

Subcommands: ``run``, ``check-gradients``, ``check-equivalence``,
``limit-study``.  Exit code 0 means all checks passed.  Outputs are
deterministic: identical configs give byte-identical CSV files.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import dirac, models, verify
from .core import Grid, PhysicalParams, ScalingRegime, VerticalScale
from .energetics import SGNParams
from .timeloop import IntegratorConfig, TimeLoopError, run

MODEL_IDS = ("two_layer", "sgn_canonical", "deepwater", "cc_four")
EQUIVALENCE_CHECKS = ("conservation", "appendix_a", "boussinesq", "dirac",
                      "restricted", "propagation", "roundtrips")
DEFAULT_EQUIVALENCE = ("appendix_a", "boussinesq", "dirac", "restricted",
                       "propagation")

DIAG_HEADER = "step,time,energy,kinetic,potential,mass,momentum,phi2_residual,fp_iters"


class ConfigError(ValueError):
    """Config syntax or constraint violation, with a line reference."""


@dataclass(frozen=True)
class InitialSpec:
    family: str                       # gaussian | cosine | file
    amplitude: float = 0.0
    width: float = 1.0
    center: Optional[float] = None
    wavenumber: int = 1
    path: Optional[str] = None


@dataclass(frozen=True)
class RunConfig:
    model_id: str
    params: PhysicalParams
    vertical_scale: VerticalScale
    a_exponent: float
    grid: Grid
    initial: InitialSpec
    integrator: IntegratorConfig
    equivalence_checks: tuple = DEFAULT_EQUIVALENCE
    gradient_functionals: tuple = ("two_layer",)

    @property
    def regime(self):
        if self.vertical_scale is VerticalScale.LOWER_LAYER:
            return ScalingRegime.lower_layer(self.params)
        return ScalingRegime.upper_layer(self.params, self.a_exponent)


# ------------------------------------------------------------------ parsing

_SCHEMA = {
    "model": {"id"},
    "physics": {"rho1", "rho2", "h1", "h2", "g", "L"},
    "scaling": {"vertical_scale", "a_exponent"},
    "grid": {"n", "length"},
    "initial": {"family", "amplitude", "width", "center", "wavenumber", "path"},
    "integrator": {"method", "dt", "t_end", "fp_tol", "fp_max_iters",
                   "diag_every", "snapshot_every"},
    "equivalence": {"checks"},
    "gradients": {"functionals"},
}


def _raw_sections(text):
    sections = {}
    lineno_of = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in _SCHEMA:
                raise ConfigError(f"line {lineno}: unknown section [{current}]")
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if current is None:
            raise ConfigError(f"line {lineno}: key outside any [section]")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SCHEMA[current]:
            raise ConfigError(f"line {lineno}: unknown key {key!r} in [{current}]")
        if key in sections[current]:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        sections[current][key] = value
        lineno_of[(current, key)] = lineno
    return sections, lineno_of


def _get(sections, lineno_of, section, key, conv, default=None, required=False):
    values = sections.get(section, {})
    if key not in values:
        if required:
            raise ConfigError(f"missing required key {key!r} in [{section}]")
        return default
    raw = values[key]
    try:
        return conv(raw)
    except (TypeError, ValueError) as exc:
        line = lineno_of.get((section, key), "?")
        raise ConfigError(f"line {line}: bad value for {key}: {exc}") from None


def parse_config(text):
    """Parse and fully validate a config; raises ConfigError otherwise."""
    sections, linenos = _raw_sections(text)

    model_id = _get(sections, linenos, "model", "id", str, required=True)
    if model_id not in MODEL_IDS:
        raise ConfigError(f"unknown model id {model_id!r}; "
                          f"expected one of {', '.join(MODEL_IDS)}")

    try:
        params = PhysicalParams(
            rho1=_get(sections, linenos, "physics", "rho1", float, required=True),
            rho2=_get(sections, linenos, "physics", "rho2", float, required=True),
            h1=_get(sections, linenos, "physics", "h1", float, required=True),
            h2=_get(sections, linenos, "physics", "h2", float, required=True),
            g=_get(sections, linenos, "physics", "g", float, default=1.0),
            L=_get(sections, linenos, "physics", "L", float, default=10.0),
        )
    except ValueError as exc:
        raise ConfigError(f"[physics]: {exc}") from None

    scale_name = _get(sections, linenos, "scaling", "vertical_scale", str,
                      default="upper" if model_id == "deepwater" else "lower")
    if scale_name not in ("lower", "upper"):
        raise ConfigError(f"vertical_scale must be 'lower' or 'upper', "
                          f"got {scale_name!r}")
    vertical = (VerticalScale.LOWER_LAYER if scale_name == "lower"
                else VerticalScale.UPPER_LAYER)
    if model_id == "deepwater" and vertical is not VerticalScale.UPPER_LAYER:
        raise ConfigError("model 'deepwater' requires vertical_scale = upper")
    a_exp = _get(sections, linenos, "scaling", "a_exponent", float, default=1.0)
    if not 0.0 <= a_exp <= 1.0:
        raise ConfigError("a_exponent must lie in [0, 1]")

    try:
        grid = Grid(n=_get(sections, linenos, "grid", "n", int, required=True),
                    length=_get(sections, linenos, "grid", "length", float,
                                required=True))
    except ValueError as exc:
        raise ConfigError(f"[grid]: {exc}") from None

    family = _get(sections, linenos, "initial", "family", str, required=True)
    if family not in ("gaussian", "cosine", "file"):
        raise ConfigError(f"unknown initial family {family!r}")
    initial = InitialSpec(
        family=family,
        amplitude=_get(sections, linenos, "initial", "amplitude", float,
                       default=0.0),
        width=_get(sections, linenos, "initial", "width", float, default=1.0),
        center=_get(sections, linenos, "initial", "center", float, default=None),
        wavenumber=_get(sections, linenos, "initial", "wavenumber", int,
                        default=1),
        path=_get(sections, linenos, "initial", "path", str, default=None),
    )
    if family == "file" and not initial.path:
        raise ConfigError("initial family 'file' requires key 'path'")
    if family == "gaussian" and initial.width <= 0:
        raise ConfigError("gaussian width must be positive")

    try:
        integrator = IntegratorConfig(
            method=_get(sections, linenos, "integrator", "method", str,
                        default="implicit_midpoint"),
            dt=_get(sections, linenos, "integrator", "dt", float, default=1e-3),
            t_end=_get(sections, linenos, "integrator", "t_end", float,
                       default=1.0),
            fp_tol=_get(sections, linenos, "integrator", "fp_tol", float,
                        default=1e-12),
            fp_max_iters=_get(sections, linenos, "integrator", "fp_max_iters",
                              int, default=100),
            diag_every=_get(sections, linenos, "integrator", "diag_every", int,
                            default=100),
            snapshot_every=_get(sections, linenos, "integrator",
                                "snapshot_every", int, default=0),
        )
    except ValueError as exc:
        raise ConfigError(f"[integrator]: {exc}") from None

    checks_raw = _get(sections, linenos, "equivalence", "checks", str,
                      default=", ".join(DEFAULT_EQUIVALENCE))
    checks = tuple(c.strip() for c in checks_raw.split(",") if c.strip())
    for c in checks:
        if c not in EQUIVALENCE_CHECKS:
            raise ConfigError(f"unknown equivalence check {c!r}")

    functionals_raw = _get(sections, linenos, "gradients", "functionals", str,
                           default=model_id)
    if functionals_raw.strip() == "all":
        functionals = verify.GRADIENT_FUNCTIONALS
    else:
        functionals = tuple(f.strip() for f in functionals_raw.split(",")
                            if f.strip())
        for f in functionals:
            if f not in verify.GRADIENT_FUNCTIONALS:
                raise ConfigError(f"unknown gradient functional {f!r}")

    return RunConfig(model_id=model_id, params=params, vertical_scale=vertical,
                     a_exponent=a_exp, grid=grid, initial=initial,
                     integrator=integrator, equivalence_checks=checks,
                     gradient_functionals=functionals)


def serialize_config(cfg):
    """Canonical text form; parse(serialize(cfg)) equals cfg."""
    p, i, t = cfg.params, cfg.initial, cfg.integrator
    lines = [
        "[model]",
        f"id = {cfg.model_id}",
        "[physics]",
        f"rho1 = {p.rho1!r}", f"rho2 = {p.rho2!r}", f"h1 = {p.h1!r}",
        f"h2 = {p.h2!r}", f"g = {p.g!r}", f"L = {p.L!r}",
        "[scaling]",
        "vertical_scale = "
        + ("lower" if cfg.vertical_scale is VerticalScale.LOWER_LAYER else "upper"),
        f"a_exponent = {cfg.a_exponent!r}",
        "[grid]",
        f"n = {cfg.grid.n}", f"length = {cfg.grid.length!r}",
        "[initial]",
        f"family = {i.family}", f"amplitude = {i.amplitude!r}",
        f"width = {i.width!r}",
    ]
    if i.center is not None:
        lines.append(f"center = {i.center!r}")
    lines.append(f"wavenumber = {i.wavenumber}")
    if i.path is not None:
        lines.append(f"path = {i.path}")
    lines += [
        "[integrator]",
        f"method = {t.method}", f"dt = {t.dt!r}", f"t_end = {t.t_end!r}",
        f"fp_tol = {t.fp_tol!r}", f"fp_max_iters = {t.fp_max_iters}",
        f"diag_every = {t.diag_every}", f"snapshot_every = {t.snapshot_every}",
        "[equivalence]",
        "checks = " + ", ".join(cfg.equivalence_checks),
        "[gradients]",
        "functionals = " + ", ".join(cfg.gradient_functionals),
    ]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ state construction

def displacement_profile(cfg):
    grid = cfg.grid
    spec = cfg.initial
    x = grid.nodes
    if spec.family == "gaussian":
        center = grid.length / 2 if spec.center is None else spec.center
        bump = spec.amplitude * np.exp(-((x - center) / spec.width) ** 2)
        return bump - bump.mean()          # zero mean on the periodic box
    if spec.family == "cosine":
        return spec.amplitude * np.cos(2 * np.pi * spec.wavenumber * x / grid.length)
    raise ConfigError("displacement_profile needs gaussian or cosine family")


def build_model(cfg):
    grid, params, regime = cfg.grid, cfg.params, cfg.regime
    if cfg.model_id == "two_layer":
        return models.two_layer_model(params, regime, grid)
    if cfg.model_id == "sgn_canonical":
        sgn = SGNParams(rho=params.rho2, g=params.g, depth=params.h2,
                        epsilon=regime.epsilon)
        return models.sgn_canonical_model(sgn, grid)
    if cfg.model_id == "deepwater":
        return models.deepwater_model(params, regime, grid)
    return models.cc_four_model(params, regime.epsilon, grid)


def load_state_file(path, field_names, grid):
    rows = Path(path).read_text().strip().splitlines()
    header = rows[0].split(",")
    if header != ["x", *field_names]:
        raise ConfigError(f"{path}: expected header x,{','.join(field_names)}, "
                          f"got {rows[0]!r}")
    data = np.array([[float(v) for v in row.split(",")] for row in rows[1:]])
    if data.shape[0] != grid.n:
        raise ConfigError(f"{path}: {data.shape[0]} rows, grid has {grid.n}")
    return data[:, 1:].T.copy()


def initial_state(cfg, model):
    if cfg.initial.family == "file":
        return load_state_file(cfg.initial.path, model.field_names, cfg.grid)
    bump = displacement_profile(cfg)
    grid, params = cfg.grid, cfg.params
    zeros = np.zeros(grid.n)
    if cfg.model_id == "two_layer":
        return np.stack([bump, zeros])
    if cfg.model_id == "sgn_canonical":
        return np.stack([params.h2 + bump, zeros])
    if cfg.model_id == "deepwater":
        return np.stack([1.0 - bump, zeros])
    cc = dirac.reconstruct_constrained(bump, zeros, params,
                                       cfg.regime.epsilon, grid)
    return cc.as_array()


# ------------------------------------------------------------------ CSV output

def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_diagnostics_csv(path, records):
    lines = [DIAG_HEADER]
    for r in records:
        lines.append(",".join([
            str(r.step), _fmt(r.time), _fmt(r.energy), _fmt(r.kinetic),
            _fmt(r.potential), _fmt(r.mass), _fmt(r.momentum),
            _fmt(r.constraint_residual), _fmt(r.fp_iters)]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_snapshot_csv(path, grid, field_names, state):
    lines = ["x," + ",".join(field_names)]
    x = grid.nodes
    for idx in range(grid.n):
        lines.append(",".join([_fmt(x[idx])]
                              + [_fmt(state[c][idx]) for c in range(len(field_names))]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_pairs_csv(path, header, pairs):
    lines = [header]
    for a, b in pairs:
        lines.append(f"{_fmt(a)},{_fmt(b)}")
    Path(path).write_text("\n".join(lines) + "\n")


# ------------------------------------------------------------------ subcommands

def _say(quiet, *args):
    if not quiet:
        print(*args)


def cmd_run(cfg, out_dir, quiet=False):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model = build_model(cfg)
    y0 = initial_state(cfg, model)
    try:
        result = run(model, y0, cfg.integrator)
        records = result.diagnostics
        failed = None
    except TimeLoopError as exc:
        records = exc.diagnostics
        failed = exc
    write_diagnostics_csv(out / "diagnostics.csv", records)
    snapshots = [] if failed else result.snapshots
    for step, state in snapshots:
        write_snapshot_csv(out / f"snap_{step:08d}.csv", cfg.grid,
                           model.field_names, state)
    if failed is not None:
        _say(quiet, f"run failed at step {failed.step}: {failed.cause}")
        return 1
    e0 = records[0].energy
    drift = max(abs(r.energy - e0) for r in records)
    rel_drift = drift / abs(e0) if e0 != 0.0 else drift
    residuals = [r.constraint_residual for r in records
                 if r.constraint_residual is not None]
    _say(quiet, f"steps: {cfg.integrator.n_steps}   "
                f"final time: {records[-1].time:g}")
    _say(quiet, f"energy drift |dH|/|H0|: {rel_drift:.3e}")
    if residuals:
        _say(quiet, f"max constraint residual: {max(residuals):.3e}")
    _say(quiet, f"wrote {out / 'diagnostics.csv'}"
                + (f" and {len(snapshots)} snapshots" if snapshots else ""))
    return 0


def cmd_check_gradients(cfg, seed, quiet=False, tol=1e-6, n_states=20):
    """fd-oracle suite for the configured functionals."""
    rng = np.random.default_rng(seed)
    result = verify.gradient_suite(cfg.params, cfg.grid, rng,
                                   functionals=cfg.gradient_functionals,
                                   n_states=n_states, tol=tol)
    _say(quiet, f"{'PASS' if result.ok else 'FAIL'} {result.name}: "
                f"{result.detail}")
    return 0 if result.ok else 1


def _emit(result, out, quiet):
    _say(quiet, f"{'PASS' if result.ok else 'FAIL'} {result.name}: "
                f"{result.detail}")
    if out is not None:
        for name, pairs in result.series.items():
            write_pairs_csv(out / f"{name}.csv", "epsilon,residual", pairs)
    return 0 if result.ok else 1


def cmd_check_equivalence(cfg, seed, out_dir=None, quiet=False):
    """Residual-order and identity checks, as selected in [equivalence]."""
    rng = np.random.default_rng(seed)
    grid, params = cfg.grid, cfg.params
    out = Path(out_dir) if out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    status = 0
    checks = cfg.equivalence_checks
    if "conservation" in checks:
        status |= _emit(verify.conservation_suite(
            params, cfg.regime, grid, displacement_profile(cfg),
            cfg.integrator), out, quiet)
    if "appendix_a" in checks:
        status |= _emit(verify.appendix_a_suite(params, grid, cfg.integrator),
                        out, quiet)
    if "boussinesq" in checks:
        status |= _emit(verify.boussinesq_suite(params, grid, cfg.integrator),
                        out, quiet)
    if "dirac" in checks:
        status |= _emit(verify.dirac_identity_suite(params,
                                                    cfg.regime.epsilon, rng),
                        out, quiet)
    if "restricted" in checks:
        status |= _emit(verify.restricted_identity_suite(params, cfg.regime,
                                                         grid, rng),
                        out, quiet)
    if "propagation" in checks:
        status |= _emit(verify.propagation_suite(
            params, grid, displacement_profile(cfg), cfg.integrator),
            out, quiet)
    if "roundtrips" in checks:
        status |= _emit(verify.roundtrip_suite(grid, rng), out, quiet)
    return status


def cmd_limit_study(cfg, out_dir=None, quiet=False, seed=0):
    """Air-water and deep-water limit sweeps; emits (k, relative gap) CSVs."""
    grid = cfg.grid
    eps = (cfg.regime.epsilon
           if cfg.vertical_scale is VerticalScale.LOWER_LAYER else 0.1)
    out = Path(out_dir) if out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    status = 0
    air = verify.air_water_sweep(cfg.params, grid,
                                 np.random.default_rng(seed), epsilon=eps)
    deep = verify.deep_water_sweep(cfg.params, grid,
                                   np.random.default_rng(seed))
    for result in (air, deep):
        _say(quiet, f"{'PASS' if result.ok else 'FAIL'} {result.name}: "
                    f"{result.detail}")
        if out:
            for name, pairs in result.series.items():
                write_pairs_csv(out / f"{name}.csv", "k,relative_gap", pairs)
        status |= 0 if result.ok else 1
    return status


# ------------------------------------------------------------------ entry point

def _load_config(path):
    try:
        return parse_config(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="stratwave",
        description="Simulation and verification of Hamiltonian long-wave "
                    "models for stratified fluids.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "check-gradients", "check-equivalence", "limit-study"):
        s = sub.add_parser(name)
        s.add_argument("--config", required=True, help="config file path")
        s.add_argument("--out", default="out", help="output directory")
        s.add_argument("--seed", type=int, default=20240817,
                       help="seed for random-state test suites")
        s.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "run":
            return cmd_run(cfg, args.out, args.quiet)
        if args.command == "check-gradients":
            return cmd_check_gradients(cfg, args.seed, args.quiet)
        if args.command == "check-equivalence":
            return cmd_check_equivalence(cfg, args.seed, args.out, args.quiet)
        return cmd_limit_study(cfg, args.out, args.quiet, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
