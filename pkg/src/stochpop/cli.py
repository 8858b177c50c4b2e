"""Command-line entry point: seeded, config-driven runs writing CSV
artifacts plus a manifest that reproduces them byte for byte.

Subcommands: simulate-path, simulate-ensemble, solve-fpe,
stationary-gaussian, equilibria, diagram, potential, sweep,
reproduce-figure. Configuration is YAML with sections (model, noise, grid,
solver, path, ensemble, sweep, diagram, potential, output); every key can
be overridden on the command line with --set section.key=value or a
same-named --section.key flag. Exit codes: 0 success, 2 configuration
error, 3 numerical failure, 4 precondition violation.
"""

from __future__ import annotations

import argparse
import copy
import os
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .analysis import (
    growth_equilibria,
    growth_potential,
    linearized_solution,
    logistic_equilibria,
    logistic_potential,
    transcritical_diagram,
)
from .csvio import format_value, read_manifest, write_csv, write_manifest
from .errors import (
    ConfigError,
    NumericalError,
    ParameterDomainError,
    StochpopError,
)
from .fpe import Grid, SolverConfig, evolve_fpe, stationary_gaussian_closed_form
from .models import (
    GrowthParams,
    LogisticParams,
    growth_drift,
    logistic_drift,
    make_coefficients,
)
from .pbif import find_modes, locate_transition, sweep_parameter
from .sde import (
    PathConfig,
    empirical_density,
    simulate_ensemble,
    simulate_path,
    simulate_qsd_ensemble,
)
from .stable import RngStream

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PRECONDITION = 4

OUTDIR_ENV = "STOCHPOP_OUTDIR"

SUBCOMMANDS = (
    "simulate-path",
    "simulate-ensemble",
    "solve-fpe",
    "stationary-gaussian",
    "equilibria",
    "diagram",
    "potential",
    "sweep",
    "reproduce-figure",
)

DEFAULT_CONFIG = {
    "seed": 12345,
    "model": {
        "kind": "growth",
        "p": 1.0,
        "q": 2.0,
        "s": 1.0,
        "sigma": 0.0,
        "epsilon": 0.0,
        "k1": 0.8,
        "k2": 1.2,
        "beta_sens": 8.0,
    },
    "noise": {"alpha": 1.5},
    "grid": {"x_min": 0.0, "x_max": None, "n_cells": 256},
    "solver": {
        "dt": None,
        "t_end": 50.0,
        "stationarity_tol": 1e-6,
        "init_center": 0.5,
        "init_width": None,
        "jump_truncation": None,
        "snapshot_interval": None,
    },
    "path": {"dt": 1e-3, "t_end": 50.0, "x0": 0.5},
    "ensemble": {"n_paths": 10000, "estimator": "independent"},
    "sweep": {"parameter": "epsilon", "values": [0.1, 0.5, 1.0]},
    "diagram": {"mu_min": 0.25, "mu_max": 2.0, "n": 121},
    "potential": {"x_max": None, "n_points": 400},
    "output": {"directory": None},
}


# ---------------------------------------------------------------------------
# configuration plumbing


def _deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _set_by_path(config: dict, dotted: str, raw_value: str) -> None:
    value = yaml.safe_load(raw_value)
    node = config
    parts = dotted.split(".")
    for part in parts[:-1]:
        if part not in node or not isinstance(node[part], dict):
            node[part] = {}
        node = node[part]
    node[parts[-1]] = value


def load_config(config_path: str | None, overrides: list[str]) -> dict:
    """Resolve defaults <- config file (or manifest) <- --set overrides."""
    config = copy.deepcopy(DEFAULT_CONFIG)
    if config_path:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        if path.suffix == ".json":
            config = _deep_merge(config, read_manifest(path)["config"])
        else:
            try:
                loaded = yaml.safe_load(path.read_text())
            except yaml.YAMLError as exc:
                raise ConfigError(f"cannot parse {path}: {exc}") from exc
            if loaded is None:
                loaded = {}
            if not isinstance(loaded, dict):
                raise ConfigError(f"{path} must hold a mapping of sections")
            config = _deep_merge(config, loaded)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        dotted, _, raw = item.partition("=")
        _set_by_path(config, dotted.strip(), raw.strip())
    return config


def _collect_dynamic_overrides(extras: list[str]) -> list[str]:
    """Turn unknown --section.key[=value] flags into --set items."""
    items: list[str] = []
    i = 0
    while i < len(extras):
        arg = extras[i]
        if not arg.startswith("--"):
            raise ConfigError(f"unrecognized argument: {arg}")
        body = arg[2:]
        if "=" in body:
            items.append(body)
            i += 1
        else:
            if i + 1 >= len(extras):
                raise ConfigError(f"flag {arg} needs a value")
            items.append(f"{body}={extras[i + 1]}")
            i += 2
    return items


def _model_from_config(config: dict):
    section = config["model"]
    kind = section.get("kind")
    if kind == "growth":
        return GrowthParams(
            p=float(section["p"]),
            q=float(section["q"]),
            s=float(section["s"]),
            sigma=float(section["sigma"]),
            epsilon=float(section["epsilon"]),
        )
    if kind == "logistic":
        return LogisticParams(
            s=float(section["s"]),
            k1=float(section["k1"]),
            k2=float(section["k2"]),
            beta_sens=float(section["beta_sens"]),
            sigma=float(section["sigma"]),
            epsilon=float(section["epsilon"]),
        )
    raise ConfigError(f"model.kind must be 'growth' or 'logistic', got {kind!r}")


def _model_meta(config: dict) -> dict:
    section = config["model"]
    keys = (
        ("kind", "p", "q", "s", "sigma", "epsilon")
        if section.get("kind") == "growth"
        else ("kind", "s", "k1", "k2", "beta_sens", "sigma", "epsilon")
    )
    return {k: section[k] for k in keys}


def _grid_from_config(config: dict, coeffs) -> Grid:
    section = config["grid"]
    x_max = section.get("x_max")
    if not x_max:
        x_max = coeffs.domain_hint
    return Grid(float(section.get("x_min") or 0.0), float(x_max), int(section["n_cells"]))


def _solver_from_config(config: dict) -> SolverConfig:
    s = config["solver"]
    kwargs = dict(
        dt=s.get("dt"),
        t_end=float(s["t_end"]),
        stationarity_tol=float(s["stationarity_tol"]),
        init_center=float(s["init_center"]),
        jump_truncation=s.get("jump_truncation"),
        snapshot_interval=s.get("snapshot_interval"),
    )
    if s.get("init_width") is not None:
        kwargs["init_width"] = float(s["init_width"])
    if kwargs["dt"] is not None:
        kwargs["dt"] = float(kwargs["dt"])
    if kwargs["jump_truncation"] is not None:
        kwargs["jump_truncation"] = float(kwargs["jump_truncation"])
    if kwargs["snapshot_interval"] is not None:
        kwargs["snapshot_interval"] = float(kwargs["snapshot_interval"])
    return SolverConfig(**kwargs)


def _path_config(config: dict) -> PathConfig:
    p = config["path"]
    return PathConfig(t_end=float(p["t_end"]), dt=float(p["dt"]), x0=float(p["x0"]))


def _out_dir(config: dict) -> Path:
    directory = config["output"].get("directory")
    if not directory:
        directory = os.environ.get(OUTDIR_ENV, "out")
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommand implementations (each returns the list of files written)


def _density_rows(field):
    return zip(field.grid.nodes.tolist(), field.values.tolist())


def _write_density(path: Path, field, config: dict, label: str, extra: dict):
    meta = {
        "kind": "density",
        "label": label,
        "model": _model_meta(config),
        "alpha": config["noise"]["alpha"],
        "grid": {
            "x_min": field.grid.x_min,
            "x_max": field.grid.x_max,
            "n_cells": field.grid.n_cells,
        },
        **extra,
    }
    return write_csv(path, meta, ["x", "P"], _density_rows(field))


def cmd_simulate_path(config: dict, out: Path) -> list[Path]:
    model = _model_from_config(config)
    coeffs = make_coefficients(model)
    cfg = _path_config(config)
    path_obj = simulate_path(
        coeffs, float(config["noise"]["alpha"]), cfg, RngStream(int(config["seed"]))
    )
    meta = {
        "kind": "path",
        "label": f"x0={format_value(cfg.x0)}",
        "model": _model_meta(config),
        "alpha": config["noise"]["alpha"],
        "seed": config["seed"],
        "dt": cfg.dt,
        "t_end": cfg.t_end,
        "extinct_at": path_obj.extinct_at,
    }
    rows = zip(path_obj.times.tolist(), path_obj.states.tolist())
    return [write_csv(out / "path.csv", meta, ["time", "state"], rows)]


def cmd_simulate_ensemble(config: dict, out: Path) -> list[Path]:
    model = _model_from_config(config)
    coeffs = make_coefficients(model)
    cfg = _path_config(config)
    alpha = float(config["noise"]["alpha"])
    n_paths = int(config["ensemble"]["n_paths"])
    estimator = config["ensemble"].get("estimator", "independent")
    rng = RngStream(int(config["seed"]))
    if estimator == "independent":
        ens = simulate_ensemble(coeffs, alpha, cfg, n_paths, rng)
    elif estimator == "fleming-viot":
        ens = simulate_qsd_ensemble(
            coeffs, alpha, cfg, n_paths, rng, domain_max=coeffs.domain_hint
        )
    else:
        raise ConfigError(f"unknown ensemble.estimator: {estimator!r}")
    meta = {
        "kind": "ensemble",
        "label": f"n_paths={n_paths}",
        "model": _model_meta(config),
        "alpha": alpha,
        "seed": config["seed"],
        "dt": cfg.dt,
        "t_end": cfg.t_end,
        "x0": cfg.x0,
        "estimator": estimator,
        "extinction_count": ens.extinction_count,
        "resample_events": ens.resample_events,
    }
    rows = (
        (i, ens.terminal_states[i], ens.extinct_at[i] if not np.isnan(ens.extinct_at[i]) else None, ens.max_states[i])
        for i in range(ens.n_paths)
    )
    files = [
        write_csv(
            out / "ensemble.csv",
            meta,
            ["path_id", "terminal_state", "extinct_at", "max_state"],
            rows,
        )
    ]
    # companion histogram on the default grid for quick inspection
    grid = _grid_from_config(config, coeffs)
    try:
        hist = empirical_density(ens, grid, survivors_only=estimator == "independent")
    except StochpopError:
        return files
    files.append(
        _write_density(
            out / "ensemble_density.csv",
            hist,
            config,
            f"mc n_paths={n_paths}",
            {"estimator": estimator},
        )
    )
    return files


def cmd_solve_fpe(config: dict, out: Path) -> list[Path]:
    model = _model_from_config(config)
    coeffs = make_coefficients(model)
    alpha = float(config["noise"]["alpha"])
    grid = _grid_from_config(config, coeffs)
    solver = _solver_from_config(config)
    result = evolve_fpe(coeffs, alpha, grid, solver)
    cls = find_modes(result.field)
    extra = {
        "retained_mass": result.retained_mass,
        "n_steps": result.n_steps,
        "dt": result.dt,
        "converged": result.converged,
        "residual": result.residual,
        "max_step_clipped_mass": result.max_step_clipped_mass,
        "t_end": solver.t_end,
        "stationarity_tol": solver.stationarity_tol,
        "init_center": solver.init_center,
        "init_width": solver.init_width,
        "class_label": cls.class_label,
        "peak_height": cls.peak_height,
    }
    files = [
        _write_density(out / "density.csv", result.field, config, f"t={result.field.time:g}", extra)
    ]
    for snap in result.snapshots:
        files.append(
            _write_density(
                out / f"density_t{format_value(float(snap.time))}.csv",
                snap.normalized(),
                config,
                f"t={snap.time:g}",
                {"raw_mass": snap.integral()},
            )
        )
    return files


def cmd_stationary_gaussian(config: dict, out: Path) -> list[Path]:
    model = _model_from_config(config)
    coeffs = make_coefficients(model)
    grid = _grid_from_config(config, coeffs)
    field = stationary_gaussian_closed_form(coeffs, grid)
    return [
        _write_density(
            out / "stationary_gaussian.csv", field, config, "closed form", {}
        )
    ]


def cmd_equilibria(config: dict, out: Path) -> list[Path]:
    model = _model_from_config(config)
    eqs = (
        growth_equilibria(model)
        if isinstance(model, GrowthParams)
        else logistic_equilibria(model)
    )
    meta = {"kind": "equilibria", "model": _model_meta(config)}
    rows = [(e.location, e.derivative, e.classification) for e in eqs]
    return [
        write_csv(
            out / "equilibria.csv", meta, ["location", "derivative", "classification"], rows
        )
    ]


def cmd_diagram(config: dict, out: Path) -> list[Path]:
    model = _model_from_config(config)
    if not isinstance(model, GrowthParams):
        raise ParameterDomainError("the bifurcation diagram applies to the growth model")
    d = config["diagram"]
    diagram = transcritical_diagram(
        model, (float(d["mu_min"]), float(d["mu_max"])), int(d["n"])
    )
    meta = {
        "kind": "diagram",
        "parameter": diagram.parameter_name,
        "model": _model_meta(config),
        "branches": [b.label for b in diagram.branches],
    }
    rows = []
    for branch in diagram.branches:
        for mu, loc, cls, bio in zip(
            diagram.parameter_values, branch.locations, branch.classifications, branch.biological
        ):
            rows.append((mu, branch.label, loc, cls, bool(bio)))
    return [
        write_csv(
            out / "diagram.csv",
            meta,
            ["mu", "branch", "location", "classification", "biological"],
            rows,
        )
    ]


def cmd_potential(config: dict, out: Path) -> list[Path]:
    model = _model_from_config(config)
    coeffs = make_coefficients(model)
    section = config["potential"]
    x_max = section.get("x_max") or coeffs.domain_hint
    x = np.linspace(0.0, float(x_max), int(section["n_points"]))
    if isinstance(model, GrowthParams):
        curve = growth_potential(x, model)
        drift = growth_drift(x, model)
    else:
        curve = logistic_potential(x, model)
        drift = logistic_drift(x, model)
    meta = {"kind": "potential", "label": _potential_label(model), "model": _model_meta(config)}
    files = [
        write_csv(out / "potential.csv", meta, ["x", "U"], zip(x.tolist(), curve.values.tolist())),
        write_csv(
            out / "phaseline.csv",
            {**meta, "kind": "phaseline"},
            ["x", "drift"],
            zip(x.tolist(), drift.tolist()),
        ),
    ]
    return files


def _potential_label(model) -> str:
    if isinstance(model, GrowthParams):
        return f"mu={format_value(model.mu)}"
    return f"beta={format_value(model.beta_sens)}"


def cmd_sweep(config: dict, out: Path) -> list[Path]:
    model = _model_from_config(config)
    section = config["sweep"]
    parameter = section["parameter"]
    values = [float(v) for v in section["values"]]
    solver = _solver_from_config(config)
    records = sweep_parameter(
        model,
        parameter,
        values,
        float(config["noise"]["alpha"]),
        solver,
        n_cells=int(config["grid"]["n_cells"]),
    )
    files: list[Path] = []
    rows = []
    for record in records:
        density_file = ""
        if record.ok:
            density_file = f"density_{parameter}_{format_value(record.parameter_value)}.csv"
            files.append(
                _write_density(
                    out / density_file,
                    record.field,
                    config,
                    f"{parameter}={format_value(record.parameter_value)}",
                    {
                        "swept_parameter": parameter,
                        "swept_value": record.parameter_value,
                        "retained_mass": record.result.retained_mass,
                        "class_label": record.classification.class_label,
                    },
                )
            )
            record.density_ref = density_file
            cls = record.classification
            rows.append(
                (
                    parameter,
                    record.parameter_value,
                    cls.class_label,
                    len(cls.modes),
                    cls.mode_location,
                    cls.peak_height,
                    density_file,
                    "",
                )
            )
        else:
            rows.append(
                (parameter, record.parameter_value, "failed", 0, None, None, "", record.error)
            )
    try:
        transition = locate_transition(records)
    except StochpopError:
        transition = None
    meta = {
        "kind": "sweep",
        "parameter": parameter,
        "model": _model_meta(config),
        "alpha": config["noise"]["alpha"],
        "transition": (
            f"{transition.lower_label}->{transition.upper_label} in "
            f"({format_value(transition.lower_value)}, {format_value(transition.upper_value)})"
            if transition
            else "none"
        ),
    }
    files.insert(
        0,
        write_csv(
            out / "sweep_summary.csv",
            meta,
            [
                "parameter",
                "value",
                "class_label",
                "mode_count",
                "mode_location",
                "peak_height",
                "density_file",
                "error",
            ],
            rows,
        ),
    )
    return files


# ---------------------------------------------------------------------------
# figure recipes: the caption parameter sets baked into runnable plans

FIGURE_RECIPES: dict[str, dict] = {
    "fig3": {
        "description": "growth-model sample path under Gaussian noise",
        "model": {"kind": "growth", "p": 1.0, "q": 2.0, "s": 0.8, "sigma": 0.1, "epsilon": 0.0},
        "path": {"x0": 1.0, "t_end": 50.0, "dt": 1e-3},
    },
    "fig4a": {
        "description": "growth stationary densities vs mu",
        "family": ("mu", [1.5, 2.0, 3.0, 4.0]),
        "model": {"kind": "growth", "p": 1.0, "q": 2.0, "s": 1.0, "sigma": 0.0, "epsilon": 0.1},
        "noise": {"alpha": 1.0},
    },
    "fig4b": {
        "description": "growth stationary densities vs alpha",
        "family": ("alpha", [0.5, 1.0, 1.5]),
        "model": {"kind": "growth", "p": 1.0, "q": 2.0, "s": 1.0, "sigma": 0.0, "epsilon": 0.2},
        "noise": {"alpha": 1.0},
    },
    "fig4c": {
        "description": "growth stationary densities vs epsilon",
        "family": ("epsilon", [0.1, 0.3, 0.5, 1.0]),
        "model": {"kind": "growth", "p": 1.0, "q": 2.0, "s": 1.0, "sigma": 0.0, "epsilon": 0.1},
        "noise": {"alpha": 1.0},
    },
    "fig4d": {
        "description": "growth stationary densities vs s",
        "family": ("s", [0.5, 1.0, 1.5]),
        "model": {"kind": "growth", "p": 1.0, "q": 2.0, "s": 1.0, "sigma": 0.0, "epsilon": 0.2},
        "noise": {"alpha": 1.5},
    },
    "fig5": {
        "description": "linearized perturbation solutions for three beta regimes",
        "model": {"kind": "logistic", "s": 0.2, "k1": 0.8, "k2": 1.2, "beta_sens": 0.001,
                  "sigma": 0.0, "epsilon": 0.0},
        "betas": [0.001, 10.0, 20.0],
        "u0s": [0.5, 0.7, 0.9, 1.0],
        "t_end": 40.0,
    },
    "fig7": {
        "description": "logistic phase lines and potentials near the sensitivity threshold",
        "model": {"kind": "logistic", "s": 0.2, "k1": 0.8, "k2": 1.2, "beta_sens": 5.0,
                  "sigma": 0.0, "epsilon": 0.0},
        "betas": [5.0, 10.0, 15.0],
        "x_max": 1.8,
    },
    "fig8": {
        "description": "logistic sample path under Gaussian noise",
        "model": {"kind": "logistic", "s": 0.5, "k1": 0.8, "k2": 1.2, "beta_sens": 5.0,
                  "sigma": 0.1, "epsilon": 0.0},
        "path": {"x0": 1.0, "t_end": 50.0, "dt": 1e-3},
    },
    "fig9a": {
        "description": "logistic stationary densities vs beta",
        "family": ("beta_sens", [8.0, 10.0, 12.0, 14.0]),
        "model": {"kind": "logistic", "s": 0.1, "k1": 0.8, "k2": 1.2, "beta_sens": 8.0,
                  "sigma": 0.0, "epsilon": 1.0},
        "noise": {"alpha": 1.0},
    },
    "fig9b": {
        "description": "logistic stationary densities vs alpha",
        "family": ("alpha", [0.5, 1.0, 1.5]),
        "model": {"kind": "logistic", "s": 0.1, "k1": 0.8, "k2": 1.2, "beta_sens": 8.0,
                  "sigma": 0.0, "epsilon": 1.0},
        "noise": {"alpha": 1.0},
    },
    "fig9c": {
        "description": "logistic stationary densities vs epsilon",
        "family": ("epsilon", [0.3, 0.6, 1.0]),
        "model": {"kind": "logistic", "s": 0.1, "k1": 0.8, "k2": 1.2, "beta_sens": 8.0,
                  "sigma": 0.0, "epsilon": 1.0},
        "noise": {"alpha": 1.0},
    },
    "fig9d": {
        "description": "logistic stationary densities vs s",
        "family": ("s", [0.1, 0.3, 0.5]),
        "model": {"kind": "logistic", "s": 0.1, "k1": 0.8, "k2": 1.2, "beta_sens": 8.0,
                  "sigma": 0.0, "epsilon": 0.3},
        "noise": {"alpha": 1.0},
    },
}


def cmd_reproduce_figure(config: dict, out: Path, figure: str) -> list[Path]:
    if figure not in FIGURE_RECIPES:
        raise ConfigError(
            f"unknown figure {figure!r}; choose from {sorted(FIGURE_RECIPES)}"
        )
    recipe = FIGURE_RECIPES[figure]
    fig_config = _deep_merge(config, {k: v for k, v in recipe.items()
                                      if k in ("model", "noise", "path")})
    fig_out = out / figure
    fig_out.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []

    if "path" in recipe:
        files += cmd_simulate_path(fig_config, fig_out)
    elif "family" in recipe:
        parameter, values = recipe["family"]
        solver = _solver_from_config(fig_config)
        model = _model_from_config(fig_config)
        records = sweep_parameter(
            model,
            parameter,
            values,
            float(fig_config["noise"]["alpha"]),
            solver,
            n_cells=int(fig_config["grid"]["n_cells"]),
        )
        for record in records:
            if not record.ok:
                raise NumericalError(
                    f"{figure} solve failed at {parameter}={record.parameter_value}: {record.error}"
                )
            files.append(
                _write_density(
                    fig_out / f"density_{parameter}_{format_value(record.parameter_value)}.csv",
                    record.field,
                    fig_config,
                    f"{parameter}={format_value(record.parameter_value)}",
                    {
                        "swept_parameter": parameter,
                        "swept_value": record.parameter_value,
                        "retained_mass": record.result.retained_mass,
                        "class_label": record.classification.class_label,
                    },
                )
            )
    elif figure == "fig5":
        model0 = _model_from_config(fig_config)
        times = np.linspace(0.0, recipe["t_end"], 401)
        for beta in recipe["betas"]:
            lp = LogisticParams(
                s=model0.s, k1=model0.k1, k2=model0.k2, beta_sens=beta,
                sigma=model0.sigma, epsilon=model0.epsilon,
            )
            for u0 in recipe["u0s"]:
                u = linearized_solution(lp, u0, times)
                meta = {
                    "kind": "linearized",
                    "label": f"u0={format_value(u0)}",
                    "beta": beta,
                    "beta_c": lp.beta_c,
                    "model": {**_model_meta(fig_config), "beta_sens": beta},
                }
                files.append(
                    write_csv(
                        fig_out
                        / f"solution_beta_{format_value(beta)}_u0_{format_value(u0)}.csv",
                        meta,
                        ["t", "u"],
                        zip(times.tolist(), u.tolist()),
                    )
                )
    elif figure == "fig7":
        model0 = _model_from_config(fig_config)
        x = np.linspace(0.0, recipe["x_max"], 400)
        for beta in recipe["betas"]:
            lp = LogisticParams(
                s=model0.s, k1=model0.k1, k2=model0.k2, beta_sens=beta,
                sigma=model0.sigma, epsilon=model0.epsilon,
            )
            meta = {
                "kind": "potential",
                "label": f"beta={format_value(beta)}",
                "beta_c": lp.beta_c,
                "model": {**_model_meta(fig_config), "beta_sens": beta},
            }
            curve = logistic_potential(x, lp)
            drift = logistic_drift(x, lp)
            files.append(
                write_csv(
                    fig_out / f"potential_beta_{format_value(beta)}.csv",
                    meta,
                    ["x", "U"],
                    zip(x.tolist(), curve.values.tolist()),
                )
            )
            files.append(
                write_csv(
                    fig_out / f"phaseline_beta_{format_value(beta)}.csv",
                    {**meta, "kind": "phaseline"},
                    ["x", "drift"],
                    zip(x.tolist(), drift.tolist()),
                )
            )
    return files


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stochpop",
        description="Population SDEs under Brownian and alpha-stable noise.",
    )
    parser.add_argument("--version", action="version", version=f"stochpop {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="YAML config or a previous run manifest (.json)")
        p.add_argument("--out", help="output directory (default $STOCHPOP_OUTDIR or ./out)")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override a config value (repeatable)",
        )
        if name == "reproduce-figure":
            p.add_argument("figure", choices=sorted(FIGURE_RECIPES))
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args, extras = parser.parse_known_args(argv)
    overrides = list(args.set) + _collect_dynamic_overrides(extras)
    config = load_config(args.config, overrides)
    if args.out:
        config["output"]["directory"] = args.out
    out = _out_dir(config)

    handlers = {
        "simulate-path": cmd_simulate_path,
        "simulate-ensemble": cmd_simulate_ensemble,
        "solve-fpe": cmd_solve_fpe,
        "stationary-gaussian": cmd_stationary_gaussian,
        "equilibria": cmd_equilibria,
        "diagram": cmd_diagram,
        "potential": cmd_potential,
        "sweep": cmd_sweep,
    }
    if args.subcommand == "reproduce-figure":
        files = cmd_reproduce_figure(config, out, args.figure)
        manifest_dir = out / args.figure
        manifest_name = "manifest.json"
        subcommand = f"reproduce-figure {args.figure}"
    else:
        files = handlers[args.subcommand](config, out)
        manifest_dir = out
        manifest_name = f"{args.subcommand}-manifest.json"
        subcommand = args.subcommand
    manifest = write_manifest(manifest_dir / manifest_name, subcommand, config, files)
    for f in files + [manifest]:
        print(f)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except StochpopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
