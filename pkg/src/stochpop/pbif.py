"""Stationary-density shape classification and parameter sweeps for
locating stochastic P-bifurcations (unimodal-to-flat transitions, peak
growth or decay) from solver output.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.signal import find_peaks

from .errors import EmptySupportError, InsufficientDataError, ParameterDomainError
from .fpe import DensityField, EvolveResult, Grid, SolverConfig, evolve_fpe
from .models import GrowthParams, LogisticParams, ModelParams, make_coefficients

__all__ = [
    "PROMINENCE_THRESHOLD",
    "FLAT_PLATEAU_LEVEL",
    "FLAT_PLATEAU_FRACTION",
    "Mode",
    "ShapeClassification",
    "SweepRecord",
    "TransitionReport",
    "find_modes",
    "sweep_parameter",
    "locate_transition",
    "SWEEPABLE_PARAMETERS",
]

# Classifier defaults: a mode must rise at least 5% of the global maximum
# above its surroundings; a density counts as flat when no mode does, or
# when the cells within 10% of the maximum cover more than a quarter of
# the support. Thresholds are relative, so classification is invariant
# under positive rescaling of the density.
PROMINENCE_THRESHOLD = 0.05
FLAT_PLATEAU_LEVEL = 0.90
FLAT_PLATEAU_FRACTION = 0.25

SWEEPABLE_PARAMETERS = ("mu", "alpha", "epsilon", "s", "beta_sens")


@dataclass(frozen=True)
class Mode:
    location: float
    height: float
    prominence: float


@dataclass(frozen=True)
class ShapeClassification:
    modes: tuple
    class_label: str  # "peaked-unimodal" | "flat" | "multimodal"
    peak_height: float
    mode_location: float | None


@dataclass
class SweepRecord:
    parameter_name: str
    parameter_value: float
    classification: ShapeClassification | None
    field: DensityField | None
    result: EvolveResult | None
    density_ref: str | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class TransitionReport:
    lower_value: float
    upper_value: float
    lower_label: str
    upper_label: str


def find_modes(
    P: DensityField, prominence_threshold: float = PROMINENCE_THRESHOLD
) -> ShapeClassification:
    """Locate interior density modes by topographic prominence and classify
    the overall shape. Equal-height modes are all reported; mode_location
    is the smallest location among the highest modes (deterministic ties).
    """
    values = np.asarray(P.values, dtype=float)
    peak = float(values.max(initial=0.0))
    if peak <= 0.0:
        raise EmptySupportError("cannot classify an all-zero density")
    x = P.grid.nodes
    indices, props = find_peaks(values, prominence=prominence_threshold * peak)
    modes = tuple(
        Mode(float(x[i]), float(values[i]), float(pr))
        for i, pr in zip(indices, props["prominences"])
    )

    plateau_cells = int(np.sum(values >= FLAT_PLATEAU_LEVEL * peak))
    plateau_span = plateau_cells * P.grid.dx
    support = P.grid.x_max - P.grid.x_min
    if len(modes) == 0 or plateau_span > FLAT_PLATEAU_FRACTION * support:
        label = "flat"
    elif len(modes) >= 2:
        label = "multimodal"
    else:
        label = "peaked-unimodal"

    if modes:
        top = max(m.height for m in modes)
        location = min(m.location for m in modes if m.height == top)
    else:
        location = None
    return ShapeClassification(modes, label, peak, location)


def _apply_parameter(model: ModelParams, name: str, value: float) -> ModelParams:
    if name == "mu":
        if not isinstance(model, GrowthParams):
            raise ParameterDomainError("mu sweeps apply to the growth model only")
        return dataclasses.replace(model, q=value * model.p)
    if name == "beta_sens":
        if not isinstance(model, LogisticParams):
            raise ParameterDomainError("beta_sens sweeps apply to the logistic model only")
        return dataclasses.replace(model, beta_sens=value)
    if name in ("epsilon", "s"):
        return dataclasses.replace(model, **{name: value})
    raise ParameterDomainError(
        f"unknown sweep parameter {name!r}; choose from {SWEEPABLE_PARAMETERS}"
    )


def sweep_parameter(
    model_template: ModelParams,
    parameter_name: str,
    values: Sequence[float],
    alpha: float,
    solver: SolverConfig,
    grid: Grid | None = None,
    n_cells: int = 256,
) -> list[SweepRecord]:
    """One stationary solve plus shape classification per parameter value.

    parameter_name "alpha" varies the stability index; the others modify
    the model record ("mu" moves q with p fixed). With grid=None each point
    gets a fresh grid [0, domain_hint] (the hint can move with the swept
    parameter). A failed solve marks its record and the sweep continues.
    """
    if parameter_name not in SWEEPABLE_PARAMETERS:
        raise ParameterDomainError(
            f"unknown sweep parameter {parameter_name!r}; choose from {SWEEPABLE_PARAMETERS}"
        )
    records: list[SweepRecord] = []
    for value in values:
        try:
            model = model_template if parameter_name == "alpha" else _apply_parameter(
                model_template, parameter_name, value
            )
            point_alpha = value if parameter_name == "alpha" else alpha
            coeffs = make_coefficients(model)
            point_grid = grid or Grid(0.0, coeffs.domain_hint, n_cells)
            result = evolve_fpe(coeffs, point_alpha, point_grid, solver)
            records.append(
                SweepRecord(
                    parameter_name,
                    float(value),
                    find_modes(result.field),
                    result.field,
                    result,
                )
            )
        except Exception as exc:  # per-point isolation: record and continue
            records.append(
                SweepRecord(parameter_name, float(value), None, None, None, error=str(exc))
            )
    return records


def locate_transition(records: Sequence[SweepRecord]) -> TransitionReport | None:
    """First adjacent pair of successfully classified sweep points whose
    class labels differ; None when every label agrees."""
    good = [r for r in records if r.ok and r.classification is not None]
    if len(good) < 2:
        raise InsufficientDataError(
            f"need at least 2 successful records, got {len(good)}"
        )
    for left, right in zip(good[:-1], good[1:]):
        if left.classification.class_label != right.classification.class_label:
            return TransitionReport(
                left.parameter_value,
                right.parameter_value,
                left.classification.class_label,
                right.classification.class_label,
            )
    return None
