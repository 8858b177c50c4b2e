"""Euler-Maruyama simulation of the jump-diffusion models and Monte Carlo
density estimation.

One low-level stepping kernel drives everything: single paths run it with a
length-1 state vector, ensembles run it over blocks of paths, so a path
inside an ensemble is bit-identical to the same path simulated alone.
Every path owns a Philox stream keyed (seed, stream_id = path index); the
ensemble result is therefore independent of block size and execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptySupportError, NumericalError, ParameterDomainError
from .fpe import DensityField, Grid
from .models import ModelCoefficients
from .stable import RngStream, stable_increment

__all__ = [
    "OVERFLOW_LIMIT",
    "PathConfig",
    "SamplePath",
    "Ensemble",
    "simulate_path",
    "simulate_ensemble",
    "simulate_qsd_ensemble",
    "empirical_density",
    "histogram_density",
]

# States beyond this magnitude abort with a diagnosable overflow error
# instead of silently propagating inf through heavy-tailed jumps.
OVERFLOW_LIMIT = 1e12

# Increment matrices per block are capped at this many bytes.
_BLOCK_BYTE_BUDGET = 2**29

# Fleming-Viot resampling operates on fixed-size blocks so results are a
# deterministic function of (seed, n_paths, config) alone.
_QSD_BLOCK_PATHS = 512


@dataclass(frozen=True)
class PathConfig:
    """Time stepping for one trajectory: horizon, step, start state.

    Only the explicit Euler-Maruyama scheme with an absorbing boundary at
    zero is in scope; the fields exist so configs record them explicitly.
    """

    t_end: float
    dt: float = 1e-3
    x0: float = 0.5
    scheme: str = "euler-maruyama"
    boundary_policy: str = "absorb-at-zero"

    def __post_init__(self):
        if self.dt <= 0.0 or self.t_end <= self.dt:
            raise ParameterDomainError("need 0 < dt < t_end")
        if self.x0 <= 0.0:
            raise ParameterDomainError("initial state must be positive")
        if self.scheme != "euler-maruyama":
            raise ParameterDomainError(f"unsupported scheme: {self.scheme}")
        if self.boundary_policy != "absorb-at-zero":
            raise ParameterDomainError(f"unsupported boundary policy: {self.boundary_policy}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass
class SamplePath:
    times: np.ndarray
    states: np.ndarray
    extinct_at: float | None = None


@dataclass
class Ensemble:
    """Terminal-state collection of a Monte Carlo run.

    extinct_at is NaN for surviving paths; max_states tracks the running
    maximum of each path so density estimates can exclude paths that ever
    left a grid domain (matching the absorbing exterior of the PDE solver).
    kind is "independent" or "fleming-viot" (resampled at domain exits).
    """

    coeffs: ModelCoefficients
    config: PathConfig
    alpha: float
    terminal_states: np.ndarray
    extinct_at: np.ndarray
    max_states: np.ndarray
    kind: str = "independent"
    resample_events: int = 0

    @property
    def n_paths(self) -> int:
        return len(self.terminal_states)

    @property
    def extinction_count(self) -> int:
        return int(np.sum(~np.isnan(self.extinct_at)))


def _draw_increments(
    coeffs: ModelCoefficients,
    alpha: float,
    cfg: PathConfig,
    streams: list[RngStream],
):
    """Pre-draw the per-path noise increments, Gaussian before stable.

    Shapes are (n_steps, block) so the step loop reads contiguous rows.
    """
    n_steps, block = cfg.n_steps, len(streams)
    gauss = np.empty((n_steps, block)) if coeffs.has_diffusion else None
    jumps = np.empty((n_steps, block)) if coeffs.has_jumps else None
    for i, stream in enumerate(streams):
        if gauss is not None:
            gauss[:, i] = stream.generator.standard_normal(n_steps)
        if jumps is not None:
            jumps[:, i] = stable_increment(alpha, cfg.dt, stream, size=n_steps)
    return gauss, jumps


def _run_block(
    coeffs: ModelCoefficients,
    alpha: float,
    cfg: PathConfig,
    streams: list[RngStream],
    path_offset: int = 0,
    record: bool = False,
    resample_bound: float | None = None,
    resample_rng: RngStream | None = None,
):
    """Step one block of paths through the full horizon.

    Returns (states, extinct_at, max_states, trajectory, resample_events);
    trajectory is the state history of path 0 when record=True.
    With resample_bound set, paths hitting x <= 0 or x >= bound are restarted
    from the state of a uniformly chosen surviving path (Fleming-Viot).
    """
    n_steps, dt = cfg.n_steps, cfg.dt
    block = len(streams)
    sqrt_dt = math.sqrt(dt)
    gauss, jumps = _draw_increments(coeffs, alpha, cfg, streams)

    x = np.full(block, cfg.x0, dtype=float)
    alive = np.ones(block, dtype=bool)
    extinct_at = np.full(block, np.nan)
    max_states = x.copy()
    trajectory = np.empty(n_steps + 1) if record else None
    if record:
        trajectory[0] = x[0]
    resample_events = 0

    for step in range(n_steps):
        dxs = coeffs.f1(x) * dt
        if gauss is not None:
            dxs = dxs + coeffs.f2(x) * (sqrt_dt * gauss[step])
        if jumps is not None:
            dxs = dxs + coeffs.f3(x) * jumps[step]
        x_new = np.where(alive, x + dxs, 0.0)

        if resample_bound is None:
            newly_dead = alive & (x_new <= 0.0)
            if newly_dead.any():
                x_new[newly_dead] = 0.0
                extinct_at[newly_dead] = (step + 1) * dt
                alive &= ~newly_dead
            live_vals = x_new[alive]
            if live_vals.size and (
                not np.all(np.isfinite(live_vals)) or np.abs(live_vals).max() > OVERFLOW_LIMIT
            ):
                bad = alive & (~np.isfinite(x_new) | (np.abs(x_new) > OVERFLOW_LIMIT))
                first = int(np.argmax(bad))
                raise NumericalError(
                    f"state overflow at step {step + 1} on path {path_offset + first}",
                    step=step + 1,
                    path=path_offset + first,
                )
        else:
            # Fleming-Viot: restart exited paths from a surviving one.
            exited = (x_new <= 0.0) | (x_new >= resample_bound) | ~np.isfinite(x_new)
            if exited.any():
                survivors = np.flatnonzero(~exited)
                if survivors.size == 0:
                    raise NumericalError(
                        f"every path left the domain at step {step + 1}", step=step + 1
                    )
                n_dead = int(exited.sum())
                donors = survivors[
                    resample_rng.generator.integers(0, survivors.size, size=n_dead)
                ]
                x_new[exited] = x_new[donors]
                resample_events += n_dead

        np.maximum(max_states, x_new, out=max_states)
        x = x_new
        if record:
            trajectory[step + 1] = x[0]

    return x, extinct_at, max_states, trajectory, resample_events


def simulate_path(
    coeffs: ModelCoefficients, alpha: float, cfg: PathConfig, rng: RngStream
) -> SamplePath:
    """One trajectory of dX = f1 dt + f2 dB + f3 dL, absorbed at zero."""
    states, extinct_at, _, trajectory, _ = _run_block(
        coeffs, alpha, cfg, [rng], record=True
    )
    times = np.arange(cfg.n_steps + 1) * cfg.dt
    ext = float(extinct_at[0]) if not np.isnan(extinct_at[0]) else None
    return SamplePath(times=times, states=trajectory, extinct_at=ext)


def _block_size(coeffs: ModelCoefficients, cfg: PathConfig, n_paths: int) -> int:
    matrices = int(coeffs.has_diffusion) + int(coeffs.has_jumps)
    if matrices == 0:
        return min(n_paths, 4096)
    fit = _BLOCK_BYTE_BUDGET // (8 * cfg.n_steps * matrices)
    return max(1, min(n_paths, 4096, int(fit)))


def simulate_ensemble(
    coeffs: ModelCoefficients,
    alpha: float,
    cfg: PathConfig,
    n_paths: int,
    base_rng: RngStream,
    block_size: int | None = None,
) -> Ensemble:
    """n_paths independent trajectories; path i uses base_rng.spawn(i).

    The result is a pure function of (seed, stream_id, config): block_size
    only controls memory use, never the output.
    """
    if n_paths < 1:
        raise ParameterDomainError("need at least one path")
    block = block_size or _block_size(coeffs, cfg, n_paths)
    terminal = np.empty(n_paths)
    extinct = np.empty(n_paths)
    max_states = np.empty(n_paths)
    for start in range(0, n_paths, block):
        stop = min(start + block, n_paths)
        streams = [base_rng.spawn(i) for i in range(start, stop)]
        x, ext, mx, _, _ = _run_block(coeffs, alpha, cfg, streams, path_offset=start)
        terminal[start:stop] = x
        extinct[start:stop] = ext
        max_states[start:stop] = mx
    return Ensemble(coeffs, cfg, alpha, terminal, extinct, max_states)


def simulate_qsd_ensemble(
    coeffs: ModelCoefficients,
    alpha: float,
    cfg: PathConfig,
    n_paths: int,
    base_rng: RngStream,
    domain_max: float,
) -> Ensemble:
    """Monte Carlo estimate of the density conditioned on staying inside
    (0, domain_max): paths exiting the domain restart from a surviving path
    (Fleming-Viot resampling), so the terminal ensemble approximates the
    quasi-stationary density that the absorbing-exterior PDE solve
    renormalizes to. Deterministic given (seed, n_paths, config): resampling
    runs over fixed 512-path blocks with a dedicated donor-choice stream.
    """
    if n_paths < 1:
        raise ParameterDomainError("need at least one path")
    if domain_max <= 0.0:
        raise ParameterDomainError("domain_max must be positive")
    terminal = np.empty(n_paths)
    max_states = np.empty(n_paths)
    events = 0
    block_idx = 0
    for start in range(0, n_paths, _QSD_BLOCK_PATHS):
        stop = min(start + _QSD_BLOCK_PATHS, n_paths)
        streams = [base_rng.spawn(i) for i in range(start, stop)]
        donor_rng = base_rng.spawn(n_paths + block_idx)
        x, _, mx, _, ev = _run_block(
            coeffs,
            alpha,
            cfg,
            streams,
            path_offset=start,
            resample_bound=domain_max,
            resample_rng=donor_rng,
        )
        terminal[start:stop] = x
        max_states[start:stop] = mx
        events += ev
        block_idx += 1
    return Ensemble(
        coeffs,
        cfg,
        alpha,
        terminal,
        np.full(n_paths, np.nan),
        max_states,
        kind="fleming-viot",
        resample_events=events,
    )


def histogram_density(samples: np.ndarray, grid: Grid) -> DensityField:
    """Histogram over the grid cells, renormalized to unit trapezoid integral."""
    samples = np.asarray(samples, dtype=float)
    counts, _ = np.histogram(samples, bins=grid.edges)
    if counts.sum() == 0:
        raise EmptySupportError("no sample falls inside the grid")
    values = counts / (counts.sum() * grid.dx)
    return DensityField(grid, values, 0.0).normalized()


def empirical_density(ens: Ensemble, grid: Grid, survivors_only: bool = True) -> DensityField:
    """Terminal-state histogram of an ensemble as a DensityField.

    survivors_only keeps paths that were never absorbed and never exceeded
    grid.x_max, mirroring the zero-exterior boundary of the PDE solver;
    otherwise every terminal state inside the grid contributes.
    """
    if survivors_only:
        keep = np.isnan(ens.extinct_at) & (ens.max_states <= grid.x_max)
        if not keep.any():
            raise EmptySupportError(
                "no surviving path inside the grid; use survivors_only=False "
                "or a quasi-stationary (resampled) ensemble"
            )
        samples = ens.terminal_states[keep]
    else:
        samples = ens.terminal_states
    return histogram_density(samples, grid)
