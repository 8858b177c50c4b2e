"""The two population model families as drift/diffusion/jump coefficient triples.

Growth model:    dX = X(-p + q e^{-sX}) dt + sigma X dB + epsilon X dL
Logistic model:  dX = s X (1 - X/M(X)) dt + sigma X dB + epsilon X dL
with M(X) a sigmoid carrying capacity between k1 and k2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ParameterDomainError

__all__ = [
    "GrowthParams",
    "LogisticParams",
    "ModelCoefficients",
    "growth_drift",
    "carrying_capacity",
    "logistic_drift",
    "make_coefficients",
]


def _check_noise(sigma: float, epsilon: float) -> None:
    # epsilon = 1 is admitted: the logistic experiments run at exactly 1.
    if not 0.0 <= sigma < 1.0:
        raise ParameterDomainError(f"sigma must lie in [0, 1), got {sigma}")
    if not 0.0 <= epsilon <= 1.0:
        raise ParameterDomainError(f"epsilon must lie in [0, 1], got {epsilon}")


@dataclass(frozen=True)
class GrowthParams:
    """Growth model parameters: death rate p, small-population birth rate q,
    per-capita mortality scale s, noise intensities sigma (Gaussian) and
    epsilon (stable)."""

    p: float
    q: float
    s: float
    sigma: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        for name in ("p", "q", "s", "sigma", "epsilon"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.p <= 0 or self.q <= 0 or self.s <= 0:
            raise ParameterDomainError("p, q, s must all be positive")
        _check_noise(self.sigma, self.epsilon)

    @property
    def mu(self) -> float:
        """Birth/death ratio q/p; the growth model's bifurcation parameter."""
        return self.q / self.p

    @property
    def x2(self) -> float:
        """Nontrivial equilibrium ln(mu)/s (negative when mu < 1)."""
        return math.log(self.mu) / self.s


@dataclass(frozen=True)
class LogisticParams:
    """Logistic model parameters: growth rate s, capacity bounds k1 < k2,
    capacity sensitivity beta_sens, noise intensities sigma and epsilon."""

    s: float
    k1: float
    k2: float
    beta_sens: float
    sigma: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        for name in ("s", "k1", "k2", "beta_sens", "sigma", "epsilon"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.s <= 0:
            raise ParameterDomainError("s must be positive")
        if not 0 < self.k1 < self.k2:
            raise ParameterDomainError("capacity bounds must satisfy 0 < k1 < k2")
        if self.beta_sens < 0:
            raise ParameterDomainError("beta_sens must be >= 0")
        _check_noise(self.sigma, self.epsilon)

    @property
    def phi(self) -> float:
        """Capacity midpoint (k1 + k2)/2; the nontrivial equilibrium."""
        return 0.5 * (self.k1 + self.k2)

    @property
    def beta_c(self) -> float:
        """Critical capacity sensitivity 4/(k2 - k1)."""
        return 4.0 / (self.k2 - self.k1)


@dataclass(frozen=True)
class ModelCoefficients:
    """Coefficient bundle (f1, f2, f3) for dX = f1 dt + f2 dB + f3 dL.

    f2(x) = sigma*x and f3(x) = epsilon*x for the two model families
    (multiplicative noise). domain_hint is a recommended grid upper bound
    containing the visible density mass; has_diffusion / has_jumps record
    whether f2 / f3 are identically zero so simulators can skip dead draws.
    """

    f1: Callable[[np.ndarray], np.ndarray]
    f2: Callable[[np.ndarray], np.ndarray]
    f3: Callable[[np.ndarray], np.ndarray]
    domain_hint: float
    has_diffusion: bool = True
    has_jumps: bool = True


ModelParams = Union[GrowthParams, LogisticParams]


def growth_drift(x, gp: GrowthParams):
    """Drift X(-p + q e^{-sX}); zero at x = 0 and at x = ln(q/p)/s."""
    x = np.asarray(x, dtype=float)
    out = x * (-gp.p + gp.q * np.exp(-gp.s * x))
    return float(out) if out.ndim == 0 else out


def carrying_capacity(x, lp: LogisticParams):
    """Sigmoid capacity k1 + (k2-k1)/(1 + e^{-beta (x - phi)}), strictly in (k1, k2)."""
    x = np.asarray(x, dtype=float)
    out = lp.k1 + (lp.k2 - lp.k1) / (1.0 + np.exp(-lp.beta_sens * (x - lp.phi)))
    return float(out) if out.ndim == 0 else out


def logistic_drift(x, lp: LogisticParams):
    """Drift s X (1 - X/M(X)); zero at x = 0 and x = phi since M(phi) = phi."""
    x = np.asarray(x, dtype=float)
    out = lp.s * x * (1.0 - x / carrying_capacity(x, lp))
    return float(out) if out.ndim == 0 else out


def make_coefficients(model: ModelParams) -> ModelCoefficients:
    """Bundle a parameter record into (f1, sigma*x, epsilon*x) coefficients.

    domain_hint: 5*X2 for the growth model (5/s when mu <= 1, where X2 is
    not an admissible state), 2*k2 for the logistic model.
    """
    sigma, epsilon = model.sigma, model.epsilon
    if isinstance(model, GrowthParams):
        if model.mu <= 1.0:
            warnings.warn(
                f"mu = q/p = {model.mu:g} <= 1: no positive equilibrium, "
                "runs are extinction-dominated",
                stacklevel=2,
            )
        drift = lambda x, gp=model: growth_drift(x, gp)
        hint = 5.0 * model.x2 if model.mu > 1.0 else 5.0 / model.s
    elif isinstance(model, LogisticParams):
        drift = lambda x, lp=model: logistic_drift(x, lp)
        hint = 2.0 * model.k2
    else:
        raise ParameterDomainError(f"unknown model parameter record: {type(model)!r}")
    return ModelCoefficients(
        f1=drift,
        f2=lambda x: sigma * np.asarray(x, dtype=float),
        f3=lambda x: epsilon * np.asarray(x, dtype=float),
        domain_hint=hint,
        has_diffusion=sigma > 0.0,
        has_jumps=epsilon > 0.0,
    )
