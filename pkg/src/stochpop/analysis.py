"""Deterministic analysis: equilibria, stability, bifurcation diagrams,
normal form, potentials, and the logistic linearization near its midpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import ParameterDomainError
from .models import GrowthParams, LogisticParams, logistic_drift

__all__ = [
    "CLASSIFICATION_TOL",
    "Equilibrium",
    "BifurcationBranch",
    "BifurcationDiagram",
    "PotentialCurve",
    "Linearization",
    "classify_derivative",
    "growth_equilibria",
    "transcritical_diagram",
    "normal_form_lambda",
    "growth_potential",
    "logistic_equilibria",
    "beta_critical",
    "linearization",
    "linearized_solution",
    "logistic_potential",
]

# Separates genuine equilibrium coalescence from floating-point noise in F'.
CLASSIFICATION_TOL = 1e-9


@dataclass(frozen=True)
class Equilibrium:
    location: float
    derivative: float  # drift derivative F' at the equilibrium
    classification: str  # "stable" | "unstable" | "degenerate"
    biological: bool = True  # False for diagram-only branches outside x >= 0


def classify_derivative(derivative: float, tol: float = CLASSIFICATION_TOL) -> str:
    if derivative < -tol:
        return "stable"
    if derivative > tol:
        return "unstable"
    return "degenerate"


@dataclass(frozen=True)
class BifurcationBranch:
    label: str
    locations: np.ndarray  # equilibrium location per parameter value (NaN if absent)
    classifications: list  # classification string per parameter value
    biological: np.ndarray  # bool per parameter value


@dataclass(frozen=True)
class BifurcationDiagram:
    parameter_name: str
    parameter_values: np.ndarray
    branches: list


@dataclass(frozen=True)
class PotentialCurve:
    grid: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class Linearization:
    """Perturbation dynamics du/dt = A u near the logistic midpoint."""

    coefficient_a: float
    beta_c: float
    u0: float

    def solution(self, t):
        t = np.asarray(t, dtype=float)
        out = self.u0 * np.exp(self.coefficient_a * t)
        return float(out) if out.ndim == 0 else out


def _central_derivative(fun, x: float, h: float = 1e-6) -> float:
    step = h * max(1.0, abs(x))
    return (fun(x + step) - fun(x - step)) / (2.0 * step)


def growth_equilibria(gp: GrowthParams) -> list[Equilibrium]:
    """Admissible equilibria of the growth drift with stability labels.

    X1 = 0 always; X2 = ln(mu)/s is included only when it is a distinct
    admissible state, i.e. mu > 1. At mu = 1 the equilibria coalesce at 0
    and the single equilibrium is degenerate (F'(0) = q - p = 0).
    """
    d0 = gp.q - gp.p  # F'(0)
    out = [Equilibrium(0.0, d0, classify_derivative(d0))]
    if gp.mu > 1.0:
        d2 = -gp.p * math.log(gp.mu)  # F'(X2)
        out.append(Equilibrium(gp.x2, d2, classify_derivative(d2)))
    return out


def transcritical_diagram(
    gp_template: GrowthParams, mu_range: tuple[float, float], n: int
) -> BifurcationDiagram:
    """Two-branch diagram over mu = q/p with p, s held at the template values.

    The X2 branch is reported for mu < 1 too (negative locations) so the
    full diagram can be drawn; those points carry biological=False.
    """
    lo, hi = mu_range
    if not (0.0 < lo <= hi):
        raise ParameterDomainError(f"mu_range must lie inside (0, inf), got {mu_range}")
    if n < 2:
        raise ParameterDomainError(f"need at least 2 samples, got {n}")
    mus = np.linspace(lo, hi, n)
    x1_loc = np.zeros(n)
    x2_loc = np.log(mus) / gp_template.s
    x1_cls, x2_cls = [], []
    for mu in mus:
        d1 = gp_template.p * (mu - 1.0)  # F'(0) = q - p with q = mu p
        d2 = -gp_template.p * math.log(mu)  # F'(X2)
        x1_cls.append(classify_derivative(d1))
        x2_cls.append(classify_derivative(d2))
    branches = [
        BifurcationBranch("extinction", x1_loc, x1_cls, np.ones(n, dtype=bool)),
        BifurcationBranch("carrying", x2_loc, x2_cls, x2_loc >= 0.0),
    ]
    return BifurcationDiagram("mu", mus, branches)


def normal_form_lambda(gp: GrowthParams) -> float:
    """Transcritical normal-form parameter (q - p)/sqrt(s q); zero at mu = 1."""
    return (gp.q - gp.p) / math.sqrt(gp.s * gp.q)


def growth_potential(grid, gp: GrowthParams) -> PotentialCurve:
    """Closed-form potential U with -U' equal to the growth drift.

    U(X) = (p/2) X^2 + (q/s) e^{-sX} (X + 1/s); U(0) = q/s^2.
    """
    x = np.asarray(grid, dtype=float)
    u = 0.5 * gp.p * x**2 + (gp.q / gp.s) * np.exp(-gp.s * x) * (x + 1.0 / gp.s)
    return PotentialCurve(x, u)


def logistic_equilibria(lp: LogisticParams) -> list[Equilibrium]:
    """Equilibria {0, phi} of the logistic drift, classified by the numeric
    drift derivative (the sigmoid capacity has no convenient closed form)."""
    fun = lambda x: logistic_drift(x, lp)
    out = []
    for loc in (0.0, lp.phi):
        d = _central_derivative(fun, loc)
        out.append(Equilibrium(loc, d, classify_derivative(d)))
    return out


def beta_critical(lp: LogisticParams) -> float:
    """Sensitivity threshold 4/(k2 - k1) where the linearized coefficient
    A = -s(1 - beta/beta_c) changes sign."""
    if lp.k2 <= lp.k1:
        raise ParameterDomainError("beta_critical requires k2 > k1")
    return 4.0 / (lp.k2 - lp.k1)


def linearization(lp: LogisticParams, u0: float) -> Linearization:
    bc = beta_critical(lp)
    a = -lp.s * (1.0 - lp.beta_sens / bc)
    return Linearization(coefficient_a=a, beta_c=bc, u0=u0)


def linearized_solution(lp: LogisticParams, u0: float, t):
    """Perturbation u(t) = u0 exp(A t) near phi, A = -s(1 - beta/beta_c).

    Decays for beta < beta_c, is constant at beta = beta_c, grows beyond.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0):
        raise ParameterDomainError("time must be >= 0")
    return linearization(lp, u0).solution(t)


def logistic_potential(grid, lp: LogisticParams) -> PotentialCurve:
    """Potential for the logistic drift by cumulative trapezoid quadrature
    of -drift, anchored to U = 0 at the first grid point."""
    x = np.asarray(grid, dtype=float)
    u = cumulative_trapezoid(-logistic_drift(x, lp), x, initial=0.0)
    return PotentialCurve(x, u)
