"""Covering-number generalization bound and trainable-parameter budget.

All covering counts are handled in log-space; the Dudley entropy integral has
a closed form that is cross-checked against adaptive quadrature in the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .pauli import PauliSum, operator_norm

LN2 = math.log(2.0)


class ParameterDomainError(ValueError):
    """An input lies outside the formula's domain of validity."""


class CoveringValue(NamedTuple):
    """A covering count as its natural log plus the linear value (inf on overflow)."""

    log_value: float
    value: float


@dataclass(frozen=True)
class BoundInputs:
    """Inputs to the generalization bound.

    m: training-set size; n_t: trainable parameter count; dim_g: Lie-closure
    dimension; n_eigen: eigenvalue count of the generator (2**qubits for the
    circuits here); o_norm: spectral norm of the observable; c: loss range
    constant; delta: confidence level; radius: parameter-ball radius.
    """

    m: int
    n_t: int
    dim_g: int
    n_eigen: int
    o_norm: float = 1.0
    c: float = 1.0
    delta: float = 0.05
    radius: float = math.pi

    def __post_init__(self) -> None:
        errors = []
        if self.m < 1:
            errors.append(f"m must be >= 1, got {self.m}")
        if self.n_t < 1:
            errors.append(f"n_t must be >= 1, got {self.n_t}")
        if self.dim_g < 1:
            errors.append(f"dim_g must be >= 1, got {self.dim_g}")
        if self.n_eigen < 1:
            errors.append(f"n_eigen must be >= 1, got {self.n_eigen}")
        if not self.o_norm > 0:
            errors.append(f"o_norm must be > 0, got {self.o_norm}")
        if not self.c > 0:
            errors.append(f"c must be > 0, got {self.c}")
        if not 0 < self.delta < 1:
            errors.append(f"delta must be in (0, 1), got {self.delta}")
        if not self.radius > 0:
            errors.append(f"radius must be > 0, got {self.radius}")
        if errors:
            raise ParameterDomainError("; ".join(errors))


@dataclass(frozen=True)
class BoundReport:
    """Evaluated pieces of the generalization bound."""

    d: float
    alpha: float
    dudley_term: float
    rademacher_bound: float
    gap_bound: float


def ball_covering_bound(dim_g: int, radius: float, eps: float) -> CoveringValue:
    """Covering count (1 + 2*radius/eps)**dim_g for a dim_g-dimensional ball.

    Examples
    --------
    >>> ball_covering_bound(1, math.pi, 2 * math.pi).value
    2.0
    """
    if dim_g < 1:
        raise ParameterDomainError(f"dim_g must be >= 1, got {dim_g}")
    if not radius > 0 or not eps > 0:
        raise ParameterDomainError("radius and eps must be positive")
    log_value = dim_g * math.log1p(2.0 * radius / eps)
    try:
        value = math.exp(log_value)
    except OverflowError:
        value = math.inf
    return CoveringValue(log_value, value)


def scale_d(inputs: BoundInputs) -> float:
    """Lipschitz scale D = 4 * radius * (n_t - 1) * sqrt(n_eigen) * o_norm."""
    return 4.0 * inputs.radius * (inputs.n_t - 1) * math.sqrt(inputs.n_eigen) * inputs.o_norm


def hypothesis_covering_bound(inputs: BoundInputs, eps: float) -> float:
    """Log covering count of the hypothesis class: n_t * dim_g * ln(1 + D/eps)."""
    if not eps > 0:
        raise ParameterDomainError(f"eps must be positive, got {eps}")
    d = scale_d(inputs)
    return inputs.n_t * inputs.dim_g * math.log1p(d / eps)


def dudley_closed_form(alpha: float, d: float) -> float:
    """Closed form of the entropy integral from alpha to 1 of ln(1 + D/eps).

    Equals alpha*ln(alpha) + (1+D)*ln(1+D) - (alpha+D)*ln(alpha+D); the
    alpha*ln(alpha) term is negative for alpha < 1 but the total is >= 0.
    """
    if not 0 < alpha <= 1:
        raise ParameterDomainError(f"alpha must be in (0, 1], got {alpha}")
    if d < 0:
        raise ParameterDomainError(f"d must be >= 0, got {d}")
    return (
        alpha * math.log(alpha)
        + (1.0 + d) * math.log1p(d)
        - (alpha + d) * math.log(alpha + d)
    )


def generalization_bound(inputs: BoundInputs) -> BoundReport:
    """Assembled bound on the expected-vs-empirical risk gap.

    alpha = 1/sqrt(M); the Rademacher term is 4*alpha plus
    (12/sqrt(M)) * sqrt(n_t * dim_g) * dudley; the gap bound doubles the
    Rademacher term and adds the 3*C*sqrt(ln(2/delta)/(2M)) confidence term.
    """
    m = inputs.m
    alpha = 1.0 / math.sqrt(m)
    d = scale_d(inputs)
    dudley = dudley_closed_form(alpha, d)
    scale = math.sqrt(inputs.n_t * inputs.dim_g)
    rademacher = 4.0 * alpha + (12.0 / math.sqrt(m)) * scale * dudley
    gap = (8.0 / math.sqrt(m)) * (1.0 + 3.0 * scale * dudley) + 3.0 * inputs.c * math.sqrt(
        math.log(2.0 / inputs.delta) / (2.0 * m)
    )
    return BoundReport(d, alpha, dudley, rademacher, gap)


def max_trainable_params(p: float) -> float:
    """Parameter budget 2/((2 - e**p) * p) + 1 for per-factor angle scale p.

    Valid for 0 < p < ln 2; outside that range the budget is undefined.

    Examples
    --------
    >>> round(max_trainable_params(0.1), 2)
    23.35
    """
    if not 0 < p < LN2:
        raise ParameterDomainError(f"p must satisfy 0 < p < ln 2 ({LN2:.6f}), got {p}")
    return 2.0 / ((2.0 - math.exp(p)) * p) + 1.0


def max_params_from_epsilon(eps: float) -> float:
    """Budget 2/eps + 1 when the scale is expressed as a radius eps."""
    if not eps > 0:
        raise ParameterDomainError(f"eps must be positive, got {eps}")
    return 2.0 / eps + 1.0


def epsilon_max(p: float) -> float:
    """Largest admissible radius (2 - e**p) * p for angle scale p.

    A halved variant (radius p instead of 2p in the covering step) circulates
    for the same quantity; the CLI reports both.  This function returns the
    unhalved formula value.
    """
    if not 0 < p < LN2:
        raise ParameterDomainError(f"p must satisfy 0 < p < ln 2 ({LN2:.6f}), got {p}")
    return (2.0 - math.exp(p)) * p


def optimal_p(tol: float = 1e-10) -> tuple[float, float]:
    """Scale p* minimizing the budget, and the budget's minimum value.

    Solves e**p * (1 + p) = 2 by bisection on (1e-6, ln 2 - 1e-6); the
    minimum budget is independent of the training-set size.
    """
    def f(p: float) -> float:
        return math.exp(p) * (1.0 + p) - 2.0

    lo, hi = 1e-6, LN2 - 1e-6
    if not (f(lo) < 0 < f(hi)):
        raise RuntimeError("bisection bracket lost")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    p_star = 0.5 * (lo + hi)
    return p_star, max_trainable_params(p_star)


def theta_max(h: PauliSum) -> float:
    """Largest per-factor angle keeping |theta| * ||H|| below ln 2."""
    nrm = operator_norm(h)
    if nrm <= 0:
        raise ParameterDomainError("Hamiltonian has zero norm")
    return LN2 / nrm


def nt_curve(p_values) -> list[tuple[float, float]]:
    """Budget curve rows (p, max_trainable_params(p)) over a grid of scales."""
    return [(float(p), max_trainable_params(float(p))) for p in p_values]
