"""Gradient-free trainers for the circuit model: SPSA and random search.

Why no parameter-shift gradients: every trainable factor is exp(+i theta H)
for the same many-term H, whose spectrum is not two-valued, so the two-point
shift identity for analytic gradients does not apply.  Training is therefore
zeroth-order only: simultaneous-perturbation stochastic approximation (sps)
and an accept-if-better random search (ran).

The internal objective is mean squared error; traces and reported metrics
are root mean squared error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .simulator import CircuitBundle, expectation_z0, model_output, run_circuit

ALGORITHMS = ("sps", "ran")


class TrainingDiverged(RuntimeError):
    """The objective became non-finite during optimization."""


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer settings.

    sps gains follow the standard decaying schedules
    a_k = a0/(k+1+big_a)**alpha_gain and c_k = c0/(k+1)**gamma_gain; ran
    perturbs the incumbent by a uniform step in [-ran_step, ran_step) per
    coordinate and accepts only strict improvements.  theta_clip, when set,
    keeps every accepted parameter inside [-theta_clip, theta_clip].
    """

    algorithm: str = "sps"
    epochs: int = 200
    seed: int = 0
    init_low: float = -0.01
    init_high: float = 0.01
    a0: float = 0.1
    c0: float = 0.1
    big_a: float = 20.0
    alpha_gain: float = 0.602
    gamma_gain: float = 0.101
    ran_step: float = 0.1
    theta_clip: float | None = None

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.init_low > self.init_high:
            raise ValueError("init_low must not exceed init_high")
        if self.a0 <= 0 or self.c0 <= 0:
            raise ValueError("gain scales must be positive")
        if self.ran_step <= 0:
            raise ValueError("ran_step must be positive")
        if self.theta_clip is not None and self.theta_clip <= 0:
            raise ValueError("theta_clip must be positive when set")


@dataclass(frozen=True)
class TrainResult:
    """Final parameters plus the per-epoch RMSE trace (length epochs + 1)."""

    theta_star: np.ndarray
    train_rmse_trace: np.ndarray
    final_train_rmse: float
    evaluations_used: int


def rmse(predictions: Sequence[float] | np.ndarray, labels: Sequence[float] | np.ndarray) -> float:
    p = np.asarray(predictions, dtype=float)
    y = np.asarray(labels, dtype=float)
    if p.shape != y.shape:
        raise ValueError(f"shape mismatch {p.shape} vs {y.shape}")
    if p.size == 0:
        raise ValueError("empty inputs")
    return float(np.sqrt(np.mean((p - y) ** 2)))


def predict(model: CircuitBundle, theta: Sequence[float] | np.ndarray, xs: np.ndarray) -> np.ndarray:
    return np.array([model_output(x, theta, model) for x in xs])


def empirical_risk(model: CircuitBundle, theta: Sequence[float] | np.ndarray, dataset) -> float:
    """Mean squared error of the model over the dataset's training split."""
    preds = predict(model, theta, dataset.train_x)
    return float(np.mean((preds - dataset.train_y) ** 2))


def _checked(loss: Callable[[np.ndarray], float], theta: np.ndarray, where: str) -> float:
    val = loss(theta)
    if not math.isfinite(val):
        raise TrainingDiverged(f"non-finite loss {val!r} at {where}, |theta| max {np.max(np.abs(theta)):.3e}")
    return val


def sps_minimize(loss: Callable[[np.ndarray], float], n_params: int, config: TrainConfig) -> TrainResult:
    """Simultaneous-perturbation descent on a mean-squared-error objective.

    Per epoch: one Rademacher direction, two perturbed evaluations, one
    update theta <- theta - a_k * g_hat, one trace evaluation at the new
    theta.  Initial theta is uniform on [init_low, init_high).
    """
    rng = np.random.default_rng(config.seed)
    theta = rng.uniform(config.init_low, config.init_high, size=n_params)
    if config.theta_clip is not None:
        theta = np.clip(theta, -config.theta_clip, config.theta_clip)
    evals = 0

    def mse(t: np.ndarray, where: str) -> float:
        nonlocal evals
        evals += 1
        return _checked(loss, t, where)

    trace = [math.sqrt(mse(theta, "epoch 0"))]
    for k in range(config.epochs):
        a_k = config.a0 / (k + 1 + config.big_a) ** config.alpha_gain
        c_k = config.c0 / (k + 1) ** config.gamma_gain
        delta = rng.choice([-1.0, 1.0], size=n_params)
        loss_plus = mse(theta + c_k * delta, f"epoch {k} (+)")
        loss_minus = mse(theta - c_k * delta, f"epoch {k} (-)")
        g_hat = (loss_plus - loss_minus) / (2.0 * c_k * delta)
        theta = theta - a_k * g_hat
        if config.theta_clip is not None:
            theta = np.clip(theta, -config.theta_clip, config.theta_clip)
        trace.append(math.sqrt(mse(theta, f"epoch {k} (post)")))
    return TrainResult(theta, np.array(trace), trace[-1], evals)


def ran_minimize(loss: Callable[[np.ndarray], float], n_params: int, config: TrainConfig) -> TrainResult:
    """Accept-if-better random search from theta = 0.

    Each epoch draws one proposal around the incumbent and keeps it only when
    the objective strictly decreases, so the trace never increases.
    """
    rng = np.random.default_rng(config.seed)
    best = np.zeros(n_params)
    evals = 0

    def mse(t: np.ndarray, where: str) -> float:
        nonlocal evals
        evals += 1
        return _checked(loss, t, where)

    best_loss = mse(best, "epoch 0")
    trace = [math.sqrt(best_loss)]
    for k in range(config.epochs):
        proposal = best + rng.uniform(-config.ran_step, config.ran_step, size=n_params)
        if config.theta_clip is not None:
            proposal = np.clip(proposal, -config.theta_clip, config.theta_clip)
        val = mse(proposal, f"epoch {k}")
        if val < best_loss:
            best, best_loss = proposal, val
        trace.append(math.sqrt(best_loss))
    return TrainResult(best, np.array(trace), trace[-1], evals)


def _dataset_loss(model: CircuitBundle, dataset) -> Callable[[np.ndarray], float]:
    xs = np.asarray(dataset.train_x, dtype=float)
    ys = np.asarray(dataset.train_y, dtype=float)
    if xs.shape[0] == 0:
        raise ValueError("dataset has no training points")
    # Encoded states are theta-independent; cache them once per dataset.
    encoded = [run_circuit(model.encoder, x=x) for x in xs]

    def loss(theta: np.ndarray) -> float:
        preds = np.array(
            [
                float(np.clip(expectation_z0(run_circuit(model.ansatz, theta=theta, state=s)), -1.0, 1.0))
                for s in encoded
            ]
        )
        return float(np.mean((preds - ys) ** 2))

    return loss


def train_sps(model: CircuitBundle, dataset, config: TrainConfig) -> TrainResult:
    if config.algorithm != "sps":
        raise ValueError(f"train_sps got a config for algorithm {config.algorithm!r}")
    return sps_minimize(_dataset_loss(model, dataset), model.n_trainable, config)


def train_ran(model: CircuitBundle, dataset, config: TrainConfig) -> TrainResult:
    if config.algorithm != "ran":
        raise ValueError(f"train_ran got a config for algorithm {config.algorithm!r}")
    return ran_minimize(_dataset_loss(model, dataset), model.n_trainable, config)
