"""Iterate-generating dynamics: OFTRL, OOMD, and OGDA on matrix games.

All algorithms start both players at the uniform distribution and use a
constant step size.  At iteration t >= 2, OFTRL plays the regularized leader
against cumulative-plus-predicted losses

    x^t = argmin_x  <x, L^{t-1} + l^{t-1}> + R(x) / eta

while OOMD takes two Bregman proximal steps through the auxiliary point
z_hat, both against the previous loss.  OGDA is OOMD with the squared
Euclidean norm (plain simplex projections).  For Legendre regularizers
(entropy, log barrier, Tsallis) the two families generate identical iterates;
for the squared norm they differ.

Runs are deterministic: identical inputs produce identical trajectories.
2x2 games take a scalar fast path (compiled kernel when built, pure-Python
twin otherwise); the general-d path uses numpy throughout.
"""

import warnings
from dataclasses import dataclass, replace

import numpy as np

from ._backend import kernels
from ._scalar_py import (
    ALGO_OFTRL,
    ALGO_OOMD,
    REG_ENTROPY,
    REG_LOGBARRIER,
    REG_SQEUCLID,
    REG_TSALLIS,
)
from .game import GameError, MatrixGame, SimplexPoint, uniform
from .regularizers import (
    ENTROPY_KIND,
    LOGBARRIER_KIND,
    SQEUCLID_KIND,
    SQEUCLID,
    Regularizer,
    RegularizerError,
    smoothed_best_response,
)

OFTRL = "oftrl"
OOMD = "oomd"
OGDA = "ogda"

_ALGORITHMS = (OFTRL, OOMD, OGDA)
_REG_CODES = {
    ENTROPY_KIND: REG_ENTROPY,
    SQEUCLID_KIND: REG_SQEUCLID,
    LOGBARRIER_KIND: REG_LOGBARRIER,
    "tsallis": REG_TSALLIS,
}

_AUTO_STRIDE_CAP = 100_000
_SUM_RESIDUAL = 1e-13


class ConfigError(ValueError):
    """Inconsistent dynamics configuration."""


class NumericError(RuntimeError):
    """Inner solver failure; carries the residual and iteration index."""

    def __init__(self, message, residual=None, iteration=None):
        super().__init__(message)
        self.residual = residual
        self.iteration = iteration


@dataclass(frozen=True)
class DynamicsConfig:
    algorithm: str
    eta: float
    horizon: int
    regularizer: Regularizer = None
    record_stride: int = None  # None: 1 up to 1e5 steps, horizon // 1e5 beyond
    use_scalar_2x2: bool = True
    record_hats: bool = True

    def __post_init__(self):
        if self.algorithm not in _ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if not self.eta > 0.0:
            raise ConfigError("step size must be positive")
        if self.horizon < 1:
            raise ConfigError("horizon must be at least 1")
        if self.record_stride is not None and self.record_stride < 1:
            raise ConfigError("record stride must be at least 1")
        if self.algorithm == OGDA:
            if self.regularizer is not None and self.regularizer.kind != SQEUCLID_KIND:
                raise ConfigError("OGDA is squared-Euclidean OOMD; pick OOMD for other regularizers")
        elif self.regularizer is None:
            raise ConfigError(f"{self.algorithm} needs a regularizer")

    def resolved(self):
        """(algorithm code, regularizer) with OGDA normalized to OOMD/sqeuclid."""
        if self.algorithm == OGDA:
            return ALGO_OOMD, SQEUCLID
        return (ALGO_OFTRL if self.algorithm == OFTRL else ALGO_OOMD), self.regularizer

    @property
    def stride(self):
        if self.record_stride is not None:
            return self.record_stride
        if self.horizon <= _AUTO_STRIDE_CAP:
            return 1
        return self.horizon // _AUTO_STRIDE_CAP

    @property
    def has_hats(self):
        algo, reg = self.resolved()
        return algo == ALGO_OOMD or reg.kind == ENTROPY_KIND

    @property
    def has_logs(self):
        _, reg = self.resolved()
        return reg.kind == ENTROPY_KIND


@dataclass
class JointIterate:
    """Full state of one iteration of the general-d path."""

    t: int
    x: SimplexPoint
    y: SimplexPoint
    cum_loss_x: np.ndarray
    cum_loss_y: np.ndarray
    prev_loss_x: np.ndarray
    prev_loss_y: np.ndarray
    x_hat: SimplexPoint = None
    y_hat: SimplexPoint = None
    log_weights_x: np.ndarray = None  # normalized log-probabilities (entropy)
    log_weights_y: np.ndarray = None
    log_hat_x: np.ndarray = None
    log_hat_y: np.ndarray = None


@dataclass
class Trajectory:
    """Recorded run: per-stride rows plus exact full-resolution aggregates."""

    game: MatrixGame
    config: DynamicsConfig
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    loss_x: np.ndarray
    loss_y: np.ndarray
    gap: np.ndarray
    cum_gap: np.ndarray
    min_gap: np.ndarray
    gap_sum: float
    best_gap: float
    best_t: int
    min_log_prob: float
    x_hat: np.ndarray = None
    y_hat: np.ndarray = None
    log_x: np.ndarray = None
    log_y: np.ndarray = None
    log_x_hat: np.ndarray = None
    log_y_hat: np.ndarray = None

    @property
    def records(self):
        return self.t.size

    @property
    def final_x(self):
        return self.x[-1]

    @property
    def final_y(self):
        return self.y[-1]

    @property
    def last_gap(self):
        return float(self.gap[-1])


def project_simplex(v):
    """Euclidean projection onto the probability simplex (sort-and-threshold).

    The output satisfies the KKT conditions: out[i] = max(v[i] - tau, 0) with
    sum(out) = 1.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size < 1 or not np.all(np.isfinite(v)):
        raise GameError("projection needs a finite vector")
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    j = np.arange(1, v.size + 1)
    rho = np.nonzero(u * j > css - 1.0)[0][-1]
    tau = (css[rho] - 1.0) / (rho + 1.0)
    return SimplexPoint(np.maximum(v - tau, 0.0))


def _solve_linear_plus_reg(reg, g):
    """argmin_x <x, g> + R(x) over the simplex; returns (probs, log_probs).

    The caller folds the step size into g.  For the non-entropy regularizers
    the simplex multiplier is found by bisection on the per-coordinate
    stationarity inverses, stopping at sum residual 1e-13; the bisection is
    monotone so it cannot stall near the barriers.
    """
    g = np.asarray(g, dtype=np.float64)
    g = g - g.min()
    d = g.size
    if reg.kind == ENTROPY_KIND:
        w = -g
        w -= w.max()
        lse = np.log(np.sum(np.exp(w)))
        logp = w - lse
        return np.exp(logp), logp

    if reg.kind == SQEUCLID_KIND:
        lo, hi = -g.max() - 1.0, 0.0
        coords = lambda nu: np.maximum(-(g + nu), 0.0)
    elif reg.kind == LOGBARRIER_KIND:
        lo, hi = 0.0, float(d)
        coords = lambda nu: 1.0 / (g + nu)
    else:
        c = reg.beta / (1.0 - reg.beta)
        lo, hi = 0.0, c * d ** (1.0 - reg.beta)
        coords = lambda nu: (c / (g + nu)) ** (1.0 / (1.0 - reg.beta))

    if lo == 0.0:  # barrier solutions explode as nu -> 0+
        lo = min(hi, 1.0) * 1e-18
    x = coords(0.5 * (lo + hi))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        x = coords(mid)
        s = x.sum()
        if abs(s - 1.0) <= _SUM_RESIDUAL:
            break
        if s >= 1.0:
            lo = mid
        else:
            hi = mid
    s = x.sum()
    if abs(s - 1.0) > 1e-6:
        raise NumericError("simplex multiplier search failed", residual=float(s - 1.0))
    x = x / s
    return x, None


def _entropy_prox(log_p, scaled_loss):
    w = log_p - scaled_loss
    w = w - w.max()
    lse = np.log(np.sum(np.exp(w)))
    logp = w - lse
    return np.exp(logp), logp


def _prox(reg, p_from, log_from, scaled_loss):
    """argmin_x <x, scaled_loss> + D_R(x, p_from); returns (probs, log_probs)."""
    if reg.kind == ENTROPY_KIND:
        return _entropy_prox(log_from, scaled_loss)
    if reg.kind == SQEUCLID_KIND:
        pt = project_simplex(p_from - scaled_loss)
        return pt.probs, None
    p = np.asarray(p_from, dtype=np.float64)
    if reg.kind == LOGBARRIER_KIND:
        h = scaled_loss + 1.0 / p
    else:
        c = reg.beta / (1.0 - reg.beta)
        h = scaled_loss + c * p ** (reg.beta - 1.0)
    return _solve_linear_plus_reg(reg, h)


def initial_state(game, config):
    """State at t = 1: uniform play, first losses already observed."""
    algo, reg = config.resolved()
    x = uniform(game.d1)
    y = uniform(game.d2)
    a = game.entries
    lx = a @ y.probs
    ly = -(a.T @ x.probs)
    state = JointIterate(
        t=1,
        x=x,
        y=y,
        cum_loss_x=lx.copy(),
        cum_loss_y=ly.copy(),
        prev_loss_x=lx,
        prev_loss_y=ly,
    )
    if config.has_hats:
        state.x_hat = x
        state.y_hat = y
    if reg.kind == ENTROPY_KIND:
        state.log_weights_x = np.log(x.probs)
        state.log_weights_y = np.log(y.probs)
        state.log_hat_x = np.log(x.probs)
        state.log_hat_y = np.log(y.probs)
    return state


def _advance_losses(game, state, x_new, y_new):
    a = game.entries
    lx = a @ y_new.probs
    ly = -(a.T @ x_new.probs)
    state.cum_loss_x = state.cum_loss_x + lx
    state.cum_loss_y = state.cum_loss_y + ly
    state.prev_loss_x = lx
    state.prev_loss_y = ly
    state.x = x_new
    state.y = y_new
    state.t += 1
    return state


def step_oftrl(game, state, reg, eta):
    """One OFTRL step: play the regularized leader, then observe losses."""
    state = replace(state)
    gx = eta * (state.cum_loss_x + state.prev_loss_x)
    gy = eta * (state.cum_loss_y + state.prev_loss_y)
    px, logx = _solve_linear_plus_reg(reg, gx)
    py, logy = _solve_linear_plus_reg(reg, gy)
    if reg.kind == ENTROPY_KIND:
        # the OOMD auxiliary point coincides with the leader against the
        # cumulative losses alone
        phx, loghx = _solve_linear_plus_reg(reg, eta * state.cum_loss_x)
        phy, loghy = _solve_linear_plus_reg(reg, eta * state.cum_loss_y)
        state.x_hat = SimplexPoint(phx)
        state.y_hat = SimplexPoint(phy)
        state.log_hat_x = loghx
        state.log_hat_y = loghy
        state.log_weights_x = logx
        state.log_weights_y = logy
    return _advance_losses(game, state, SimplexPoint(px), SimplexPoint(py))


def step_oftrl_scalar_2x2(game, state, reg, eta):
    """Scalar route for 2x2 OFTRL via the one-dimensional response map.

    Produces the same iterates as step_oftrl (within solver tolerance) by
    reducing each player's update to the accumulated loss difference.
    """
    if game.d1 != 2 or game.d2 != 2:
        raise GameError("scalar step needs a 2x2 game")
    state = replace(state)
    ex = float((state.cum_loss_x[0] - state.cum_loss_x[1]) + (state.prev_loss_x[0] - state.prev_loss_x[1]))
    ey = float((state.cum_loss_y[0] - state.cum_loss_y[1]) + (state.prev_loss_y[0] - state.prev_loss_y[1]))
    x1 = smoothed_best_response(reg, eta, ex)
    y1 = smoothed_best_response(reg, eta, ey)
    px = np.array([x1, 1.0 - x1])
    py = np.array([y1, 1.0 - y1])
    if reg.kind == ENTROPY_KIND:
        hx = smoothed_best_response(reg, eta, float(state.cum_loss_x[0] - state.cum_loss_x[1]))
        hy = smoothed_best_response(reg, eta, float(state.cum_loss_y[0] - state.cum_loss_y[1]))
        state.x_hat = SimplexPoint(np.array([hx, 1.0 - hx]))
        state.y_hat = SimplexPoint(np.array([hy, 1.0 - hy]))
        state.log_weights_x = np.log(px)
        state.log_weights_y = np.log(py)
        state.log_hat_x = np.log(state.x_hat.probs)
        state.log_hat_y = np.log(state.y_hat.probs)
    return _advance_losses(game, state, SimplexPoint(px), SimplexPoint(py))


def step_oomd(game, state, reg, eta):
    """One OOMD step: two Bregman proximal half-steps through z_hat."""
    if state.x_hat is None:
        raise ConfigError("OOMD step needs the auxiliary point in the state")
    state = replace(state)
    slx = eta * state.prev_loss_x
    sly = eta * state.prev_loss_y
    phx, loghx = _prox(reg, state.x_hat.probs, state.log_hat_x, slx)
    phy, loghy = _prox(reg, state.y_hat.probs, state.log_hat_y, sly)
    px, logx = _prox(reg, phx, loghx, slx)
    py, logy = _prox(reg, phy, loghy, sly)
    state.x_hat = SimplexPoint(phx)
    state.y_hat = SimplexPoint(phy)
    if reg.kind == ENTROPY_KIND:
        state.log_hat_x = loghx
        state.log_hat_y = loghy
        state.log_weights_x = logx
        state.log_weights_y = logy
    return _advance_losses(game, state, SimplexPoint(px), SimplexPoint(py))


def step_ogda(game, state, eta):
    """OGDA step: Euclidean proximal steps with simplex projection."""
    return step_oomd(game, state, SQEUCLID, eta)


def _record_layout(horizon, stride):
    ts = list(range(1, horizon + 1, stride))
    if ts[-1] != horizon:
        ts.append(horizon)
    return len(ts)


def _run_scalar(game, config):
    algo, reg = config.resolved()
    a = game.entries
    n = _record_layout(config.horizon, config.stride)
    rec_hats = config.record_hats and config.has_hats
    rec_logs = config.record_hats and config.has_logs
    rec_t = np.empty(n, dtype=np.int64)
    rec_x = np.empty((n, 2))
    rec_y = np.empty((n, 2))
    rec_lossx = np.empty((n, 2))
    rec_lossy = np.empty((n, 2))
    rec_gap = np.empty(n)
    rec_cum = np.empty(n)
    rec_min = np.empty(n)
    dummy = np.empty((1, 2))
    rec_xh = np.empty((n, 2)) if rec_hats else dummy
    rec_yh = np.empty((n, 2)) if rec_hats else dummy
    rec_logx = np.empty((n, 2)) if rec_logs else dummy
    rec_logy = np.empty((n, 2)) if rec_logs else dummy
    rec_logxh = np.empty((n, 2)) if rec_logs else dummy
    rec_logyh = np.empty((n, 2)) if rec_logs else dummy

    count, gap_sum, best_gap, best_t, min_log_prob = kernels.run_2x2(
        float(a[0, 0]),
        float(a[0, 1]),
        float(a[1, 0]),
        float(a[1, 1]),
        algo,
        _REG_CODES[reg.kind],
        float(reg.beta or 0.0),
        config.eta,
        config.horizon,
        config.stride,
        rec_hats,
        rec_logs,
        rec_t,
        rec_x,
        rec_y,
        rec_lossx,
        rec_lossy,
        rec_gap,
        rec_cum,
        rec_min,
        rec_xh,
        rec_yh,
        rec_logx,
        rec_logy,
        rec_logxh,
        rec_logyh,
    )
    if count != n:
        raise NumericError(f"kernel recorded {count} rows, expected {n}")
    return Trajectory(
        game=game,
        config=config,
        t=rec_t,
        x=rec_x,
        y=rec_y,
        loss_x=rec_lossx,
        loss_y=rec_lossy,
        gap=rec_gap,
        cum_gap=rec_cum,
        min_gap=rec_min,
        gap_sum=float(gap_sum),
        best_gap=float(best_gap),
        best_t=int(best_t),
        min_log_prob=float(min_log_prob),
        x_hat=rec_xh if rec_hats else None,
        y_hat=rec_yh if rec_hats else None,
        log_x=rec_logx if rec_logs else None,
        log_y=rec_logy if rec_logs else None,
        log_x_hat=rec_logxh if rec_logs else None,
        log_y_hat=rec_logyh if rec_logs else None,
    )


def _run_general(game, config):
    algo, reg = config.resolved()
    stride = config.stride
    n = _record_layout(config.horizon, stride)
    d1, d2 = game.d1, game.d2
    rec_hats = config.record_hats and config.has_hats
    rec_logs = config.record_hats and config.has_logs
    rec_t = np.empty(n, dtype=np.int64)
    rec_x = np.empty((n, d1))
    rec_y = np.empty((n, d2))
    rec_lossx = np.empty((n, d1))
    rec_lossy = np.empty((n, d2))
    rec_gap = np.empty(n)
    rec_cum = np.empty(n)
    rec_min = np.empty(n)
    rec_xh = np.empty((n, d1)) if rec_hats else None
    rec_yh = np.empty((n, d2)) if rec_hats else None
    rec_logx = np.empty((n, d1)) if rec_logs else None
    rec_logy = np.empty((n, d2)) if rec_logs else None
    rec_logxh = np.empty((n, d1)) if rec_logs else None
    rec_logyh = np.empty((n, d2)) if rec_logs else None

    a = game.entries
    state = initial_state(game, config)
    gap_sum = 0.0
    best_gap = np.inf
    best_t = 0
    min_log = 0.0
    k = 0
    for t in range(1, config.horizon + 1):
        if t > 1:
            try:
                if algo == ALGO_OFTRL:
                    state = step_oftrl(game, state, reg, config.eta)
                else:
                    state = step_oomd(game, state, reg, config.eta)
            except NumericError as err:
                err.iteration = t
                raise
        xv, yv = state.x.probs, state.y.probs
        gap = float(np.max(a.T @ xv) - np.min(a @ yv))
        gap_sum += gap
        if gap < best_gap:
            best_gap = gap
            best_t = t
        if rec_logs:
            step_min = min(float(state.log_weights_x.min()), float(state.log_weights_y.min()))
            if state.log_hat_x is not None:
                step_min = min(step_min, float(state.log_hat_x.min()), float(state.log_hat_y.min()))
        else:
            lo = min(float(xv.min()), float(yv.min()))
            if state.x_hat is not None:
                lo = min(lo, float(state.x_hat.probs.min()), float(state.y_hat.probs.min()))
            step_min = np.log(lo) if lo > 0.0 else -np.inf
        if step_min < min_log:
            min_log = step_min
        if (t - 1) % stride == 0 or t == config.horizon:
            rec_t[k] = t
            rec_x[k] = xv
            rec_y[k] = yv
            rec_lossx[k] = state.prev_loss_x
            rec_lossy[k] = state.prev_loss_y
            rec_gap[k] = gap
            rec_cum[k] = gap_sum
            rec_min[k] = best_gap
            if rec_hats:
                rec_xh[k] = state.x_hat.probs
                rec_yh[k] = state.y_hat.probs
            if rec_logs:
                rec_logx[k] = state.log_weights_x
                rec_logy[k] = state.log_weights_y
                rec_logxh[k] = state.log_hat_x
                rec_logyh[k] = state.log_hat_y
            k += 1
    return Trajectory(
        game=game,
        config=config,
        t=rec_t,
        x=rec_x,
        y=rec_y,
        loss_x=rec_lossx,
        loss_y=rec_lossy,
        gap=rec_gap,
        cum_gap=rec_cum,
        min_gap=rec_min,
        gap_sum=gap_sum,
        best_gap=float(best_gap),
        best_t=best_t,
        min_log_prob=float(min_log),
        x_hat=rec_xh,
        y_hat=rec_yh,
        log_x=rec_logx,
        log_y=rec_logy,
        log_x_hat=rec_logxh,
        log_y_hat=rec_logyh,
    )


def run_dynamics(game, config):
    """Execute the configured run and return its Trajectory.

    Records every `stride` iterations plus the exact first and last iterates;
    the gap sum, running best gap, and minimum probability are maintained at
    full resolution regardless of stride.
    """
    _, reg = config.resolved()
    threshold = 1.0 / (4.0 * reg.lipschitz)
    if config.eta > threshold:
        warnings.warn(
            f"step size {config.eta} exceeds the analysis threshold {threshold}",
            stacklevel=2,
        )
    if game.d1 == 2 and game.d2 == 2 and config.use_scalar_2x2:
        return _run_scalar(game, config)
    return _run_general(game, config)


def rerun_at_stride(traj, stride=1, horizon=None):
    """Deterministically recompute a trajectory at a finer stride."""
    config = replace(
        traj.config,
        record_stride=stride,
        horizon=traj.config.horizon if horizon is None else horizon,
    )
    return run_dynamics(traj.game, config)
