"""Convergence measurements on trajectories.

Three non-ergodic criteria are tracked from per-step duality gaps: the last
iterate's gap, the running mean (random iterate), and the running minimum
(best iterate).  The sum of duality gaps equals the social dynamic regret
against per-iteration pure best responses, which this module also evaluates
directly from recorded losses, together with windowed (interval) regret, loss
variation, and the KL-based Lyapunov diagnostics of entropy runs.

Operations that need per-step losses recompute the trajectory at stride 1
when the stored stride is coarser; runs are deterministic, so the
recomputation is exact.
"""

from dataclasses import dataclass
from math import exp

import numpy as np

from .dynamics import rerun_at_stride
from .game import GameError, duality_gap
from .regularizers import ENTROPY_KIND


@dataclass(frozen=True)
class ConvergenceReport:
    """(t, value) series for the three convergence criteria."""

    t: np.ndarray
    last_gap: np.ndarray
    random_avg: np.ndarray
    best: np.ndarray


@dataclass(frozen=True)
class LyapunovSeries:
    """KL potential toward the equilibrium and per-step movement.

    potential[i] corresponds to iteration t[i] >= 2 and movement[i] to the
    same index; the movement series is one entry shorter (it needs the next
    auxiliary point).
    """

    t: np.ndarray
    potential: np.ndarray
    movement: np.ndarray
    x_star: np.ndarray
    y_star: np.ndarray


@dataclass(frozen=True)
class MinProbability:
    value: float  # linear scale; underflows to 0.0 for extreme runs
    log_value: float


def _stride1(traj, horizon=None):
    need = traj.config.horizon if horizon is None else horizon
    if traj.config.stride == 1 and traj.config.horizon == need:
        return traj
    return rerun_at_stride(traj, stride=1, horizon=need)


def convergence_report(traj):
    """Exact running mean and min of the duality gap at the recorded times."""
    if traj.records == 0:
        raise GameError("empty trajectory")
    t = traj.t
    return ConvergenceReport(
        t=t,
        last_gap=traj.gap.copy(),
        random_avg=traj.cum_gap / t,
        best=traj.min_gap.copy(),
    )


def social_dynamic_regret(traj, horizon=None):
    """Sum over both players of regret against per-step pure best responses.

    Ties among best responses break to the lowest index.  Equals the sum of
    duality gaps up to accumulation roundoff.
    """
    traj = _stride1(traj, horizon)
    rx = np.einsum("ij,ij->i", traj.loss_x, traj.x) - np.min(traj.loss_x, axis=1)
    ry = np.einsum("ij,ij->i", traj.loss_y, traj.y) - np.min(traj.loss_y, axis=1)
    return float(np.sum(rx) + np.sum(ry))


def interval_regret(traj, start, end, player="x"):
    """Static regret over iterations [start, end] for one player.

    The comparator is the best fixed pure action against the interval's
    summed loss, lowest index on ties.
    """
    if not (1 <= start <= end <= traj.config.horizon):
        raise GameError(f"interval [{start}, {end}] escapes the horizon")
    if player not in ("x", "y"):
        raise GameError("player must be 'x' or 'y'")
    traj = _stride1(traj)
    sl = slice(start - 1, end)
    loss = traj.loss_x[sl] if player == "x" else traj.loss_y[sl]
    play = traj.x[sl] if player == "x" else traj.y[sl]
    incurred = float(np.sum(np.einsum("ij,ij->i", loss, play)))
    return incurred - float(np.min(np.sum(loss, axis=0)))


def variation(traj, start, end):
    """Accumulated worst-case loss change over [start, end]:
    sum_t max_z |<F(z^t) - F(z^{t-1}), z>| evaluated exactly via coordinate
    extremes over the product of simplices."""
    if not (1 <= start <= end <= traj.config.horizon):
        raise GameError(f"interval [{start}, {end}] escapes the horizon")
    traj = _stride1(traj)
    sl = slice(start - 1, end)
    gx = np.diff(traj.loss_x[sl], axis=0)
    gy = np.diff(traj.loss_y[sl], axis=0)
    upper = np.max(gx, axis=1) + np.max(gy, axis=1)
    lower = np.min(gx, axis=1) + np.min(gy, axis=1)
    return float(np.sum(np.maximum(np.abs(upper), np.abs(lower))))


def validate_equilibrium(game, x_star, y_star, tol=1e-8):
    """Check a user-supplied equilibrium via its duality gap."""
    gap = duality_gap(game, x_star, y_star)
    if gap > tol:
        raise GameError(f"supplied point has duality gap {gap:.3e} > {tol}")
    return gap


def _kl_rows(p, log_p, log_q):
    # sum_i p_i (log p_i - log q_i) per row; p_i -> 0 contributes 0
    diff = log_p - log_q
    return np.einsum("ij,ij->i", p, diff)


def lyapunov_series(traj, x_star, y_star):
    """KL potential and movement of an entropy run toward (x_star, y_star).

    potential(t) = KL(z*, z_hat^t) + (1/16) KL(z_hat^t, z^{t-1})
    movement(t)  = KL(z_hat^{t+1}, z^t) + KL(z^t, z_hat^t)

    for t >= 2, computed from the log-domain records so tiny probabilities
    stay representable.
    """
    _, reg = traj.config.resolved()
    if reg.kind != ENTROPY_KIND or traj.log_x_hat is None:
        raise GameError("Lyapunov diagnostics need an entropy run with recorded auxiliary points")
    traj = _stride1(traj)
    validate_equilibrium(traj.game, x_star, y_star)

    xs = np.asarray(x_star, dtype=np.float64)
    ys = np.asarray(y_star, dtype=np.float64)
    log_xs = np.log(xs)
    log_ys = np.log(ys)

    xh = np.exp(traj.log_x_hat)
    yh = np.exp(traj.log_y_hat)
    x = np.exp(traj.log_x)
    y = np.exp(traj.log_y)

    # KL(z*, z_hat^t) for t >= 2
    kl_star = (log_xs @ xs - traj.log_x_hat[1:] @ xs) + (log_ys @ ys - traj.log_y_hat[1:] @ ys)
    # KL(z_hat^t, z^{t-1}) for t >= 2
    kl_hat_prev = _kl_rows(xh[1:], traj.log_x_hat[1:], traj.log_x[:-1]) + _kl_rows(
        yh[1:], traj.log_y_hat[1:], traj.log_y[:-1]
    )
    potential = kl_star + kl_hat_prev / 16.0

    # KL(z_hat^{t+1}, z^t) + KL(z^t, z_hat^t) for t in [2, T-1]
    kl_next = _kl_rows(xh[2:], traj.log_x_hat[2:], traj.log_x[1:-1]) + _kl_rows(
        yh[2:], traj.log_y_hat[2:], traj.log_y[1:-1]
    )
    kl_cur = _kl_rows(x[1:-1], traj.log_x[1:-1], traj.log_x_hat[1:-1]) + _kl_rows(
        y[1:-1], traj.log_y[1:-1], traj.log_y_hat[1:-1]
    )
    movement = kl_next + kl_cur

    return LyapunovSeries(
        t=traj.t[1:],
        potential=potential,
        movement=movement,
        x_star=xs,
        y_star=ys,
    )


def min_probability(traj):
    """Smallest probability any action received across z^t and z_hat^t,
    tracked at full resolution during the run and reported with its log so
    underflowing runs stay informative."""
    lv = traj.min_log_prob
    value = exp(lv) if np.isfinite(lv) else 0.0
    return MinProbability(value=value, log_value=lv)
