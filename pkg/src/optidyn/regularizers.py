"""Strictly convex regularizers on the simplex and their scalar response maps.

Four regularizers are supported: negative entropy, squared Euclidean norm,
log barrier, and the negative Tsallis entropy family (beta in (0,1)).  Besides
values, gradients and Bregman divergences, the module exposes the
one-dimensional map

    smoothed_best_response(reg, eta, e)
        = argmin_{u in [0,1]}  u * e + R((u, 1-u)) / eta

which reduces regularized simplex updates in 2x2 games to scalar recursions,
its inverse at eta = 1, and the stability scale

    stability_scale(reg, delta) = -response_inverse(reg, 1 / (1 + delta))

driving the lower-bound timescales of the learning dynamics.
"""

from dataclasses import dataclass
from math import exp, log

import numpy as np

ENTROPY_KIND = "entropy"
SQEUCLID_KIND = "sqeuclid"
LOGBARRIER_KIND = "logbarrier"
TSALLIS_KIND = "tsallis"

_KINDS = (ENTROPY_KIND, SQEUCLID_KIND, LOGBARRIER_KIND, TSALLIS_KIND)

# bisection bracket and stopping width for the numeric response map
_BRACKET_LO = 1e-15
_BRACKET_HI = 1.0 - 1e-15
_WIDTH_TOL = 1e-14
_MAX_ITERS = 200


class RegularizerError(ValueError):
    """Invalid regularizer parameters or out-of-domain arguments."""


@dataclass(frozen=True)
class Regularizer:
    kind: str
    beta: float = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise RegularizerError(f"unknown regularizer kind {self.kind!r}")
        if self.kind == TSALLIS_KIND:
            if self.beta is None or not (0.0 < self.beta < 1.0):
                raise RegularizerError("tsallis needs beta in (0, 1)")
        elif self.beta is not None:
            raise RegularizerError(f"{self.kind} takes no beta parameter")

    @property
    def lipschitz(self):
        """Lipschitz constant of the unit-step response map."""
        if self.kind == TSALLIS_KIND:
            return 1.0 / (2.0 * self.beta)
        return 0.5


ENTROPY = Regularizer(ENTROPY_KIND)
SQEUCLID = Regularizer(SQEUCLID_KIND)
LOG_BARRIER = Regularizer(LOGBARRIER_KIND)


def tsallis(beta):
    return Regularizer(TSALLIS_KIND, beta)


def _check_probs(x):
    p = np.asarray(x, dtype=np.float64) if not hasattr(x, "probs") else x.probs
    if np.any(p < 0.0) or abs(float(p.sum()) - 1.0) > 1e-9:
        raise RegularizerError("argument is not a probability vector")
    return p


def reg_value(reg, x):
    """R(x).  Boundary points are accepted where the formula extends
    continuously (entropy with 0*log 0 := 0, Tsallis, squared norm); the log
    barrier rejects them."""
    p = _check_probs(x)
    if reg.kind == ENTROPY_KIND:
        pos = p[p > 0.0]
        return float(np.sum(pos * np.log(pos)))
    if reg.kind == SQEUCLID_KIND:
        return float(0.5 * np.sum(p * p))
    if reg.kind == LOGBARRIER_KIND:
        if np.any(p <= 0.0):
            raise RegularizerError("log barrier is undefined on the boundary")
        return float(-np.sum(np.log(p)))
    return float((1.0 - np.sum(p ** reg.beta)) / (1.0 - reg.beta))


def reg_grad(reg, x):
    """Gradient of R; requires strictly positive entries except for sqeuclid."""
    p = _check_probs(x)
    if reg.kind == SQEUCLID_KIND:
        return p.copy()
    if np.any(p <= 0.0):
        raise RegularizerError(f"{reg.kind} gradient needs an interior point")
    if reg.kind == ENTROPY_KIND:
        return np.log(p) + 1.0
    if reg.kind == LOGBARRIER_KIND:
        return -1.0 / p
    return -(reg.beta / (1.0 - reg.beta)) * p ** (reg.beta - 1.0)


def bregman(reg, x, xp):
    """D_R(x, xp) = R(x) - R(xp) - <grad R(xp), x - xp> >= 0.

    Equals the KL divergence for the entropy regularizer and half the squared
    Euclidean distance for the quadratic one.
    """
    p = _check_probs(x)
    q = _check_probs(xp)
    val = reg_value(reg, p) - reg_value(reg, q) - float(reg_grad(reg, q) @ (p - q))
    return max(val, 0.0)


def _sig(v):
    # 1 / (1 + e^v), overflow-safe
    if v >= 0.0:
        z = exp(-v)
        return z / (1.0 + z)
    return 1.0 / (1.0 + exp(v))


def _pair_grad_diff(reg, u):
    # d/du R((u, 1-u)) = R'(u) - R'(1-u), strictly increasing in u
    if reg.kind == ENTROPY_KIND:
        return log(u) - log(1.0 - u)
    if reg.kind == SQEUCLID_KIND:
        return 2.0 * u - 1.0
    if reg.kind == LOGBARRIER_KIND:
        return 1.0 / (1.0 - u) - 1.0 / u
    c = reg.beta / (1.0 - reg.beta)
    return c * ((1.0 - u) ** (reg.beta - 1.0) - u ** (reg.beta - 1.0))


def _pair_root(reg, target):
    # solve _pair_grad_diff(reg, u) = target by bisection; the derivative of
    # the barrier-type regularizers blows up at the ends, so the root is
    # always interior and bisection is unconditionally safe
    lo, hi = _BRACKET_LO, _BRACKET_HI
    for _ in range(_MAX_ITERS):
        mid = 0.5 * (lo + hi)
        if _pair_grad_diff(reg, mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _WIDTH_TOL:
            break
    return 0.5 * (lo + hi)


def smoothed_best_response(reg, eta, e):
    """Minimizer over [0,1] of u*e + R((u, 1-u))/eta.

    Closed forms for entropy and the squared norm; bisection on the
    stationarity condition for the log barrier and Tsallis.  Non-increasing
    in e, equals 1/2 at e = 0.
    """
    if not eta > 0.0:
        raise RegularizerError(f"step size must be positive, got {eta!r}")
    v = eta * e
    if reg.kind == ENTROPY_KIND:
        return _sig(v)
    if reg.kind == SQEUCLID_KIND:
        u = 0.5 * (1.0 - v)
        return min(max(u, 0.0), 1.0)
    return _pair_root(reg, -v)


def response_inverse(reg, p):
    """The loss difference e with smoothed_best_response(reg, 1, e) = p."""
    if not (0.0 < p < 1.0):
        raise RegularizerError(f"inverse response needs p in (0, 1), got {p!r}")
    if reg.kind == ENTROPY_KIND:
        return log((1.0 - p) / p)
    if reg.kind == SQEUCLID_KIND:
        return 1.0 - 2.0 * p
    if reg.kind == LOGBARRIER_KIND:
        return (2.0 * p - 1.0) / (p * p - p)
    c = reg.beta / (1.0 - reg.beta)
    return c * (p ** (reg.beta - 1.0) - (1.0 - p) ** (reg.beta - 1.0))


def stability_scale(reg, delta):
    """-response_inverse(reg, 1/(1+delta)): how much accumulated loss
    difference the regularizer needs before releasing probability 1/(1+delta).

    Exact values: log(1/delta) for entropy, (1-delta)/(1+delta) for the
    squared norm, (1-delta^2)/delta for the log barrier; the Tsallis value is
    bounded by 2*beta/(1-beta) * (1/delta)^(1-beta).
    """
    if not (0.0 < delta < 0.5):
        raise RegularizerError(f"delta must lie in (0, 1/2), got {delta!r}")
    return -response_inverse(reg, 1.0 / (1.0 + delta))
